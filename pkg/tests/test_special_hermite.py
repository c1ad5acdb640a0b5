import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_genlaguerre

from hermlab import (
    GridMismatchError,
    InvalidScaleError,
    PlaneField,
    QuadratureDomainError,
    laguerre_fn,
    special_hermite,
    special_hermite_project,
    twisted_convolve,
)
from hermlab.hermite_basis import Grid
from hermlab.special_hermite import laguerre, laguerre_field, plane_grid, special_hermite_alpha0

SQ2PI = math.sqrt(2 * math.pi)
Z5 = np.array([0.0, 1.0, -0.7 + 0.4j, 1.5 - 2.0j, 0.3 + 2.5j])[:, None]


def test_special_hermite_origin():
    assert special_hermite((0,), (0,), 1.0, np.array([0j])) == pytest.approx(1 / SQ2PI, abs=1e-12)
    z = Z5
    got = special_hermite((0,), (0,), 1.0, z)
    assert np.allclose(got, np.exp(-np.abs(z[:, 0]) ** 2 / 4) / SQ2PI, atol=1e-12)
    z2 = np.array([[0.5 + 1j, -1.0 + 0.2j]])
    got = special_hermite((0, 0), (0, 0), 1.0, z2)
    assert got[0] == pytest.approx(np.exp(-np.sum(np.abs(z2) ** 2) / 4) / (2 * math.pi), abs=1e-12)


def test_alpha0_closed_form_values():
    assert special_hermite_alpha0((0,), np.array([0j])) == pytest.approx(1 / SQ2PI)
    v = special_hermite_alpha0((1,), np.array([1 + 0j]))
    assert v == pytest.approx(1j / math.sqrt(2) * math.exp(-0.25) / SQ2PI, abs=1e-15)
    assert v.imag == pytest.approx(0.2197, abs=1e-4)


@pytest.mark.parametrize("a", range(5))
def test_alpha0_matches_quadrature(a):
    got = special_hermite((a,), (0,), 1.0, Z5)
    ref = special_hermite_alpha0((a,), Z5)
    assert np.abs(got - ref).max() < 1e-10


def test_alpha0_matches_quadrature_2d():
    z = np.array([[0.3 + 0.1j, -1 + 1j], [1.2 - 0.5j, 0.4j]])
    got = special_hermite((2, 1), (0, 0), 1.0, z)
    ref = special_hermite_alpha0((2, 1), z)
    assert np.abs(got - ref).max() < 1e-10


def test_scale_lambda():
    # Phi^lam_{a,b}(z) = |lam|^{d/2} Phi_{a,b}(sqrt|lam| z) for lam > 0
    lam = 2.5
    got = special_hermite((2,), (1,), lam, Z5)
    ref = lam**0.5 * special_hermite((2,), (1,), 1.0, math.sqrt(lam) * Z5)
    assert np.abs(got - ref).max() < 1e-10
    with pytest.raises(InvalidScaleError):
        special_hermite((0,), (0,), 0.0, Z5)


def test_quadrature_domain_error():
    with pytest.raises(QuadratureDomainError):
        special_hermite((3,), (2,), 1.0, Z5, quad_grid=Grid(1, 2.0, 257))


def test_orthonormality():
    grid = plane_grid(1, 11, 121)
    pairs = list(itertools.product(range(3), range(3)))
    fields = {ab: special_hermite((ab[0],), (ab[1],), 1.0, grid) for ab in pairs}
    for p, q in itertools.product(pairs, pairs):
        val = fields[p].inner(fields[q])
        assert abs(val - (p == q)) < 1e-6


# -- Laguerre -----------------------------------------------------------------


@pytest.mark.parametrize("k", range(8))
@pytest.mark.parametrize("a", [0, 1, 2.5])
def test_laguerre_recurrence(k, a):
    x = np.linspace(0, 20, 41)
    assert np.allclose(laguerre(k, a, x), eval_genlaguerre(k, a, x), rtol=1e-12, atol=1e-12)


def test_laguerre_fn_values():
    assert laguerre_fn(0, 1, 1.0, np.array([0j])) == pytest.approx(1.0)
    assert laguerre_fn(1, 2, 1.0, np.array([0j, 0j])) == pytest.approx(2.0)
    z = np.array([1 + 1j])
    assert laguerre_fn(0, 1, 3.0, z) == pytest.approx(math.exp(-3.0 * 2 / 4))
    with pytest.raises(InvalidScaleError):
        laguerre_fn(0, 1, 0.0, z)


@pytest.mark.parametrize("k", range(4))
def test_laguerre_compact_form(k):
    ref = laguerre_fn(k, 1, 1.0, Z5)
    got = SQ2PI * special_hermite((k,), (k,), 1.0, Z5)
    assert np.abs(got - ref).max() < 1e-6


def test_laguerre_compact_form_2d():
    z = np.array([[0.5 + 0.2j, -0.3 + 1j], [1.1j, 0.7]])
    k = 2
    total = sum(special_hermite((a, k - a), (a, k - a), 1.0, z) for a in range(k + 1))
    assert np.abs(2 * math.pi * total - laguerre_fn(k, 2, 1.0, z)).max() < 1e-10


# -- twisted convolution ------------------------------------------------------


@pytest.fixture(scope="module")
def ptc_grid():
    return plane_grid(1, 8, 96)


def test_twisted_product_examples(ptc_grid):
    f00 = special_hermite((0,), (0,), 1.0, ptc_grid)
    f11 = special_hermite((1,), (1,), 1.0, ptc_grid)
    out = twisted_convolve(f00, f00)
    assert out.sup_distance(f00 * SQ2PI) < 1e-4
    assert np.abs(twisted_convolve(f00, f11).values).max() < 1e-4
    zero = PlaneField(ptc_grid, np.zeros(ptc_grid.shape))
    assert not np.any(twisted_convolve(f00, zero).values)


@pytest.mark.parametrize("a,b,c,e", [(1, 0, 0, 2), (2, 1, 1, 0), (0, 2, 1, 1)])
def test_twisted_product_identity(ptc_grid, a, b, c, e):
    F = special_hermite((a,), (b,), 1.0, ptc_grid)
    G = special_hermite((c,), (e,), 1.0, ptc_grid)
    out = twisted_convolve(F, G)
    ref = special_hermite((a,), (e,), 1.0, ptc_grid) * (SQ2PI * (b == c))
    assert out.sup_distance(ref) < 1e-4


def test_twisted_odd_grid_needs_no_interpolation():
    g = plane_grid(1, 8, 97)
    F = special_hermite((1,), (1,), 1.0, g)
    out = twisted_convolve(F, F)
    assert out.sup_distance(F * SQ2PI) < 1e-4
    assert twisted_convolve(F, F, interpolation="bilinear").sup_distance(out) == 0


def test_twisted_lambda():
    g = plane_grid(1, 8, 97)
    lam = 2.0
    F = special_hermite((0,), (1,), lam, g)
    G = special_hermite((1,), (0,), lam, g)
    out = twisted_convolve(F, G, lam)
    ref = special_hermite((0,), (0,), lam, g) * (SQ2PI / lam**0.5)
    assert out.sup_distance(ref) < 1e-4


def test_twisted_errors(ptc_grid):
    F = special_hermite((0,), (0,), 1.0, ptc_grid)
    G = special_hermite((0,), (0,), 1.0, plane_grid(1, 8, 64))
    with pytest.raises(GridMismatchError):
        twisted_convolve(F, G)
    with pytest.raises(InvalidScaleError):
        twisted_convolve(F, F, 0.0)
    small = plane_grid(2, 6, 5)
    H = PlaneField(small, np.ones(small.shape))
    with pytest.raises(ValueError, match="allow_slow"):
        twisted_convolve(H, H)


def test_twisted_direct_2d_matches_product_structure():
    # on C^2 the twisted convolution of tensor products factorizes
    g1 = plane_grid(1, 5, 9)
    g2 = plane_grid(2, 5, 9)
    a1 = special_hermite((0,), (1,), 1.0, g1).values
    b1 = special_hermite((1,), (0,), 1.0, g1).values
    a2 = special_hermite((1,), (0,), 1.0, g1).values
    b2 = special_hermite((0,), (0,), 1.0, g1).values
    F = PlaneField(g2, np.einsum("ac,bd->abcd", a1, b1))
    G = PlaneField(g2, np.einsum("ac,bd->abcd", a2, b2))
    out = twisted_convolve(F, G, allow_slow=True)
    f1 = twisted_convolve(PlaneField(g1, a1), PlaneField(g1, a2)).values
    f2 = twisted_convolve(PlaneField(g1, b1), PlaneField(g1, b2)).values
    assert np.abs(out.values - np.einsum("ac,bd->abcd", f1, f2)).max() < 1e-12


# -- projections --------------------------------------------------------------


def test_project_phi00(ptc_grid):
    F = special_hermite((0,), (0,), 1.0, ptc_grid)
    assert special_hermite_project(F, 0).sup_distance(F) < 1e-4
    assert np.abs(special_hermite_project(F, 1).values).max() < 1e-4


def test_projection_resolves_identity(ptc_grid):
    F = special_hermite((0,), (1,), 1.0, ptc_grid) + special_hermite((2,), (2,), 1.0, ptc_grid) * 0.5
    parts = [special_hermite_project(F, k) for k in range(3)]
    total = parts[0] + parts[1] + parts[2]
    assert total.sup_distance(F) < 1e-3
    again = special_hermite_project(parts[1], 1)
    assert again.sup_distance(parts[1]) < 1e-3


def test_laguerre_field_shape():
    g = plane_grid(1, 4, 9)
    f = laguerre_field(1, 1.0, g)
    assert f.values.shape == (9, 9) and f.axes == ["x1", "y1"]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 4), st.floats(-3, 3), st.floats(-3, 3))
def test_closed_form_modulus_is_radial(a, x, y):
    # |Phi_{a,0}(z)| depends on |z| only
    r = math.hypot(x, y)
    v1 = special_hermite_alpha0((a,), np.array([complex(x, y)]))
    v2 = special_hermite_alpha0((a,), np.array([complex(r, 0)]))
    assert abs(abs(v1) - abs(v2)) < 1e-14
