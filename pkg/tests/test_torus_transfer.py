import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from hermlab import (
    HermiteCoeffs,
    ResolutionError,
    SubordinationParams,
    SymbolDomainError,
    TrigPolynomial,
    UndersamplingError,
    kernel_l1_bound_check,
    multi_indices,
    subordination_kernel,
    torus_lp_norm,
    torus_multiplier,
    transference_check,
)
from hermlab.fourier import dual_grid, fourier_transform
from hermlab.hermite_basis import Grid
from hermlab.symbols import SpectralSymbol
from hermlab.torus_transfer import (
    euclidean_symbol,
    gamma_subordination_check,
    kernel_grid,
    kernel_l1_norm,
    kernel_symbol,
)


def _random(d, N, seed):
    rng = np.random.default_rng(seed)
    k = len(multi_indices(d, N))
    return HermiteCoeffs.from_vector(d, N, rng.normal(size=k) + 1j * rng.normal(size=k))


def _random_poly(d, K, seed):
    rng = np.random.default_rng(seed)
    coeffs = {}
    for _ in range(6):
        mu = tuple(int(v) for v in rng.integers(-K, K + 1, size=d))
        coeffs[mu] = complex(rng.normal(), rng.normal())
    return TrigPolynomial(d, coeffs)


# -- torus multipliers and norms ----------------------------------------------


def test_multiplier_examples():
    P = _random_poly(2, 4, 0)
    assert torus_multiplier(P, lambda mus: np.ones(len(mus))) == P
    mono = TrigPolynomial.monomial((2, -1))
    out = torus_multiplier(mono, lambda mus: mus[:, 0] + 10.0 * mus[:, 1])
    assert out.coeffs == {(2, -1): -8.0}
    pos = torus_multiplier(P, lambda mus: np.all(mus >= 0, axis=1).astype(float))
    assert all(min(mu) >= 0 for mu in pos.coeffs)


def test_multiplier_composes():
    P = _random_poly(2, 5, 1)
    m1 = lambda mus: np.exp(1j * mus.sum(axis=1))
    m2 = lambda mus: 1.0 / (1.0 + np.abs(mus).sum(axis=1))
    lhs = torus_multiplier(torus_multiplier(P, m1), m2)
    rhs = torus_multiplier(P, lambda mus: m1(mus) * m2(mus))
    assert lhs.coeffs.keys() == rhs.coeffs.keys()
    assert all(abs(lhs.coeffs[k] - rhs.coeffs[k]) <= 1e-15 * abs(rhs.coeffs[k]) for k in rhs.coeffs)


def test_multiplier_from_spectral_symbol():
    P = TrigPolynomial(1, {(2,): 1.0, (-3,): 2.0})
    out = torus_multiplier(P, SpectralSymbol.power(1.0))
    assert out.coeffs == {(2,): 5.0, (-3,): 14.0}


def test_multiplier_rejects_non_finite():
    with pytest.raises(SymbolDomainError):
        torus_multiplier(TrigPolynomial.monomial((0,)), lambda mus: 1.0 / mus[:, 0])


def test_lp_norm_examples():
    assert torus_lp_norm(TrigPolynomial.monomial((0,), 3.0), 1.5) == pytest.approx(
        3.0 * (2 * math.pi) ** (1 / 1.5)
    )
    assert torus_lp_norm(TrigPolynomial.monomial((0, 0), 2.0), 3) == pytest.approx(
        2.0 * (2 * math.pi) ** (2 / 3)
    )
    assert torus_lp_norm(TrigPolynomial.monomial((1,)), 2) == pytest.approx(math.sqrt(2 * math.pi))
    assert torus_lp_norm(TrigPolynomial.monomial((3,), 1j), math.inf) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 2), st.integers(0, 2**31))
def test_parseval_on_torus(d, seed):
    P = _random_poly(d, 6, seed)
    lhs = torus_lp_norm(P, 2) ** 2
    rhs = (2 * math.pi) ** d * P.l2_coefficient_norm() ** 2
    assert abs(lhs - rhs) <= 1e-12 * rhs


def test_undersampling_guard():
    P = TrigPolynomial.monomial((5,))
    with pytest.raises(UndersamplingError):
        torus_lp_norm(P, 2, n_theta=16)
    with pytest.raises(UndersamplingError):
        P.evaluate(8)


def test_evaluate_matches_direct_sum():
    P = _random_poly(2, 3, 4)
    n = 16
    th = 2 * math.pi * np.arange(n) / n
    T = np.stack(np.meshgrid(th, th, indexing="ij"), axis=-1)
    assert np.abs(P.evaluate(n) - P(T)).max() < 1e-12


# -- transference -------------------------------------------------------------

R_GRID = np.linspace(0.25, 8.0, 32)


def test_transference_identity_and_schrodinger():
    c = _random(1, 10, 0)
    rep = transference_check(c, SpectralSymbol.constant(1.0), 3.0, R_GRID)
    assert np.all(rep.ratios == 1.0) and rep.integrated_ratio == 1.0
    rep = transference_check(c, SpectralSymbol.schrodinger(0.7), 4.0, R_GRID)
    assert np.abs(rep.ratios - 1).max() < 1e-10
    # p = 3 is not integrated exactly by the theta rule; more nodes close the gap
    rep = transference_check(c, SpectralSymbol.schrodinger(0.7), 3.0, R_GRID, n_theta=512)
    assert np.abs(rep.ratios - 1).max() < 1e-6


def test_transference_identity_2d():
    c = _random(2, 5, 1)
    rep = transference_check(c, SpectralSymbol.constant(1.0), 1.5, np.linspace(0.5, 4, 6))
    assert np.all(rep.ratios == 1.0)


def test_transference_oscillatory_refinement():
    c = _random(1, 10, 2)
    m = SpectralSymbol.oscillatory(2.0, 1.0)
    a = transference_check(c, m, 4.0, np.linspace(0.1, 10.0, 50))
    b = transference_check(c, m, 4.0, np.linspace(0.1, 10.0, 99))
    assert math.isfinite(a.max_ratio)
    assert abs(b.max_ratio - a.max_ratio) / a.max_ratio < 0.1
    assert abs(b.integrated_ratio - a.integrated_ratio) / a.integrated_ratio < 0.1


def test_euclidean_symbol():
    assert euclidean_symbol(0.0, 1.0, 1.0, 1) == pytest.approx(np.exp(1j))
    xi = np.array([[1.0, -2.0], [0.5, 0.0]])
    v = euclidean_symbol(xi, 1.5, 0.7)
    lam = 2 * np.abs(xi).sum(axis=1) + 2
    assert np.allclose(np.abs(v), lam**-1.5)
    # restricted to the lattice it is the sequence (2|a|+d)^-beta exp(i (2|a|+d)^gamma)
    ints = multi_indices(2, 4).astype(float)
    lam = 2 * ints.sum(axis=1) + 2
    assert np.allclose(euclidean_symbol(ints, 2.0, 1.0), SpectralSymbol.oscillatory(2.0, 1.0)(lam))


# -- subordination kernel -----------------------------------------------------


def _brute_kernel(x, sigma):
    """(2 pi)^{-1/2} int e^{(i - sigma)(2|xi| + 1)} e^{i x xi} d xi by adaptive quadrature."""
    def part(f):
        val, _ = integrate.quad(f, 0.0, 40.0 / sigma, weight="cos", wvar=x, limit=800)
        return val

    re = part(lambda s: math.exp(-sigma * (2 * s + 1)) * math.cos(2 * s + 1))
    im = part(lambda s: math.exp(-sigma * (2 * s + 1)) * math.sin(2 * s + 1))
    return 2 * complex(re, im) / math.sqrt(2 * math.pi)


def test_kernel_matches_brute_force_quadrature():
    params = SubordinationParams(sigma=1.0, gamma=1.0)
    k = subordination_kernel(params, corrected=True)
    x = k.grid.nodes
    for target in (0.0, 0.37, 1.5, -4.0, 11.0):
        i = int(np.argmin(np.abs(x - target)))
        assert abs(k.values[i] - _brute_kernel(x[i], 1.0)) < 1e-6


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0])
def test_kernel_round_trip(sigma, gamma):
    params = SubordinationParams(sigma, gamma)
    k = subordination_kernel(params)
    back = fourier_transform(k, check_boundary=False)
    ref = kernel_symbol(params, dual_grid(k.grid).mesh())
    assert np.abs(back.values - ref).max() < 1e-6


def test_kernel_sup_bound():
    params = SubordinationParams(0.5, 1.5)
    k = subordination_kernel(params, corrected=True)
    bound, _ = integrate.quad(lambda s: 2 * math.exp(-0.5 * (2 * s + 1) ** 1.5), 0, np.inf)
    assert np.abs(k.values).max() <= bound / math.sqrt(2 * math.pi) * (1 + 1e-9)


def test_kernel_grid_too_coarse():
    params = SubordinationParams(0.1, 0.5)
    with pytest.raises(ResolutionError):
        subordination_kernel(params, Grid(1, 20, 64))


def test_kernel_l1_lower_bound():
    for sigma in (0.1, 1.0, 10.0):
        params = SubordinationParams(sigma, 1.0)
        assert kernel_l1_norm(params) >= math.sqrt(2 * math.pi) * math.exp(-sigma) * (1 - 1e-9)


def test_kernel_l1_bound_report():
    rep = kernel_l1_bound_check([0.5, 1.0, 5.0], 1.0)
    assert rep.passed
    assert all(math.isfinite(r.ratio) for r in rep.rows)
    assert rep.refinement_delta < 0.05
    with pytest.raises(ValueError):
        kernel_l1_bound_check([0.01], 1.0)


def test_kernel_grid_oversampling():
    params = SubordinationParams(1.0, 1.0)
    g = kernel_grid(params)
    assert dual_grid(g).L >= 1.0


def test_gamma_subordination_examples():
    assert gamma_subordination_check(0.0, 1.0, 1.0, 1) < 1e-12
    assert gamma_subordination_check(1.0, 2.0, 1.0, 1) < 1e-8
    for xi in (0.0, 0.7, 3.0):
        for beta in (0.5, 1.0, 2.5):
            for gamma in (0.5, 1.0, 2.0):
                assert gamma_subordination_check(xi, beta, gamma, 1) < 1e-6
