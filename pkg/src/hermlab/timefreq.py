"""Short-time Fourier and Fourier-Wigner transforms, mixed norms and
modulation-space norms.

Conventions::

    V_g f(x, y) = (2 pi)^{-d/2} int f(t) conj(g(t - x)) e^{-i y.t} dt
    W_g f(x, y) = (2 pi)^{-d/2} int e^{i(x.xi + x.y/2)} f(xi + y) conj(g(xi)) d xi

so that W_g f(x, y) = e^{-i x.y/2} V_g f(y, -x).  The modulation norm
||f||_{M^{p,q}} integrates |V_g f| in x first (exponent p) and then in y
(exponent q).  The default window is the L2-normalized Gaussian
Phi_0(x) = pi^{-d/4} e^{-|x|^2/2}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import DimensionMismatchError, GridMismatchError
from .fourier import dual_grid, fourier_transform
from .hermite_basis import Grid, GridField, HermiteCoeffs, synthesize, hermite_table
from .symbols import SpectralSymbol
from .torus_transfer import TrigPolynomial, polar_weights

__all__ = [
    "PHASE_DEFAULTS",
    "PhasePlaneField",
    "MixedNormSpec",
    "fourier_transform",
    "dual_grid",
    "default_phase_grids",
    "default_sample_grid",
    "gaussian_window",
    "stft",
    "fourier_wigner",
    "pi_matrix_coefficient",
    "mixed_norm",
    "modulation_norm",
    "polar_modulation_functional",
    "to_polar_coeffs",
]

# phase-plane grids (L, n per axis) and the sampling grid used to build STFTs
PHASE_DEFAULTS = {
    1: {"L": 16.0, "n": 256, "sample_L": 16.0, "sample_n": 1024},
    2: {"L": 10.0, "n": 48, "sample_L": 10.0, "sample_n": 160},
}

_CHUNK = 1 << 22  # complex entries per work block


def default_phase_grids(d: int) -> tuple:
    cfg = PHASE_DEFAULTS.get(d)
    if cfg is None:
        raise DimensionMismatchError(f"no default phase-plane grid for d = {d}")
    g = Grid(d, cfg["L"], cfg["n"])
    return g, g


def default_sample_grid(d: int) -> Grid:
    cfg = PHASE_DEFAULTS.get(d)
    if cfg is None:
        raise DimensionMismatchError(f"no default sampling grid for d = {d}")
    return Grid(d, cfg["sample_L"], cfg["sample_n"])


def gaussian_window(grid: Grid) -> GridField:
    """Samples of Phi_0 = pi^{-d/4} e^{-|x|^2/2}."""
    return GridField.from_function(
        grid, lambda x: math.pi ** (-grid.d / 4) * np.exp(-0.5 * np.sum(x * x, axis=-1))
    )


# ---------------------------------------------------------------------------
# Phase-plane fields and mixed norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PhasePlaneField:
    """Samples F(x, y) with axes ordered (x_1..x_d, y_1..y_d).

    ``x`` is the translation slot and ``y`` the modulation slot.
    """

    x_grid: Grid
    y_grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if self.x_grid.d != self.y_grid.d:
            raise DimensionMismatchError("x and y grids differ in dimension")
        shape = self.x_grid.shape + self.y_grid.shape
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != int(np.prod(shape)):
            raise DimensionMismatchError(f"expected {int(np.prod(shape))} values, got {vals.size}")
        vals = vals.reshape(shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("phase-plane field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return self.x_grid.d

    @property
    def axes(self) -> list:
        return [f"x{j + 1}" for j in range(self.d)] + [f"y{j + 1}" for j in range(self.d)]

    def l2_norm(self) -> float:
        return mixed_norm(self, MixedNormSpec(2, 2))


@dataclass(frozen=True)
class MixedNormSpec:
    """Iterated norm: exponent ``inner_exp`` over the ``inner`` slot, then
    ``outer_exp`` over the other slot.  Exponents lie in [1, inf]."""

    inner_exp: float
    outer_exp: float
    inner: str = "x"

    def __post_init__(self):
        for p in (self.inner_exp, self.outer_exp):
            if not p >= 1:
                raise ValueError(f"exponent {p} outside [1, inf]")
        if self.inner not in ("x", "y"):
            raise ValueError("inner slot must be 'x' or 'y'")

    @classmethod
    def modulation(cls, p: float, q: float) -> "MixedNormSpec":
        """M^{p,q} ordering: x inner with p, y outer with q."""
        return cls(p, q, "x")


def _lp_reduce(a: np.ndarray, p: float, axes: tuple, w: np.ndarray) -> np.ndarray:
    if math.isinf(p):
        return a.max(axis=axes)
    out = a**p
    for ax in sorted(axes, reverse=True):
        out = np.moveaxis(out, ax, -1) @ w
    return out ** (1.0 / p)


def mixed_norm(F: PhasePlaneField, spec: MixedNormSpec) -> float:
    """Trapezoidal iterated L^{p,q} norm of |F|; infinite exponents are grid maxima."""
    d = F.d
    a = np.abs(F.values)
    x_axes = tuple(range(d))
    y_axes = tuple(range(d, 2 * d))
    if spec.inner == "x":
        inner = _lp_reduce(a, spec.inner_exp, x_axes, F.x_grid.weights)
        outer_axes = tuple(range(d))
        w_outer = F.y_grid.weights
    else:
        inner = _lp_reduce(a, spec.inner_exp, y_axes, F.y_grid.weights)
        outer_axes = tuple(range(d))
        w_outer = F.x_grid.weights
    return float(_lp_reduce(inner, spec.outer_exp, outer_axes, w_outer))


# ---------------------------------------------------------------------------
# Transforms
# ---------------------------------------------------------------------------


def _translates(field: GridField | None, grid: Grid, shifts: np.ndarray) -> np.ndarray:
    """Samples of u(t - s) on ``grid`` for each row s of ``shifts``; shape (K,) + grid.shape.

    ``field=None`` means the analytic Gaussian window.  Sampled fields are
    shifted spectrally on a twice zero-padded box.
    """
    d = grid.d
    t = grid.nodes
    K = len(shifts)
    if field is None:
        out = np.ones((K,) + (1,) * d)
        for j in range(d):
            g1 = math.pi**-0.25 * np.exp(-0.5 * (t[None, :] - shifts[:, j, None]) ** 2)
            shape = [K] + [1] * d
            shape[1 + j] = grid.n
            out = out * g1.reshape(shape)
        return np.broadcast_to(out, (K,) + grid.shape).astype(complex)
    n = grid.n
    pad = np.zeros((2 * n,) * d, dtype=complex)
    pad[(slice(0, n),) * d] = field.values
    spec = np.fft.fftn(pad)
    omega = 2.0 * math.pi * np.fft.fftfreq(2 * n, grid.spacing)
    out = np.empty((K,) + grid.shape, dtype=complex)
    for k in range(K):
        phase = np.ones((1,) * d, dtype=complex)
        for j in range(d):
            shape = [1] * d
            shape[j] = 2 * n
            phase = phase * np.exp(-1j * omega * shifts[k, j]).reshape(shape)
        out[k] = np.fft.ifftn(spec * phase)[(slice(0, n),) * d]
    return out


def _dft_axes(A: np.ndarray, grid: Grid, freqs: np.ndarray, sign: int) -> np.ndarray:
    """sum_t A[k, t] w(t) e^{sign i freq.t} over the trailing d axes."""
    E = np.exp(sign * 1j * np.outer(grid.nodes, freqs)) * grid.weights[:, None]
    out = A
    for _ in range(grid.d):
        out = np.tensordot(out, E, axes=([1], [0]))
    return out


def _chunks(total: int, width: int):
    step = max(1, _CHUNK // max(width, 1))
    for s in range(0, total, step):
        yield s, min(total, s + step)


def _check_pair(f: GridField, g: GridField | None):
    if g is None:
        return
    if g.grid != f.grid:
        raise GridMismatchError("signal and window must be sampled on the same grid")
    if not np.any(g.values):
        raise ValueError("window is identically zero")


def stft(
    f: GridField,
    g: GridField | None = None,
    x_grid: Grid | None = None,
    y_grid: Grid | None = None,
) -> PhasePlaneField:
    """V_g f on the product of ``x_grid`` and ``y_grid`` (defaults per dimension).

    ``g=None`` uses the analytic Gaussian window Phi_0.
    """
    _check_pair(f, g)
    d = f.grid.d
    if x_grid is None or y_grid is None:
        dx, dy = default_phase_grids(d)
        x_grid = x_grid or dx
        y_grid = y_grid or dy
    if x_grid.d != d or y_grid.d != d:
        raise DimensionMismatchError("phase-plane grids must match the signal dimension")
    shifts = x_grid.mesh().reshape(-1, d)
    out = np.empty((len(shifts),) + y_grid.shape, dtype=complex)
    for a, b in _chunks(len(shifts), f.grid.size):
        T = _translates(g, f.grid, shifts[a:b])
        A = f.values[None] * np.conj(T)
        out[a:b] = _dft_axes(A, f.grid, y_grid.nodes, -1)
    out *= (2.0 * math.pi) ** (-d / 2)
    return PhasePlaneField(x_grid, y_grid, out)


def fourier_wigner(
    f: GridField,
    g: GridField | None = None,
    x_grid: Grid | None = None,
    y_grid: Grid | None = None,
) -> PhasePlaneField:
    """W_g f(x, y) = (2 pi)^{-d/2} int e^{i(x.xi + x.y/2)} f(xi + y) conj(g(xi)) d xi."""
    _check_pair(f, g)
    d = f.grid.d
    if x_grid is None or y_grid is None:
        dx, dy = default_phase_grids(d)
        x_grid = x_grid or dx
        y_grid = y_grid or dy
    if x_grid.d != d or y_grid.d != d:
        raise DimensionMismatchError("phase-plane grids must match the signal dimension")
    ys = y_grid.mesh().reshape(-1, d)
    window = gaussian_window(f.grid).values if g is None else g.values
    by_y = np.empty((len(ys),) + x_grid.shape, dtype=complex)
    for a, b in _chunks(len(ys), f.grid.size):
        Tf = _translates(f, f.grid, -ys[a:b])
        A = Tf * np.conj(window)[None]
        by_y[a:b] = _dft_axes(A, f.grid, x_grid.nodes, +1)
    vals = np.moveaxis(by_y.reshape(y_grid.shape + x_grid.shape), tuple(range(d)), tuple(range(d, 2 * d)))
    xs = x_grid.mesh().reshape(x_grid.shape + (1,) * d + (d,))
    yy = y_grid.mesh().reshape((1,) * d + y_grid.shape + (d,))
    vals = vals * np.exp(0.5j * np.sum(xs * yy, axis=-1)) * (2.0 * math.pi) ** (-d / 2)
    return PhasePlaneField(x_grid, y_grid, vals)


def pi_matrix_coefficient(f: GridField, g: GridField | None = None, x_grid=None, y_grid=None):
    """<pi(x, y) f, g> with pi(x, y) u(xi) = e^{i(x.xi + x.y/2)} u(xi + y)."""
    W = fourier_wigner(f, g, x_grid, y_grid)
    return PhasePlaneField(W.x_grid, W.y_grid, W.values * (2.0 * math.pi) ** (W.d / 2))


# ---------------------------------------------------------------------------
# Modulation norms
# ---------------------------------------------------------------------------


def _check_exponent(p, name):
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"exponent {name} = {p} is outside [1, inf]; modulation norms need p, q >= 1")
    return p


@lru_cache(maxsize=8)
def _basis_stft_1d(N: int, sample: Grid, x_grid: Grid, y_grid: Grid) -> np.ndarray:
    """V_{Phi_0} h_k on the 1-D phase plane for k = 0..N, shape (N+1, nx, ny)."""
    H = hermite_table(N, sample.nodes).astype(complex)
    T = _translates(None, sample, x_grid.nodes[:, None])[:, :]
    E = np.exp(-1j * np.outer(sample.nodes, y_grid.nodes)) * sample.weights[:, None]
    out = np.empty((N + 1, x_grid.n, y_grid.n), dtype=complex)
    for k in range(N + 1):
        out[k] = (H[k][None, :] * T) @ E
    out *= (2.0 * math.pi) ** -0.5
    out.setflags(write=False)
    return out


def _coeff_stft(c: HermiteCoeffs, x_grid: Grid, y_grid: Grid, sample: Grid) -> PhasePlaneField:
    d = c.d
    x1 = Grid(1, x_grid.L, x_grid.n)
    y1 = Grid(1, y_grid.L, y_grid.n)
    s1 = Grid(1, sample.L, sample.n)
    T = _basis_stft_1d(c.N, s1, x1, y1)
    if d == 1:
        vals = np.tensordot(c.data, T, axes=1)
    elif d == 2:
        vals = np.einsum("ab,aiu,bjv->ijuv", c.data, T, T, optimize=True)
    else:
        raise DimensionMismatchError("coefficient route supports d = 1 or 2")
    return PhasePlaneField(x_grid, y_grid, vals)


def modulation_norm(
    f,
    p: float,
    q: float,
    window: GridField | None = None,
    x_grid: Grid | None = None,
    y_grid: Grid | None = None,
    sample_grid: Grid | None = None,
) -> float:
    """||f||_{M^{p,q}}: mixed norm of V_g f, x inner with exponent p, y outer with q.

    ``f`` is a :class:`GridField` or :class:`HermiteCoeffs`.  Coefficients
    are synthesized on ``sample_grid`` (default per dimension); with the
    default Gaussian window their STFT is assembled from cached STFTs of the
    1-D Hermite functions.
    """
    p = _check_exponent(p, "p")
    q = _check_exponent(q, "q")
    d = f.d if isinstance(f, HermiteCoeffs) else f.grid.d
    if x_grid is None or y_grid is None:
        dx, dy = default_phase_grids(d)
        x_grid = x_grid or dx
        y_grid = y_grid or dy
    if isinstance(f, HermiteCoeffs):
        if not np.any(f.data):
            return 0.0
        sample = sample_grid or (window.grid if window is not None else default_sample_grid(d))
        if window is None and d in (1, 2):
            V = _coeff_stft(f, x_grid, y_grid, sample)
        else:
            V = stft(synthesize(f, sample), window, x_grid, y_grid)
    else:
        if not np.any(f.values):
            return 0.0
        V = stft(f, window, x_grid, y_grid)
    return mixed_norm(V, MixedNormSpec.modulation(p, q))


# ---------------------------------------------------------------------------
# Polar route
# ---------------------------------------------------------------------------


def to_polar_coeffs(c: HermiteCoeffs, r) -> TrigPolynomial:
    """Torus polynomial with coefficients a_alpha(r) for the radius vector ``r``.

    a_alpha = c_alpha i^{|alpha|} r^alpha e^{-|r|^2/4} / (sqrt(alpha!) 2^{|alpha|/2}),
    keyed by alpha in N^d.  The phase-plane transform on the layer |z_j| = r_j
    is sum_alpha a_alpha e^{-i alpha.theta}, i.e. this polynomial at -theta,
    which has the same L^p norms.
    """
    a = c.data * polar_weights(c.d, c.N, r)
    keys = np.argwhere(a != 0)
    return TrigPolynomial(c.d, {tuple(int(v) for v in k): a[tuple(k)] for k in keys})


def polar_modulation_functional(
    c: HermiteCoeffs,
    m: SpectralSymbol,
    p: float,
    R: float = 12.0,
    n_r: int | None = None,
    n_theta: int | None = None,
) -> float:
    """(2 pi)^{-d} (int |sum_alpha m_alpha a_alpha(r) e^{-i alpha.theta}|^p r dr d theta)^{1/p}.

    Gauss-Legendre in each r_j on [0, R], rectangle rule in each theta_j; the
    theta sum is an FFT of the coefficient tensor.  The result equals
    (2 pi)^{-d/2} ||m(H) f||_{M^{p,p}}.
    """
    d = c.d
    if d not in (1, 2):
        raise DimensionMismatchError("polar functional supports d = 1 or 2")
    p = _check_exponent(p, "p")
    if math.isinf(p):
        raise ValueError("polar functional needs a finite exponent")
    n_r = n_r or (400 if d == 1 else 120)
    n_theta = n_theta or (256 if d == 1 else 64)
    if n_theta <= 2 * c.N:
        raise ValueError(f"n_theta = {n_theta} aliases degree {c.N}")
    b = c.data * m.on_levels(d, c.N)[np.minimum(c.degrees, c.N)]
    # Gauss-Legendre in r: the trapezoid rule has an O(h^2) error from the r dr weight at 0
    t, w = np.polynomial.legendre.leggauss(n_r)
    r = 0.5 * R * (t + 1.0)
    wr = 0.5 * R * w * r
    cell = (2.0 * math.pi / n_theta) ** d
    k = np.arange(c.N + 1)
    # radial factor per axis: i^k r^k / (sqrt(k!) 2^{k/2}), Gaussian applied separately
    logw = k[None, :] * np.log(r)[:, None] - 0.5 * (gammaln(k + 1) + k * math.log(2.0))[None, :]
    W = np.exp(logw) * (1j) ** k[None, :]
    gauss = np.exp(-0.25 * r * r)
    if d == 1:
        A = np.zeros((n_r, n_theta), dtype=complex)
        A[:, : c.N + 1] = W * b[None, :]
        G = np.fft.fft(A, axis=1) * gauss[:, None]
        layer = cell * np.sum(np.abs(G) ** p, axis=1)
        total = float(np.sum(layer * wr))
    else:
        total = 0.0
        for i in range(n_r):
            B = b * W[i][:, None] * gauss[i]
            A = np.zeros((n_r, n_theta, n_theta), dtype=complex)
            A[:, : c.N + 1, : c.N + 1] = B[None] * (W * gauss[:, None])[:, None, :]
            G = np.fft.fft2(A, axes=(1, 2))
            layer = cell * np.sum(np.abs(G) ** p, axis=(1, 2))
            total += wr[i] * float(np.sum(layer * wr))
    return (2.0 * math.pi) ** (-d) * total ** (1.0 / p)
