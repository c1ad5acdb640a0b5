"""Fourier multipliers on the torus, Hermite-to-torus transference and the
subordination kernel of the oscillatory multiplier.

In polar coordinates z_j = r_j e^{i theta_j} the phase-plane transform of a
Hermite expansion becomes, for each fixed radius vector r, a trigonometric
polynomial in theta with coefficients

    a_alpha(r) = c_alpha i^{|alpha|} r^alpha e^{-|r|^2/4} / (sqrt(alpha!) 2^{|alpha|/2}).

A spectral multiplier m(H) then acts on the torus side as the Fourier
multiplier alpha -> m(2|alpha| + d).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import integrate, special

from .errors import DimensionMismatchError, ResolutionError, SymbolDomainError, UndersamplingError
from .fourier import dual_grid, fourier_transform
from .hermite_basis import Grid, GridField, HermiteCoeffs
from .symbols import SpectralSymbol

__all__ = [
    "TrigPolynomial",
    "SubordinationParams",
    "TransferenceReport",
    "KernelBoundRow",
    "KernelBoundReport",
    "polar_weights",
    "torus_multiplier",
    "torus_lp_norm",
    "transference_check",
    "euclidean_symbol",
    "frequency_cutoff",
    "kernel_grid",
    "kernel_symbol",
    "subordination_kernel",
    "kernel_l1_norm",
    "kernel_l1_bound_check",
    "gamma_subordination_check",
]

_TRUNC = 1e-14


# ---------------------------------------------------------------------------
# Trigonometric polynomials
# ---------------------------------------------------------------------------


class TrigPolynomial:
    """Finite sum g(theta) = sum_mu a(mu) e^{i mu . theta} on the torus [0, 2 pi)^d."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d: int, coeffs: Mapping):
        if int(d) < 1:
            raise DimensionMismatchError("torus dimension must be >= 1")
        clean = {}
        for mu, val in coeffs.items():
            key = (int(mu),) if np.ndim(mu) == 0 else tuple(int(v) for v in mu)
            if len(key) != d:
                raise DimensionMismatchError(f"frequency {key} is not of length {d}")
            val = complex(val)
            if not (math.isfinite(val.real) and math.isfinite(val.imag)):
                raise ValueError(f"non-finite coefficient at {key}")
            clean[key] = clean.get(key, 0j) + val
        self.d = int(d)
        self.coeffs = clean

    @classmethod
    def monomial(cls, mu, value: complex = 1.0) -> "TrigPolynomial":
        mu = (int(mu),) if np.ndim(mu) == 0 else tuple(int(v) for v in mu)
        return cls(len(mu), {mu: value})

    def frequencies(self) -> np.ndarray:
        return np.array(sorted(self.coeffs), dtype=np.int64).reshape(-1, self.d)

    def max_frequency(self) -> int:
        """max |mu_j| over the support (0 when empty)."""
        if not self.coeffs:
            return 0
        return int(np.abs(self.frequencies()).max())

    def evaluate(self, n_theta: int) -> np.ndarray:
        """Values at theta_k = 2 pi k / n_theta on the uniform torus grid, shape (n,)*d."""
        if 2 * self.max_frequency() >= n_theta:
            raise UndersamplingError(
                f"{n_theta} nodes alias frequency {self.max_frequency()}"
            )
        arr = np.zeros((n_theta,) * self.d, dtype=complex)
        for mu, val in self.coeffs.items():
            arr[tuple(m % n_theta for m in mu)] += val
        return np.fft.ifftn(arr) * n_theta**self.d

    def __call__(self, theta) -> np.ndarray:
        """Direct evaluation at points ``theta`` of shape (..., d)."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape[:-1], dtype=complex)
        for mu, val in self.coeffs.items():
            out = out + val * np.exp(1j * (theta @ np.asarray(mu, dtype=float)))
        return out

    def l2_coefficient_norm(self) -> float:
        return math.sqrt(sum(abs(v) ** 2 for v in self.coeffs.values()))

    def __eq__(self, other):
        if not isinstance(other, TrigPolynomial):
            return NotImplemented
        return self.d == other.d and self.coeffs == other.coeffs

    def __repr__(self):
        return f"TrigPolynomial(d={self.d}, terms={len(self.coeffs)})"


def polar_weights(d: int, N: int, r) -> np.ndarray:
    """Tensor w[alpha] = i^{|alpha|} r^alpha e^{-|r|^2/4} / (sqrt(alpha!) 2^{|alpha|/2}).

    Shape (N+1,)*d; computed in log form so large degrees and radii are safe.
    """
    r = np.broadcast_to(np.asarray(r, dtype=float), (d,))
    if np.any(r < 0):
        raise ValueError("radii must be nonnegative")
    k = np.arange(N + 1)
    out = np.ones((), dtype=complex)
    for rj in r:
        logr = math.log(rj) if rj > 0 else -math.inf
        with np.errstate(invalid="ignore"):
            logw = k * logr - 0.5 * (special.gammaln(k + 1) + k * math.log(2.0))
        if rj == 0:
            logw[0] = 0.0
        w1 = np.exp(logw) * (1j) ** k
        out = np.multiply.outer(out, w1)
    return out * math.exp(-0.25 * float(np.sum(r * r)))


# ---------------------------------------------------------------------------
# Torus multipliers and norms
# ---------------------------------------------------------------------------


def _lattice_values(m, mus: np.ndarray, d: int) -> np.ndarray:
    if isinstance(m, SpectralSymbol):
        vals = m(2.0 * np.abs(mus).sum(axis=1) + d)
    else:
        with np.errstate(all="ignore"):
            vals = np.asarray(m(mus), dtype=complex)
    vals = np.broadcast_to(np.asarray(vals, dtype=complex), (len(mus),))
    if not np.all(np.isfinite(vals)):
        bad = tuple(int(v) for v in mus[int(np.argmin(np.isfinite(vals)))])
        raise SymbolDomainError(f"multiplier is not finite at frequency {bad}")
    return vals


def torus_multiplier(P: TrigPolynomial, m) -> TrigPolynomial:
    """Coefficientwise product a(mu) -> m(mu) a(mu); zero products leave the support.

    ``m`` is either a vectorized callable on integer arrays of shape (K, d) or
    a :class:`SpectralSymbol`, which is read as mu -> m(2|mu|_1 + d).
    """
    if not P.coeffs:
        return TrigPolynomial(P.d, {})
    mus = np.array(list(P.coeffs), dtype=np.int64).reshape(-1, P.d)
    vals = _lattice_values(m, mus, P.d)
    out = {}
    for mu, v in zip(P.coeffs, vals):
        prod = P.coeffs[mu] * v
        if prod != 0:
            out[mu] = prod
    return TrigPolynomial(P.d, out)


def torus_lp_norm(P: TrigPolynomial, p: float, n_theta: int | None = None) -> float:
    """L^p([0, 2 pi)^d) norm by the rectangle rule on ``n_theta`` nodes per axis.

    Requires n_theta >= 4 (max |mu_j| + 1); the default is the smallest such
    value, but at least 16.
    """
    if not (p >= 1):
        raise ValueError("exponent p must be >= 1")
    need = 4 * (P.max_frequency() + 1)
    if n_theta is None:
        n_theta = max(16, need)
    if n_theta < need:
        raise UndersamplingError(f"n_theta = {n_theta} below the oversampling guard {need}")
    if not P.coeffs:
        return 0.0
    a = np.abs(P.evaluate(n_theta))
    if math.isinf(p):
        return float(a.max())
    cell = (2.0 * math.pi / n_theta) ** P.d
    return float((cell * np.sum(a**p)) ** (1.0 / p))


# ---------------------------------------------------------------------------
# Transference
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransferenceReport:
    """Torus-side norm ratios ||T_m g_r||_p / ||g_r||_p for each radius vector r.

    ``integrated_ratio`` combines the radial layers with the r dr measure,
    giving the phase-plane ratio ||m(H) f||_{M^{p,p}} / ||f||_{M^{p,p}}.
    """

    radii: np.ndarray
    ratios: np.ndarray
    max_ratio: float
    integrated_ratio: float
    skipped: int


def _radius_vectors(d: int, r_grid) -> np.ndarray:
    r = np.asarray(r_grid, dtype=float)
    if r.ndim == 1:
        if d == 1:
            return r[:, None]
        return np.array(list(itertools.product(r, repeat=d)))
    if r.ndim == 2 and r.shape[1] == d:
        return r
    raise DimensionMismatchError(f"radius grid of shape {r.shape} does not fit d = {d}")


def transference_check(
    c: HermiteCoeffs, m: SpectralSymbol, p: float, r_grid, n_theta: int | None = None
) -> TransferenceReport:
    """Compare both sides of the torus inequality layer by layer in r.

    For each radius vector, a_alpha(r) is formed from ``c`` and the torus
    multiplier alpha -> m(2|alpha| + d) is applied.  Layers where the right
    side vanishes are skipped.  A 1-D ``r_grid`` is used as a tensor grid
    when d = 2.  For p = 2 or 4, |g|^p is a trigonometric polynomial and the
    default n_theta = 4(N + 1) integrates it exactly; other p carry a small
    theta-quadrature error that shrinks as n_theta grows.
    """
    d = c.d
    if d not in (1, 2):
        raise DimensionMismatchError("transference check supports d = 1 or 2")
    radii = _radius_vectors(d, r_grid)
    weights = m.on_levels(d, c.N)[np.minimum(c.degrees, c.N)]
    need = 4 * (c.N + 1)
    n_theta = max(16, need) if n_theta is None else n_theta
    if n_theta < need:
        raise UndersamplingError(f"n_theta = {n_theta} below the oversampling guard {need}")
    cell = (2.0 * math.pi / n_theta) ** d
    lhs = np.zeros(len(radii))
    rhs = np.zeros(len(radii))
    for i, r in enumerate(radii):
        a = c.data * polar_weights(d, c.N, r)
        g = TrigPolynomial(d, {tuple(map(int, k)): a[tuple(k)] for k in np.argwhere(a != 0)})
        tg = torus_multiplier(g, lambda mus: weights[tuple(mus.T)])
        rhs[i] = np.sum(np.abs(g.evaluate(n_theta)) ** p) * cell if g.coeffs else 0.0
        lhs[i] = np.sum(np.abs(tg.evaluate(n_theta)) ** p) * cell if tg.coeffs else 0.0
    ok = (rhs > 0) & np.isfinite(rhs)
    ratios = np.full(len(radii), np.nan)
    ratios[ok] = (lhs[ok] / rhs[ok]) ** (1.0 / p)
    measure = np.prod(radii, axis=1)
    num = float(np.sum(lhs * measure))
    den = float(np.sum(rhs * measure))
    integrated = (num / den) ** (1.0 / p) if den > 0 else math.nan
    max_ratio = float(np.nanmax(ratios)) if ok.any() else math.nan
    return TransferenceReport(radii, ratios, max_ratio, integrated, int((~ok).sum()))


def euclidean_symbol(xi, beta: float, gamma: float, d: int | None = None) -> np.ndarray:
    """exp(i (2|xi|_1 + d)^gamma) / (2|xi|_1 + d)^beta for xi of shape (..., d)."""
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        xi = xi[None]
    if d is None:
        d = xi.shape[-1]
    if xi.shape[-1] != d:
        raise DimensionMismatchError(f"points have {xi.shape[-1]} coordinates, d = {d}")
    lam = 2.0 * np.abs(xi).sum(axis=-1) + d
    return np.exp(1j * lam**gamma) / lam**beta


# ---------------------------------------------------------------------------
# Subordination kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubordinationParams:
    sigma: float
    gamma: float
    beta: float = 1.0
    d: int = 1

    def __post_init__(self):
        if not (self.sigma > 0 and self.gamma > 0 and self.beta > 0 and self.d >= 1):
            raise ValueError("subordination parameters must be positive")


def kernel_symbol(params: SubordinationParams, xi) -> np.ndarray:
    """exp((i - sigma)(2|xi|_1 + d)^gamma) at points of shape (..., d)."""
    xi = np.asarray(xi, dtype=float)
    lam = 2.0 * np.abs(xi).sum(axis=-1) + params.d
    return np.exp((1j - params.sigma) * lam**params.gamma)


def _kink(params: SubordinationParams):
    # 1-D symbol near xi = 0 behaves like A exp(-b|xi|)
    d, g = params.d, params.gamma
    A = np.exp((1j - params.sigma) * d**g)
    b = -(1j - params.sigma) * 2.0 * g * d ** (g - 1)
    return A, b


def frequency_cutoff(params: SubordinationParams, corrected: bool = False) -> float:
    """Smallest Xi with exp(-sigma (2 Xi + d)^gamma) below 1e-14.

    With ``corrected`` the decay of the subtracted kink term is also covered.
    """
    s, g, d = params.sigma, params.gamma, params.d
    lam = (-math.log(_TRUNC) / s) ** (1.0 / g)
    xi = max(0.5 * (lam - d), 1.0)
    if corrected:
        A, b = _kink(params)
        xi = max(xi, (math.log(abs(A)) - math.log(_TRUNC)) / b.real)
    return xi


def _default_half_width(params: SubordinationParams, xi_max: float) -> float:
    g, d = params.gamma, params.d
    xi_f = frequency_cutoff(params)
    v_max = 2.0 * g * max(d ** (g - 1), (2.0 * xi_f + d) ** (g - 1))
    A, b = _kink(params)
    return max(16.0, 8.0 * abs(b), 4.0 * v_max)


def kernel_grid(
    params: SubordinationParams,
    oversample: float = 4.0,
    half_width: float | None = None,
    corrected: bool = False,
) -> Grid:
    """Spatial grid whose dual box covers the truncated frequency range ``oversample`` times."""
    xi_max = frequency_cutoff(params, corrected)
    h = math.pi / (oversample * xi_max)
    X = _default_half_width(params, xi_max) if half_width is None else float(half_width)
    n = 2 * int(math.ceil(X / h)) + 1
    return Grid(params.d, X, n)


def _check_kernel_grid(params: SubordinationParams, grid: Grid, corrected: bool):
    if grid.d != params.d:
        raise DimensionMismatchError(f"grid is {grid.d}-D but kernel is {params.d}-D")
    xi_max = frequency_cutoff(params, corrected)
    reach = dual_grid(grid).L
    if reach < xi_max:
        raise ResolutionError(
            f"grid reaches frequency {reach:.4g} but the symbol needs {xi_max:.4g}; "
            f"sigma = {params.sigma} is too small for this grid"
        )


def subordination_kernel(
    params: SubordinationParams, grid: Grid | None = None, corrected: bool = False
) -> GridField:
    """k_sigma = inverse Fourier transform of exp((i - sigma)(2|xi|_1 + d)^gamma).

    The symbol is sampled on the dual of ``grid`` and inverted by the
    discrete transform, which yields the periodization of k_sigma over the
    box; its discrete Fourier transform reproduces the symbol exactly.

    With ``corrected`` (d = 1) the kink A e^{-b|xi|} of the symbol at the
    origin is split off and inverted in closed form,
    (2 pi)^{-1/2} 2 A b / (b^2 + x^2); only the smooth remainder goes
    through the discrete transform.  This gives the kernel on the whole line
    (no periodization of its slowly decaying tails).
    """
    if grid is None:
        grid = kernel_grid(params, corrected=corrected)
    _check_kernel_grid(params, grid, corrected)
    freq = dual_grid(grid)
    xi = freq.mesh()
    khat = kernel_symbol(params, xi)
    if corrected:
        if params.d != 1:
            raise DimensionMismatchError("kink correction is implemented for d = 1")
        A, b = _kink(params)
        khat = khat - A * np.exp(-b * np.abs(xi[..., 0]))
    k = fourier_transform(GridField(freq, khat), sign=1, check_boundary=False).values
    if corrected:
        x = grid.nodes
        k = k + 2.0 * A * b / (b * b + x * x) / math.sqrt(2.0 * math.pi)
    return GridField(grid, k)


def _kink_tail_l1(params: SubordinationParams, X: float) -> float:
    A, b = _kink(params)
    c = abs(2.0 * A * b) / math.sqrt(2.0 * math.pi)
    b2 = b * b
    val, _ = integrate.quad(lambda x: c / abs(b2 + x * x), X, np.inf, limit=200)
    return 2.0 * val


def kernel_l1_norm(
    params: SubordinationParams, grid: Grid | None = None, corrected: bool | None = None
) -> float:
    """||k_sigma||_{L^1} by the trapezoid rule on ``grid`` plus the analytic tail beyond it.

    For d = 1 the kink-corrected kernel is used, so the tail beyond the box
    is the closed-form 1/x^2 part; for d > 1 the periodized kernel is
    integrated over one period.
    """
    if corrected is None:
        corrected = params.d == 1
    if grid is None:
        grid = kernel_grid(params, corrected=corrected)
    k = subordination_kernel(params, grid, corrected=corrected)
    val = float(grid.integrate(np.abs(k.values)).real)
    if corrected:
        val += _kink_tail_l1(params, grid.L)
    return val


@dataclass(frozen=True)
class KernelBoundRow:
    sigma: float
    gamma: float
    d: int
    l1_norm: float
    bound: float
    ratio: float
    l1_refined: float
    ratio_refined: float


@dataclass(frozen=True)
class KernelBoundReport:
    rows: tuple
    max_ratio: float
    max_ratio_refined: float
    refinement_delta: float
    passed: bool


def kernel_l1_bound_check(
    sigmas, gamma: float, d: int = 1, tolerance: float = 0.05
) -> KernelBoundReport:
    """rho(sigma) = ||k_sigma||_1 / (sigma^{-d/2} e^{-sigma d^gamma / 2}) over a sigma grid.

    Every kernel is computed twice, the second time on a box of twice the
    width at the same spacing.  The check passes when every ratio is finite
    and the max ratio moves by less than ``tolerance`` (relative).
    """
    sigmas = [float(s) for s in sigmas]
    if not sigmas or min(sigmas) < 0.1 or max(sigmas) > 10:
        raise ValueError("sigma grid must be a nonempty subset of [0.1, 10]")
    rows = []
    for s in sigmas:
        params = SubordinationParams(s, gamma, 1.0, d)
        corrected = d == 1
        grid = kernel_grid(params, corrected=corrected)
        wide = Grid(d, 2.0 * grid.L, 2 * grid.n - 1)
        bound = s ** (-d / 2) * math.exp(-0.5 * s * d**gamma)
        l1 = kernel_l1_norm(params, grid, corrected)
        l1r = kernel_l1_norm(params, wide, corrected)
        rows.append(KernelBoundRow(s, gamma, d, l1, bound, l1 / bound, l1r, l1r / bound))
    mx = max(r.ratio for r in rows)
    mxr = max(r.ratio_refined for r in rows)
    delta = abs(mxr - mx) / mx
    finite = all(math.isfinite(r.ratio) and math.isfinite(r.ratio_refined) for r in rows)
    return KernelBoundReport(tuple(rows), mx, mxr, delta, bool(finite and delta < tolerance))


def gamma_subordination_check(xi, beta: float, gamma: float, d: int | None = None) -> float:
    """Relative error of lam^{-beta} = Gamma(beta/gamma)^{-1} int_0^inf
    sigma^{beta/gamma - 1} exp(-sigma lam^gamma) d sigma, lam = 2|xi|_1 + d.

    The integral is truncated where the integrand drops below 1e-18 and
    evaluated by adaptive quadrature with the algebraic weight at sigma = 0.
    """
    if not (beta > 0 and gamma > 0):
        raise ValueError("beta and gamma must be positive")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    d = xi.size if d is None else int(d)
    lam = 2.0 * float(np.abs(xi).sum()) + d
    rate = lam**gamma
    a = beta / gamma

    def integrand(s):
        return s ** (a - 1) * math.exp(-s * rate) if s > 0 else 0.0

    T = max(1.0, (a - 1) / rate) / rate
    while integrand(T) >= 1e-18 or T * rate < a:
        T *= 2.0
    val, _ = integrate.quad(
        lambda s: math.exp(-s * rate),
        0.0,
        T,
        weight="alg",
        wvar=(a - 1.0, 0.0),
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    exact = lam ** (-beta)
    return abs(val / special.gamma(a) - exact) / exact
