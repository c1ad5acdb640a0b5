"""Functional calculus m(H) on Hermite coefficients.

Every operator here acts diagonally on the Hermite eigenspaces: the
coefficient c_alpha is multiplied by m(2|alpha| + d).  The Riesz transforms
are the one exception; they shift the index by e_j after applying H^{-1/2}.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, SymbolDomainError
from .hermite_basis import HermiteCoeffs, multi_indices
from .symbols import SpectralSymbol

__all__ = [
    "SpectralSymbol",
    "SlocSpec",
    "SlocResult",
    "EnsembleMember",
    "OperatorNormEstimate",
    "apply_symbol",
    "schrodinger_propagate",
    "wave_propagate",
    "riesz_transform",
    "sloc_cutoff",
    "sloc_sobolev_norm",
    "gaussian_coeffs",
    "default_ensemble",
    "estimate_operator_norm",
    "worker_count",
]


# ---------------------------------------------------------------------------
# Diagonal operators
# ---------------------------------------------------------------------------


def apply_symbol(c: HermiteCoeffs, m: SpectralSymbol) -> HermiteCoeffs:
    """m(H) in coefficient space: c_alpha -> m(2|alpha| + d) c_alpha."""
    weights = m.on_levels(c.d, c.N)
    return HermiteCoeffs(weights[np.minimum(c.degrees, c.N)] * c.data, c.N)


def schrodinger_propagate(c: HermiteCoeffs, t: float) -> HermiteCoeffs:
    """e^{itH} f; unitary on coefficient space."""
    return apply_symbol(c, SpectralSymbol.schrodinger(t))


def wave_propagate(c: HermiteCoeffs, t: float) -> HermiteCoeffs:
    """H^{-1/2} sin(t H^{1/2}) f, the wave solution with zero data and velocity f."""
    return apply_symbol(c, SpectralSymbol.wave(t))


def riesz_transform(c: HermiteCoeffs, j: int) -> HermiteCoeffs:
    """Hermite-Riesz transform R_j = (-d/dx_j + x_j) H^{-1/2}, axis ``j`` counted from 1.

    The creation operator raises the degree, so the result has cap N + 1.
    """
    d, N = c.d, c.N
    if not 1 <= j <= d:
        raise DimensionMismatchError(f"axis j = {j} outside 1..{d}")
    ax = j - 1
    alpha_j = np.arange(N + 1).reshape([-1 if a == ax else 1 for a in range(d)])
    w = np.sqrt(2.0 * alpha_j + 2.0) / np.sqrt(2.0 * c.degrees + d)
    out = np.zeros((N + 2,) * d, dtype=complex)
    dst = tuple(slice(1, N + 2) if a == ax else slice(0, N + 1) for a in range(d))
    out[dst] = w * c.data
    return HermiteCoeffs(out, N + 1)


# ---------------------------------------------------------------------------
# Localized Sobolev norm
# ---------------------------------------------------------------------------


def sloc_cutoff(s) -> np.ndarray:
    """Smooth bump exp(-1/((s - 1/2)(1 - s))) on (1/2, 1), zero elsewhere."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = (s > 0.5) & (s < 1.0)
    si = s[inside]
    out[inside] = np.exp(-1.0 / ((si - 0.5) * (1.0 - si)))
    return out


@dataclass(frozen=True)
class SlocSpec:
    """Parameters of the sampled localized Sobolev norm sup_t ||psi m(t.)||_{L^2_beta}.

    The sup over t > 0 is replaced by a max over ``t_samples``; the Sobolev
    norm uses a DFT of psi(s) m(t s) with spacing ``ds`` on a zero-padded
    period ``period``.
    """

    beta_s: float
    t_samples: tuple = field(default_factory=lambda: tuple(2.0 ** np.linspace(-10, 10, 81)))
    ds: float = 1.0 / 8192
    period: float = 4.0

    def __post_init__(self):
        if not self.beta_s > 0:
            raise ValueError("Sobolev order must be positive")
        if not all(t > 0 for t in self.t_samples):
            raise ValueError("dilation samples must be positive")

    def refined(self) -> "SlocSpec":
        """Same spec with half the spacing and twice the period."""
        return SlocSpec(self.beta_s, self.t_samples, self.ds / 2, self.period * 2)


@dataclass(frozen=True)
class SlocResult:
    value: float
    diverges: bool
    t_samples: np.ndarray
    profile: np.ndarray

    def __float__(self):
        return math.inf if self.diverges else self.value


def _monotone_growth(v: np.ndarray, factor: float = 10.0) -> bool:
    dv = np.diff(v)
    tol = 1e-12 * np.abs(v).max()
    up = np.all(dv >= -tol) and v[-1] > factor * v[0]
    down = np.all(dv <= tol) and v[0] > factor * v[-1]
    return bool(up or down)


def sloc_sobolev_norm(m: Callable, spec: SlocSpec) -> SlocResult:
    """Sampled sup over t of ||(1 + tau^2)^{beta_s/2} FT[psi m(t.)]||_{L^2}.

    ``m`` is any function on (0, inf), for instance a :class:`SpectralSymbol`.
    ``diverges`` is set when the sampled values grow monotonically by more
    than a factor 10 across the t range; this is a heuristic, not a proof.
    """
    M = int(round(spec.period / spec.ds))
    s = np.arange(M) * spec.ds
    psi = sloc_cutoff(s)
    supp = psi > 0
    tau = 2.0 * math.pi * np.fft.fftfreq(M, spec.ds)
    weight = (1.0 + tau**2) ** spec.beta_s
    dtau = 2.0 * math.pi / spec.period
    profile = np.empty(len(spec.t_samples))
    for i, t in enumerate(spec.t_samples):
        g = np.zeros(M, dtype=complex)
        with np.errstate(all="ignore"):
            try:
                vals = np.asarray(m(t * s[supp]), dtype=complex)
            except Exception as exc:
                raise SymbolDomainError(f"symbol could not be evaluated: {exc}") from exc
        if not np.all(np.isfinite(vals)):
            raise SymbolDomainError(f"symbol is not finite on [{t / 2:g}, {t:g}]")
        g[supp] = psi[supp] * vals
        ghat = np.fft.fft(g) * spec.ds / math.sqrt(2.0 * math.pi)
        profile[i] = math.sqrt(float(np.sum(weight * np.abs(ghat) ** 2) * dtau))
    diverges = _monotone_growth(profile)
    value = math.inf if diverges else float(profile.max())
    return SlocResult(value, diverges, np.asarray(spec.t_samples), profile)


# ---------------------------------------------------------------------------
# Test ensemble and operator-norm probe
# ---------------------------------------------------------------------------


def _gaussian_1d(a: complex, N: int) -> np.ndarray:
    # <exp(-a x^2/2), h_{2j}> = pi^{1/4} sqrt(2/(1+a)) sqrt((2j)!)/(2^j j!) ((1-a)/(1+a))^j
    out = np.zeros(N + 1, dtype=complex)
    r = (1 - a) / (1 + a)
    pre = math.pi**0.25 * np.sqrt(2.0 / (1 + a))
    for j in range(N // 2 + 1):
        mag = math.exp(0.5 * math.lgamma(2 * j + 1) - j * math.log(2) - math.lgamma(j + 1))
        out[2 * j] = pre * mag * r**j
    return out


def gaussian_coeffs(a: complex, d: int, N: int) -> HermiteCoeffs:
    """Hermite coefficients of exp(-a|x|^2/2), Re a > 0, truncated at |alpha| <= N.

    Complex ``a = 1 - i b`` gives the chirp exp(i b|x|^2/2) exp(-|x|^2/2).
    """
    a = complex(a)
    if not a.real > 0:
        raise ValueError("Gaussian parameter needs a positive real part")
    v = _gaussian_1d(a, N)
    out = v
    for _ in range(d - 1):
        out = np.multiply.outer(out, v)
    return HermiteCoeffs(out, N)


@dataclass(frozen=True)
class EnsembleMember:
    name: str
    coeffs: HermiteCoeffs


def default_ensemble(d: int, N: int, seed: int = 0, n_random: int = 32) -> list:
    """Deltas for |alpha| <= 8, Gaussians, chirps and random decaying vectors.

    Random member i draws (re, im) pairs from numpy's PCG64 generator seeded
    with ``[seed, i]``, in :func:`multi_indices` order, scaled by
    (1 + |alpha|)^{-2} / sqrt(2).  Draws are ordered by degree, so raising N
    extends each random member instead of replacing it.
    """
    members = []
    for alpha in multi_indices(d, min(8, N)):
        a = tuple(int(v) for v in alpha)
        members.append(EnsembleMember(f"delta{list(a)}", HermiteCoeffs.delta(a, N)))
    for a in (0.25, 1.0, 4.0):
        members.append(EnsembleMember(f"gauss[a={a:g}]", gaussian_coeffs(a, d, N)))
    for b in (1.0, 3.0):
        members.append(EnsembleMember(f"chirp[b={b:g}]", gaussian_coeffs(1 - 1j * b, d, N)))
    idx = multi_indices(d, N)
    decay = (1.0 + idx.sum(axis=1)) ** -2.0 / math.sqrt(2.0)
    for i in range(n_random):
        rng = np.random.default_rng([int(seed), i])
        z = rng.standard_normal((len(idx), 2))
        vec = (z[:, 0] + 1j * z[:, 1]) * decay
        members.append(EnsembleMember(f"random[{i}]", HermiteCoeffs.from_vector(d, N, vec)))
    return members


def worker_count() -> int:
    """Worker pool size; the HERMLAB_THREADS environment variable caps it."""
    env = os.environ.get("HERMLAB_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), cap))
        except ValueError:
            pass
    return min(4, cap)


@dataclass(frozen=True)
class OperatorNormEstimate:
    """Max ratio ||m(H)f|| / ||f|| over an ensemble: an empirical LOWER bound."""

    value: float
    argmax: str
    ratios: dict
    skipped: tuple


def estimate_operator_norm(
    m: SpectralSymbol,
    p: float,
    q: float,
    ensemble: Sequence | None = None,
    norm: Callable | None = None,
    d: int = 1,
    N: int = 20,
    seed: int = 0,
) -> OperatorNormEstimate:
    """Empirical lower bound for the M^{p,q} operator norm of m(H).

    ``ensemble`` defaults to :func:`default_ensemble`; ``norm`` defaults to
    the STFT modulation norm.  Members with zero norm are skipped with a
    warning.  Each member is independent, so they run on a thread pool.
    """
    if norm is None:
        from .timefreq import modulation_norm as norm
    if ensemble is None:
        ensemble = default_ensemble(d, N, seed)
    members = [
        e if isinstance(e, EnsembleMember) else EnsembleMember(f"f[{i}]", e)
        for i, e in enumerate(ensemble)
    ]
    if not members:
        raise ValueError("ensemble is empty")

    def ratio(member):
        den = norm(member.coeffs, p, q)
        if den == 0:
            return None
        return norm(apply_symbol(member.coeffs, m), p, q) / den

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(ratio, members))
    ratios, skipped = {}, []
    for member, r in zip(members, results):
        if r is None:
            skipped.append(member.name)
            warnings.warn(f"ensemble member {member.name} has zero norm; skipped", stacklevel=2)
        else:
            ratios[member.name] = float(r)
    if not ratios:
        raise ValueError("every ensemble member has zero norm")
    best = max(ratios, key=ratios.get)
    return OperatorNormEstimate(ratios[best], best, ratios, tuple(skipped))
