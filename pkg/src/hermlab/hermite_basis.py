"""Hermite functions, uniform quadrature grids, Hermite analysis and synthesis.

The Hermite functions are evaluated with the normalized three-term recurrence

    h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x)

started from ``h_0(x) = pi**-0.25 exp(-x**2/2)``.  The Gaussian factor is
carried in log form and the recurrence is rescaled on the fly, so the
evaluation neither underflows for large ``|x|`` nor overflows for large ``k``.

Integrals over R^d use the trapezoidal rule on a uniform tensor grid over
[-L, L]^d.  For Schwartz-class integrands that have decayed at the edge of the
box this is spectrally accurate.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidScaleError,
    ResolutionError,
    UnsupportedDegreeError,
)

__all__ = [
    "MAX_DEGREE",
    "DEFAULTS",
    "BoundaryMassWarning",
    "Grid",
    "GridField",
    "HermiteCoeffs",
    "multi_indices",
    "hermite_table",
    "hermite_1d",
    "hermite_nd",
    "scaled_hermite",
    "make_grid",
    "default_grid",
    "analyze",
    "synthesize",
    "project",
    "min_points",
]

MAX_DEGREE = 2000

# per-dimension defaults: box half-width, points per axis, degree cap
DEFAULTS = {
    1: {"L": 12.0, "n": 1024, "N": 40},
    2: {"L": 8.0, "n": 128, "N": 20},
}

_RESCALE = 1e100
_BOUNDARY_TOL = 1e-14


class BoundaryMassWarning(UserWarning):
    """A sampled function has not decayed at the edge of its grid."""


# ---------------------------------------------------------------------------
# Multi-indices
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _multi_indices(d: int, N: int) -> np.ndarray:
    idx = [a for a in itertools.product(range(N + 1), repeat=d) if sum(a) <= N]
    idx.sort(key=lambda a: (sum(a), tuple(-v for v in a)))
    out = np.array(idx, dtype=np.int64).reshape(-1, d)
    out.setflags(write=False)
    return out


def multi_indices(d: int, N: int) -> np.ndarray:
    """All alpha in N^d with |alpha| <= N, shape (M, d).

    Ordered by total degree, then reverse-lexicographically inside each
    degree, so ``(1, 0)`` precedes ``(0, 1)``.
    """
    if d < 1:
        raise DimensionMismatchError("dimension must be >= 1")
    if N < 0:
        raise UnsupportedDegreeError("degree cap must be >= 0")
    return _multi_indices(int(d), int(N))


@lru_cache(maxsize=None)
def _degree_tensor(d: int, N: int) -> np.ndarray:
    axes = np.ogrid[tuple(slice(0, N + 1) for _ in range(d))]
    deg = sum(axes) if d > 1 else axes[0]
    deg = np.broadcast_to(deg, (N + 1,) * d).astype(np.int64)
    deg.setflags(write=False)
    return deg


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------


def hermite_table(N: int, x) -> np.ndarray:
    """Values of h_0, ..., h_N at ``x``; result has shape ``(N + 1,) + x.shape``."""
    if N < 0 or N > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {N} outside supported range [0, {MAX_DEGREE}]")
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty((N + 1, flat.size))
    # value = cur * exp(log_scale); cur is kept O(1)..O(1e100)
    log_scale = -0.5 * flat**2
    prev = np.zeros_like(flat)
    cur = np.full_like(flat, math.pi**-0.25)
    out[0] = cur * np.exp(log_scale)
    for k in range(N):
        nxt = flat * math.sqrt(2.0 / (k + 1)) * cur - math.sqrt(k / (k + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            log_scale = np.where(big, log_scale + math.log(_RESCALE), log_scale)
        with np.errstate(divide="ignore"):
            out[k + 1] = np.sign(cur) * np.exp(np.log(np.abs(cur)) + log_scale)
    return out.reshape((N + 1,) + x.shape)


def hermite_1d(k: int, x):
    """L2-normalized Hermite function h_k evaluated at ``x``.

    Examples
    --------
    >>> round(hermite_1d(0, 0.0), 7)
    0.7511255
    """
    k = int(k)
    if k < 0 or k > MAX_DEGREE:
        raise UnsupportedDegreeError(f"degree {k} outside supported range [0, {MAX_DEGREE}]")
    val = hermite_table(k, x)[k]
    return float(val) if np.ndim(val) == 0 else val


def hermite_nd(alpha, x):
    """Tensor-product Hermite function Phi_alpha at points ``x`` of shape (..., d)."""
    alpha = tuple(int(a) for a in alpha)
    x = np.asarray(x, dtype=float)
    d = len(alpha)
    if x.ndim == 0 or x.shape[-1] != d:
        raise DimensionMismatchError(
            f"multi-index has length {d} but points have trailing dimension "
            f"{x.shape[-1] if x.ndim else 0}"
        )
    if any(a < 0 for a in alpha):
        raise UnsupportedDegreeError("multi-index entries must be nonnegative")
    val = np.ones(x.shape[:-1])
    for j, a in enumerate(alpha):
        val = val * hermite_table(a, x[..., j])[a]
    return float(val) if val.ndim == 0 else val


def scaled_hermite(alpha, lam: float, x):
    """Scaled Hermite function |lam|^{d/4} Phi_alpha(sqrt(|lam|) x)."""
    if lam == 0:
        raise InvalidScaleError("scale lambda must be nonzero")
    s = abs(float(lam))
    d = len(tuple(alpha))
    x = np.asarray(x, dtype=float)
    return s ** (d / 4) * hermite_nd(alpha, math.sqrt(s) * x)


# ---------------------------------------------------------------------------
# Grids and sampled fields
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Uniform tensor grid over [-L, L]^d with ``n`` nodes per axis."""

    d: int
    L: float
    n: int

    def __post_init__(self):
        if int(self.d) < 1:
            raise DimensionMismatchError("grid dimension must be >= 1")
        if not self.L > 0:
            raise ValueError("grid half-width L must be positive")
        if int(self.n) < 2:
            raise ValueError("grid needs at least 2 nodes per axis")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "n", int(self.n))

    @property
    def spacing(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        x = np.linspace(-self.L, self.L, self.n)
        # exact symmetry about the origin
        return 0.5 * (x - x[::-1])

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def weights(self) -> np.ndarray:
        """1-D trapezoidal weights."""
        w = np.full(self.n, self.spacing)
        w[0] = w[-1] = 0.5 * self.spacing
        return w

    def mesh(self) -> np.ndarray:
        """Node coordinates, shape ``grid.shape + (d,)``."""
        axes = np.meshgrid(*([self.nodes] * self.d), indexing="ij")
        return np.stack(axes, axis=-1)

    def integrate(self, values) -> complex:
        """Trapezoidal integral of ``values`` (shape ``grid.shape``)."""
        out = np.asarray(values)
        w = self.weights
        for _ in range(self.d):
            out = np.tensordot(out, w, axes=([0], [0]))
        return out[()]


def make_grid(d: int, L: float, n: int) -> Grid:
    """Uniform symmetric grid, e.g. ``make_grid(1, 12, 5).nodes -> [-12, -6, 0, 6, 12]``."""
    return Grid(d, L, n)


def default_grid(d: int) -> Grid:
    cfg = DEFAULTS.get(d)
    if cfg is None:
        raise DimensionMismatchError(f"no default grid for d = {d}")
    return Grid(d, cfg["L"], cfg["n"])


@dataclass(frozen=True, eq=False)
class GridField:
    """Complex samples of a function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != self.grid.size:
            raise DimensionMismatchError(
                f"expected {self.grid.size} values for grid, got {vals.size}"
            )
        vals = vals.reshape(self.grid.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func) -> "GridField":
        """Sample ``func(points)`` where ``points`` has shape ``grid.shape + (d,)``."""
        return cls(grid, func(grid.mesh()))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.integrate(np.abs(self.values) ** 2).real))

    def inner(self, other: "GridField") -> complex:
        """<self, other> = integral of self * conj(other)."""
        if other.grid != self.grid:
            raise DimensionMismatchError("fields live on different grids")
        return complex(self.grid.integrate(self.values * np.conj(other.values)))

    def boundary_ratio(self) -> float:
        """max |f| over the faces of the box relative to max |f|."""
        a = np.abs(self.values)
        peak = a.max()
        if peak == 0:
            return 0.0
        edge = 0.0
        for ax in range(self.grid.d):
            edge = max(edge, np.take(a, 0, axis=ax).max(), np.take(a, -1, axis=ax).max())
        return float(edge / peak)


# ---------------------------------------------------------------------------
# Hermite coefficients
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HermiteCoeffs:
    """Coefficients c_alpha for |alpha| <= N, stored as a dense (N+1)^d tensor.

    Entries of ``data`` with |alpha| > N are held at zero.
    """

    data: np.ndarray
    N: int = field(default=-1)

    def __post_init__(self):
        arr = np.array(self.data, dtype=complex)
        if arr.ndim < 1:
            raise DimensionMismatchError("coefficient tensor needs at least one axis")
        N = self.N if self.N >= 0 else arr.shape[0] - 1
        if arr.shape != (N + 1,) * arr.ndim:
            raise DimensionMismatchError(
                f"coefficient tensor shape {arr.shape} does not match cap N = {N}"
            )
        arr[_degree_tensor(arr.ndim, N) > N] = 0
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "N", int(N))

    @property
    def d(self) -> int:
        return self.data.ndim

    @property
    def degrees(self) -> np.ndarray:
        return _degree_tensor(self.d, self.N)

    @classmethod
    def zeros(cls, d: int, N: int) -> "HermiteCoeffs":
        return cls(np.zeros((N + 1,) * d, dtype=complex), N)

    @classmethod
    def delta(cls, alpha, N: int) -> "HermiteCoeffs":
        alpha = tuple(int(a) for a in alpha)
        if sum(alpha) > N:
            raise UnsupportedDegreeError(f"|alpha| = {sum(alpha)} exceeds cap {N}")
        out = np.zeros((N + 1,) * len(alpha), dtype=complex)
        out[alpha] = 1.0
        return cls(out, N)

    @classmethod
    def from_entries(cls, d: int, N: int, entries) -> "HermiteCoeffs":
        """Build from a mapping or iterable of ``(alpha, value)`` pairs."""
        out = np.zeros((N + 1,) * d, dtype=complex)
        items = entries.items() if hasattr(entries, "items") else entries
        for alpha, val in items:
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != d:
                raise DimensionMismatchError(f"multi-index {alpha} is not of length {d}")
            if min(alpha) < 0 or sum(alpha) > N:
                raise UnsupportedDegreeError(f"multi-index {alpha} outside |alpha| <= {N}")
            out[alpha] = val
        return cls(out, N)

    @classmethod
    def from_vector(cls, d: int, N: int, vec) -> "HermiteCoeffs":
        """Inverse of :meth:`vector`."""
        idx = multi_indices(d, N)
        vec = np.asarray(vec, dtype=complex)
        if vec.shape != (len(idx),):
            raise DimensionMismatchError(f"expected {len(idx)} coefficients, got {vec.shape}")
        out = np.zeros((N + 1,) * d, dtype=complex)
        out[tuple(idx.T)] = vec
        return cls(out, N)

    def vector(self) -> np.ndarray:
        """Coefficients in :func:`multi_indices` order."""
        return self.data[tuple(multi_indices(self.d, self.N).T)]

    def items(self):
        for alpha in multi_indices(self.d, self.N):
            a = tuple(int(v) for v in alpha)
            yield a, complex(self.data[a])

    def __getitem__(self, alpha) -> complex:
        alpha = tuple(alpha) if np.ndim(alpha) else (alpha,)
        if len(alpha) != self.d:
            raise DimensionMismatchError(f"multi-index {alpha} is not of length {self.d}")
        if min(alpha) < 0 or sum(alpha) > self.N:
            return 0j
        return complex(self.data[alpha])

    def norm(self) -> float:
        """l2 norm of the coefficient sequence."""
        return float(np.linalg.norm(self.data.ravel()))

    def resize(self, N: int) -> "HermiteCoeffs":
        """Copy with degree cap ``N`` (truncating or zero-padding)."""
        out = np.zeros((N + 1,) * self.d, dtype=complex)
        m = min(N, self.N) + 1
        sl = tuple(slice(0, m) for _ in range(self.d))
        out[sl] = self.data[sl]
        return HermiteCoeffs(out, N)

    def _aligned(self, other: "HermiteCoeffs"):
        if other.d != self.d:
            raise DimensionMismatchError("coefficient dimensions differ")
        N = max(self.N, other.N)
        return self.resize(N).data, other.resize(N).data, N

    def __add__(self, other):
        a, b, N = self._aligned(other)
        return HermiteCoeffs(a + b, N)

    def __sub__(self, other):
        a, b, N = self._aligned(other)
        return HermiteCoeffs(a - b, N)

    def __mul__(self, scalar):
        return HermiteCoeffs(self.data * scalar, self.N)

    __rmul__ = __mul__

    def __neg__(self):
        return HermiteCoeffs(-self.data, self.N)

    def __repr__(self):
        nz = int(np.count_nonzero(self.data))
        return f"HermiteCoeffs(d={self.d}, N={self.N}, nonzero={nz})"


# ---------------------------------------------------------------------------
# Analysis and synthesis
# ---------------------------------------------------------------------------


def min_points(N: int, d: int, L: float) -> int:
    """Smallest n passing the resolution guard n >= 4 sqrt(2N+d) L / pi."""
    return int(math.ceil(4.0 * math.sqrt(2 * N + d) * L / math.pi))


def _check_resolution(grid: Grid, N: int):
    need = min_points(N, grid.d, grid.L)
    if grid.n < need:
        raise ResolutionError(
            f"grid with n = {grid.n} on [-{grid.L}, {grid.L}] cannot resolve degree {N}; "
            f"need n >= {need}"
        )


@lru_cache(maxsize=32)
def _basis_1d(grid: Grid, N: int) -> np.ndarray:
    tab = hermite_table(N, grid.nodes)
    tab.setflags(write=False)
    return tab


def analyze(f: GridField, N: int) -> HermiteCoeffs:
    """Hermite coefficients <f, Phi_alpha> by trapezoidal quadrature, |alpha| <= N."""
    grid = f.grid
    _check_resolution(grid, N)
    ratio = f.boundary_ratio()
    if ratio > _BOUNDARY_TOL:
        warnings.warn(
            f"field has not decayed at the grid boundary (edge/peak = {ratio:.2e})",
            BoundaryMassWarning,
            stacklevel=2,
        )
    hw = _basis_1d(grid, N) * grid.weights
    res = f.values
    for _ in range(grid.d):
        res = np.tensordot(res, hw, axes=([0], [1]))
    return HermiteCoeffs(res, N)


def synthesize(c: HermiteCoeffs, grid: Grid) -> GridField:
    """Samples of sum_alpha c_alpha Phi_alpha on ``grid``."""
    if grid.d != c.d:
        raise DimensionMismatchError(f"coefficients are {c.d}-D but grid is {grid.d}-D")
    _check_resolution(grid, c.N)
    h = _basis_1d(grid, c.N)
    res = c.data
    for _ in range(grid.d):
        res = np.tensordot(res, h, axes=([0], [0]))
    return GridField(grid, res)


def project(c: HermiteCoeffs, k: int) -> HermiteCoeffs:
    """Keep only the coefficients with |alpha| = k."""
    return HermiteCoeffs(np.where(c.degrees == k, c.data, 0), c.N)
