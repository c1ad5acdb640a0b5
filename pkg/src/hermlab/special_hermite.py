"""Special Hermite functions, Laguerre functions and twisted convolution on C^d.

A point z = x + i y of C^d is stored as the real vector (x_1..x_d, y_1..y_d).
The scaled special Hermite functions are the matrix coefficients

    Phi^lam_{alpha,beta}(z) = (2 pi)^{-d/2} |lam|^{d/2}
        int e^{i lam (x.xi + x.y/2)} Phi^lam_alpha(xi + y) Phi^lam_beta(xi) d xi

and the lam-twisted convolution is

    (F *_lam G)(z) = int F(z - w) G(w) e^{i lam Im(z . conj(w)) / 2} dw.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import (
    DimensionMismatchError,
    GridMismatchError,
    InvalidScaleError,
    QuadratureDomainError,
)
from .hermite_basis import Grid, GridField, hermite_table

__all__ = [
    "PlaneField",
    "plane_grid",
    "special_hermite",
    "special_hermite_alpha0",
    "laguerre",
    "laguerre_fn",
    "laguerre_field",
    "twisted_convolve",
    "special_hermite_project",
]

_EDGE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PlaneField(GridField):
    """Samples on [-L, L]^{2d} with axes ordered (x_1..x_d, y_1..y_d)."""

    def __post_init__(self):
        if self.grid.d % 2:
            raise DimensionMismatchError("a plane field needs an even number of real axes")
        super().__post_init__()

    @property
    def cdim(self) -> int:
        """Complex dimension d."""
        return self.grid.d // 2

    @property
    def axes(self) -> list:
        d = self.cdim
        return [f"x{j + 1}" for j in range(d)] + [f"y{j + 1}" for j in range(d)]

    def z(self) -> np.ndarray:
        """Complex coordinates, shape ``grid.shape + (d,)``."""
        m = self.grid.mesh()
        d = self.cdim
        return m[..., :d] + 1j * m[..., d:]

    @classmethod
    def from_function(cls, grid: Grid, func) -> "PlaneField":
        """Sample ``func(z)`` with ``z`` complex of shape ``grid.shape + (d,)``."""
        m = grid.mesh()
        d = grid.d // 2
        return cls(grid, func(m[..., :d] + 1j * m[..., d:]))

    def __add__(self, other: "PlaneField") -> "PlaneField":
        if other.grid != self.grid:
            raise GridMismatchError("plane fields live on different grids")
        return PlaneField(self.grid, self.values + other.values)

    def __sub__(self, other: "PlaneField") -> "PlaneField":
        if other.grid != self.grid:
            raise GridMismatchError("plane fields live on different grids")
        return PlaneField(self.grid, self.values - other.values)

    def __mul__(self, scalar) -> "PlaneField":
        return PlaneField(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def sup_distance(self, other: "PlaneField") -> float:
        if other.grid != self.grid:
            raise GridMismatchError("plane fields live on different grids")
        return float(np.abs(self.values - other.values).max())


def plane_grid(d: int, L: float, n: int) -> Grid:
    """Grid on [-L, L]^{2d} for fields on C^d."""
    return Grid(2 * d, L, n)


def _check_lam(lam):
    if lam == 0:
        raise InvalidScaleError("scale lambda must be nonzero")
    return float(lam)


def _as_points(z, d=None) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        z = z[None]
    if d is not None and z.shape[-1] != d:
        raise DimensionMismatchError(f"points have {z.shape[-1]} coordinates, expected {d}")
    return z


# ---------------------------------------------------------------------------
# Special Hermite functions
# ---------------------------------------------------------------------------


def _quad_grid(a: int, b: int, lam: float, x_max: float, y_max: float) -> Grid:
    s = math.sqrt(abs(lam))
    K = max(a, b)
    L = (math.sqrt(2 * K + 1) + 8.0) / s + 0.5 * y_max
    band = abs(lam) * x_max + 2.0 * s * (math.sqrt(2 * K + 1) + 8.0)
    h = math.pi / band
    n = max(257, 2 * int(math.ceil(L / h)) + 1)
    return Grid(1, L, n)


def _scaled_h(k: int, lam: float, t) -> np.ndarray:
    s = abs(lam)
    return s**0.25 * hermite_table(k, math.sqrt(s) * np.asarray(t))[k]


def _shf_1d(a, b, lam, x, y, qgrid, on_grid):
    """1-D scaled special Hermite function.

    With ``on_grid`` the result is the (len(x), len(y)) table; otherwise x and
    y are matching point arrays.
    """
    xi = qgrid.nodes
    hb = _scaled_h(b, lam, xi)
    ha = _scaled_h(a, lam, xi[None, :] + y[:, None])
    M = ha * hb[None, :]
    peak = np.abs(M).max()
    edge = max(np.abs(M[:, 0]).max(), np.abs(M[:, -1]).max())
    if peak > 0 and edge > _EDGE_TOL * peak:
        raise QuadratureDomainError(
            f"quadrature box [-{qgrid.L:g}, {qgrid.L:g}] too small (edge/peak = {edge / peak:.2e})"
        )
    M = M * qgrid.weights[None, :]
    pre = abs(lam) ** 0.5 / math.sqrt(2.0 * math.pi)
    if on_grid:
        E = np.exp(1j * lam * np.outer(x, xi))
        I = E @ M.T
        return pre * I * np.exp(0.5j * lam * np.outer(x, y))
    E = np.exp(1j * lam * x[:, None] * xi[None, :])
    I = np.sum(E * M, axis=1)
    return pre * I * np.exp(0.5j * lam * x * y)


def special_hermite(alpha, beta, lam: float = 1.0, z=None, quad_grid: Grid | None = None):
    """Phi^lam_{alpha,beta} by quadrature in xi.

    ``z`` is either complex points of shape (..., d) (returns an array) or a
    :class:`Grid`/:class:`PlaneField` on [-L, L]^{2d} (returns a PlaneField).
    The quadrature grid is chosen from the degrees and the extent of z unless
    given; a box on which the integrand has not decayed raises
    :class:`QuadratureDomainError`.
    """
    lam = _check_lam(lam)
    alpha = tuple(int(v) for v in np.atleast_1d(alpha))
    beta = tuple(int(v) for v in np.atleast_1d(beta))
    if len(alpha) != len(beta):
        raise DimensionMismatchError("alpha and beta have different lengths")
    d = len(alpha)
    if isinstance(z, PlaneField):
        z = z.grid
    if isinstance(z, Grid):
        if z.d != 2 * d:
            raise DimensionMismatchError(f"plane grid is {z.d}-D, expected {2 * d}")
        nodes = z.nodes
        out = np.ones((1,) * (2 * d), dtype=complex)
        for j in range(d):
            q = quad_grid or _quad_grid(alpha[j], beta[j], lam, z.L, z.L)
            t = _shf_1d(alpha[j], beta[j], lam, nodes, nodes, q, True)
            shape = [1] * (2 * d)
            shape[j] = z.n
            shape[d + j] = z.n
            out = out * t.reshape(shape)
        return PlaneField(z, np.broadcast_to(out, z.shape))
    pts = _as_points(z, d)
    flat = pts.reshape(-1, d)
    val = np.ones(len(flat), dtype=complex)
    for j in range(d):
        x, y = flat[:, j].real, flat[:, j].imag
        q = quad_grid or _quad_grid(
            alpha[j], beta[j], lam, float(np.abs(x).max()), float(np.abs(y).max())
        )
        val = val * _shf_1d(alpha[j], beta[j], lam, x, y, q, False)
    out = val.reshape(pts.shape[:-1])
    return complex(out) if out.ndim == 0 else out


def special_hermite_alpha0(alpha, z) -> np.ndarray:
    """Closed form of Phi_{alpha,0}:
    (2 pi)^{-d/2} (alpha!)^{-1/2} (i/sqrt 2)^{|alpha|} conj(z)^alpha e^{-|z|^2/4}."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=int))
    d = len(alpha)
    pts = _as_points(z, d)
    k = int(alpha.sum())
    logfac = float(np.sum(gammaln(alpha + 1)))
    pre = (2.0 * math.pi) ** (-d / 2) * math.exp(-0.5 * logfac) * (1j / math.sqrt(2.0)) ** k
    zbar = np.conj(pts)
    mono = np.prod(zbar ** alpha, axis=-1)
    out = pre * mono * np.exp(-0.25 * np.sum(np.abs(pts) ** 2, axis=-1))
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Laguerre functions
# ---------------------------------------------------------------------------


def laguerre(k: int, a: float, x) -> np.ndarray:
    """Generalized Laguerre polynomial L_k^a by the three-term recurrence
    (n+1) L_{n+1} = (2n + 1 + a - x) L_n - (n + a) L_{n-1}."""
    if k < 0:
        raise ValueError("Laguerre degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev
    cur = 1.0 + a - x
    for n in range(1, k):
        prev, cur = cur, ((2 * n + 1 + a - x) * cur - (n + a) * prev) / (n + 1)
    return cur


def laguerre_fn(k: int, d: int, lam: float, z) -> np.ndarray:
    """phi^lam_k(z) = L_k^{d-1}(|lam||z|^2/2) e^{-|lam||z|^2/4} for z of shape (..., d)."""
    lam = _check_lam(lam)
    pts = _as_points(z, d)
    r2 = np.sum(np.abs(pts) ** 2, axis=-1)
    s = abs(lam)
    out = laguerre(k, d - 1, 0.5 * s * r2) * np.exp(-0.25 * s * r2)
    return float(out) if out.ndim == 0 else out


def laguerre_field(k: int, lam: float, grid: Grid) -> PlaneField:
    d = grid.d // 2
    return PlaneField.from_function(grid, lambda z: laguerre_fn(k, d, lam, z))


# ---------------------------------------------------------------------------
# Twisted convolution
# ---------------------------------------------------------------------------


def _half_shift(values: np.ndarray, axis: int, h: float, delta: float, method: str) -> np.ndarray:
    """Values at nodes + delta*h along ``axis`` (delta in [0, 1))."""
    if delta == 0:
        return values
    if method == "bilinear":
        nxt = np.roll(values, -1, axis=axis)
        idx = [slice(None)] * values.ndim
        idx[axis] = -1
        nxt[tuple(idx)] = 0
        return (1 - delta) * values + delta * nxt
    n = values.shape[axis]
    pad_shape = list(values.shape)
    pad_shape[axis] = 2 * n
    pad = np.zeros(pad_shape, dtype=complex)
    sl = [slice(None)] * values.ndim
    sl[axis] = slice(0, n)
    pad[tuple(sl)] = values
    omega = 2.0 * math.pi * np.fft.fftfreq(2 * n, h)
    shape = [1] * values.ndim
    shape[axis] = 2 * n
    phase = np.exp(1j * omega * delta * h).reshape(shape)
    out = np.fft.ifft(np.fft.fft(pad, axis=axis) * phase, axis=axis)
    return out[tuple(sl)]


def _difference_lattice(F: PlaneField, method: str) -> np.ndarray:
    """F sampled at the differences of grid nodes, shape (2n-1,)*(2d), zero off the box.

    Entry m (per axis, m = -(n-1)..n-1 stored at m + n - 1) holds F(m h).
    """
    grid = F.grid
    n, h, D = grid.n, grid.spacing, grid.d
    c = 0.5 * (n - 1)
    delta = c - math.floor(c)
    vals = F.values
    for ax in range(D):
        vals = _half_shift(vals, ax, h, delta, method)
    # after the shift, node j sits at (j - floor(c)) h; keep points inside [-L, L]
    lo = int(math.floor(c))
    out = np.zeros((2 * n - 1,) * D, dtype=complex)
    m = np.arange(n) - lo
    keep = np.abs(m * h) <= grid.L * (1 + 1e-12)
    src = np.nonzero(keep)[0]
    dst = m[keep] + n - 1
    out[np.ix_(*([dst] * D))] = vals[np.ix_(*([src] * D))]
    return out


def twisted_convolve(
    F: PlaneField,
    G: PlaneField,
    lam: float = 1.0,
    interpolation: str = "spectral",
    allow_slow: bool = False,
) -> PlaneField:
    """(F *_lam G)(z) = int F(z - w) G(w) e^{i lam Im(z . conj(w))/2} dw on the grid of F.

    F(z - w) is needed at differences of grid nodes.  For odd n these are
    grid nodes; for even n they sit half a cell off, and F is moved there by
    band-limited (``"spectral"``) or ``"bilinear"`` interpolation.  Values off
    the box are zero.  In d = 1 the sum costs O(n^3 log n) through FFT
    convolutions along v; d >= 2 uses direct summation and needs
    ``allow_slow=True``.
    """
    lam = _check_lam(lam)
    if not isinstance(F, PlaneField) or not isinstance(G, PlaneField):
        raise TypeError("twisted convolution expects PlaneField inputs")
    if F.grid != G.grid:
        raise GridMismatchError("twisted convolution needs both fields on one grid")
    if interpolation not in ("spectral", "bilinear"):
        raise ValueError("interpolation must be 'spectral' or 'bilinear'")
    grid = F.grid
    d = F.cdim
    if not np.any(G.values) or not np.any(F.values):
        return PlaneField(grid, np.zeros(grid.shape))
    Fd = _difference_lattice(F, interpolation)
    if d == 1:
        return PlaneField(grid, _twisted_1d(Fd, G.values, grid, lam))
    if not allow_slow:
        raise ValueError("twisted convolution for d >= 2 is O(n^{4d}); pass allow_slow=True")
    return PlaneField(grid, _twisted_direct(Fd, G.values, grid, lam, d))


def _twisted_1d(Fd: np.ndarray, Gv: np.ndarray, grid: Grid, lam: float) -> np.ndarray:
    n, h = grid.n, grid.spacing
    t = grid.nodes
    Lf = 1 << int(math.ceil(math.log2(3 * n - 2)))
    Fhat = np.fft.fft(Fd, Lf, axis=1)  # rows: u-offset, transform along v-offset
    rows = (np.arange(n)[:, None] - np.arange(n)[None, :]) + n - 1  # [a, b] -> a - b
    twist_v = np.exp(-0.5j * lam * np.outer(t, t))  # [a, e] = e^{-i lam x_a v_e / 2}
    twist_u = np.exp(0.5j * lam * np.outer(t, t))  # [b, c] = e^{i lam u_b y_c / 2}
    out = np.empty((n, n), dtype=complex)
    for a in range(n):
        A = Gv * twist_v[a][None, :]  # [b, e]
        conv = np.fft.ifft(Fhat[rows[a]] * np.fft.fft(A, Lf, axis=1), axis=1)
        T = conv[:, n - 1 : 2 * n - 1]  # [b, c]
        out[a] = np.sum(twist_u * T, axis=0)
    return out * h * h


def _twisted_direct(Fd, Gv, grid, lam, d):
    n, h = grid.n, grid.spacing
    nodes = grid.mesh().reshape(-1, 2 * d)
    idx = np.array(np.unravel_index(np.arange(grid.size), grid.shape)).T
    w = h ** (2 * d)
    g = Gv.ravel()
    out = np.empty(grid.size, dtype=complex)
    for k in range(grid.size):
        z = nodes[k]
        diff = idx[k][None, :] - idx + n - 1
        fz = Fd[tuple(diff.T)]
        im = nodes[:, :d] @ z[d:] - nodes[:, d:] @ z[:d]
        out[k] = np.sum(fz * g * np.exp(0.5j * lam * im))
    return (out * w).reshape(grid.shape)


def special_hermite_project(
    F: PlaneField, k: int, lam: float = 1.0, interpolation: str = "spectral", allow_slow=False
) -> PlaneField:
    """(2 pi)^{-d} |lam|^d F *_lam phi^lam_k, the k-th term of the compact expansion."""
    lam = _check_lam(lam)
    d = F.cdim
    phi = laguerre_field(k, lam, F.grid)
    out = twisted_convolve(F, phi, lam, interpolation, allow_slow)
    return out * ((2.0 * math.pi) ** (-d) * abs(lam) ** d)
