"""Core objects: problem configuration, trigonometric series on [-T, T],
the least-squares design matrix, the sampling operator and the map m(x).

Coefficients are always stored in the order n = -N, ..., N and rows of a
design matrix in the order of the nodes (m = -M, ..., M for symmetric sets).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DataError, DomainError, ParameterError, ShapeError

DEFAULT_EPSILON = 1e-13

# rows per chunk when summing a series directly
_CHUNK = 4096


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FEConfig:
    """One Fourier-extension problem instance.

    Parameters
    ----------
    T : float
        Extension parameter; the series is periodic on [-T, T]. Must exceed 1.
    N : int
        Number of modes on each side of zero (2N+1 coefficients).
    M : int
        Data half-count (2M+1 equispaced samples).
    epsilon : float
        Truncation tolerance of the SVD solver.
    """

    T: float
    N: int
    M: int
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 1):
            raise ParameterError(f"T must be > 1, got {self.T!r}")
        if int(self.N) != self.N or self.N < 0:
            raise ParameterError(f"N must be a nonnegative integer, got {self.N!r}")
        if int(self.M) != self.M or self.M < 1:
            raise ParameterError(f"M must be a positive integer, got {self.M!r}")
        if self.N > self.M:
            raise ParameterError(f"N={self.N} exceeds M={self.M} (eta < 1)")
        if not 0 < self.epsilon < 1:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "T", float(self.T))

    @property
    def eta(self) -> float:
        """Oversampling ratio M/N (inf when N = 0)."""
        return self.M / self.N if self.N else math.inf

    @classmethod
    def from_eta(cls, T, eta, M, epsilon=DEFAULT_EPSILON):
        """Config with N = floor(M/eta)."""
        return cls(T, int(math.floor(M / eta + 1e-12)), M, epsilon)


def mode_indices(N: int) -> np.ndarray:
    return np.arange(-N, N + 1)


@dataclass(frozen=True)
class TrigSeries:
    """Fourier series sum_{|n|<=N} a_n exp(i n pi x / T)."""

    T: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 == 0:
            raise ShapeError(f"coefficient vector must have odd length, got shape {c.shape}")
        if not self.T > 1:
            raise ParameterError(f"T must be > 1, got {self.T!r}")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def N(self) -> int:
        return (self.coeffs.size - 1) // 2

    def __call__(self, x):
        return evaluate_series(self, x)

    def on_grid(self, K: int) -> np.ndarray:
        """Values at x_k = T(k-1)/K - 1, k = 1..K_T (FFT path)."""
        return grid_values(self.coeffs, self.T, K)


def basis_matrix(T: float, N: int, x) -> np.ndarray:
    """Matrix of exp(i n pi x_j / T), rows over x, columns n = -N..N."""
    x = np.asarray(x, dtype=float)
    return np.exp(1j * (np.pi / T) * np.multiply.outer(x, mode_indices(N)))


def _direct_sum(coeffs: np.ndarray, T: float, x: np.ndarray) -> np.ndarray:
    # coeffs may be (2N+1,) or (2N+1, ncols)
    N = (coeffs.shape[0] - 1) // 2
    out = np.empty((x.size,) + coeffs.shape[1:], dtype=complex)
    for i in range(0, x.size, _CHUNK):
        out[i:i + _CHUNK] = basis_matrix(T, N, x[i:i + _CHUNK]) @ coeffs
    return out


def evaluate_series(s: TrigSeries, points) -> np.ndarray:
    """Evaluate a series at arbitrary real points by direct summation.

    Points outside [-1, 1] are allowed; the series is 2T-periodic.
    """
    x = np.asarray(points, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("evaluation points must be finite")
    shape = x.shape
    return _direct_sum(s.coeffs, s.T, x.ravel()).reshape(shape)


def grid_size(K: int, T: float) -> int:
    """K_T = floor(2K/T + 1), the number of grid nodes inside [-1, 1]."""
    return int(math.floor(2 * K / T + 1 + 1e-12))


def grid_nodes(K: int, T: float) -> np.ndarray:
    return T * np.arange(grid_size(K, T)) / K - 1.0


def grid_values(coeffs, T: float, K: int, block: int = 256) -> np.ndarray:
    """Evaluate one or many series on the grid x_k = T(k-1)/K - 1 by FFT.

    With x_k + 1 = T j / K the phases become exp(2 pi i n j / 2K), so a
    length-2K inverse FFT of the pre-rotated coefficients gives every grid
    value at once. Modes are folded modulo 2K, which is exact for integer j.

    ``coeffs`` is (2N+1,) or (2N+1, ncols); the result is (K_T,) or
    (K_T, ncols).
    """
    c = np.asarray(coeffs, dtype=complex)
    single = c.ndim == 1
    if single:
        c = c[:, None]
    N = (c.shape[0] - 1) // 2
    n = mode_indices(N)
    P = 2 * K
    KT = grid_size(K, T)
    idx = n % P
    rot = np.exp(-1j * np.pi * n / T)[:, None]
    out = np.empty((KT, c.shape[1]), dtype=complex)
    for j0 in range(0, c.shape[1], block):
        blk = c[:, j0:j0 + block] * rot
        y = np.zeros((P, blk.shape[1]), dtype=complex)
        if 2 * N + 1 > P:
            np.add.at(y, idx, blk)
        else:
            y[idx] = blk
        out[:, j0:j0 + block] = np.fft.ifft(y, axis=0)[:KT] * P
    return out[:, 0] if single else out


def grid_abs_rowsum_max(coeffs, T: float, K: int, block: int = 256) -> tuple[float, int]:
    """max_k sum_j |series_j(x_k)| over the K-grid, plus the maximizing k.

    Accumulates block by block so the full (K_T, ncols) array never exists.
    """
    c = np.asarray(coeffs, dtype=complex)
    acc = np.zeros(grid_size(K, T))
    for j0 in range(0, c.shape[1], block):
        acc += np.abs(grid_values(c[:, j0:j0 + block], T, K, block)).sum(axis=1)
    k = int(np.argmax(acc))
    return float(acc[k]), k


@dataclass(frozen=True)
class DesignMatrix:
    """Dense least-squares matrix of an FE problem.

    ``data_kind`` is ``"pointwise"`` (entries phi_n(x_m)/sqrt(M)) or
    ``"fourier"`` (entries are the Fourier coefficients of phi_n).
    """

    entries: np.ndarray = field(repr=False)
    config: FEConfig
    data_kind: str = "pointwise"
    nodes: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(np.asarray(self.entries, dtype=complex)))
        if self.nodes is not None:
            object.__setattr__(self, "nodes", _frozen(np.asarray(self.nodes, dtype=float)))
        if self.entries.shape[1] != 2 * self.config.N + 1:
            raise ShapeError(
                f"design matrix has {self.entries.shape[1]} columns, expected {2 * self.config.N + 1}")

    @property
    def shape(self):
        return self.entries.shape

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def _check_nodes(nodes, expected: int) -> np.ndarray:
    x = np.asarray(nodes, dtype=float)
    if x.ndim != 1 or x.size != expected:
        raise ShapeError(f"expected {expected} nodes, got shape {x.shape}")
    bad = np.flatnonzero(~(np.abs(x) <= 1.0))
    if bad.size:
        raise DomainError(f"node x[{bad[0]}] = {x[bad[0]]!r} lies outside [-1, 1]")
    return x


def build_design_matrix(config: FEConfig, nodes) -> DesignMatrix:
    """Design matrix with entries phi_n(x_m)/sqrt(M).

    ``nodes`` is an array of 2M+1 points in [-1, 1] or a
    :class:`~fourier_extension.sampling.SampleSet` (mapped Chebyshev sets
    carry 2M+2 points).
    """
    expected = 2 * config.M + 1
    if hasattr(nodes, "kind"):
        if nodes.kind == "fourier":
            raise ParameterError("use build_fourier_design_matrix for Fourier data")
        if nodes.kind == "mapped_chebyshev":
            expected = 2 * config.M + 2
        nodes = nodes.nodes
    x = _check_nodes(nodes, expected)
    A = basis_matrix(config.T, config.N, x) / math.sqrt(config.M)
    return DesignMatrix(A, config, "pointwise", x)


def sample_function(f: Callable, nodes, M: Optional[int] = None) -> np.ndarray:
    """Sampling operator: f(x_m)/sqrt(M) for every node.

    ``M`` defaults to (len(nodes) - 1) // 2.
    """
    if hasattr(nodes, "kind"):
        nodes = nodes.nodes
    x = np.asarray(nodes, dtype=float)
    bad = np.flatnonzero(~(np.abs(x) <= 1.0))
    if bad.size:
        raise DomainError(f"node x[{bad[0]}] = {x[bad[0]]!r} lies outside [-1, 1]")
    if M is None:
        M = (x.size - 1) // 2
    vals = np.asarray(f(x), dtype=complex)
    if vals.shape != x.shape:
        vals = np.broadcast_to(vals, x.shape).astype(complex)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise DataError(f"f returned {vals[bad[0]]!r} at node x[{bad[0]}] = {x[bad[0]]!r}")
    return vals / math.sqrt(M)


@dataclass(frozen=True)
class ExtensionMap:
    """The map m(x) = 2 (cos(pi x/T) - cos(pi/T)) / (1 - cos(pi/T)) - 1.

    It takes [0, 1] onto [-1, 1] and is strictly decreasing there.
    """

    T: float

    def __post_init__(self):
        if not self.T > 1:
            raise ParameterError(f"T must be > 1, got {self.T!r}")

    def forward(self, x):
        return map_forward(self, x)

    def inverse(self, z):
        return map_inverse(self, z)


def map_forward(emap: ExtensionMap, x):
    x = np.asarray(x, dtype=float)
    if np.any(~((x >= 0) & (x <= 1))):
        raise DomainError("map_forward is defined on [0, 1]")
    c = math.cos(math.pi / emap.T)
    out = 2 * (np.cos(np.pi * x / emap.T) - c) / (1 - c) - 1
    return out[()] if out.ndim == 0 else out


def map_inverse(emap: ExtensionMap, z, clamp_tol: float = 1e-14):
    """Closed-form inverse (T/pi) arccos(cos(pi/T) + (z+1)(1-cos(pi/T))/2)."""
    z = np.asarray(z, dtype=float)
    c = math.cos(math.pi / emap.T)
    arg = c + (z + 1) * (1 - c) / 2
    if np.any(~np.isfinite(arg)) or np.any(np.abs(arg) > 1 + clamp_tol):
        raise DomainError("map_inverse argument outside [-1, 1]")
    out = emap.T / math.pi * np.arccos(np.clip(arg, -1.0, 1.0))
    return out[()] if out.ndim == 0 else out


def max_geometric_rate(T: float) -> float:
    """cot^2(pi/(4T)): the fastest geometric rate attainable in the FE space."""
    if not T > 1:
        raise DomainError(f"T must be > 1, got {T!r}")
    return 1.0 / math.tan(math.pi / (4 * T)) ** 2
