"""Regularized least-squares solvers for the FE coefficient problem.

A solver is registered under a string id and, given a design matrix,
returns a linear operator ``L`` mapping data vectors to coefficient
vectors. ``truncated_svd`` is the reference; ``pivoted_qr`` is a second
implementation used for cross-solver comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np
import scipy.linalg as sla

from .core import DEFAULT_EPSILON, DesignMatrix, TrigSeries
from .errors import ConfigurationError, NumericalError, ShapeError


@dataclass(frozen=True)
class SolverSpec:
    method: str = "truncated_svd"
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ConfigurationError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")

    @property
    def id(self) -> str:
        return self.method


@dataclass(frozen=True)
class SolveReport:
    coefficients: TrigSeries
    rank_kept: int
    sigma_max: float
    sigma_min_kept: float
    residual_norm: float


def _svd(a, compute_uv=True):
    # gesdd occasionally fails on these matrices; gesvd is slower but robust
    try:
        return sla.svd(a, full_matrices=False, compute_uv=compute_uv,
                       lapack_driver="gesdd", check_finite=False)
    except np.linalg.LinAlgError:
        pass
    try:
        return sla.svd(a, full_matrices=False, compute_uv=compute_uv,
                       lapack_driver="gesvd", check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge for a {a.shape} matrix") from exc


def singular_values(A) -> np.ndarray:
    """Full singular spectrum in descending order."""
    return _svd(np.asarray(A, dtype=complex), compute_uv=False)


class TruncatedSVD:
    """The operator b -> V Sigma_eps^+ U^* b.

    Singular values are kept when strictly greater than ``epsilon``
    (an absolute threshold). The factors are applied right to left; forming
    the pseudoinverse explicitly loses the accuracy of ``L(A a)``.
    """

    def __init__(self, A, epsilon: float = DEFAULT_EPSILON):
        a = np.asarray(A, dtype=complex)
        U, s, Vh = _svd(a)
        keep = s > epsilon
        self.shape = a.shape
        self.epsilon = epsilon
        self.singular_values = s
        self.rank = int(keep.sum())
        self.U = U[:, keep]
        self.s = s[keep]
        self.V = Vh[keep].conj().T

    @property
    def sigma_max(self) -> float:
        return float(self.singular_values[0]) if self.singular_values.size else 0.0

    @property
    def sigma_min_kept(self) -> float:
        return float(self.s[-1]) if self.rank else float("nan")

    def apply(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=complex)
        if b.shape[0] != self.shape[0]:
            raise ShapeError(f"data has {b.shape[0]} rows, matrix has {self.shape[0]}")
        w = self.U.conj().T @ b
        w = w / (self.s[:, None] if w.ndim > 1 else self.s)
        return self.V @ w

    def matrix(self) -> np.ndarray:
        """Explicit (2N+1) x rows operator matrix; columns are L(e_m)."""
        return (self.V / self.s) @ self.U.conj().T


class PivotedQR:
    """Basic solution from a column-pivoted QR factorization.

    Columns whose |R_kk| does not exceed ``epsilon`` are dropped; the
    corresponding coefficients are set to zero.
    """

    def __init__(self, A, epsilon: float = DEFAULT_EPSILON):
        a = np.asarray(A, dtype=complex)
        Q, R, piv = sla.qr(a, mode="economic", pivoting=True, check_finite=False)
        d = np.abs(np.diag(R))
        r = int(np.sum(d > epsilon))
        self.shape = a.shape
        self.epsilon = epsilon
        self.rank = r
        self.Q = Q[:, :r]
        self.R = R[:r, :r]
        self.perm = piv[:r]
        self._diag = d

    @property
    def sigma_max(self) -> float:
        return float(self._diag[0]) if self._diag.size else 0.0

    @property
    def sigma_min_kept(self) -> float:
        return float(self._diag[self.rank - 1]) if self.rank else float("nan")

    def apply(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=complex)
        if b.shape[0] != self.shape[0]:
            raise ShapeError(f"data has {b.shape[0]} rows, matrix has {self.shape[0]}")
        y = sla.solve_triangular(self.R, self.Q.conj().T @ b, check_finite=False)
        x = np.zeros((self.shape[1],) + b.shape[1:], dtype=complex)
        x[self.perm] = y
        return x

    def matrix(self) -> np.ndarray:
        return self.apply(np.eye(self.shape[0], dtype=complex))


_REGISTRY: Dict[str, Callable] = {
    "truncated_svd": TruncatedSVD,
    "pivoted_qr": PivotedQR,
}


def register_solver(name: str, factory: Callable) -> None:
    """Register ``factory(A, epsilon)`` returning an object with ``apply``,
    ``matrix``, ``rank``, ``sigma_max`` and ``sigma_min_kept``."""
    _REGISTRY[name] = factory


def available_solvers():
    return sorted(_REGISTRY)


def factorize(spec: SolverSpec, A):
    """Prepare the solver operator for matrix ``A`` (reusable across data)."""
    try:
        factory = _REGISTRY[spec.method]
    except KeyError:
        raise ConfigurationError(
            f"unknown solver {spec.method!r}; registered: {', '.join(available_solvers())}") from None
    return factory(np.asarray(A, dtype=complex), spec.epsilon)


def _report(op, A, b, T) -> SolveReport:
    a = np.asarray(A, dtype=complex)
    c = op.apply(b)
    return SolveReport(TrigSeries(T, c), op.rank, op.sigma_max, op.sigma_min_kept,
                       float(np.linalg.norm(a @ c - b)))


def _period(A, T):
    if T is None:
        T = A.config.T if isinstance(A, DesignMatrix) else None
    if T is None:
        raise ConfigurationError("T is required when A is a bare array")
    return T


def svd_truncated_solve(A, b, epsilon: float = DEFAULT_EPSILON, T=None) -> SolveReport:
    """Least-squares coefficients via the epsilon-truncated SVD of ``A``."""
    if not 0 < epsilon < 1:
        raise ConfigurationError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    b = np.asarray(b, dtype=complex)
    if b.shape[0] != np.shape(A)[0]:
        raise ShapeError(f"data has {b.shape[0]} rows, matrix has {np.shape(A)[0]}")
    return _report(TruncatedSVD(A, epsilon), A, b, _period(A, T))


def solve(spec: SolverSpec, A, b, T=None) -> SolveReport:
    """Dispatch to the solver registered under ``spec.method``."""
    op = factorize(spec, A)
    return _report(op, A, np.asarray(b, dtype=complex), _period(A, T))
