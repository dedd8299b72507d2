"""Stability diagnostics of the numerical FE operator.

* condition number: worst-case sup-norm response to a unit perturbation of
  one sample value, max_k sum_m |R L(e_m)(x_k)|;
* numerical defect constant: how far the computed FE operator is from a
  projection onto the FE space, max_k sum_n |W(e_n)(x_k)|;
* their L2/l2 analogues for Fourier data.

Sup norms are taken over the grid x_k = T(k-1)/K - 1 inside [-1, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import roots_legendre

from .core import (
    FEConfig,
    build_design_matrix,
    grid_abs_rowsum_max,
    grid_nodes,
    grid_size,
    grid_values,
)
from .errors import ConfigurationError, NumericalError, ParameterError
from .sampling import SampleSet, build_fourier_design_matrix, equispaced_nodes
from .solvers import SolverSpec, factorize

DEFAULT_K = 2**15


@dataclass(frozen=True)
class EvalGrid:
    K: int
    T: float

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ParameterError(f"K must be a positive integer, got {self.K!r}")

    @property
    def size(self) -> int:
        return grid_size(self.K, self.T)

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.K, self.T)


@dataclass(frozen=True)
class DiagnosticsRecord:
    kappa: float
    lam: float
    mu: float
    config: FEConfig
    solver: SolverSpec = field(default_factory=SolverSpec)
    K: int = DEFAULT_K
    norm: str = "uniform"

    FIELDS = ("T", "N", "M", "eta", "epsilon", "solver_id", "K", "kappa", "lambda", "mu", "norm")

    def row(self) -> dict:
        c = self.config
        return {"T": c.T, "N": c.N, "M": c.M, "eta": c.eta, "epsilon": self.solver.epsilon,
                "solver_id": self.solver.id, "K": self.K, "kappa": self.kappa,
                "lambda": self.lam, "mu": self.mu, "norm": self.norm}


def _check_grid(config: FEConfig, grid: EvalGrid):
    if grid.T != config.T:
        raise ConfigurationError(f"grid built for T={grid.T} but config has T={config.T}")


def _pointwise(config, nodes):
    if nodes is None:
        nodes = equispaced_nodes(config.M)
    if isinstance(nodes, SampleSet) and not nodes.pointwise:
        raise ParameterError("Fourier data: use condition_number_l2 / defect_constant_l2")
    return build_design_matrix(config, nodes)


def response_matrix(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None) -> np.ndarray:
    """Coefficients of the FE response to each unit sample value.

    Column m holds L(e_m / sqrt(M)), i.e. the coefficients produced when
    sample value f(x_m) is 1 and every other sample is 0.
    """
    solver = solver or SolverSpec(epsilon=config.epsilon)
    A = _pointwise(config, nodes)
    op = factorize(solver, A)
    return op.matrix() / math.sqrt(config.M)


def condition_number(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None,
                     grid: Optional[EvalGrid] = None) -> float:
    """Grid approximation to the absolute sup-norm condition number.

    Measured per unit perturbation of a sample value: with the 1/sqrt(M)
    data scaling this is max_k sum_m |R L(e_m)(x_k)| / sqrt(M).
    """
    grid = grid or EvalGrid(DEFAULT_K, config.T)
    _check_grid(config, grid)
    value, _ = grid_abs_rowsum_max(response_matrix(config, nodes, solver), config.T, grid.K)
    return value


def worst_case_data(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None,
                    grid: Optional[EvalGrid] = None):
    """Grid point x* attaining the condition number and the unimodular sample
    vector b (b_m = conj(sign of the response at x*)) that attains it there."""
    grid = grid or EvalGrid(DEFAULT_K, config.T)
    _check_grid(config, grid)
    R = response_matrix(config, nodes, solver)
    _, k = grid_abs_rowsum_max(R, config.T, grid.K)
    x = grid.nodes[k]
    vals = np.exp(1j * np.pi * x / config.T * np.arange(-config.N, config.N + 1)) @ R
    b = np.ones_like(vals)
    nz = vals != 0
    b[nz] = np.conj(vals[nz]) / np.abs(vals[nz])
    return x, b


def defect_coefficients(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None) -> np.ndarray:
    """Columns a - L(S R a) for a = e_n, n = -N..N."""
    solver = solver or SolverSpec(epsilon=config.epsilon)
    A = _pointwise(config, nodes)
    op = factorize(solver, A)
    return np.eye(2 * config.N + 1, dtype=complex) - op.apply(np.asarray(A))


def defect_constant(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None,
                    grid: Optional[EvalGrid] = None) -> float:
    """Grid approximation to the numerical defect constant."""
    grid = grid or EvalGrid(DEFAULT_K, config.T)
    _check_grid(config, grid)
    value, _ = grid_abs_rowsum_max(defect_coefficients(config, nodes, solver), config.T, grid.K)
    return value


def mu_ratio(kappa: float, lam: float, M: int) -> float:
    """(lambda / kappa) (log M / M), natural logarithm."""
    if kappa == 0:
        raise ParameterError("kappa = 0: degenerate instance")
    return (lam / kappa) * (math.log(M) / M)


def diagnose(config: FEConfig, nodes=None, solver: Optional[SolverSpec] = None,
             grid: Optional[EvalGrid] = None) -> DiagnosticsRecord:
    """Condition number, defect constant and mu from a single factorization.

    Fourier-kind sample sets are routed to the L2/l2 variants.
    """
    solver = solver or SolverSpec(epsilon=config.epsilon)
    grid = grid or EvalGrid(DEFAULT_K, config.T)
    _check_grid(config, grid)
    if isinstance(nodes, SampleSet) and nodes.kind == "fourier":
        B = build_fourier_design_matrix(config)
        op = factorize(solver, B)
        kappa = _l2_norm_of(op.matrix(), config)
        lam = _l2_norm_of(np.eye(2 * config.N + 1) - op.apply(np.asarray(B)), config)
        return DiagnosticsRecord(kappa, lam, mu_ratio(kappa, lam, config.M), config, solver, grid.K, "l2")
    A = _pointwise(config, nodes)
    op = factorize(solver, A)
    kappa, _ = grid_abs_rowsum_max(op.matrix() / math.sqrt(config.M), config.T, grid.K)
    W = np.eye(2 * config.N + 1, dtype=complex) - op.apply(np.asarray(A))
    lam, _ = grid_abs_rowsum_max(W, config.T, grid.K)
    return DiagnosticsRecord(kappa, lam, mu_ratio(kappa, lam, config.M), config, solver, grid.K)


# -- L2 / l2 variants for Fourier data ------------------------------------

def gram_matrix(T: float, N: int) -> np.ndarray:
    """G[n, n'] = int_{-1}^{1} phi_n conj(phi_n') dx = 2 sinc(pi (n - n') / T)."""
    n = np.arange(-N, N + 1)
    return 2.0 * np.sinc((n[:, None] - n[None, :]) / T)


def gram_sqrt(T: float, N: int, tol: float = 1e-10) -> np.ndarray:
    """Hermitian square root Q of the Gram matrix (Q^* Q = G).

    Eigenvalues in (-tol, 0) are rounding noise and are clamped to zero.
    Accurate only to about sqrt(machine epsilon) on the near-null space of
    G; the L2 diagnostics use :func:`gram_factor` instead.
    """
    w, V = np.linalg.eigh(gram_matrix(T, N))
    if w.min() < -tol:
        raise NumericalError(f"Gram matrix has eigenvalue {w.min():.3e} < -{tol}")
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T


def gram_factor(T: float, N: int) -> np.ndarray:
    """Tall factor Q with Q^* Q = G: basis values at Gauss-Legendre nodes
    times the square roots of the weights.

    The rule integrates |sum a_n phi_n|^2 (bandwidth 2 pi N / T) to rounding
    accuracy. Unlike the eigenvalue square root, Q a keeps full absolute
    accuracy for coefficient vectors a whose series is tiny on [-1, 1]; the
    square root of G loses everything below sqrt(machine epsilon) there.
    """
    n = int(math.ceil(1.1 * math.pi * N / T)) + 40
    x, w = roots_legendre(n)
    return np.sqrt(w)[:, None] * np.exp(1j * (np.pi / T) * np.multiply.outer(x, np.arange(-N, N + 1)))


def _l2_norm_of(coeff_op: np.ndarray, config: FEConfig) -> float:
    Q = gram_factor(config.T, config.N)
    return float(np.linalg.norm(Q @ coeff_op, 2))


def _fourier_op(config, A, solver):
    if A is None:
        A = build_fourier_design_matrix(config)
    if getattr(A, "data_kind", "fourier") != "fourier":
        raise ParameterError("L2 diagnostics need a Fourier-kind design matrix")
    solver = solver or SolverSpec(epsilon=config.epsilon)
    return A, factorize(solver, A)


def condition_number_l2(config: FEConfig, A=None, solver: Optional[SolverSpec] = None,
                        grid: Optional[EvalGrid] = None) -> float:
    """l2 -> L2(-1, 1) norm of the FE operator for Fourier data."""
    if grid is not None:
        _check_grid(config, grid)
    A, op = _fourier_op(config, A, solver)
    return _l2_norm_of(op.matrix(), config)


def defect_constant_l2(config: FEConfig, A=None, solver: Optional[SolverSpec] = None,
                       grid: Optional[EvalGrid] = None) -> float:
    """max over unit-l2 a of ||R(a - L(B a))||_{L2(-1,1)}."""
    if grid is not None:
        _check_grid(config, grid)
    A, op = _fourier_op(config, A, solver)
    W = np.eye(2 * config.N + 1, dtype=complex) - op.apply(np.asarray(A))
    return _l2_norm_of(W, config)


def series_on_grid(coeffs, T: float, grid: EvalGrid) -> np.ndarray:
    return grid_values(coeffs, T, grid.K)
