"""Parameter studies: stability-budgeted mode counts, saturation,
regressions, best-approximation surrogates and resolution power."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    FEConfig,
    TrigSeries,
    build_design_matrix,
    grid_nodes,
    grid_values,
    sample_function,
)
from .diagnostics import DEFAULT_K, EvalGrid, condition_number, condition_number_l2
from .errors import DataError, InsufficientDataError, NotResolvedError, ParameterError
from .functions import oscillation, test_function  # noqa: F401  (re-exported)
from .sampling import (
    DEFAULT_JITTER,
    DEFAULT_LOG_C,
    SampleSet,
    build_fourier_design_matrix,
    fourier_data,
    make_sample_set,
)
from .solvers import SolverSpec, TruncatedSVD, factorize

DEFAULT_M_SWEEP = tuple(range(100, 1001, 100))
DEFAULT_FIT_MIN_M = 300


# -- job scheduling --------------------------------------------------------

def run_jobs(fn: Callable, args: Sequence[tuple], jobs: int = 1) -> list:
    """Apply ``fn(*a)`` to every tuple in ``args``; results keep input order."""
    if jobs <= 1 or len(args) <= 1:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*args)))


# -- data helpers ----------------------------------------------------------

@dataclass(frozen=True)
class DataSpec:
    """How to build the data model for a given M (and T)."""

    kind: str = "equispaced"
    delta_jit: float = DEFAULT_JITTER
    log_c: float = DEFAULT_LOG_C

    def sample_set(self, M: int, T: float) -> SampleSet:
        return make_sample_set(self.kind, M, T=T, delta_jit=self.delta_jit, log_c=self.log_c)

    @property
    def normalized_kind(self) -> str:
        k = self.kind.replace("-", "_")
        return "mapped_chebyshev" if k == "mapped_cheb" else k


def _as_data(data) -> DataSpec:
    if data is None:
        return DataSpec()
    if isinstance(data, DataSpec):
        return data
    if isinstance(data, str):
        return DataSpec(data)
    raise ParameterError(f"cannot interpret data model {data!r}")


def stability_measure(T: float, N: int, M: int, solver: SolverSpec, data=None,
                      grid: Optional[EvalGrid] = None) -> float:
    """Condition number appropriate to the data model (sup norm, or L2 for Fourier data)."""
    data = _as_data(data)
    cfg = FEConfig(T, N, M, solver.epsilon)
    if data.normalized_kind == "fourier":
        return condition_number_l2(cfg, None, solver)
    return condition_number(cfg, data.sample_set(M, T), solver, grid or EvalGrid(DEFAULT_K, T))


# -- Theta -----------------------------------------------------------------

@dataclass(frozen=True)
class ThetaPoint:
    M: int
    value: int
    degenerate: bool = False
    evaluations: int = 0

    @property
    def saturated(self) -> bool:
        return self.value == self.M


def theta_point(T: float, M: int, kappa_star: float, solver: Optional[SolverSpec] = None,
                data=None, grid: Optional[EvalGrid] = None, guess: Optional[float] = None,
                measure: Optional[Callable[[int], float]] = None) -> ThetaPoint:
    """Largest N in [0, M] whose condition number is at most kappa_star * log M.

    The search starts at ``guess * M`` (default M/2), brackets outward with
    doubling steps, then bisects. The boundary pair (N*, N*+1) is checked
    afterwards; if it contradicts monotonicity the answer is recomputed by a
    descending scan from M. ``measure`` overrides the condition number
    (N -> kappa), mainly for testing.
    """
    if not kappa_star > 1:
        raise ParameterError(f"kappa_star must exceed 1, got {kappa_star}")
    if M < 2:
        raise ParameterError(f"M must be >= 2, got {M}")
    solver = solver or SolverSpec()
    grid = grid or EvalGrid(DEFAULT_K, T)
    if measure is None:
        def measure(N):
            return stability_measure(T, N, M, solver, data, grid)
    limit = kappa_star * math.log(M)
    cache: dict = {}

    def ok(N):
        if N not in cache:
            cache[N] = measure(N) <= limit
        return cache[N]

    g = M // 2 if guess is None else min(M, max(0, int(round(guess * M))))
    if ok(g):
        lo, step = g, 1
        while lo < M:
            hi = min(M, lo + step)
            if not ok(hi):
                break
            lo, step = hi, 2 * step
        else:
            return ThetaPoint(M, M, False, len(cache))
    else:
        hi, step = g, 1
        while True:
            if hi == 0:
                return ThetaPoint(M, 0, True, len(cache))
            lo = max(0, hi - step)
            if ok(lo):
                break
            hi, step = lo, 2 * step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    if not (ok(lo) and (lo == M or not ok(lo + 1))):
        for N in range(M, -1, -1):
            if ok(N):
                return ThetaPoint(M, N, False, len(cache))
        return ThetaPoint(M, 0, True, len(cache))
    return ThetaPoint(M, lo, False, len(cache))


def theta(T: float, M: int, kappa_star: float, solver: Optional[SolverSpec] = None,
          data=None, grid: Optional[EvalGrid] = None, guess: Optional[float] = None) -> int:
    return theta_point(T, M, kappa_star, solver, data, grid, guess).value


@dataclass(frozen=True)
class ThetaCurve:
    T: float
    kappa_star: float
    epsilon: float
    solver_id: str
    points: tuple  # of ThetaPoint
    data_kind: str = "equispaced"

    @property
    def scaling(self) -> str:
        """Growth proxy S(M) used when normalizing the curve."""
        return "M/logM" if self.data_kind == "logarithmic" else "M"

    def scale(self, M: int) -> float:
        return M / math.log(M) if self.scaling == "M/logM" else float(M)

    @property
    def Ms(self) -> np.ndarray:
        return np.array([p.M for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])


def theta_curve(T: float, Ms: Sequence[int], kappa_star: float, solver: Optional[SolverSpec] = None,
                data=None, grid_K: int = DEFAULT_K, guess: Optional[float] = None) -> ThetaCurve:
    """Theta over a sweep of M; each search starts from the previous ratio."""
    solver = solver or SolverSpec()
    data = _as_data(data)
    grid = EvalGrid(grid_K, T)
    pts = []
    for M in sorted(Ms):
        p = theta_point(T, M, kappa_star, solver, data, grid, guess)
        pts.append(p)
        guess = p.value / M
    return ThetaCurve(T, kappa_star, solver.epsilon, solver.id, tuple(pts), data.normalized_kind)


# -- regressions -----------------------------------------------------------

@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    fit_range: tuple
    residual_rms: float
    n_points: int = 0


def linear_fit(x, y, fit_range=(-math.inf, math.inf)) -> RegressionFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sel = (x >= fit_range[0]) & (x <= fit_range[1])
    if sel.sum() < 4:
        raise InsufficientDataError(f"need >= 4 points in {fit_range}, have {int(sel.sum())}")
    X = np.column_stack([x[sel], np.ones(sel.sum())])
    coef, *_ = np.linalg.lstsq(X, y[sel], rcond=None)
    res = y[sel] - X @ coef
    return RegressionFit(float(coef[0]), float(coef[1]), tuple(fit_range),
                         float(np.sqrt(np.mean(res**2))), int(sel.sum()))


def fit_nu(curve: ThetaCurve, fit_range=(DEFAULT_FIT_MIN_M, math.inf)) -> RegressionFit:
    """Ordinary least-squares slope of Theta against M."""
    return linear_fit(curve.Ms, curve.values, fit_range)


def fit_tau(nu_by_T, saturated_Ts=()) -> float:
    """Slope of the line nu = tau * T through the origin, over non-saturated T."""
    sat = {float(t) for t in saturated_Ts}
    pts = [(float(t), float(nu)) for t, nu in nu_by_T if float(t) not in sat]
    if not pts:
        raise InsufficientDataError("every T is saturated")
    if len(pts) < 3:
        raise InsufficientDataError(f"need >= 3 non-saturated points, have {len(pts)}")
    t, nu = np.array(pts).T
    return float(t @ nu / (t @ t))


def saturation_check(T: float, kappa_star: float, M: int = 500, epsilon: float = 1e-13,
                     grid: Optional[EvalGrid] = None, solver: Optional[SolverSpec] = None) -> bool:
    """True when the eta = 1 condition number stays under the budget:
    kappa(T; N=M, M) / log M < kappa_star."""
    if M < 100:
        raise ParameterError(f"saturation is judged at M >= 100, got {M}")
    solver = solver or SolverSpec(epsilon=epsilon)
    grid = grid or EvalGrid(DEFAULT_K, T)
    return condition_number(FEConfig(T, M, M, solver.epsilon), None, solver, grid) / math.log(M) < kappa_star


# -- approximation ---------------------------------------------------------

def fe_approximation(f: Callable, T: float, N: int, M: int, solver: Optional[SolverSpec] = None,
                     data=None) -> TrigSeries:
    """The FE of ``f`` from the given data model with 2N+1 modes."""
    solver = solver or SolverSpec()
    data = _as_data(data)
    cfg = FEConfig(T, N, M, solver.epsilon)
    if data.normalized_kind == "fourier":
        A = build_fourier_design_matrix(cfg)
        b = fourier_data(f, M)
    else:
        nodes = data.sample_set(M, T)
        A = build_design_matrix(cfg, nodes)
        b = sample_function(f, nodes, M)
    return TrigSeries(T, factorize(solver, A).apply(b))


def approximation_error(f: Callable, series: TrigSeries, grid: Optional[EvalGrid] = None) -> float:
    """max over the grid of |f(x_k) - series(x_k)|."""
    grid = grid or EvalGrid(DEFAULT_K, series.T)
    if grid.T != series.T:
        raise ParameterError(f"grid T={grid.T} differs from series T={series.T}")
    x = grid_nodes(grid.K, grid.T)
    fx = np.asarray(f(x), dtype=complex)
    if not np.all(np.isfinite(fx)):
        k = int(np.flatnonzero(~np.isfinite(fx))[0])
        raise DataError(f"f is not finite at x = {x[k]!r}")
    return float(np.max(np.abs(fx - grid_values(series.coeffs, series.T, grid.K))))


@dataclass(frozen=True)
class ApproxPoint:
    function: str
    T: float
    M: int
    N: int
    error: float


def budgeted_error(f: Callable, T: float, M: int, kappa_star: float, solver: Optional[SolverSpec] = None,
                   data=None, grid_K: int = DEFAULT_K, error_K: int = DEFAULT_K,
                   N: Optional[int] = None, name: str = "") -> ApproxPoint:
    """Error of the FE with N = Theta(M; kappa_star) (or the given N)."""
    solver = solver or SolverSpec()
    if N is None:
        N = theta(T, M, kappa_star, solver, data, EvalGrid(grid_K, T))
    s = fe_approximation(f, T, N, M, solver, data)
    return ApproxPoint(name, T, M, N, approximation_error(f, s, EvalGrid(error_K, T)))


# -- best-approximation surrogate ------------------------------------------

def en_estimate(f: Callable, N: int, T: float, mu: float = 1e-13, oversample: int = 16):
    """Finite-precision surrogate for the regularized best-approximation error.

    Fits f on ``oversample * (2N+1)`` equispaced points by an SVD truncated at
    ``mu`` and returns (sup error on a 4x finer grid + mu * |a|_inf, |a|_inf).
    This is an upper bound for the infimum, not the infimum itself.
    """
    if N < 0:
        raise ParameterError(f"N must be >= 0, got {N}")
    if not 0 <= mu < 1:
        raise ParameterError(f"mu must lie in [0, 1), got {mu}")
    half = max(1, oversample * (2 * N + 1) // 2)
    x = np.arange(-half, half + 1) / half
    A = build_design_matrix(FEConfig(T, N, half), x)
    b = sample_function(f, x, half)
    a = TruncatedSVD(A, mu).apply(b)
    xf = np.linspace(-1, 1, 4 * x.size + 1)
    err = float(np.max(np.abs(np.asarray(f(xf), dtype=complex) - TrigSeries(T, a)(xf))))
    norm = float(np.max(np.abs(a))) if a.size else 0.0
    return err + mu * norm, norm


# -- resolution ------------------------------------------------------------

def _oscillation_error(omega, T, eta, M, solver, error_K):
    N = int(math.floor(M / eta + 1e-12))
    f = oscillation(omega)
    s = fe_approximation(f, T, N, M, solver)
    return approximation_error(f, s, EvalGrid(error_K, T))


def resolution(omega: float, delta_res: float, T: float, eta: float,
               solver: Optional[SolverSpec] = None, M_max: int = 4000,
               error_K: int = DEFAULT_K, start: Optional[int] = None) -> int:
    """Smallest M <= M_max for which the FE of exp(i pi omega x) with
    N = floor(M / eta) has sup error below ``delta_res``.

    Brackets from ``start`` (default ceil(T eta omega)) with doubling steps,
    then bisects. The final pair (M*-1 fails, M* passes) is re-checked.
    """
    if not 0 < delta_res < 1:
        raise ParameterError(f"delta_res must lie in (0, 1), got {delta_res}")
    if eta < 1:
        raise ParameterError(f"eta must be >= 1, got {eta}")
    if omega <= 0:
        raise ParameterError(f"omega must be positive, got {omega}")
    solver = solver or SolverSpec()
    errors: dict = {}

    def passes(M):
        if M not in errors:
            errors[M] = _oscillation_error(omega, T, eta, M, solver, error_K)
        return errors[M] < delta_res

    def best():
        M = min(errors, key=errors.get)
        return errors[M], M

    g = int(math.ceil(T * eta * omega)) if start is None else int(start)
    g = min(max(g, 2), M_max)
    step = max(1, g // 64)
    if passes(g):
        hi = g
        while True:
            lo = max(1, hi - step)
            if lo == hi or not passes(lo):
                break
            hi, step = lo, 2 * step
        if lo == hi:
            return hi
    else:
        lo = g
        while True:
            if lo >= M_max:
                e, Mb = best()
                raise NotResolvedError(
                    f"omega={omega:g}: error {e:.3e} at best (M={Mb}) with M <= {M_max}", e, Mb)
            hi = min(M_max, lo + step)
            if passes(hi):
                break
            lo, step = hi, 2 * step
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid
    if not passes(hi) or passes(hi - 1) and hi - 1 >= 1:
        # error not monotone in M near the boundary: scan downwards
        M = hi
        while M > 1 and passes(M - 1):
            M -= 1
        return M
    return hi


@dataclass(frozen=True)
class ResolutionCurve:
    T: float
    eta: float
    epsilon: float
    delta_res: float
    points: tuple  # of (omega, R)
    fitted_r: float

    @property
    def ratios(self) -> np.ndarray:
        return np.array([R / w for w, R in self.points])


def resolution_constant(T: float, eta: float, delta_res: float, omegas: Sequence[float],
                        solver: Optional[SolverSpec] = None, M_max: int = 4000,
                        error_K: int = DEFAULT_K) -> ResolutionCurve:
    """R(omega)/omega per omega; r is the mean of the last three ratios
    (of all of them when fewer than three omegas are given)."""
    if len(omegas) < 1:
        raise InsufficientDataError("need at least one omega")
    if list(omegas) != sorted(omegas):
        raise ParameterError("omegas must be increasing")
    solver = solver or SolverSpec()
    pts = []
    guess = None
    for w in omegas:
        R = resolution(w, delta_res, T, eta, solver, M_max, error_K,
                       start=None if guess is None else int(math.ceil(guess * w)))
        pts.append((float(w), int(R)))
        guess = R / w
    ratios = [R / w for w, R in pts]
    r = float(np.mean(ratios[-3:]))
    return ResolutionCurve(T, eta, solver.epsilon, delta_res, tuple(pts), r)
