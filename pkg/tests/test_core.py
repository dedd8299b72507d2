import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_extension import (
    DesignMatrix,
    ExtensionMap,
    FEConfig,
    TrigSeries,
    build_design_matrix,
    equispaced_nodes,
    evaluate_series,
    grid_nodes,
    grid_size,
    grid_values,
    map_forward,
    map_inverse,
    max_geometric_rate,
    sample_function,
    singular_values,
)
from fourier_extension.core import grid_abs_rowsum_max
from fourier_extension.errors import DataError, DomainError, ParameterError, ShapeError
from fourier_extension.functions import f5

from conftest import random_coeffs


# -- FEConfig --------------------------------------------------------------

def test_config_defaults_and_eta():
    c = FEConfig(2.0, 50, 100)
    assert c.epsilon == 1e-13
    assert c.eta == 2.0
    assert FEConfig.from_eta(2.0, 3, 100).N == 33


@pytest.mark.parametrize("kw", [
    dict(T=1.0, N=1, M=2), dict(T=0.5, N=1, M=2), dict(T=2, N=-1, M=2),
    dict(T=2, N=3, M=2), dict(T=2, N=1, M=0), dict(T=2, N=1, M=2, epsilon=0.0),
    dict(T=2, N=1, M=2, epsilon=1.0), dict(T=float("nan"), N=1, M=2),
])
def test_config_rejects(kw):
    with pytest.raises(ParameterError):
        FEConfig(**kw)


# -- TrigSeries and evaluation ---------------------------------------------

def test_series_needs_odd_length():
    with pytest.raises(ShapeError):
        TrigSeries(2.0, np.ones(4))
    assert TrigSeries(2.0, np.ones(5)).N == 2


def test_series_is_immutable():
    s = TrigSeries(2.0, np.ones(3))
    with pytest.raises(ValueError):
        s.coeffs[0] = 2


def test_constant_term():
    s = TrigSeries(2.0, [0, 1, 0])
    np.testing.assert_allclose(s(np.linspace(-3, 3, 11)), 1.0)


@pytest.mark.parametrize("n", [-3, 0, 2])
def test_one_hot_is_basis_function(n):
    N, T = 3, 2.5
    c = np.zeros(2 * N + 1)
    c[n + N] = 1
    x = np.array([-1.0, -0.3, 0.7, 2.2])
    np.testing.assert_allclose(TrigSeries(T, c)(x), np.exp(1j * n * np.pi * x / T), atol=1e-15)


def test_non_finite_points():
    with pytest.raises(DomainError):
        evaluate_series(TrigSeries(2.0, [1.0]), [0.0, np.inf])


def test_fft_grid_matches_direct_sum(rng):
    N, T, K = 8, 2.0, 32
    c = random_coeffs(rng, N)
    x = grid_nodes(K, T)
    assert x.size == 33
    direct = np.array([sum(c[j] * np.exp(1j * (j - N) * np.pi * xk / T) for j in range(2 * N + 1))
                       for xk in x])
    fft = grid_values(c, T, K)
    assert np.max(np.abs(fft - direct)) < 1e-12 * np.max(np.abs(direct))


def test_fft_grid_folds_high_modes(rng):
    # more modes than the FFT length: aliasing must be folded exactly
    N, T, K = 40, 3.0, 16
    c = random_coeffs(rng, N)
    np.testing.assert_allclose(grid_values(c, T, K), TrigSeries(T, c)(grid_nodes(K, T)), atol=1e-11)


def test_fft_grid_multiple_columns(rng):
    c = rng.standard_normal((11, 7)) + 0j
    v = grid_values(c, 1.5, 64, block=3)
    for j in range(7):
        np.testing.assert_allclose(v[:, j], TrigSeries(1.5, c[:, j])(grid_nodes(64, 1.5)), atol=1e-12)


def test_abs_rowsum_max(rng):
    c = rng.standard_normal((9, 20)) + 1j * rng.standard_normal((9, 20))
    vals = np.abs(grid_values(c, 2.0, 128)).sum(axis=1)
    v, k = grid_abs_rowsum_max(c, 2.0, 128, block=6)
    assert v == pytest.approx(vals.max(), rel=1e-13)
    assert k == int(np.argmax(vals))


@pytest.mark.parametrize("K,T", [(64, 2.0), (4096, 1.125), (2**15, 6.0), (100, 3.0)])
def test_grid_layout(K, T):
    x = grid_nodes(K, T)
    assert x.size == grid_size(K, T) == math.floor(2 * K / T + 1)
    assert x[0] == -1.0
    assert x[-1] <= 1.0 + 1e-15
    np.testing.assert_allclose(np.diff(x), T / K, rtol=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12), st.floats(1.01, 8), st.floats(-5, 5), st.integers(0, 2**31 - 1))
def test_periodicity(N, T, x, seed):
    c = random_coeffs(np.random.default_rng(seed), N)
    s = TrigSeries(T, c)
    assert abs(s(x) - s(x + 2 * T)) <= 1e-12 * (1 + np.abs(c).sum())


# -- design matrix and sampling --------------------------------------------

def test_design_matrix_single_column():
    A = build_design_matrix(FEConfig(2.0, 0, 5), equispaced_nodes(5))
    assert A.shape == (11, 1)
    np.testing.assert_allclose(np.asarray(A), 1 / math.sqrt(5))


def test_design_matrix_small_entries():
    A = np.asarray(build_design_matrix(FEConfig(2.0, 1, 1), [-1, 0, 1]))
    np.testing.assert_allclose(A[1], [1, 1, 1])
    np.testing.assert_allclose(A[0], [np.exp(1j * np.pi / 2), 1, np.exp(-1j * np.pi / 2)], atol=1e-15)
    np.testing.assert_allclose(A[2], [np.exp(-1j * np.pi / 2), 1, np.exp(1j * np.pi / 2)], atol=1e-15)


def test_design_matrix_equispaced_formula():
    T, N, M = 2.5, 3, 7
    A = np.asarray(build_design_matrix(FEConfig(T, N, M), equispaced_nodes(M)))
    m = np.arange(-M, M + 1)[:, None]
    n = np.arange(-N, N + 1)[None, :]
    np.testing.assert_allclose(A, np.exp(1j * n * m * np.pi / (T * M)) / math.sqrt(M), atol=1e-15)


def test_sigma_min_against_normal_matrix_eigensolver():
    A = np.asarray(build_design_matrix(FEConfig(2.0, 2, 4), equispaced_nodes(4)))
    s = singular_values(A)
    lam = np.linalg.eigvalsh(A.conj().T @ A)
    assert abs(s[-1] - math.sqrt(lam[0])) < 1e-10
    np.testing.assert_allclose(np.sort(s**2), lam, atol=1e-12)


def test_design_matrix_errors():
    cfg = FEConfig(2.0, 1, 2)
    with pytest.raises(ShapeError):
        build_design_matrix(cfg, [0.0, 0.5])
    with pytest.raises(DomainError):
        build_design_matrix(cfg, [-1.0, -0.5, 0, 0.5, 1.2])
    with pytest.raises(ShapeError):
        DesignMatrix(np.ones((5, 2)), cfg)


@pytest.mark.parametrize("T", [1.25, 2.0, 4.0])
@pytest.mark.parametrize("M,eta", [(50, 1), (120, 2), (200, 1.5)])
def test_singular_value_bound(T, M, eta):
    # sigma_max -> sqrt(2T) under the 1/sqrt(M) scaling (Riemann sum of the
    # Gram matrix over the period), not 1
    N = int(M / eta)
    s = singular_values(build_design_matrix(FEConfig(T, N, M), equispaced_nodes(M)))
    assert s[0] <= math.sqrt(2 * T) * (1 + 2 / M) + 1e-12
    assert s[-1] > 0


def test_sample_function_values():
    np.testing.assert_allclose(sample_function(lambda x: np.ones_like(x), [-1, 0, 1]), [1, 1, 1])
    np.testing.assert_allclose(sample_function(lambda x: x, equispaced_nodes(2)),
                               np.array([-1, -0.5, 0, 0.5, 1]) / math.sqrt(2))
    b = sample_function(f5, equispaced_nodes(10))
    assert b[-1] == pytest.approx(1 / math.sqrt(10))


def test_sample_function_constant_callable():
    np.testing.assert_allclose(sample_function(lambda x: 3.0, [-1, 0, 1]), [3, 3, 3])


def test_sample_function_reports_bad_node():
    with pytest.raises(DataError, match="x\\[2\\]"), np.errstate(divide="ignore"):
        sample_function(lambda x: 1 / x, [-1, -0.5, 0, 0.5, 1])


def test_normalization_consistency(rng):
    for _ in range(5):
        T, N, M = 2.0, int(rng.integers(0, 10)), int(rng.integers(10, 30))
        x = equispaced_nodes(M).nodes
        c = random_coeffs(rng, N)
        A = np.asarray(build_design_matrix(FEConfig(T, N, M), x))
        f = np.cos
        lhs = np.linalg.norm(A @ c - sample_function(f, x))
        rhs = np.sqrt(np.sum(np.abs(TrigSeries(T, c)(x) - f(x)) ** 2)) / math.sqrt(M)
        assert abs(lhs - rhs) <= 1e-12 * max(1, rhs)


# -- extension map ---------------------------------------------------------

@pytest.mark.parametrize("T", [1.1, 2.0, 5.0])
def test_map_endpoints(T):
    e = ExtensionMap(T)
    assert map_forward(e, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert map_forward(e, 1.0) == pytest.approx(-1.0, abs=1e-15)
    assert map_inverse(e, 1.0) == pytest.approx(0.0, abs=1e-7)
    assert map_inverse(e, -1.0) == pytest.approx(1.0, abs=1e-15)


def test_map_half_point():
    e = ExtensionMap(2.0)
    assert map_forward(e, 0.5) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    assert map_inverse(e, math.sqrt(2) - 1) == pytest.approx(0.5, abs=1e-14)


def test_map_is_decreasing():
    y = map_forward(ExtensionMap(3.0), np.linspace(0, 1, 200))
    assert np.all(np.diff(y) < 0)


@pytest.mark.parametrize("T", [1.05, 1.25, 2.0, 6.0])
def test_map_round_trip(T):
    e = ExtensionMap(T)
    z = np.linspace(-1, 1, 1000)
    assert np.max(np.abs(e.forward(e.inverse(z)) - z)) < 1e-12


def test_map_domain_errors():
    e = ExtensionMap(2.0)
    with pytest.raises(DomainError):
        map_forward(e, 1.5)
    with pytest.raises(DomainError):
        map_inverse(e, 1.1)
    # tiny excursions are rounding and get clamped
    assert map_inverse(e, 1 + 1e-16) == pytest.approx(0.0, abs=1e-7)


def test_max_geometric_rate():
    assert max_geometric_rate(2.0) == pytest.approx(3 + 2 * math.sqrt(2), rel=1e-14)
    assert max_geometric_rate(1 + 1e-12) == pytest.approx(1.0, rel=1e-10)
    assert max_geometric_rate(4.0) > max_geometric_rate(2.0)
    with pytest.raises(DomainError):
        max_geometric_rate(1.0)
