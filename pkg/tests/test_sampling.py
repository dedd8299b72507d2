import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourier_extension import (
    ExtensionMap,
    FEConfig,
    SampleSet,
    build_fourier_design_matrix,
    equispaced_nodes,
    fourier_data,
    fourier_modes,
    jittered_nodes,
    log_nodes,
    make_sample_set,
    map_inverse,
    mapped_chebyshev_nodes,
)
from fourier_extension.errors import GenerationError, ParameterError
from fourier_extension.functions import TEST_FUNCTIONS
from fourier_extension.sampling import gauss_panels


def test_equispaced():
    np.testing.assert_array_equal(equispaced_nodes(1).nodes, [-1, 0, 1])
    np.testing.assert_array_equal(equispaced_nodes(2).nodes, [-1, -0.5, 0, 0.5, 1])
    np.testing.assert_array_equal(np.diff(equispaced_nodes(4).nodes), 0.25)
    s = equispaced_nodes(7)
    assert len(s) == 15 and s.norm == "uniform" and s.pointwise
    np.testing.assert_array_equal(s.nodes, np.arange(-7, 8) / 7)


def test_jittered_reference_node():
    x = jittered_nodes(10, 0.5).nodes
    # reference value from an independent high-precision evaluation
    assert x[11] == pytest.approx(0.074681717944512064, abs=1e-15)
    assert x[10] == 0.0


@pytest.mark.parametrize("M", [3, 10, 57, 200])
def test_jittered_bounds_and_symmetry(M):
    s = make_sample_set("jittered", M, delta_jit=0.3)
    m = np.arange(-M, M + 1)
    assert np.all(np.abs(s.nodes - m / M) <= 0.3 / M + 1e-15)
    np.testing.assert_array_equal(s.nodes, -s.nodes[::-1])
    assert np.all(np.abs(s.nodes) <= 1)


def test_jittered_endpoint_policy():
    # M=2: z_M = (0.5/2) sin(2) > 0 pushes the last node past 1
    with pytest.raises(GenerationError):
        jittered_nodes(2, 0.5)
    s = jittered_nodes(2, 0.5, endpoint="fold")
    assert s.nodes[-1] == pytest.approx(1 - 0.25 * math.sin(2))
    assert np.all(np.diff(s.nodes) > 0)


def test_jittered_parameter_errors():
    with pytest.raises(ParameterError):
        jittered_nodes(10, 1.0)
    with pytest.raises(ParameterError):
        jittered_nodes(10, 0.5, endpoint="clip")


def test_log_nodes():
    x = log_nodes(4, 2.0).nodes
    assert x[4] == 0.0
    assert x[6] == pytest.approx(0.25, rel=1e-14)
    assert x[5] == pytest.approx(1 / 8, rel=1e-14)
    assert x[-1] == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_array_equal(x, -x[::-1])
    with pytest.raises(ParameterError):
        log_nodes(4, 0.25)
    with pytest.raises(ParameterError):
        log_nodes(1)


def test_mapped_chebyshev_small():
    s = mapped_chebyshev_nodes(0, 2.0)
    np.testing.assert_allclose(s.nodes, [-2 / 3, 2 / 3], rtol=1e-14)


@pytest.mark.parametrize("M,T", [(5, 1.25), (40, 2.0), (200, 4.0)])
def test_mapped_chebyshev_properties(M, T):
    s = mapped_chebyshev_nodes(M, T)
    assert len(s) == 2 * M + 2
    assert np.all(np.abs(s.nodes) < 1)
    assert np.all(np.diff(s.nodes) > 0)
    np.testing.assert_array_equal(s.nodes, -s.nodes[::-1])
    m = np.arange(M + 1)
    ref = np.sort(map_inverse(ExtensionMap(T), np.cos((2 * m + 1) * np.pi / (2 * M + 2))))
    np.testing.assert_allclose(s.nodes[M + 1:], ref, rtol=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["equispaced", "jittered", "logarithmic", "mapped-cheb"]),
       st.integers(2, 300), st.floats(1.05, 6))
def test_generators_increasing_and_in_range(kind, M, T):
    s = make_sample_set(kind, M, T=T)
    assert np.all(np.diff(s.nodes) > 0)
    assert np.all(np.abs(s.nodes) <= 1)
    np.testing.assert_array_equal(s.nodes, -s.nodes[::-1])


def test_make_sample_set_names():
    assert make_sample_set("mapped_chebyshev", 3, T=2).kind == "mapped_chebyshev"
    assert make_sample_set("fourier", 3).norm == "l2"
    with pytest.raises(ParameterError):
        make_sample_set("mapped-cheb", 3)
    with pytest.raises(ParameterError):
        make_sample_set("random", 3)


@pytest.mark.parametrize("s", [equispaced_nodes(5), jittered_nodes(10, 0.2), log_nodes(6),
                               mapped_chebyshev_nodes(4, 1.5), fourier_modes(3)])
def test_sample_set_csv_round_trip(s):
    t = SampleSet.from_csv(s.to_csv())
    assert (t.kind, t.M, t.params, t.norm) == (s.kind, s.M, s.params, s.norm)
    np.testing.assert_array_equal(t.nodes, s.nodes)


def test_sample_set_unknown_kind():
    with pytest.raises(ParameterError):
        SampleSet("polar", 2, np.zeros(5))


# -- Fourier data ----------------------------------------------------------

def test_gauss_panels_integrate_polynomials():
    x, w = gauss_panels(3)
    assert w.sum() == pytest.approx(2.0, rel=1e-14)
    assert (w * x**30).sum() == pytest.approx(2 / 31, rel=1e-12)


def test_fourier_data_constant():
    c = fourier_data(lambda x: np.ones_like(x), 6)
    expect = np.zeros(13)
    expect[6] = 2
    np.testing.assert_allclose(c, expect, atol=1e-13)


@pytest.mark.parametrize("k", [-4, 0, 3])
def test_fourier_data_orthogonality(k):
    c = fourier_data(lambda x: np.exp(1j * np.pi * k * x), 5)
    expect = np.zeros(11)
    expect[k + 5] = 2
    np.testing.assert_allclose(c, expect, atol=1e-13)


def test_fourier_data_linear_function():
    M = 20
    c = fourier_data(lambda x: x, M)
    m = np.arange(-M, M + 1)
    expect = np.zeros(2 * M + 1, dtype=complex)
    nz = m != 0
    expect[nz] = 2j * (-1.0) ** m[nz] / (np.pi * m[nz])
    np.testing.assert_allclose(c, expect, atol=1e-10)


def test_fourier_data_panel_floor():
    with pytest.raises(ParameterError):
        fourier_data(np.cos, 10, quad_panels=9)


@pytest.mark.parametrize("i", sorted(TEST_FUNCTIONS))
def test_fourier_data_converged(i):
    f = TEST_FUNCTIONS[i]
    M = 200
    a = fourier_data(f, M, quad_panels=400)
    b = fourier_data(f, M, quad_panels=800)
    assert np.max(np.abs(a - b)) < 1e-10


def test_fourier_design_matrix_entries():
    B = np.asarray(build_fourier_design_matrix(FEConfig(2.0, 4, 4)))
    # rows m = -4..4, columns n = -4..4
    assert B[4, 4] == pytest.approx(2.0)
    assert B[2 + 4, 4 + 4] == pytest.approx(2.0)
    assert B[4, 1 + 4].real == pytest.approx(4 / np.pi, rel=1e-14)


def test_fourier_design_matrix_against_quadrature():
    T, N, M = 1.7, 3, 5
    B = np.asarray(build_fourier_design_matrix(FEConfig(T, N, M)))
    for j, n in enumerate(range(-N, N + 1)):
        col = fourier_data(lambda x: np.exp(1j * n * np.pi * x / T), M)
        np.testing.assert_allclose(B[:, j], col, atol=1e-12)
