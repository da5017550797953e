import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from heatgraph.graph import (
    adjacency_from_raw_laplacian,
    degree_scaling,
    edge_weights,
    erdos_renyi_adjacency,
    is_valid_laplacian,
    laplacian_from_adjacency,
    project_to_valid_laplacian,
    ring_adjacency,
)

from .conftest import L_EDGE, complete_laplacian, random_laplacian

raw_matrices = st.integers(1, 7).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-10, 10, allow_nan=False, allow_subnormal=False))
)


def test_single_edge():
    np.testing.assert_array_equal(laplacian_from_adjacency([[0, 1], [1, 0]]), L_EDGE)


def test_zero_adjacency():
    np.testing.assert_array_equal(laplacian_from_adjacency(np.zeros((3, 3))), np.zeros((3, 3)))


def test_k3():
    expected = [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    np.testing.assert_array_equal(laplacian_from_adjacency(np.ones((3, 3)) - np.eye(3)), expected)


def test_row_sums_compensated():
    A = np.array([[0, 1e16, 1.0, -1e16], [1e16, 0, 0, 0], [1.0, 0, 0, 0], [-1e16, 0, 0, 0]])
    L = laplacian_from_adjacency(A)
    assert L[0, 0] == 1.0


class TestSplit:
    def test_hand_example(self):
        D, A = adjacency_from_raw_laplacian([[1, -1], [0, 0]])
        np.testing.assert_array_equal(D, [1, 0])
        np.testing.assert_array_equal(A, [[0, 1], [0, 0]])

    def test_valid(self):
        D, A = adjacency_from_raw_laplacian(L_EDGE)
        np.testing.assert_array_equal(D, [1, 1])
        np.testing.assert_array_equal(A, [[0, 1], [1, 0]])

    def test_zero(self):
        D, A = adjacency_from_raw_laplacian(np.zeros((2, 2)))
        assert not D.any() and not A.any()


class TestProjection:
    def test_fixed_point_edge(self):
        np.testing.assert_array_equal(project_to_valid_laplacian(L_EDGE), L_EDGE)

    def test_hand_example(self):
        out = project_to_valid_laplacian([[1.0, -1.0], [0.0, 0.0]])
        a = math.sqrt(1.5) * 0.5 * math.sqrt(0.5)
        assert a == pytest.approx(0.4330127, abs=5e-8)
        np.testing.assert_allclose(out, [[a, -a], [-a, a]], rtol=1e-15)

    def test_hand_example_as_printed(self):
        out = project_to_valid_laplacian([[1.0, -1.0], [0.0, 0.0]], exponent="as-printed")
        a = 1.5**0.25 * 0.5 * 0.5**0.25
        np.testing.assert_allclose(out, [[a, -a], [-a, a]], rtol=1e-15)

    def test_negative_pair_clamped(self):
        Lraw = np.array([[0.0, 0.3], [0.3, 0.0]])  # adjacency entries -0.3
        np.testing.assert_array_equal(project_to_valid_laplacian(Lraw), np.zeros((2, 2)))

    def test_isolated_node_unscaled(self):
        f = degree_scaling(np.array([2.0, 5.0]), np.array([1.0, 0.0]))
        assert f[1] == 1.0
        assert f[0] == pytest.approx(math.sqrt(1.5))

    def test_negative_measured_degree_clamped(self):
        f = degree_scaling(np.array([-3.0]), np.array([2.0]))
        assert f[0] == pytest.approx(math.sqrt(0.5))

    def test_unknown_exponent(self):
        with pytest.raises(ValueError):
            project_to_valid_laplacian(L_EDGE, exponent="cubed")

    @settings(max_examples=200, deadline=None)
    @given(raw_matrices)
    def test_output_valid(self, Lraw):
        out = project_to_valid_laplacian(Lraw)
        assert is_valid_laplacian(out)
        np.testing.assert_array_equal(out, out.T)

    @settings(max_examples=200, deadline=None)
    @given(raw_matrices, st.sampled_from(["as-derived", "as-printed"]))
    def test_idempotent(self, Lraw, exponent):
        once = project_to_valid_laplacian(Lraw, exponent)
        twice = project_to_valid_laplacian(once, exponent)
        assert np.linalg.norm(twice - once) < 1e-12 * max(1.0, np.linalg.norm(once))

    @settings(max_examples=100, deadline=None)
    @given(raw_matrices, st.randoms(use_true_random=False))
    def test_permutation_equivariant(self, Lraw, rnd):
        n = Lraw.shape[0]
        perm = list(range(n))
        rnd.shuffle(perm)
        P = np.eye(n)[perm]
        lhs = project_to_valid_laplacian(P @ Lraw @ P.T)
        rhs = P @ project_to_valid_laplacian(Lraw) @ P.T
        assert np.linalg.norm(lhs - rhs) < 1e-12 * max(1.0, np.linalg.norm(rhs))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 8), st.floats(0.1, 5.0), st.integers(0, 2**32 - 1))
    def test_degree_targeting_homogeneous(self, n, c, seed):
        # measured degrees proportional to clamped degrees => all scaling factors equal
        r = np.random.default_rng(seed)
        A = np.triu(r.uniform(0.1, 1.0, (n, n)), 1)
        A = A + A.T
        Ds = A.sum(axis=1)
        Lraw = np.diag(c * Ds) - A
        out = project_to_valid_laplacian(Lraw)
        np.testing.assert_allclose(np.diag(out), (c * Ds + Ds) / 2, rtol=1e-9)

    @settings(max_examples=50, deadline=None)
    @given(raw_matrices, st.floats(1e-3, 1e3))
    def test_positive_scale_equivariant(self, Lraw, s):
        np.testing.assert_allclose(project_to_valid_laplacian(s * Lraw), s * project_to_valid_laplacian(Lraw),
                                   rtol=1e-9, atol=1e-9 * s * max(1.0, np.abs(Lraw).max()))

    def test_fixed_point_random_valid(self, rng):
        for _ in range(20):
            L = random_laplacian(rng, int(rng.integers(2, 12)))
            assert np.linalg.norm(project_to_valid_laplacian(L) - L) < 1e-12 * np.linalg.norm(L)


def test_is_valid_rejects():
    assert is_valid_laplacian(complete_laplacian(4))
    assert not is_valid_laplacian(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert not is_valid_laplacian(np.array([[1.0, -1.0], [0.0, 0.0]]))


def test_generators(rng):
    A = ring_adjacency(8)
    assert A.sum() == 16 and np.all(A.sum(axis=1) == 2)
    E = erdos_renyi_adjacency(10, 0.4, rng)
    assert np.array_equal(E, E.T) and set(np.unique(E)) <= {0.0, 1.0}
    assert np.linalg.eigvalsh(laplacian_from_adjacency(E))[1] > 0


def test_edge_weights():
    np.testing.assert_array_equal(edge_weights(complete_laplacian(3, 2.0)), [2.0, 2.0, 2.0])
