"""Test kernels, vectors, moment sequences and the JSON interchange format."""

import json
import math
import pytest
from fractions import Fraction
from pathlib import Path
import sys

import numpy as np

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from heatlog.core.exceptions import DimensionError, GuardError, KernelError, SourceError
from heatlog.heat import (
    ExactLog,
    Instance,
    NonnegVector,
    SymmetricKernel,
    complete_graph_kernel,
    hypercube_kernel,
    identity_kernel,
    load_kernel,
    load_vector,
    moment_sequence,
    normalize_substochastic,
    path_chain,
    random_instance,
    spectral_moments,
    swap_kernel,
    unit_vector,
    walk_count_density,
)
from heatlog.heat.generators import (
    eigen_pair_instance,
    random_rational_instance,
    scale_kernel,
    uniform_unit_vector,
    zero_kernel,
)

SAMPLES = Path(__file__).parent / "samples"


class TestKernels:
    """Test kernel construction and validation."""

    def test_path_chain_entries(self):
        """Path kernels carry only the off-diagonal weights."""
        S = path_chain(2, 0.5)
        assert S.size == 3
        assert list(S.entries()) == [(0, 1, 0.5), (1, 2, 0.5)]

    def test_single_edge_path(self):
        """t = 1 gives one edge of weight epsilon."""
        S = path_chain(1, Fraction(1, 3), exact=True)
        assert list(S.entries()) == [(0, 1, Fraction(1, 3))]

    def test_path_chain_rejects_bad_parameters(self):
        """Length and weight must be positive."""
        with pytest.raises(KernelError):
            path_chain(0)
        with pytest.raises(KernelError, match="positive"):
            path_chain(2, 0)

    def test_asymmetric_matrix_rejected(self):
        """Kernels must be symmetric."""
        with pytest.raises(KernelError, match="symmetric"):
            SymmetricKernel(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_negative_entries_rejected(self):
        """Kernels must be nonnegative."""
        with pytest.raises(KernelError, match="negative"):
            SymmetricKernel.from_entries(2, [(0, 1, -1.0)])

    def test_generated_kernels_are_symmetric(self):
        """Storage is bit-identical under transposition."""
        for S in (path_chain(5, 0.3), hypercube_kernel(4), random_instance(7, 0.6, seed=3)[0]):
            assert (S.matrix != S.matrix.T).nnz == 0

    def test_hypercube_one_dimension(self):
        """n = 1 is the swap kernel."""
        assert np.array_equal(hypercube_kernel(1).dense(), swap_kernel().dense())

    def test_hypercube_is_doubly_stochastic(self):
        """Every row sums to one."""
        assert np.allclose(hypercube_kernel(5).row_sums, 1.0)

    def test_hypercube_guard(self):
        """Dimensions above the guard are refused."""
        with pytest.raises(GuardError):
            hypercube_kernel(21)

    def test_complete_graph_is_stochastic(self):
        """K_n without loops has unit row sums."""
        S = complete_graph_kernel(5, exact=True)
        assert all(s == 1 for s in S.row_sums)
        assert S.dense()[0, 0] == 0

    def test_scale_kernel(self):
        """Scaling multiplies every weight."""
        S = scale_kernel(path_chain(3, 1, exact=True), Fraction(1, 2))
        assert S.max_row_sum == 1

    def test_vector_rejects_negative_entries(self):
        """Vectors must be nonnegative."""
        with pytest.raises(KernelError):
            NonnegVector(np.array([1.0, -0.5]))


class TestNormalization:
    """Test substochastic normalization."""

    def test_interior_rows_set_the_scale(self):
        """The path on four states has interior row sums 2."""
        S, scale = normalize_substochastic(path_chain(3, 1))
        assert scale == 2
        assert S.max_row_sum == pytest.approx(1.0)

    def test_already_substochastic(self):
        """A kernel with maximal row sum 1 is unchanged."""
        S, scale = normalize_substochastic(swap_kernel())
        assert scale == 1
        assert np.array_equal(S.dense(), swap_kernel().dense())

    def test_scaled_identity(self):
        """5 I normalizes back to I."""
        five = SymmetricKernel.from_entries(3, [(i, i, 5) for i in range(3)])
        S, scale = normalize_substochastic(five)
        assert scale == 5
        assert np.array_equal(S.dense(), np.eye(3))

    def test_zero_kernel(self):
        """The all-zero kernel cannot be normalized."""
        with pytest.raises(KernelError, match="all-zero"):
            normalize_substochastic(zero_kernel(3))


class TestMoments:
    """Test moment sequences."""

    def test_path_moments(self):
        """Endpoints of the length-2 path: m_2 = 1, m_4 = 2."""
        S = path_chain(2, 1, exact=True)
        m = moment_sequence(S, unit_vector(3, 0, True), unit_vector(3, 2, True), 4)
        assert m[2] == 1
        assert m[4] == 2
        assert m.log(0) == -math.inf
        assert m.log(4) == 1.0

    @pytest.mark.parametrize("epsilon", [Fraction(1), Fraction(1, 2)])
    def test_path_closed_form(self, epsilon):
        """m_{t-2} = 0, m_t = eps^t and m_{t+2} = t eps^{t+2} at the path endpoints."""
        for t in range(2, 13):
            S = path_chain(t, epsilon, exact=True)
            m = moment_sequence(S, unit_vector(t + 1, 0, True), unit_vector(t + 1, t, True), t + 2)
            assert m[t - 2] == 0
            assert m[t] == epsilon**t
            assert m[t + 2] == t * epsilon ** (t + 2)

    def test_zero_kernel_moments(self):
        """Only m_0 = <v, u> survives the zero operator."""
        u = NonnegVector(np.array([0.6, 0.8, 0.0]))
        m = moment_sequence(zero_kernel(3), u, u, 3)
        assert m[0] == pytest.approx(1.0)
        assert all(m[t] == 0 for t in range(1, 4))
        assert m.log(2) == -math.inf

    def test_dimension_mismatch(self):
        """Vectors must live on the kernel's space."""
        with pytest.raises(DimensionError):
            moment_sequence(swap_kernel(), unit_vector(3, 0), unit_vector(2, 0), 2)

    def test_spectral_swap(self):
        """Eigenvalues +1 and -1 give 1, 0, 1, 0, ..."""
        e0 = unit_vector(2, 0)
        m = spectral_moments(swap_kernel(), e0, e0, 5)
        assert m.values == pytest.approx((1, 0, 1, 0, 1, 0), abs=1e-12)

    def test_spectral_identity(self):
        """Only the eigenvalue 1 contributes."""
        u = uniform_unit_vector(4)
        m = spectral_moments(identity_kernel(4), u, u, 6)
        assert m.values == pytest.approx((1.0,) * 7)

    def test_spectral_path(self):
        """m_6 = 4 at the ends of the length-4 path."""
        m = spectral_moments(path_chain(4, 1), unit_vector(5, 0), unit_vector(5, 4), 6)
        assert m[6] == pytest.approx(4.0)

    def test_spectral_agrees_with_power_iteration(self):
        """Both computations agree on random instances."""
        for trial in range(20):
            S, u, v = random_instance(5 + trial % 4, 0.5, seed=11, trial=trial)
            direct = moment_sequence(S, u, v, 32)
            spectral = spectral_moments(S, u, v, 32)
            for t in range(33):
                assert abs(direct[t] - spectral[t]) <= 1e-9 * direct[t] + 1e-12

    def test_log_values_match(self):
        """exp2 of the log values recovers the moments."""
        S, u, v = random_instance(6, 0.7, seed=2)
        m = moment_sequence(S, u, v, 10)
        for t in range(11):
            assert 2 ** m.log(t) == pytest.approx(m[t], rel=1e-12)

    def test_substochastic_moments_bounded(self):
        """Unit vectors and a substochastic kernel keep every m_t in [0, 1]."""
        S, u, v = random_instance(8, 0.4, seed=5)
        m = moment_sequence(S, u, v, 20)
        assert all(0 <= x <= 1 + 1e-12 for x in m.values)

    def test_bipartite_parity(self):
        """Odd moments vanish on the hypercube with u = v."""
        e0 = unit_vector(8, 0)
        m = moment_sequence(hypercube_kernel(3), e0, e0, 9)
        assert all(m[t] == 0 for t in range(1, 10, 2))

    def test_hypercube_return_probability(self):
        """Two of the four 2-step walks on the square return."""
        e0 = unit_vector(4, 0, True)
        assert moment_sequence(hypercube_kernel(2, exact=True), e0, e0, 2)[2] == Fraction(1, 2)


class TestWalkCounts:
    """Test walk count densities."""

    def test_single_edge(self):
        """K_2 has two length-2 walks over two vertices."""
        assert walk_count_density(path_chain(1, 1), 2) == pytest.approx(1.0)

    def test_triangle(self):
        """K_3 has six directed edges over three vertices."""
        assert walk_count_density(_triangle(), 1) == 2.0

    def test_empty_graph(self):
        """No walks of positive length."""
        assert walk_count_density(zero_kernel(4), 3) == 0.0

    def test_weighted_graph_rejected(self):
        """Entries must be 0 or 1."""
        with pytest.raises(KernelError, match="0/1"):
            walk_count_density(path_chain(2, 0.5), 2)


def _triangle():
    return SymmetricKernel.from_entries(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])


class TestRandomInstances:
    """Test seeded instance generation."""

    def test_deterministic(self):
        """The same seed and trial give the same instance."""
        S1, u1, v1 = random_instance(6, 0.5, seed=42, trial=3)
        S2, u2, v2 = random_instance(6, 0.5, seed=42, trial=3)
        assert np.array_equal(S1.dense(), S2.dense())
        assert np.array_equal(u1.values, u2.values)
        assert np.array_equal(v1.values, v2.values)

    def test_trials_differ(self):
        """Distinct trials draw distinct streams."""
        first = random_instance(6, seed=1, trial=0)[1]
        second = random_instance(6, seed=1, trial=1)[1]
        assert not np.array_equal(first.values, second.values)

    def test_normalization(self):
        """Unit vectors and maximal row sum 1."""
        S, u, v = random_instance(9, 0.3, seed=8)
        assert u.l2 == pytest.approx(1.0, abs=1e-12)
        assert v.l2 == pytest.approx(1.0, abs=1e-12)
        assert S.max_row_sum == pytest.approx(1.0, abs=1e-12)

    def test_rational_instance(self):
        """Exact instances are substochastic with positive vectors."""
        S, u, v = random_rational_instance(4, seed=3)
        assert S.exact and u.exact and v.exact
        assert S.max_row_sum == 1
        assert all(x > 0 for x in u.values)

    def test_eigen_pair_instance(self):
        """Su = lambda v and Sv = lambda u."""
        S, u, v = eigen_pair_instance(3, seed=1)
        Su, Sv = S.apply(u.values), S.apply(v.values)
        lam = Su.dot(v.values)
        assert np.allclose(Su, lam * v.values)
        assert np.allclose(Sv, lam * u.values)


class TestExactLog:
    """Test symbolic base-2 logarithms."""

    def test_canonical_form(self):
        """log2(1/4) = -2 and log2(6) = log2(2) + log2(3)."""
        assert ExactLog.of(Fraction(1, 4)) == -2
        assert ExactLog.of(6) == ExactLog.of(2) + ExactLog.of(3)
        assert float(ExactLog.of(Fraction(3, 4))) == pytest.approx(math.log2(0.75))

    def test_non_positive_rejected(self):
        """Logs of zero are not rationals."""
        with pytest.raises(ValueError):
            ExactLog.of(0)


class TestInterchange:
    """Test the kernel and vector JSON format."""

    def test_load_sample_kernel(self):
        """The sample path kernel loads with rational weights."""
        S = load_kernel(SAMPLES / "path4.json", exact=True)
        assert S.size == 5
        assert S.space.labels == ("a", "b", "c", "d", "e")
        assert list(S.entries())[0] == (0, 1, Fraction(1, 2))

    def test_load_sample_vector(self):
        """Vectors are arrays of decimal strings."""
        S = load_kernel(SAMPLES / "path4.json")
        u = load_vector(SAMPLES / "e0.json", S.space)
        assert u.values.tolist() == [1.0, 0.0, 0.0, 0.0, 0.0]

    def test_empty_vector(self):
        """An empty vector file is a validation error."""
        with pytest.raises(SourceError, match="empty"):
            load_vector(SAMPLES / "empty_vector.json")

    def test_decoder_line_numbers(self, tmp_path):
        """Malformed JSON reports the decoder's line."""
        path = tmp_path / "broken.json"
        path.write_text('{\n  "size": 2,\n  "entries": [[0, 1, "1"],]\n}\n')
        with pytest.raises(SourceError, match="line 3"):
            load_kernel(path)

    def test_lower_triangle_rejected(self, tmp_path):
        """Entries must be given with i <= j."""
        path = tmp_path / "lower.json"
        path.write_text(json.dumps({"size": 2, "entries": [[1, 0, "1"]]}))
        with pytest.raises(SourceError, match="i <= j"):
            load_kernel(path)

    def test_negative_weight_rejected(self, tmp_path):
        """Validation errors surface as source errors."""
        path = tmp_path / "negative.json"
        path.write_text(json.dumps({"size": 2, "entries": [[0, 1, "-1"]]}))
        with pytest.raises(SourceError, match="Invalid kernel"):
            load_kernel(path)

    def test_vector_length_mismatch(self):
        """Vectors must fit the kernel's space."""
        S = load_kernel(SAMPLES / "path4.json")
        with pytest.raises(SourceError):
            load_vector(SAMPLES / "e0_short.json", S.space)

    def test_instance_replay(self):
        """An exact instance survives its JSON form unchanged."""
        S = path_chain(3, Fraction(1, 3), exact=True)
        instance = Instance(S, unit_vector(4, 0, True), unit_vector(4, 3, True), {"name": "p3"})
        replayed = Instance.from_dict(json.loads(json.dumps(instance.to_dict())), exact=True)
        assert replayed.name == "p3"
        assert np.array_equal(replayed.kernel.dense(), S.dense())
        m = moment_sequence(replayed.kernel, replayed.u, replayed.v, 5)
        assert m[5] == 3 * Fraction(1, 3) ** 5


if __name__ == "__main__":
    pytest.main([__file__])
