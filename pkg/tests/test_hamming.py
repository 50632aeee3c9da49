"""Test flip distributions, vertices, certificates and the padding reduction."""

import pytest
from fractions import Fraction
from pathlib import Path
import sys

import numpy as np

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from heatlog.core.exceptions import DimensionError, GuardError, ParameterError
from heatlog.core.reports import PASS, VACUOUS
from heatlog.hamming import f2
from heatlog.hamming.certificates import (
    affine_audit,
    certificate_report,
    corruption_certificate,
    dichotomy_audit,
    pdt_size_bound,
)
from heatlog.hamming.coset import coset_identity_sweep, coset_walk_identity, coset_walk_value
from heatlog.hamming.flips import collision_bound, flip_distribution
from heatlog.hamming.padding import decision_table, padding_reduction
from heatlog.hamming.vertices import (
    AffineVertex,
    RankOneVertex,
    affine_value,
    hyperplane,
    pair_enumeration_value,
    rank_one_value,
)
from heatlog.heat.generators import trial_generator


class TestF2:
    """Test linear algebra over F_2."""

    def test_bits(self):
        """Coordinate 0 comes first."""
        assert f2.to_bits(1, 3) == "100"
        assert f2.from_bits("011") == 6

    def test_rank_and_kernel(self):
        """A dependent row does not add to the rank."""
        rows = (0b01, 0b10, 0b11)
        assert f2.rank(rows, 2) == 2
        assert f2.kernel_basis((0b11,), 2) == [0b11]

    def test_affine_points(self):
        """x_0 + x_1 = 1 has two solutions."""
        assert f2.affine_points((0b11,), 1, 2) == [1, 2]

    def test_inconsistent_system(self):
        """0 x = 1 has no solution."""
        assert f2.solve((0,), 1, 2) is None
        assert f2.affine_points((0,), 1, 2) == []

    def test_random_solutions(self):
        """Solutions satisfy Bx = c on random systems."""
        for trial in range(50):
            rng = trial_generator(4, trial)
            rows = f2.random_matrix(rng, 5)
            c = f2.apply(rows, int(rng.integers(32)))
            x = f2.solve(rows, c, 5)
            assert f2.apply(rows, x) == c

    def test_shape(self):
        """Rows must fit in n columns."""
        with pytest.raises(DimensionError):
            f2.check_shape((0b100,), 0, 2)


class TestFlips:
    """Test the flip distributions mu_k."""

    def test_two_flips_on_two_bits(self):
        """Two flips on two bits land on 00 or 11."""
        mu = flip_distribution(2, 2, exact=True)
        assert mu.mass[0] == Fraction(1, 2)
        assert mu.mass[3] == Fraction(1, 2)
        assert mu.total == 1

    def test_parity(self):
        """k flips never leave the parity class of k."""
        mu = flip_distribution(5, 3, exact=True)
        assert mu.off_parity_mass() == 0

    def test_pair_mass(self):
        """Pair masses spread mu_k over uniform x."""
        mu = flip_distribution(2, 2, exact=True)
        assert mu.pair_mass(0, 3) == Fraction(1, 8)

    def test_pair_mass_needs_pair_variant(self):
        """The weight variant has no pair masses."""
        with pytest.raises(ParameterError):
            flip_distribution(2, 2, "weight").pair_mass(0, 1)

    def test_collision_bound(self):
        """Mass at weight k is at least 1 - C(k,2)/n."""
        mu = flip_distribution(16, 3, "weight")
        assert collision_bound(16, 3) == pytest.approx(0.8125)
        assert mu.weight_mass(3) >= collision_bound(16, 3)

    def test_permutation_invariance(self):
        """Relabelling coordinates leaves mu_k unchanged."""
        mu = flip_distribution(3, 2)
        assert np.allclose(mu.permuted([2, 0, 1]), mu.mass)

    def test_exact_guard(self):
        """Exact distributions stop at twelve coordinates."""
        with pytest.raises(GuardError):
            flip_distribution(13, 1, exact=True)


class TestVertices:
    """Test rank-one and affine vertex values."""

    def test_rank_one_point(self):
        """<{00} x {00}, mu_2> = 1/8."""
        R = RankOneVertex(2, {0}, {0})
        D = flip_distribution(2, 2, exact=True)
        assert rank_one_value(R, D, exact=True) == Fraction(1, 8)
        assert pair_enumeration_value(R, D) == Fraction(1, 8)

    def test_walk_matches_enumeration(self):
        """The walk evaluation agrees with summing the pair law."""
        for trial in range(20):
            rng = trial_generator(8, trial)
            R = RankOneVertex.from_masks(3, int(rng.integers(256)), int(rng.integers(256)))
            D = flip_distribution(3, int(rng.integers(0, 5)), exact=True)
            assert rank_one_value(R, D, exact=True) == pair_enumeration_value(R, D)

    def test_hyperplane_value(self):
        """Hyperplanes evaluate term by term."""
        R = RankOneVertex.full(2)
        H = hyperplane("k-log-delta", 2, 0.05)
        assert rank_one_value(R, H) == pytest.approx(1 - 1 / 0.15)

    def test_affine_value(self):
        """{x : x_0 = 0} carries half of mu_1 on two bits."""
        V = AffineVertex(2, (0b01,), 0)
        assert affine_value(V, flip_distribution(2, 1, "weight", exact=True)) == Fraction(1, 2)

    def test_hyperplane_kinds(self):
        """Unknown kinds and short walks are rejected."""
        with pytest.raises(ParameterError):
            hyperplane("k-log-n", 2, 0.1)
        with pytest.raises(ParameterError):
            hyperplane("k-log-k", 1, 0.1)
        assert hyperplane("k-log-delta", 4, 0.1).bound == pytest.approx(0.3**2)

    def test_pair_enumeration_guard(self):
        """Pair enumeration is limited to n <= 3."""
        with pytest.raises(GuardError):
            pair_enumeration_value(RankOneVertex(4, {0}, {0}), flip_distribution(4, 2))


class TestCertificates:
    """Test the corruption certificates."""

    def test_exhaustive_k_log_delta(self):
        """Every rank-one vertex on three bits stays below (3 delta)^{k/2}."""
        certificate = corruption_certificate("k-log-delta", 3, 2, 0.05)
        assert certificate.bound == pytest.approx(0.15)
        assert certificate.max_vertex_value < certificate.bound
        assert certificate.violations == 0
        assert certificate.audit.vertices == 1 << 16
        assert certificate.audit.neither == 0
        assert certificate.guaranteed

    def test_report(self):
        """The certificate report passes and carries the certificate."""
        report = certificate_report(corruption_certificate("k-log-delta", 2, 2, 0.05))
        assert report.verdict == PASS
        assert report.extras["search_mode"] == "exhaustive"
        assert report.extras["seed"] is None

    def test_random_search_is_seeded(self):
        """Random searches replay from their seed."""
        first = corruption_certificate("k-log-k", 6, 4, 0.01, "random", trials=50, seed=3)
        second = corruption_certificate("k-log-k", 6, 4, 0.01, "random", trials=50, seed=3)
        assert first.to_dict() == second.to_dict()
        assert first.audit.vertices == 50

    def test_exhaustive_guard(self):
        """Exhaustive search stops at three bits."""
        with pytest.raises(GuardError):
            corruption_certificate("k-log-delta", 4, 2, 0.05)

    def test_unknown_mode(self):
        """Only exhaustive and random searches exist."""
        with pytest.raises(ParameterError):
            corruption_certificate("k-log-delta", 2, 2, 0.05, "greedy")

    def test_affine_audit(self):
        """Random (B, c) vertices for the parity decision tree bound."""
        certificate = affine_audit(4, 2, 0.05, trials=100, seed=1)
        assert certificate.search_mode == "random"
        assert certificate.audit.vertices == 100
        assert certificate.hyperplane.kind == "pdt"

    def test_pdt_size_bound(self):
        """Premises are recorded, not enforced."""
        bound = pdt_size_bound(1000, 2, 0.1)
        assert not bound.flagged
        assert pdt_size_bound(10, 4, 0.5).flagged

    def test_dichotomy_on_full_vertex(self):
        """The full cube has flat moments and sits on the second branch."""
        report = dichotomy_audit(RankOneVertex.full(3), 2)
        assert report.check == "hamming-dichotomy"
        assert report.extras["branch"] == 2
        assert report.passed

    def test_dichotomy_on_empty_side(self):
        """An empty side makes the audit vacuous."""
        assert dichotomy_audit(RankOneVertex(3, {0}, set()), 2).verdict == VACUOUS


class TestCosetWalk:
    """Test <[Bx = c], mu_k> as a walk adding columns of B."""

    def test_identity_matrix(self):
        """B = I, c = 0 is the return probability of two flips."""
        assert coset_walk_value((0b01, 0b10), 0, 2, 2, exact=True) == Fraction(1, 2)

    def test_exact_identity(self):
        """Walk and direct sums agree exactly."""
        report = coset_walk_identity((0b011, 0b110), 0b01, 3, 3, exact=True)
        assert report.verdict == PASS

    def test_sweep(self):
        """Random (B, c, k) keep the residual at rounding level."""
        report = coset_identity_sweep(4, trials=50, seed=2)
        assert report.verdict == PASS


class TestPadding:
    """Test the padding reduction."""

    def test_decision_table(self):
        """Answers on (00a, 00b) and (00a, 11b)."""
        table = decision_table(4)
        assert table[2] == ({1}, {1})
        assert table[4] == ({1}, {0})
        assert table[6] == ({0}, {0, 1})

    def test_distance_k_is_declared(self):
        """||a - b|| = k forces the answers (1, 0)."""
        padded = padding_reduction(0, 0b0011, 4, 2)
        assert padded.distances == (2, 4)
        assert padded.must_declare_k
        assert padded.to_dict()["second"] == ["000000", "110011"]

    def test_distance_k_minus_two_is_not_declared(self):
        """||a - b|| = k - 2 answers (1, 1)."""
        padded = padding_reduction(0b0101, 0b0101, 4, 2)
        assert padded.outcomes == {(1, 1)}
        assert not padded.may_declare_k

    def test_inputs_fit(self):
        """Inputs must be points of F_2^n."""
        with pytest.raises(DimensionError):
            padding_reduction(16, 0, 4, 2)


if __name__ == "__main__":
    pytest.main([__file__])
