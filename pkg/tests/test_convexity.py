"""Test the moment inequality checks, the search and the continuous probe."""

import math
import pytest
from pathlib import Path
import sys

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from heatlog.convexity.checks import (
    blakley_dixon_report,
    check_blakley_dixon,
    check_erdos_simonovits,
    check_mandel_hughes,
    check_near_logconvexity,
    check_pate,
    check_scale_equivariance,
    equality_conditions,
    near_logconvexity_report,
    resolve_delta,
    tightness_probe,
    tightness_report,
    violation_threshold,
)
from heatlog.convexity.continuous import continuous_probe, continuous_report, heat_action
from heatlog.convexity.search import (
    SearchConfig,
    counterexample_search,
    log_convexity_slack,
    replay_trial,
)
from heatlog.core.exceptions import KernelError, ParameterError
from heatlog.core.reports import PASS, REFUSED, VACUOUS
from heatlog.heat.generators import (
    eigen_pair_instance,
    path_chain,
    random_instance,
    swap_kernel,
    unit_vector,
)
from heatlog.heat.moments import moment_sequence


def _path4_moments(t_max=8):
    S = path_chain(4)
    return moment_sequence(S, unit_vector(5, 0), unit_vector(5, 4), t_max)


class TestBlakleyDixon:
    """Test m_k^t >= m_t^k."""

    def test_random_instances(self):
        """Every same-parity pair holds on random unit vectors."""
        for trial in range(20):
            S, u, v = random_instance(6, 0.5, seed=1, trial=trial)
            report = blakley_dixon_report(moment_sequence(S, u, v, 10))
            assert report.verdict == PASS

    def test_path_with_vanishing_moments(self):
        """m_k = 0 only ever pairs with m_t = 0."""
        report = blakley_dixon_report(_path4_moments())
        assert report.passed
        step = check_blakley_dixon(_path4_moments(), 3, 1)
        assert step.note == "m_k = 0 forces m_t = 0"

    def test_parity_refused(self):
        """Pairs of different parity are refused."""
        assert check_blakley_dixon(_path4_moments(), 5, 2).verdict == REFUSED

    def test_order(self):
        """k must be at least t."""
        with pytest.raises(ParameterError):
            check_blakley_dixon(_path4_moments(), 2, 4)


class TestNearLogConvexity:
    """Test m_{t+2} / m_t^{1+2/t} >= min(t^{1-eps}, delta m_t^{1-2/t} / m_{t-2})."""

    def test_random_instances(self):
        """The bound holds at epsilon = 0.95."""
        for trial in range(20):
            S, u, v = random_instance(5, 0.6, seed=3, trial=trial)
            report = near_logconvexity_report(moment_sequence(S, u, v, 12), 0.95)
            assert report.passed

    def test_path_second_branch_infinite(self):
        """m_{t-2} = 0 leaves the first branch."""
        step = check_near_logconvexity(_path4_moments(), 4, 0.95)
        assert step.verdict == PASS
        assert step.data["second_branch"] == math.inf
        assert step.rhs == pytest.approx(0.1)

    def test_vacuous(self):
        """m_t = 0 is vacuous."""
        assert check_near_logconvexity(_path4_moments(), 2, 0.95).verdict == VACUOUS

    def test_extrapolated_delta(self):
        """epsilon <= 7/8 needs an explicit delta."""
        with pytest.raises(ParameterError):
            resolve_delta(0.8, None)
        assert resolve_delta(0.8, 0.01) == (0.01, "extrapolated")
        assert resolve_delta(0.95, None) == (pytest.approx(0.0075), "")

    def test_log_convexity_fails_on_path(self):
        """Plain log-convexity breaks where m_{t-2} vanishes."""
        assert log_convexity_slack(_path4_moments(), 2, 6) == -math.inf

    def test_scale_equivariance(self):
        """The slack does not move under S -> cS."""
        S, u, v = random_instance(6, 0.5, seed=4, trial=0)
        for c in (0.1, 10.0):
            assert check_scale_equivariance(S, u, v, 3, c).verdict == PASS


class TestSpecialCases:
    """Test the one-vector, odd-power and graph cases."""

    def test_mandel_hughes(self):
        """<u, S^t u> >= <u, S u>^t."""
        S, u, _ = random_instance(5, 0.5, seed=6, trial=0)
        m = moment_sequence(S, u, u, 8)
        assert all(check_mandel_hughes(m, t).passed for t in range(1, 9))

    def test_pate(self):
        """<v, S^{2t+1} u> >= <v, S u>^{2t+1}."""
        S, u, v = random_instance(5, 0.5, seed=6, trial=1)
        m = moment_sequence(S, u, v, 9)
        assert all(check_pate(m, t).passed for t in range(0, 5))

    def test_erdos_simonovits(self):
        """Walk densities of a 0/1 path."""
        G = path_chain(3)
        assert check_erdos_simonovits(G, 4, 2).passed
        assert check_erdos_simonovits(G, 3, 2).verdict == REFUSED

    def test_erdos_simonovits_needs_graph(self):
        """Weighted kernels are rejected."""
        with pytest.raises(KernelError):
            check_erdos_simonovits(path_chain(3, 0.5), 4, 2)


class TestEqualityConditions:
    """Test the equality diagnosis."""

    def test_odd_eigen_pair(self):
        """Su = lambda v and Sv = lambda u give equality at odd t."""
        S, u, v = eigen_pair_instance(3)
        diagnosis = equality_conditions(S, u, v, 3)
        assert diagnosis.odd_condition
        assert diagnosis.observed_equality
        assert diagnosis.consistent

    def test_even_degenerate(self):
        """Bipartite halves never meet at even times."""
        S, u, v = eigen_pair_instance(3)
        diagnosis = equality_conditions(S, u, v, 2)
        assert diagnosis.degenerate
        assert diagnosis.consistent


class TestTightness:
    """Test the strengthened bound on the path family."""

    def test_violated(self):
        """t = 10, eta = 0.5 lies above the threshold."""
        probe = tightness_probe(10, 0.5)
        assert probe.violated
        assert probe.walk_count == 64

    def test_not_violated(self):
        """t = 4, eta = 0.1 lies below the threshold."""
        assert not tightness_probe(4, 0.1).violated

    def test_threshold(self):
        """eta* = (3t - 2)/t^2 separates the two regimes."""
        t = 12
        eta = violation_threshold(t)
        assert tightness_probe(t, eta * 1.01).violated
        assert not tightness_probe(t, eta * 0.99).violated

    def test_report(self):
        """The closed-form walk count is checked exactly."""
        report = tightness_report(10, 0.5)
        assert report.verdict == PASS
        assert report.extras["violated"] is True

    def test_parameters(self):
        """t >= 2 and eta >= 0."""
        with pytest.raises(ParameterError):
            tightness_probe(1, 0.5)
        with pytest.raises(ParameterError):
            tightness_probe(4, -0.1)


class TestSearch:
    """Test the seeded counterexample search."""

    def test_no_counterexamples(self):
        """The asserted inequalities hold across a short sweep."""
        summary = counterexample_search(SearchConfig(sizes=(3, 4, 5), trials=12, seed=7))
        assert summary.passed
        assert summary.failures["blakley-dixon"] == 0

    def test_thread_count_does_not_matter(self):
        """Summaries agree across thread counts."""
        single = counterexample_search(SearchConfig(sizes=(3, 4), trials=10, seed=2, threads=1))
        pooled = counterexample_search(SearchConfig(sizes=(3, 4), trials=10, seed=2, threads=4))
        assert single.to_dict() == pooled.to_dict()

    def test_replay(self):
        """A trial replays to the same slacks."""
        config = SearchConfig(sizes=(3, 4), trials=5, seed=9)
        assert replay_trial(config, 3) == replay_trial(config, 3)
        assert replay_trial(config, 3).size == 4


class TestContinuous:
    """Test the continuous-time heat profile."""

    def test_swap_closed_form(self):
        """<e0, e^{x(S-I)} e0> = (1 + e^{-2x})/2 for the swap."""
        S, e0 = swap_kernel(), unit_vector(2, 0)
        for x in (0.25, 1.0, 4.0):
            assert heat_action(S, e0, e0, x) == pytest.approx((1 + math.exp(-2 * x)) / 2)

    def test_profile_rows(self):
        """Rows carry t, f, logf and the residual."""
        S, e0 = swap_kernel(), unit_vector(2, 0)
        profile = continuous_probe(S, e0, e0, [0.5, 1.0, 2.0])
        rows = profile.to_rows()
        assert [row["t"] for row in rows] == [0.5, 1.0, 2.0]
        assert set(rows[0]) == {"t", "f", "logf", "residual"}
        assert not profile.excluded

    def test_report_is_soft(self):
        """Negative residuals are flagged, never failed."""
        S, u, v = random_instance(4, 0.6, seed=8, trial=0)
        report = continuous_report(continuous_probe(S, u, v, [0.5, 1.0, 2.0, 4.0]))
        assert report.passed

    def test_grid_must_be_positive(self):
        """x = 0 is not a valid grid point."""
        with pytest.raises(ParameterError):
            continuous_probe(swap_kernel(), unit_vector(2, 0), unit_vector(2, 0), [0.0, 1.0])


if __name__ == "__main__":
    pytest.main([__file__])
