"""Test the dichotomy constants, good steps, bridges and the budget chain."""

import math
import pytest
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
import sys

import numpy as np

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from heatlog.core.exceptions import GadgetError, ParameterError
from heatlog.core.reports import FAIL, FLAGGED, INFO, PASS, VACUOUS, CheckReport, inequality_step
from heatlog.gadget.bridges import (
    BridgeFamily,
    bridge_diagnostic,
    bridge_minimizer,
    bridges,
    forward_heavy_set,
    make_bridge,
)
from heatlog.gadget.budget import (
    binomial_bound,
    divergence_budget,
    final_bound,
    product_form,
    shifted_product_form,
    smoothed_forward_rows,
)
from heatlog.gadget.construction import build_gadget_walks
from heatlog.gadget.cost import verify_gadget_cost
from heatlog.gadget.detectability import (
    backward_forward_rows,
    reversal_detectability,
    step_weight,
    verify_detectability_bound,
)
from heatlog.gadget.dichotomy import (
    ceiling_form_margin,
    first_branch_margin,
    main_dichotomy,
    second_branch_margin,
)
from heatlog.gadget.params import (
    default_alphas,
    delta_for,
    gamma_for,
    require_epsilon,
    threshold_for,
)
from heatlog.gadget.steps import FirstBranch, GoodSteps, good_steps
from heatlog.heat.arith import log2_value, to_float_array
from heatlog.heat.generators import (
    complete_graph_kernel,
    path_chain,
    uniform_unit_vector,
    unit_vector,
)
from heatlog.sources import RandomSource
from heatlog.walks.conditioned import ConditionedWalk
from heatlog.walks.markov import walk_divergence

TOTAL = "log(48/gamma^2) >= D(W||F) + D(Y||F) + 2log S^t"
CONCLUSION = "log S^{t+2} + log S^{t-2} >= log delta + 2log S^t"


def _complete():
    u = uniform_unit_vector(4)
    return complete_graph_kernel(4), u, u


def _complete_walk(t: int = 8):
    S, u, v = _complete()
    return ConditionedWalk(S, u.distribution(), v.distribution(), t)


def _path_walk():
    return ConditionedWalk(
        path_chain(4, 0.5), unit_vector(5, 0).distribution(), unit_vector(5, 4).distribution(), 4
    )


def _gadget(t: int = 8):
    X = _complete_walk(t)
    good = good_steps(X, t, 0.95)
    return build_gadget_walks(X, good, bridges(X, good))


class TestParams:
    """Test the constants derived from epsilon."""

    def test_default_constants(self):
        """epsilon = 0.95 gives gamma = 0.6 and delta = 0.0075."""
        assert gamma_for(0.95) == pytest.approx(0.6)
        assert delta_for(0.95) == pytest.approx(0.0075)

    def test_delta_at_one(self):
        """epsilon = 1 gives gamma = 1 and delta = 1/48."""
        assert delta_for(1.0) == pytest.approx(1 / 48)

    def test_epsilon_range(self):
        """epsilon must lie in (7/8, 1]."""
        with pytest.raises(ParameterError, match="7/8"):
            require_epsilon(0.875)
        with pytest.raises(ParameterError):
            gamma_for(1.01)

    def test_threshold(self):
        """8(1 - epsilon) log t."""
        assert threshold_for(0.95, 8) == pytest.approx(1.2)

    def test_default_alphas(self):
        """(1 - epsilon, delta)."""
        alpha1, alpha2 = default_alphas(0.95)
        assert alpha1 == pytest.approx(0.05)
        assert alpha2 == pytest.approx(0.0075)

    def test_final_bound_is_delta(self):
        """log(48/gamma^2) = -log delta."""
        for epsilon in (0.9, 0.95, 1.0):
            assert final_bound(gamma_for(epsilon)) == pytest.approx(-math.log2(delta_for(epsilon)))


class TestBudgetForms:
    """Test the closed forms closing the budget chain."""

    def test_shifted_product_form(self):
        """The shifted form rewrites the product form."""
        for m, t in ((1, 4), (3, 12), (5, 20)):
            assert shifted_product_form(m, t, 0.6) == pytest.approx(product_form(m, t, 0.6))

    def test_binomial_above_shifted(self):
        """The binomial bound dominates the shifted form once |T| >= t/6."""
        assert binomial_bound(4, 0.6) >= shifted_product_form(4, 8, 0.6)

    def test_final_above_binomial(self):
        """C(2m, m) < 4^m."""
        for m in range(1, 30):
            assert final_bound(0.6) > binomial_bound(m, 0.6)


class TestMargins:
    """Test the branch margins of the dichotomy."""

    def test_first_branch(self):
        """Constant moments miss the first branch by (1 - epsilon) log t."""
        logs = [0.0] * 12
        assert first_branch_margin(logs, 8, 0.95) == pytest.approx(-0.15)

    def test_second_branch(self):
        """Constant moments clear the second branch by -log delta."""
        logs = [0.0] * 12
        assert second_branch_margin(logs, 8, 0.0075) == pytest.approx(-math.log2(0.0075))

    def test_second_branch_vanishing_moment(self):
        """m_{t-2} = 0 puts the second branch out of reach."""
        logs = [0.0, -math.inf, -math.inf, -math.inf, 0.0, 0.0, 0.0]
        assert second_branch_margin(logs, 4, 0.0075) == -math.inf

    def test_ceiling_form_without_m_t_minus_two(self):
        """A vanishing m_{t-2} leaves only the power branch."""
        logs = [0.0, -math.inf, -math.inf, -math.inf, 0.0, 0.0, 0.0]
        margin = ceiling_form_margin(logs, 4, 0.95, 0.0075)
        assert margin == pytest.approx(-0.1)


class TestMainDichotomy:
    """Test which branch holds on concrete instances."""

    def test_complete_graph_second_branch(self):
        """Flat moments on K_4 satisfy the second branch only."""
        S, u, v = _complete()
        report = main_dichotomy(S, u, v, 4)
        assert report.verdict == PASS
        assert report.extras["branch"] == 2
        assert report.extras["delta"] == pytest.approx(0.0075)

    def test_path_first_branch(self):
        """The endpoint walk on the 4-edge path satisfies the first branch."""
        S = path_chain(4)
        u, v = unit_vector(5, 0), unit_vector(5, 4)
        report = main_dichotomy(S, u, v, 4)
        assert report.verdict == PASS
        assert report.extras["branch"] == 1
        assert report.extras["log_moments"]["6"] == pytest.approx(-4.0)

    def test_vacuous(self):
        """m_t = 0 is vacuous."""
        S = path_chain(4)
        report = main_dichotomy(S, unit_vector(5, 0), unit_vector(5, 4), 2)
        assert report.verdict == VACUOUS

    def test_needs_t_two(self):
        """The dichotomy starts at t = 2."""
        S, u, v = _complete()
        with pytest.raises(ParameterError):
            main_dichotomy(S, u, v, 1)

    def test_pipeline_on_complete_graph(self):
        """At t = 8 the pipeline reports its own branch."""
        S, u, v = _complete()
        report = main_dichotomy(S, u, v, 8)
        assert report.passed
        assert report.extras["pipeline"]["branch"] == 2
        assert report.extras["pipeline"]["budget"]["verdict"] == PASS
        assert report.step("budget passes").verdict == PASS
        assert report.step("bridge-diagnostic passes").verdict == PASS
        for k in (1, 2, 3, 4):
            assert report.step(f"gadget-cost[k={k}] passes").verdict == PASS

    def test_pipeline_can_be_disabled(self):
        """No pipeline extras without the pipeline."""
        S, u, v = _complete()
        report = main_dichotomy(S, u, v, 8, pipeline=False)
        assert "pipeline" not in report.extras

    def test_failed_budget_fails_dichotomy(self, monkeypatch):
        """A budget with a failing line fails the whole dichotomy report."""

        def failing(*args, **kwargs):
            report = CheckReport("budget", "K4")
            report.add(inequality_step("slack >= 0", -1.0, 0.0, 1e-9))
            return report

        monkeypatch.setattr("heatlog.gadget.dichotomy.divergence_budget", failing)
        S, u, v = _complete()
        report = main_dichotomy(S, u, v, 8)

        assert report.extras["pipeline"]["budget"]["verdict"] == FAIL
        assert report.step("budget passes").verdict == FAIL
        assert not report.passed

    def test_pipeline_at_small_t_on_tiny_space(self):
        """Four states are small enough to run the enumerated pipeline at t = 4."""
        S, u, v = _complete()
        report = main_dichotomy(S, u, v, 4)
        budget = report.extras["pipeline"]["budget"]
        lines = {step["label"]: step for step in budget["steps"]}

        assert report.passed
        assert lines["D(W||F) = D(W|K||F) - I(K;W)"]["verdict"] == PASS
        assert lines[TOTAL]["note"] == "enumerated"
        assert lines[CONCLUSION]["verdict"] == PASS
        assert report.step("detectability passes").verdict == PASS

    def test_no_pipeline_between_scales(self):
        """t = 5 is too long to enumerate and too short for the pipeline."""
        S, u, v = _complete()
        assert "pipeline" not in main_dichotomy(S, u, v, 5).extras

    def test_random_instances_pass(self):
        """Every seeded instance satisfies one branch, with or without the pipeline."""
        for instance in RandomSource((3, 4), trials=3, seed=3).get_instances():
            for t in (2, 4, 8):
                report = main_dichotomy(
                    instance.kernel, instance.u, instance.v, t, instance=instance.name
                )
                assert report.passed, (instance.name, t)


class TestGoodSteps:
    """Test detectability and good steps."""

    def test_step_weight(self):
        """lambda_i = 1/(t - i + 1)."""
        assert step_weight(8, 1) == pytest.approx(1 / 8)
        assert step_weight(8, 8, exact=True) == Fraction(1)

    def test_stationary_walk_is_undetectable(self):
        """Forward and backward rows coincide on K_4 with uniform endpoints."""
        S, u, v = _complete()
        X = ConditionedWalk(S, u.distribution(), v.distribution(), 8)
        profile = reversal_detectability(X)
        assert profile.average == pytest.approx(0.0, abs=1e-12)
        assert len(profile.per_step) == 8

    def test_every_early_step_is_good(self):
        """All steps up to ceil(t/2) pass the Markov threshold."""
        S, u, v = _complete()
        X = ConditionedWalk(S, u.distribution(), v.distribution(), 8)
        good = good_steps(X, 8, 0.95)
        assert isinstance(good, GoodSteps)
        assert good.steps == (1, 2, 3, 4)
        assert good.meets_quota
        assert good.rank(4) == 1

    def test_good_steps_need_t_two(self):
        """t = 1 has no dichotomy."""
        S, u, v = _complete()
        X = ConditionedWalk(S, u.distribution(), v.distribution(), 1)
        with pytest.raises(ParameterError):
            good_steps(X, 1)

    def test_first_branch_token(self):
        """A deterministic endpoint walk is detectable enough for the first branch."""
        result = good_steps(_path_walk(), 4, 0.95)
        assert isinstance(result, FirstBranch)
        assert result.average == pytest.approx(math.log2(24) / 4)
        assert result.to_dict()["branch"] == 1

    @pytest.mark.parametrize("t", [7, 8])
    def test_good_steps_reverse_rarely(self, t):
        """lambda_k <= 2/t on every good step."""
        good = good_steps(_complete_walk(t), t, 0.95)
        assert good.steps
        assert all(good.weight(k) <= 2 / t for k in good.steps)


class TestBridges:
    """Test the bridge sets and the unconstrained minimizer."""

    def test_forward_heavy_set(self):
        """psi keeps the states where nu outweighs the scaled mu."""
        mu = np.array([0.5, 0.5, 0.0])
        nu = np.array([0.1, 0.9, 0.0])
        assert forward_heavy_set(mu, nu, 0.5) == (1,)

    def test_minimizer_of_equal_rows(self):
        """Equal rows are their own minimizer at cost zero."""
        row = np.array([0.25, 0.75])
        p, value = bridge_minimizer(row, row)
        assert np.allclose(p, row)
        assert value == pytest.approx(0.0, abs=1e-12)

    def test_minimizer_of_disjoint_rows(self):
        """Disjoint rows cannot be bridged."""
        _, value = bridge_minimizer(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert value == math.inf

    def test_bridges_on_complete_graph(self):
        """Forward and backward rows agree on K_4, so every bridge keeps full mass."""
        X = _complete_walk(8)
        good = good_steps(X, 8, 0.95)
        family = bridges(X, good)

        assert len(family.bridges) == 16
        assert len(family.for_step(2)) == 4
        assert all(float(b.mass) == pytest.approx(1.0) for b in family.bridges.values())
        assert family.flagged == []
        assert family.degenerate == []

    def test_light_bridge_is_flagged(self):
        """Mass below gamma flags the bridge and the family."""
        bridge = make_bridge(3, 0, np.array([0.9, 0.1]), np.array([0.1, 0.9]), 0.5, 0.6)
        assert bridge.psi == (1,)
        assert float(bridge.mass) == pytest.approx(0.1)
        assert list(bridge.pi) == [0.0, 1.0]
        assert bridge.flagged

        good = good_steps(_complete_walk(8), 8, 0.95)
        assert BridgeFamily(good, {(3, 0): bridge}).flagged == [bridge]

    def test_diagnostic_on_complete_graph(self):
        """Bridges on K_4 sit at the unconstrained minimizer."""
        X = _complete_walk(8)
        good = good_steps(X, 8, 0.95)
        report = bridge_diagnostic(X, bridges(X, good))
        assert report.passed
        excess = report.step("mean excess over the minimizer").lhs
        assert excess == pytest.approx(0.0, abs=1e-9)


class TestGadgetWalks:
    """Test the materialized W, Y and X-check walks."""

    def test_walks_return_to_r(self):
        """Every component of W and Y ends at r with probability one."""
        walks = _gadget(8)
        r = walks.X.space.r_index
        for k in walks.steps:
            assert float(walks.component_w(k).marginal(11)[r]) == pytest.approx(1.0)
            assert float(walks.component_y(k).marginal(7)[r]) == pytest.approx(1.0)

    def test_check_walk_costs_at_most_one_bit(self):
        """D(Xcheck^k || X) <= 1 on every good step."""
        walks = _gadget(8)
        for k in walks.steps:
            cost = float(walk_divergence(walks.checks[k], walks.X))
            assert -1e-12 <= cost <= 1.0

    def test_no_good_steps(self):
        """An empty step set cannot be built."""
        X = _complete_walk(8)
        good = replace(good_steps(X, 8, 0.95), steps=())
        with pytest.raises(GadgetError, match="No good steps"):
            build_gadget_walks(X, good, bridges(X, good))

    def test_smoothed_rows_dominated(self):
        """The smoothed forward rows never exceed twice the forward rows."""
        walks = _gadget(8)
        for k in walks.steps:
            _, nu = backward_forward_rows(walks.X, k)
            smoothed = smoothed_forward_rows(walks, k)
            assert np.all(smoothed <= 2 * to_float_array(nu) + 1e-12)


class TestGadgetCost:
    """Test the per-component cost decomposition."""

    def test_cost_on_complete_graph(self):
        """Each component costs 2 bits against the returning reference walk."""
        walks = _gadget(8)
        for k in walks.steps:
            report = verify_gadget_cost(walks, k)
            assert report.passed
            assert report.step("D(W|K=k||F^{t+2})").lhs == pytest.approx(2.0)
            assert report.step("D(Y|K=k||F^{t-2})").lhs == pytest.approx(2.0)
            assert report.step("D(X'_k||X_k) <= 1").verdict == PASS


class TestDetectability:
    """Test the detectability bound against the enumerated mixing information."""

    def test_path_information_is_log_t(self):
        """Each reversal time leaves a distinct trajectory on the path, so I(J;Z) = log t."""
        report = verify_detectability_bound(_path_walk())
        assert report.passed
        assert report.step("I(J;Z) >= detectability average").lhs == pytest.approx(2.0)

    def test_bound_on_complete_graph(self):
        """An undetectable walk satisfies the bound trivially."""
        report = verify_detectability_bound(_complete_walk(4))
        assert report.passed
        assert report.step("detectability average").lhs == pytest.approx(0.0, abs=1e-12)


class TestBudget:
    """Test the budget chain line by line."""

    def test_lines_on_complete_graph(self):
        """Every line passes on K_4 at t = 8 and the total is checked hard."""
        budget = divergence_budget(_gadget(8))

        assert budget.verdict == PASS
        assert budget.extras["chain_holds"]
        assert budget.step("|T|").lhs == 4
        assert all(step.verdict in (PASS, INFO) for step in budget.steps)
        assert budget.step(TOTAL).note.startswith("upper bound")

    def test_inflated_heat_fails_total(self, monkeypatch):
        """With every precondition met, a total above the ceiling fails the budget."""
        monkeypatch.setattr(
            "heatlog.gadget.budget.log2_value", lambda value: log2_value(value) + 200
        )
        budget = divergence_budget(_gadget(8))

        assert budget.step(TOTAL).verdict == FAIL
        assert budget.step(CONCLUSION).verdict == PASS
        assert not budget.passed

    def test_flagged_bridge_keeps_total_soft(self, monkeypatch):
        """A flagged bridge leaves the total as a flagged line."""
        monkeypatch.setattr(
            "heatlog.gadget.budget.log2_value", lambda value: log2_value(value) + 200
        )
        walks = _gadget(8)
        marked = {key: replace(b, flagged=True) for key, b in walks.family.bridges.items()}
        walks = replace(walks, family=BridgeFamily(walks.good, marked))
        budget = divergence_budget(walks)

        assert not budget.extras["chain_holds"]
        assert budget.step(TOTAL).verdict == FLAGGED
        assert budget.passed


if __name__ == "__main__":
    pytest.main([__file__])
