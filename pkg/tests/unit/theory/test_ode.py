"""Unit tests for the g and f Cauchy problems and the r = 2 closed forms."""

import math

import numpy as np
import pytest

from src.domain.models.errors import DomainError
from src.domain.models.params import NodeColor, Regime, RegimeSpec
from src.domain.theory.beta import BetaSpec
from src.domain.theory.closed_form import (
    alpha_b_boundary_r2,
    black_limit_r2,
    closed_form_r2,
    kappa_g_r2,
    zeros_r2,
)
from src.domain.theory.ode import (
    beta_integral,
    h_closed_form,
    kappa_f,
    kappa_h,
    kappa_integral,
    richardson_limit,
    solve_f,
    solve_g,
    terminal_b,
)
from src.domain.theory.prediction import predict


@pytest.fixture
def supercritical_spec():
    """q = g, alpha_R = 2, alpha_B = 0.75: red percolates at kappa_g = pi."""
    return BetaSpec(Regime.Q_EQUALS_G, 2, 2.0, 0.75)


@pytest.mark.unit
class TestClosedForms:
    """Tests for the r = 2 closed forms."""

    def test_kappa_g_at_two(self):
        """kappa_g(2) = pi."""
        assert kappa_g_r2(2.0) == pytest.approx(math.pi, rel=1e-12)

    def test_black_limit_reference(self):
        """The black limit at (2, 0.75) is about 0.9527."""
        assert black_limit_r2(2.0, 0.75) == pytest.approx(0.95271, abs=1e-5)

    def test_black_limit_near_critical_red(self):
        """As alpha_R drops to 1, kappa_g grows and the black limit nears alpha_B + z_B."""
        assert black_limit_r2(1.05, 0.75) == pytest.approx(1.0, abs=0.05)

    def test_black_limit_strong_red(self):
        """A very strong red leaves black near its seeds."""
        assert black_limit_r2(1000.0, 0.75) == pytest.approx(0.75, abs=1e-2)

    def test_boundary_is_continuous(self):
        """Both one-sided limits at alpha_B = 1 equal 2 - 4 / (4 + kappa_g)."""
        boundary = alpha_b_boundary_r2(2.0)
        assert boundary == pytest.approx(2.0 - 4.0 / (4.0 + math.pi))
        assert black_limit_r2(2.0, 1.0 - 1e-7) == pytest.approx(boundary, abs=1e-5)
        assert black_limit_r2(2.0, 1.0 + 1e-7) == pytest.approx(boundary, abs=1e-5)

    def test_alpha_b_equal_one_rejected(self):
        """alpha_B = 1 exactly has no closed form."""
        with pytest.raises(DomainError):
            black_limit_r2(2.0, 1.0)

    def test_subcritical_red_rejected(self):
        """Closed forms need alpha_R > 1."""
        with pytest.raises(DomainError):
            kappa_g_r2(0.9)

    def test_closed_form_prediction(self):
        """closed_form_r2 fills zeros, kappa_g and the limit."""
        prediction = closed_form_r2(2.0, 0.75)
        assert prediction.source == "closed_form"
        assert prediction.ar_scale == "n"
        assert (prediction.z_b, prediction.w_b) == pytest.approx(zeros_r2(0.75))
        assert prediction.g_b_at_kappa_g == pytest.approx(black_limit_r2(2.0, 0.75) - 0.75)

    def test_closed_form_fields_for_percolating_red(self):
        """Red has no zero and f is unbounded, both flagged in the JSON."""
        data = closed_form_r2(2.0, 0.75).to_dict()
        assert data["z_R"] is None
        assert data["kappa_f_unbounded"] is True
        assert data["kappa_g"] == pytest.approx(math.pi)
        assert data["eta"] == 1.0

    def test_closed_form_timing_matches_numeric_route(self):
        """The attached timing integral is the one predict attaches."""
        regime = RegimeSpec.for_instance(Regime.Q_EQUALS_G, 2.0, 0.75, 100_000, 1e-4, 2)
        expected = predict(regime, 2, 100_000, 1e-4).timing_tau(1.0)
        assert closed_form_r2(2.0, 0.75).timing_tau(1.0) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize(
        "alpha_r,alpha_b", [(1.25, 0.2), (2.0, 0.75), (3.5, 0.9), (4.75, 0.6), (1.0001, 0.5)]
    )
    def test_black_limit_below_subcritical_value(self, alpha_r, alpha_b):
        """For alpha_B < 1 the black limit stays below alpha_B + z_B."""
        prediction = closed_form_r2(alpha_r, alpha_b)
        assert prediction.limit_ab_over_q <= alpha_b + prediction.z_b + 1e-12
        if alpha_r > 1.1:
            assert prediction.limit_ab_over_q < alpha_b + prediction.z_b


@pytest.mark.unit
class TestQuadratures:
    """Tests for the reciprocal quadratures."""

    def test_kappa_integral_matches_closed_form(self, supercritical_spec):
        """The quadrature kappa_g equals the r = 2 closed form."""
        assert kappa_integral(supercritical_spec) == pytest.approx(math.pi, abs=1e-8)

    def test_kappa_integral_subcritical(self):
        """alpha_R <= 1 leaves kappa_g unbounded."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 0.8, 0.5)
        assert kappa_integral(spec) is None

    def test_terminal_b_matches_closed_form(self, supercritical_spec):
        """g_B(kappa_g) from root-finding equals the closed form."""
        value = terminal_b(supercritical_spec, math.pi)
        assert value == pytest.approx(black_limit_r2(2.0, 0.75) - 0.75, abs=1e-8)

    def test_beta_integral_diverges_at_zero(self, supercritical_spec):
        """The black integral is infinite at z_B = 0.25."""
        with pytest.raises(DomainError, match="diverges"):
            beta_integral(supercritical_spec, NodeColor.BLACK, 0.25)

    def test_kappa_h(self):
        """kappa_h(1, 2) = 2."""
        assert kappa_h(1.0, 2) == pytest.approx(2.0)

    def test_h_closed_form_solves_ode(self):
        """h' = (h + alpha)^r / r! holds for the closed form."""
        alpha, r, y, step = 1.0, 2, 1.0, 1e-6
        forward = h_closed_form(alpha, r, y + step)
        backward = h_closed_form(alpha, r, y - step)
        derivative = (forward - backward) / (2 * step)
        expected = (h_closed_form(alpha, r, y) + alpha) ** r / math.factorial(r)
        assert derivative == pytest.approx(expected, rel=1e-6)

    def test_between_scales_terminal(self):
        """For g << q << 1/p, g_B(kappa_h) = (alpha_B^-1 - alpha_R^-1)^-1 - alpha_B."""
        spec = BetaSpec(Regime.G_LL_Q_LL_PINV, 2, 2.0, 1.0)
        assert terminal_b(spec, kappa_h(2.0, 2)) == pytest.approx(1.0)


@pytest.mark.unit
class TestSolveG:
    """Tests for solve_g."""

    def test_blow_up(self, supercritical_spec):
        """g_R blows up just before kappa_g and g_B ends at its closed-form limit."""
        solution = solve_g(supercritical_spec, 10.0)
        assert solution.kappa == pytest.approx(math.pi, abs=1e-8)
        assert solution.x_end < math.pi
        assert solution.x_end == pytest.approx(math.pi, abs=1e-3)
        assert solution.terminal_b == pytest.approx(0.20271, abs=1e-5)

    def test_subcritical_converges_to_zero(self):
        """Without blow-up g_B tends to z_B."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 0.8, 0.5)
        solution = solve_g(spec, 200.0)
        assert solution.unbounded
        _, g_b = solution(200.0)
        assert g_b == pytest.approx(solution.terminal_b, abs=1e-4)

    def test_identity_regime(self):
        """Above 1/p only red activates, at unit rate."""
        spec = BetaSpec(Regime.PINV_LL_Q_LL_N, 2, 2.0, 1.0)
        assert solve_g(spec, 3.0)(2.0) == (2.0, 0.0)

    def test_rejects_empty_range(self, supercritical_spec):
        """x_max must be positive."""
        with pytest.raises(DomainError):
            solve_g(supercritical_spec, 0.0)


@pytest.mark.unit
class TestSolveF:
    """Tests for solve_f."""

    def test_components_sum_to_x(self, supercritical_spec):
        """f_R + f_B = x along the solution."""
        solution = solve_f(supercritical_spec, 5.0)
        for x in (0.5, 1.0, 2.5, 4.9):
            assert sum(solution(x)) == pytest.approx(x, abs=1e-7)

    def test_routes_agree(self, supercritical_spec):
        """Direct integration and the transfer through g agree to 1e-6."""
        direct = solve_f(supercritical_spec, 5.0, route="ode")
        transfer = solve_f(supercritical_spec, 5.0, route="transfer")
        grid = np.linspace(0.0, 5.0, 26)
        gap = max(max(abs(a - b) for a, b in zip(direct(x), transfer(x))) for x in grid)
        assert gap <= 1e-6

    def test_subcritical_domain(self):
        """kappa_f = z_R + z_B when both colors are subcritical."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 0.8, 0.5)
        expected = zeros_r2(0.8)[0] + zeros_r2(0.5)[0]
        assert kappa_f(spec) == pytest.approx(expected, abs=1e-10)
        solution = solve_f(spec, 10.0)
        assert solution.kappa == pytest.approx(expected, abs=1e-10)
        assert solution.x_end < expected

    def test_unknown_route(self, supercritical_spec):
        """Only the ode and transfer routes exist."""
        with pytest.raises(DomainError, match="route"):
            solve_f(supercritical_spec, 1.0, route="euler")

    def test_to_dict_flags_unbounded(self, supercritical_spec):
        """JSON output carries an explicit unbounded flag."""
        data = solve_f(supercritical_spec, 1.0).to_dict()
        assert data["kappa"] is None
        assert data["kappa_unbounded"] is True
        assert len(data["grid"]) == len(data["r"]) == len(data["b"])


@pytest.mark.unit
class TestRichardsonLimit:
    """Tests for the tail extrapolation used at q = 1/p."""

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_exact_for_power_law_tail(self, order):
        """L - C x^-k sampled at x, 2x, 4x extrapolates to L for any k."""
        samples = [3.0 - 5.0 * x**-order for x in (10.0, 20.0, 40.0)]
        assert richardson_limit(*samples) == pytest.approx(3.0, abs=1e-12)

    def test_improves_on_exponential_tail(self):
        """A faster-than-power tail still lands closer to the limit than the last sample."""
        samples = [1.0 - math.exp(-x / 10.0) for x in (10.0, 20.0, 40.0)]
        assert abs(richardson_limit(*samples) - 1.0) < abs(samples[-1] - 1.0)

    def test_flat_or_diverging_samples(self):
        """Without a shrinking difference the last sample is returned."""
        assert richardson_limit(0.4, 0.4, 0.4) == 0.4
        assert richardson_limit(0.0, 1.0, 3.0) == 3.0
