"""Unit tests for limit predictions, timing integrals and tail bounds."""

import math

import pytest
from scipy import stats

from src.domain.models.errors import DomainError
from src.domain.models.params import NodeColor, Regime, RegimeSpec
from src.domain.theory.beta import BetaSpec
from src.domain.theory.bounds import TailKind, tail_bounds, zeta
from src.domain.theory.closed_form import black_limit_r2
from src.domain.theory.ode import beta_integral
from src.domain.theory.prediction import predict, theory_table
from src.domain.theory.timing import color_identity_gap, eta, timing_tau, timing_tau_color


@pytest.fixture
def supercritical():
    """q = g = 500, alpha_R = 2, alpha_B = 0.75."""
    return RegimeSpec(Regime.Q_EQUALS_G, 2.0, 0.75, 500.0)


@pytest.fixture
def subcritical():
    """q = g = 500, alpha_R = 0.8, alpha_B = 0.5."""
    return RegimeSpec(Regime.Q_EQUALS_G, 0.8, 0.5, 500.0)


@pytest.mark.unit
class TestPredict:
    """Tests for predict()."""

    def test_subcritical_limits(self, subcritical):
        """A_R*/q -> 1.1056 and A_B*/q -> 0.5858."""
        prediction = predict(subcritical, 2)
        assert prediction.subcritical
        assert prediction.limit_ar == pytest.approx(1.10557, abs=1e-5)
        assert prediction.limit_ab_over_q == pytest.approx(0.58579, abs=1e-5)
        assert prediction.kappa_g is None
        assert prediction.kappa_f == pytest.approx(prediction.z_r + prediction.z_b)

    def test_supercritical_limits(self, supercritical):
        """Red percolates and A_B*/q matches the closed form."""
        prediction = predict(supercritical, 2)
        assert prediction.ar_scale == "n"
        assert prediction.limit_ar == 1.0
        assert prediction.kappa_g == pytest.approx(math.pi, abs=1e-8)
        assert prediction.limit_ab_over_q == pytest.approx(black_limit_r2(2.0, 0.75), abs=1e-7)
        assert prediction.kappa_f is None

    def test_between_scales(self):
        """For g << q << 1/p the black limit has an explicit form."""
        prediction = predict(RegimeSpec(Regime.G_LL_Q_LL_PINV, 2.0, 1.0, 1000.0), 2)
        assert prediction.kappa_g == pytest.approx(1.0)
        assert prediction.limit_ab_over_q == pytest.approx(2.0)

    def test_large_q(self):
        """Above 1/p black never grows beyond its seeds."""
        prediction = predict(RegimeSpec(Regime.PINV_LL_Q_LL_N, 2.0, 1.0, 1e6), 2)
        assert prediction.limit_ab_over_q == 1.0
        assert prediction.timing_tau(0.5) == pytest.approx(0.5)

    @pytest.mark.slow
    def test_q_equals_pinv_is_estimated(self):
        """At q = 1/p the black limit is a numeric estimate above alpha_B."""
        prediction = predict(RegimeSpec(Regime.Q_EQUALS_PINV, 2.0, 1.0, 1e4), 2)
        assert prediction.estimated
        assert prediction.limit_ab_over_q > 1.0

    def test_eta_attached_with_instance(self):
        """eta is filled in only when n and p are given."""
        spec = RegimeSpec(Regime.Q_EQUALS_PINV, 2.0, 1.0, 1e4)
        assert predict(RegimeSpec(Regime.PINV_LL_Q_LL_N, 2.0, 1.0, 1e5), 2).eta is None
        assert eta(spec.regime, 1_000_000, 1e-4, spec.q) == pytest.approx(100.0)

    def test_to_dict(self, supercritical):
        """Unbounded kappas appear as null with a flag."""
        data = predict(supercritical, 2, n=100_000, p=1e-4).to_dict()
        assert data["kappa_f"] is None
        assert data["kappa_f_unbounded"] is True
        assert data["kappa_g_unbounded"] is False
        assert data["eta"] == 1.0

    def test_theory_table(self, subcritical, supercritical):
        """One formatted row per spec; unbounded entries print +inf."""
        rows = theory_table([subcritical, supercritical], 2)
        assert rows[0]["f_R_limit"] == "0.305573"
        assert rows[1]["kappa_f"] == "+inf"
        assert rows[1]["f_R_limit"] == "+inf"


@pytest.mark.unit
class TestTiming:
    """Tests for eta and the timing integrals."""

    @pytest.mark.parametrize(
        "regime,q,expected",
        [
            (Regime.Q_EQUALS_G, 500.0, 1.0),
            (Regime.G_LL_Q_LL_PINV, 1000.0, 10.0),
            (Regime.Q_EQUALS_PINV, 1e4, 100.0),
            (Regime.PINV_LL_Q_LL_N, 1e5, 10.0),
        ],
    )
    def test_eta(self, regime, q, expected):
        """eta for n = 1e6, p = 1e-4, r = 2."""
        assert eta(regime, 1_000_000, 1e-4, q) == pytest.approx(expected)

    def test_eta_domain(self):
        """eta needs positive n and q."""
        with pytest.raises(DomainError):
            eta(Regime.Q_EQUALS_G, 0, 1e-4, 1.0)

    def test_tolerance_stable(self):
        """Halving the quadrature tolerance moves the result by under 1e-7."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 2.0, 0.75)
        coarse = timing_tau(spec, 1.0)
        fine = timing_tau(spec, 1.0, epsrel=0.5e-8)
        assert coarse > 0
        assert abs(coarse - fine) < 1e-7

    def test_beyond_kappa_f(self):
        """kappa at or past kappa_f is rejected."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 0.8, 0.5)
        with pytest.raises(DomainError, match="kappa_f"):
            timing_tau(spec, 0.5)

    def test_zero(self):
        """No activations take no time."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 2.0, 0.75)
        assert timing_tau(spec, 0.0) == 0.0
        assert timing_tau_color(spec, NodeColor.BLACK, 0.0) == 0.0

    def test_color_identity(self):
        """The time of the kappa_S q-th S activation equals the beta_S integral."""
        spec = BetaSpec(Regime.Q_EQUALS_G, 2, 2.0, 0.75)
        assert color_identity_gap(spec, NodeColor.BLACK, 0.1) < 1e-7
        assert beta_integral(spec, NodeColor.BLACK, 0.1) > 0


@pytest.mark.unit
class TestBounds:
    """Tests for the deviation bounds."""

    def test_zeta(self):
        """zeta(1/2) = 1/2 - log(2)/2 and zeta(0) = 1."""
        assert zeta(0.5) == pytest.approx(0.15343, abs=1e-5)
        assert zeta(0.0) == 1.0
        assert zeta(1.0) == 0.0

    def test_binomial_upper_dominates(self):
        """The bound is above the exact upper tail."""
        m, q, k = 200, 0.05, 20
        exact = stats.binom.sf(k - 1, m, q)
        assert tail_bounds(TailKind.BINOMIAL_UPPER, m, q, k) >= exact

    def test_poisson_lower_dominates(self):
        """The bound is above the exact lower tail."""
        lam, k = 30.0, 15
        exact = stats.poisson.cdf(k, lam)
        assert tail_bounds(TailKind.POISSON_LOWER, lam, None, k) >= exact

    def test_wrong_side(self):
        """Upper-tail bounds need k >= mu."""
        with pytest.raises(DomainError):
            tail_bounds(TailKind.BINOMIAL_UPPER, 200, 0.05, 5)

    def test_coarse_range(self):
        """The coarse bound needs k >= e^2 mu."""
        with pytest.raises(DomainError):
            tail_bounds(TailKind.BINOMIAL_UPPER_COARSE, 100, 0.1, 20)
        assert tail_bounds(TailKind.BINOMIAL_UPPER_COARSE, 100, 0.1, 80) < 1e-10
