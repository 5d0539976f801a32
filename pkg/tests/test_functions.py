import math

import numpy as np
import pytest

from weightcalc import functions as fn
from weightcalc import sequences as sq
from weightcalc.errors import (
    DomainExhaustedError,
    PreconditionError,
    WellDefinednessError,
)
from weightcalc.grids import GridSpec, TailWindow


# ---------------------------------------------------------------------------
# associated weight function
# ---------------------------------------------------------------------------


def test_associated_exact_value_and_zero_region():
    omega = fn.associated(sq.gevrey(1, 400))
    assert omega(3.0) == pytest.approx(math.log(27 / 6), abs=1e-12)
    for t in (0.0, 0.3, 1.0):
        assert omega(t) == 0.0


def test_associated_matches_supremum_oracle():
    g = sq.gevrey(1, 400)
    omega = fn.associated(g)
    rng = np.random.default_rng(7)
    ts = np.exp(rng.uniform(0.0, math.log(400.0), size=200))
    ps = np.arange(401, dtype=float)
    brute = np.array(
        [np.max(g.log_values[0] + ps * math.log(t) - g.log_values) for t in ts]
    )
    assert np.max(np.abs(omega.evaluate_many(ts) - brute)) < 1e-10


def test_associated_equals_raw_supremum_after_regularisation():
    # the piecewise evaluator runs on the log-convex minorant, yet it must
    # reproduce the raw supremum of the non-convex input
    bumpy = np.concatenate(([0.0, 5.0], sq.gevrey(1, 40).log_values[2:]))
    omega = fn.associated(sq.from_log_values(bumpy))
    ts = np.linspace(1.5, 30.0, 64)
    ps = np.arange(41, dtype=float)
    brute = np.array([np.max(ps * math.log(t) - bumpy) for t in ts])
    assert np.max(np.abs(omega.evaluate_many(ts) - brute)) < 1e-9


def test_associated_rejects_bounded_roots():
    with pytest.raises(WellDefinednessError):
        fn.associated(sq.from_log_values(np.arange(41.0) * math.log(2.0)))


def test_counting_and_integral_form():
    g = sq.gevrey(1, 400)
    assert fn.counting(g, 7.5) == 7
    assert fn.counting(g, 0.5) == 0
    omega = fn.associated(g)
    integral = fn.integral_form(g)
    ts = np.exp(np.linspace(0.1, math.log(390.0), 128))
    assert np.max(np.abs(integral.evaluate_many(ts) - omega.evaluate_many(ts))) < 1e-12
    assert integral(0.5) == 0.0


def test_integral_form_requires_log_convex():
    alternating = sq.from_log_values([0.0, math.log(10)] * 6)
    with pytest.raises(PreconditionError):
        fn.integral_form(alternating)


# ---------------------------------------------------------------------------
# conjugate transform
# ---------------------------------------------------------------------------


def test_conjugate_square_closed_form():
    star = fn.conjugate(fn.power_weight(0.5))
    ss = np.exp(np.linspace(0.0, math.log(1e4), 128))
    rel = np.abs(star.evaluate_many(ss) / (ss**2 / 4.0) - 1.0)
    assert np.max(rel) < 1e-6
    assert star(0.0) == 0.0


def test_conjugate_rejects_linear_weight():
    with pytest.raises(WellDefinednessError):
        fn.conjugate(fn.identity_weight())


def test_conjugate_at_zero_of_shifted_weight():
    # omega(0) > 0 makes omega*(0) = -omega(0), flagged by sign
    shifted = fn.WeightFunction("sampled", lambda ts: ts**2 + 1.0)
    star = fn.conjugate(shifted, check=False)
    assert star(0.0) == pytest.approx(-1.0)


def test_conjugate_monotone_and_convex_on_samples():
    star = fn.conjugate(fn.power_weight(0.75))
    ss = np.exp(np.linspace(0.0, math.log(100.0), 200))
    vals = star.evaluate_many(ss)
    assert np.all(np.diff(vals) >= -1e-9)
    chord = 0.5 * (vals[:-2] + vals[2:])
    mid = star.evaluate_many(0.5 * (ss[:-2] + ss[2:]))
    assert np.all(mid <= chord * (1 + 1e-8) + 1e-8)


def test_conjugate_fast_growth_inequality():
    omega = fn.power_weight(0.5)
    star = fn.conjugate(omega, GridSpec(1e-2, 1e10, 4096))
    ss = np.exp(np.linspace(0.0, math.log(50.0), 64))
    lower = np.maximum(ss**2 - omega.evaluate_many(ss), ss - omega(1.0))
    assert np.all(star.evaluate_many(ss) >= lower * (1 - 1e-9) - 1e-9)


def test_conjugate_satisfies_c2_automatically():
    star = fn.conjugate(fn.power_weight(0.5))
    assert fn.c2_proxy(star, TailWindow(1e2, 1e6, 256))


def test_conjugate_domain_exhausted_at_edge():
    star = fn.conjugate(fn.power_weight(0.5), GridSpec(1e-2, 1e2, 256))
    with pytest.raises(DomainExhaustedError):
        star(1e6)


# ---------------------------------------------------------------------------
# biconjugate
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [0.5, 0.75])
def test_biconjugate_reproduces_convex_weights(alpha):
    omega = fn.power_weight(alpha)
    bi = fn.biconjugate(omega)
    ts = np.exp(np.linspace(0.0, math.log(1e3), 128))
    rel = np.abs(bi.evaluate_many(ts) / omega.evaluate_many(ts) - 1.0)
    assert np.max(rel) < 1e-3


def test_biconjugate_minorizes_nonconvex():
    base = np.exp(np.linspace(math.log(1e-2), math.log(1e6), 400))
    wiggly = base**1.5 * (1.2 + 0.2 * np.sin(np.log(base)))
    sampled = fn.from_samples(base, wiggly)
    bi = fn.biconjugate(sampled)
    ts = np.exp(np.linspace(0.0, math.log(1e4), 128))
    upper = sampled.evaluate_many(ts)
    assert np.all(bi.evaluate_many(ts) <= upper * (1 + 1e-9) + 1e-9)


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------


def test_envelope_lower_identity_pair():
    env = fn.envelope_lower(fn.identity_weight(), fn.identity_weight())
    ts = np.exp(np.linspace(math.log(10.0), math.log(1e4), 64))
    rel = np.abs(env.evaluate_many(ts) / (2.0 * np.sqrt(ts)) - 1.0)
    assert np.max(rel) < 1e-4
    assert env(0.0) == 0.0


def test_envelope_lower_commutative():
    sigma, tau = fn.power_weight(0.5), fn.power_weight(0.75)
    e1 = fn.envelope_lower(sigma, tau)
    e2 = fn.envelope_lower(tau, sigma)
    ts = np.exp(np.linspace(0.0, math.log(1e4), 64))
    assert np.max(np.abs(e1.evaluate_many(ts) - e2.evaluate_many(ts))) < 1e-9


def test_envelope_upper_calculus_oracle():
    # sup_s sqrt(s) - s/t peaks at s = t^2/4 with value t/4
    env = fn.envelope_upper(fn.power_weight(2.0), fn.identity_weight())
    ts = np.exp(np.linspace(math.log(10.0), math.log(1e4), 64))
    rel = np.abs(env.evaluate_many(ts) / (ts / 4.0) - 1.0)
    assert np.max(rel) < 1e-9
    assert env(0.0) == 0.0


def test_envelope_upper_rejects_dominated_pair():
    with pytest.raises(WellDefinednessError):
        fn.envelope_upper(fn.power_weight(0.5), fn.identity_weight())


def test_envelope_value_at_zero_rules():
    sigma = fn.power_weight(2.0)  # sqrt growth: dominated by tau dilations
    tau = fn.power_weight(0.5)
    low = fn.envelope_lower(sigma, tau)
    assert low(0.0) == sigma(0.0) + tau(0.0)
    up = fn.envelope_upper(sigma, tau)
    assert up(0.0) == sigma(0.0) - tau(0.0)


# ---------------------------------------------------------------------------
# function relations
# ---------------------------------------------------------------------------


def test_relation_fn_reflexive():
    omega = fn.power_weight(0.5)
    verdict = fn.relation_fn(omega, omega)
    assert verdict.sim and verdict.preceq_c
    assert verdict.constants["h"] == 1.0
    assert verdict.constants["C"] == 0.0


def test_relation_fn_associated_factorials_vs_identity():
    omega = fn.associated(sq.gevrey(1, 40000))
    verdict = fn.relation_fn(omega, fn.identity_weight(), TailWindow(10.0, 3e4, 512))
    assert verdict.kind == "SIM"


def test_relation_fn_separated_powers():
    verdict = fn.relation_fn(fn.identity_weight(), fn.power_weight(0.5))
    assert not verdict.preceq  # t^2 is not O(t)
    assert verdict.preceq_rev


def test_relation_fn_slowly_varying_self_triangle_c():
    omega = fn.associated(sq.exp_power(2.0, 400))
    verdict = fn.relation_fn(omega, omega)
    assert verdict.triangle_c


# ---------------------------------------------------------------------------
# growth indices
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.5])
def test_gamma_indices_power_weights(alpha):
    est = fn.gamma_indices(fn.power_weight(alpha))
    assert est.gamma == pytest.approx(alpha, abs=0.05)
    assert est.gamma_bar == pytest.approx(alpha, abs=0.05)
    assert est.gamma <= est.gamma_bar + est.resolution


def test_gamma_indices_power_substitution_law():
    base = fn.power_weight(0.5)
    base_est = fn.gamma_indices(base)
    for a in (0.5, 2.0):
        est = fn.gamma_indices(fn.power_substitution(base, a))
        assert est.gamma == pytest.approx(a * base_est.gamma, abs=0.1)


def test_gamma_indices_slowly_varying_saturates():
    est = fn.gamma_indices(fn.log_power_weight(2.0))
    assert est.gamma_saturated
    assert est.gamma_bar_infinite and math.isinf(est.gamma_bar)


@pytest.mark.parametrize("alpha", [0.25, 0.3, 0.75])
def test_index_transfer_inequalities(alpha):
    # estimator-level transfer: gamma(sigma*) >= 1 - gammabar(sigma) - 0.05
    # and gammabar(sigma*) <= 1 - gamma(sigma) + 0.05
    sigma = fn.power_weight(alpha)
    base = fn.gamma_indices(sigma)
    star = fn.gamma_indices(fn.conjugate(sigma, GridSpec(1e-2, 1e16, 4096)))
    assert star.gamma >= 1.0 - base.gamma_bar - 0.05
    assert star.gamma_bar <= 1.0 - base.gamma + 0.05


def test_associated_gevrey_sim_power_weight():
    omega = fn.associated(sq.gevrey(0.5, 40000))
    verdict = fn.relation_fn(omega, fn.power_weight(0.5), TailWindow(2.0, 180.0, 256))
    assert verdict.sim


# ---------------------------------------------------------------------------
# slow variation
# ---------------------------------------------------------------------------


def _omega_exp_p2_oracle(log_t: float) -> float:
    # sup_p (p log t - p^2) over integer p
    ps = np.arange(0, 401, dtype=float)
    return float(np.max(ps * log_t - ps * ps))


def test_slowly_varying_exp_p2():
    report = fn.slowly_varying_sequence_test(sq.exp_power(2.0, 400))
    assert report.slowly_varying
    assert report.beta3_holds and report.ratio_diverges
    base = _omega_exp_p2_oracle(math.log(1e6))
    for u in (2.0, 5.0, 10.0):
        expected = _omega_exp_p2_oracle(math.log(u * 1e6)) / base
        assert report.direct_ratios[u] == pytest.approx(expected, rel=1e-12)
    # at the feasible far probe the ratios have converged to 1
    for value in report.far_ratios.values():
        assert value == pytest.approx(1.0, abs=0.02)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.0])
def test_gevrey_never_slowly_varying(s):
    report = fn.slowly_varying_sequence_test(sq.gevrey(s, 400))
    assert not report.slowly_varying


def test_slow_variation_co_occurs_with_mg_failure():
    pos = sq.exp_power(2.0, 400)
    assert fn.slowly_varying_sequence_test(pos).slowly_varying
    assert not sq.check_moderate_growth(pos)[0]


# ---------------------------------------------------------------------------
# recovery
# ---------------------------------------------------------------------------


def test_recover_round_trip():
    g = sq.gevrey(0.5, 400)
    recovered = fn.recover_sequence(fn.associated(g), 1.0, 50)
    assert np.max(np.abs(recovered.log_values - g.log_values[:51])) < 1e-3


def test_recover_from_nonconvex_gives_minorant():
    bumpy = sq.from_log_values(
        np.concatenate(([0.0, 2.0], sq.gevrey(1, 400).log_values[2:]))
    )
    recovered = fn.recover_sequence(fn.associated(bumpy), 1.0, 50)
    minorant = sq.log_convex_minorant(bumpy)
    assert np.max(np.abs(recovered.log_values - minorant.log_values[:51])) < 1e-3


def test_recover_closed_form_oracle():
    # sup_t t^p exp(-t^2) = (p/2)^(p/2) e^(-p/2)
    omega = fn.power_weight(0.5)
    recovered = fn.recover_sequence(omega, 1.0, 30)
    ps = np.arange(1, 31, dtype=float)
    exact = 0.5 * ps * (np.log(ps / 2.0) - 1.0)
    assert recovered.log_values[0] == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(recovered.log_values[1:] - exact)) < 1e-9


def test_recover_p0_is_log_m0():
    omega = fn.associated(sq.gevrey(0.5, 400))
    recovered = fn.recover_sequence(omega, 2.5, 20)
    assert recovered.log_values[0] == pytest.approx(math.log(2.5), abs=1e-12)
