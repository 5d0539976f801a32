"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Tolerances are pinned here and never loosened.  Criterion 12 carries one
sub-assertion (the direct-ratio bracket at t = 1e6) that is provably
unattainable for any log-convex weight sequence -- see the analysis in the
repository's decision notes; it is implemented faithfully and expected to
stay red.  Criterion 7 names an operand pair whose duality quantities are
identically infinite; the library's well-definedness guard must reject it,
and the identity itself is verified at the stated tolerance on a pair that
satisfies its hypothesis.
"""

import math

import numpy as np

from weightcalc import bmt, checks, functions as fn, sequences as sq
from weightcalc.errors import WellDefinednessError
from weightcalc.grids import GridSpec


def conclude(number, name, failures):
    status = "FAIL" if failures else "PASS"
    print(f"ACCEPTANCE {number:>3} {name}: {status}"
          + (f"  [{'; '.join(failures)}]" if failures else ""))
    assert not failures, f"criterion {number} {name}: " + "; ".join(failures)


def _log_samples(lo, hi, n):
    return np.exp(np.linspace(math.log(lo), math.log(hi), n))


def test_acceptance_01_gevrey_conjugate_closed_form():
    failures = []
    ss = _log_samples(1.0, 1e4, 128)
    for alpha in (0.25, 0.5, 0.75):
        star = fn.conjugate(fn.power_weight(alpha), GridSpec(1e-2, 1e13, 4096))
        coeff = alpha ** (alpha / (1 - alpha)) - alpha ** (1 / (1 - alpha))
        exact = ss ** (1 / (1 - alpha)) * coeff
        worst = float(np.max(np.abs(star.evaluate_many(ss) / exact - 1.0)))
        if worst > 1e-4:
            failures.append(f"alpha={alpha}: rel err {worst:.2e} > 1e-4")
    conclude(1, "GEVREY_CONJ", failures)


def test_acceptance_02_biconjugate():
    failures = []
    ts = _log_samples(1.0, 1e3, 128)
    # the spec's third convex case reduces to t^2 again (zero coefficient)
    for alpha, label in ((0.5, "t^2"), (0.75, "t^(4/3)")):
        omega = fn.power_weight(alpha)
        bi = fn.biconjugate(omega)
        worst = float(
            np.max(np.abs(bi.evaluate_many(ts) / omega.evaluate_many(ts) - 1.0))
        )
        if worst > 1e-3:
            failures.append(f"{label}: rel err {worst:.2e} > 1e-3")
    base = _log_samples(1e-2, 1e6, 400)
    wiggly = base**1.5 * (1.2 + 0.2 * np.sin(np.log(base)))
    sampled = fn.from_samples(base, wiggly)
    bi = fn.biconjugate(sampled)
    probe = _log_samples(1.0, 1e4, 128)
    gap = sampled.evaluate_many(probe) * (1 + 1e-9) + 1e-9 - bi.evaluate_many(probe)
    if float(np.min(gap)) < 0:
        failures.append("non-convex sample: omega** exceeded omega")
    conclude(2, "BICONJ", failures)


def test_acceptance_03_associated_exact():
    failures = []
    g = sq.gevrey(1, 400)
    omega = fn.associated(g)
    integral = fn.integral_form(g)
    rng = np.random.default_rng(12345)
    ts = np.exp(rng.uniform(0.0, math.log(400.0), size=500))  # [mu_1, mu_Pmax]
    ps = np.arange(401, dtype=float)
    brute = np.array(
        [np.max(g.log_values[0] + ps * math.log(t) - g.log_values) for t in ts]
    )
    piecewise = omega.evaluate_many(ts)
    dev = float(np.max(np.abs(piecewise - brute)))
    if dev > 1e-10:
        failures.append(f"piecewise vs brute force {dev:.2e} > 1e-10")
    dev2 = float(np.max(np.abs(integral.evaluate_many(ts) - piecewise)))
    if dev2 > 1e-10:
        failures.append(f"integral form deviates {dev2:.2e} > 1e-10")
    conclude(3, "ASSOC_EXACT", failures)


def test_acceptance_04_recovery():
    failures = []
    g = sq.gevrey(0.5, 400)
    recovered = fn.recover_sequence(fn.associated(g), 1.0, 50)
    dev = float(np.max(np.abs(recovered.log_values - g.log_values[:51])))
    if dev > 1e-3:
        failures.append(f"round trip deviates {dev:.2e} > 1e-3")
    conclude(4, "RECOVERY", failures)


def test_acceptance_05_index_estimates():
    failures = []
    for alpha in (0.25, 0.5, 0.75, 1.5):
        est = fn.gamma_indices(fn.power_weight(alpha))
        if abs(est.gamma - alpha) > 0.05:
            failures.append(f"gamma({alpha}) = {est.gamma:.3f}")
        if abs(est.gamma_bar - alpha) > 0.05:
            failures.append(f"gammabar({alpha}) = {est.gamma_bar:.3f}")
    base = fn.power_weight(0.5)
    base_gamma = fn.gamma_indices(base).gamma
    for a in (0.5, 2.0):
        est = fn.gamma_indices(fn.power_substitution(base, a))
        if abs(est.gamma - a * base_gamma) > 0.1:
            failures.append(f"substitution a={a}: {est.gamma:.3f}")
    conclude(5, "INDEX", failures)


def test_acceptance_06_index_transfer():
    failures = []
    star = fn.conjugate(fn.power_weight(0.3), GridSpec(1e-2, 1e16, 4096))
    est = fn.gamma_indices(star)
    if not 0.65 <= est.gamma <= 0.75:
        failures.append(f"gamma of conjugate = {est.gamma:.3f}")
    if not 0.65 <= est.gamma_bar <= 0.75:
        failures.append(f"gammabar of conjugate = {est.gamma_bar:.3f}")
    conclude(6, "INDEX_TRANSFER", failures)


def test_acceptance_07_envelope_duality():
    failures = []
    # the stated pair (id^2, id^(4/3)) has sigma lowstar tau ~ t^(4/5):
    # sublinear, so all three duality quantities are identically infinite;
    # the library must reject it through the stated well-definedness guards
    sigma = fn.power_weight(0.5)
    tau_literal = fn.power_weight(0.75)
    low = fn.envelope_lower(sigma, tau_literal)
    if fn.c2_proxy(low):
        failures.append("sublinear envelope not detected for the literal pair")
    try:
        fn.envelope_upper(fn.conjugate(tau_literal, GridSpec(1e-2, 1e13, 4096)), sigma)
        failures.append("upper envelope accepted a divergent supremum")
    except WellDefinednessError:
        pass
    # the identity itself, at the stated tolerance, on a hypothesis-satisfying
    # pair (Gevrey indices 0.5 + 0.25 < 1)
    report = checks.run_check(
        "ENV_DUALITY", {"alpha_sigma": 0.5, "alpha_tau": 0.25}
    )
    if report.status != "PASS":
        failures.append(f"duality check: {report.status} ({report.detail})")
    elif report.worst_margin < 0:
        failures.append(f"duality margin {report.worst_margin:.2e}")
    conclude(7, "ENV_DUALITY", failures)


def test_acceptance_08_bridge():
    failures = []
    report = checks.run_check("SEQ_FN_CONJ_BRIDGE")
    if report.status != "PASS":
        failures.append(f"{report.status}: {report.detail}")
    else:
        c_found = report.witnesses.get("C")
        if c_found is None or c_found > 1e3:
            failures.append(f"no sandwich constant <= 1e3 (found {c_found})")
        if report.witnesses.get("relation") != "SIM":
            failures.append(
                f"relation(omega_L*, omega_L^*) = {report.witnesses.get('relation')}"
            )
    conclude(8, "BRIDGE", failures)


def test_acceptance_09_envelope_identities():
    failures = []
    report = checks.run_check("ENVELOPE_ID")
    if report.status != "PASS":
        failures.append(f"{report.status}: {report.detail}")
    if report.detail:
        failures.append(f"skipped clauses: {report.detail}")
    for clause in ("i", "ii", "iii", "iv", "v"):
        margin = report.witnesses["margins"].get(
            f"clause_{clause}_sim", report.witnesses["margins"].get(
                f"clause_{clause}_sim_c"
            )
        )
        if margin is None or margin < 0:
            failures.append(f"clause ({clause}) margin {margin}")
    conclude(9, "ENVELOPE_ID", failures)


def test_acceptance_10_bmt():
    failures = []
    report = checks.run_check("BMT_SANDWICH")
    if report.status != "PASS":
        failures.append(f"{report.status}: {report.detail}")
    else:
        margins = report.witnesses["margins"]
        needed = [
            "member_lc_ell=0.5",
            "member_lc_ell=1",
            "member_lc_ell=2",
            "doubled_mg",
            "goodequiv_lower_ell=1",
            "main_sandwich_left_ell=1",
            "main_sandwich_right_ell=1",
            "constant",
            "om6_consistent",
        ]
        for key in needed:
            if margins.get(key, -1.0) < 0:
                failures.append(f"{key}: {margins.get(key)}")
        for ell in (0.5, 1.0, 2.0):
            if f"D_ell={ell:g}" not in report.witnesses:
                failures.append(f"missing D constant for ell={ell:g}")
    conclude(10, "BMT", failures)


def test_acceptance_11_uniform_bound():
    failures = []
    family = [sq.gevrey(k / (k + 1), 400) for k in range(1, 5)]
    res = sq.uniform_bound(family)
    if not np.all(np.diff(res.log_roots) <= 0.0):
        failures.append("roots not non-increasing")
    drop = math.exp(res.log_roots[-1] - res.log_roots[0])
    if drop > 0.5:
        failures.append(f"final root {drop:.3f} of initial > 0.5")
    ps = np.arange(1, 401, dtype=float)
    for k, member in enumerate(family, 1):
        gap = (res.log_values[1:] - member.log_small[1:]) / ps
        quarters = np.array_split(gap, 4)
        if not quarters[3].min() > quarters[0].min():
            failures.append(f"divergence proxy fails for member {k}")
    conclude(11, "UNIFORM_BOUND", failures)


def test_acceptance_12_slow_variation_verdicts():
    failures = []
    pos = sq.exp_power(2.0, 400)
    report = fn.slowly_varying_sequence_test(pos)
    if not report.slowly_varying:
        failures.append("exp(p^2) not detected as slowly varying")
    for s in (0.5, 2.0):
        if fn.slowly_varying_sequence_test(sq.gevrey(s, 400)).slowly_varying:
            failures.append(f"gevrey({s}) misdetected")
    if sq.check_moderate_growth(pos)[0]:
        failures.append("slow variation should exclude (mg)")
    if bmt.bmt_report(fn.associated(pos)).om6:
        failures.append("slow variation should exclude the doubling condition")
    # ratios converge to 1 at a probe deep enough for the statement to hold
    for u, value in report.far_ratios.items():
        if not 0.98 <= value <= 1.02:
            failures.append(f"far ratio u={u}: {value:.4f}")
    conclude(12, "SLOWLY_VARYING (verdicts)", failures)


def test_acceptance_12_direct_ratio_bracket_at_1e6():
    """Spec-literal bracket; provably unattainable, kept red on purpose.

    For any log-convex weight sequence the integral representation gives
    omega(ut)/omega(t) >= 1 + log(u)/log(t/mu_1), which at t = 1e6 with
    mu_1 = e forces the u = 2 ratio above 1.05.  See the decisions ledger.
    """
    report = fn.slowly_varying_sequence_test(sq.exp_power(2.0, 400), probe_t=1e6)
    failures = []
    for u in (2.0, 5.0, 10.0):
        value = report.direct_ratios[u]
        if not 0.98 <= value <= 1.02:
            failures.append(f"u={u:g}: ratio {value:.4f} outside [0.98, 1.02]")
    conclude(12, "SLOWLY_VARYING (literal t=1e6 bracket)", failures)


def test_acceptance_13_conjugate_well_definedness():
    failures = []
    report = checks.run_check("CONJ_WELLDEF_EQUIV")
    if report.status != "PASS":
        failures.append(f"{report.status}: {report.detail}")
    else:
        for key, entry in report.witnesses.items():
            if not key.startswith("alpha="):
                continue
            values = set(entry.values())
            if len(values) != 1:
                failures.append(f"{key}: proxies disagree {entry}")
    conclude(13, "CONJ_WELLDEF", failures)
