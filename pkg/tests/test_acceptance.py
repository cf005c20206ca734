"""Desk-scale acceptance runs; each test prints one PASS/FAIL line in the terminal summary."""

import numpy as np
import pytest

from modelspace_lab.calculus import minimal_function
from modelspace_lab.generators import worked_theta
from modelspace_lab.harness import BLOWUP_EPS, Scenario, run_suite
from modelspace_lab.inner import InnerFunction
from modelspace_lab.jordan import minimal_function_from_theta, model_operator
from modelspace_lab.ratfun import RootSet

SEED = 1

RUNS = {
    "commutant": dict(instance_count=50, degree_cap=8),
    "bicommutant": dict(instance_count=50, degree_cap=12, n_cap=3),
    "membership": dict(instance_count=100, degree_cap=8, n_cap=3),
    "lemma-embed": dict(instance_count=30, degree_cap=10),
    "theta-formula": dict(instance_count=30, degree_cap=6, n_cap=3),
    "jordan": dict(instance_count=40, degree_cap=12, n_cap=3),
    "smirnov": dict(instance_count=100),
    "blowup": dict(instance_count=2),
}


@pytest.fixture(scope="module")
def reports():
    return {suite: run_suite(Scenario(suite, seed=SEED, **kw)) for suite, kw in RUNS.items()}


def meas(report, name):
    return [r["measurements"][name] for r in report.records if name in r["measurements"]]


def statuses(report):
    return [r["status"] for r in report.records]


def finish(record_property, name, ok, detail):
    record_property("criterion", name)
    record_property("detail", detail)
    assert ok, detail


def test_commutant_dimension_and_polynomial_match(reports, record_property):
    r = reports["commutant"]
    dims = all(r["measurements"]["commutant_dimension"] == r["measurements"]["degree"] for r in r.records)
    worst = max(meas(r, "max_match_residual"))
    ok = len(r.records) == 50 and dims and worst <= 1e-7 and r.summary["pass"] == 50
    finish(record_property, "commutant dimension equals degree, basis matches polynomials", ok,
           f"50 instances, dims exact={dims}, worst match residual {worst:.2e}")


def test_bicommutant_is_polynomial_calculus(reports, record_property):
    r = reports["bicommutant"]
    dims = all(d == m for d, m in zip(meas(r, "bicommutant_dimension"), meas(r, "minimal_degree")))
    match = max(meas(r, "max_match_residual"))
    span = max(meas(r, "max_span_residual"))
    local = all(rec["checks"].get("local_smirnov", False) for rec in r.records)
    ok = len(r.records) == 50 and dims and match <= 1e-7 and span <= 1e-7 and local \
        and max(meas(r, "dimension")) <= 12 and r.summary["pass"] == 50
    finish(record_property, "bicommutant dimension equals deg m_T, elements are calculus values", ok,
           f"50 instances, match {match:.2e}, phi(T) span residual {span:.2e}")


def test_k_infinity_membership_agrees_with_primality(reports, record_property):
    r = reports["membership"]
    agree = [rec["checks"]["agreement"] for rec in r.records]
    adversarial = [rec for rec in r.records if rec["measurements"].get("adversarial")]
    ok = len(agree) == 100 and all(agree) and len(adversarial) == 10
    finish(record_property, "K-infinity membership agrees with relative primality", ok,
           f"{sum(agree)}/100 agree, {len(adversarial)} adversarial pairs")


def test_annihilation_and_defects(reports, record_property):
    ann, defects, count = [], [], 0
    for suite in ("commutant", "bicommutant", "jordan", "theta-formula"):
        for rec in reports[suite].records:
            m = rec["measurements"]
            ann.append(m["annihilation"])
            expected_n = {"commutant": 1, "theta-formula": m.get("size")}.get(suite, m.get("dimension"))
            if suite in ("bicommutant", "jordan"):
                defects.append(rec["checks"]["defects"])
            else:
                defects.append(m["defects"] == [expected_n, True])
            count += 1
    worst = max(ann)
    ok = worst <= 1e-9 and all(defects)
    finish(record_property, "minimal function annihilates, defects classify as C0(N)", ok,
           f"{count} instances, worst ||m_T(T)|| {worst:.2e}, defects ok {sum(defects)}/{count}")


def test_embedding_and_quotient_constructions(reports, record_property):
    r = reports["lemma-embed"]
    iso = max(meas(r, "isometry_error"))
    inter = max(max(meas(r, "embed_intertwining")), max(meas(r, "quotient_intertwining")))
    surj = all(rk == d for rk, d in zip(meas(r, "quotient_rank"), meas(r, "m_degree")))
    kern = max(meas(r, "kernel_vs_mKq"))
    deg = max(a + b for a, b in zip(meas(r, "m_degree"), meas(r, "q_degree")))
    note = next((n for n in r.notes if n["kind"] == "erratum-candidate"), None)
    ok = len(r.records) == 30 and iso <= 1e-9 and inter <= 1e-9 and surj and kern <= 1e-8 \
        and deg <= 10 and note is not None
    finish(record_property, "embedding R and quotient Q, kernel is m K_q", ok,
           f"isometry {iso:.2e}, intertwining {inter:.2e}, kernel gap {kern:.2e}, "
           f"erratum record present={note is not None}")


def test_minimal_function_from_theta(reports, record_property):
    r = reports["theta-formula"]
    worst = 0.0
    same = True
    for f, g in zip(meas(r, "formula_zeros"), meas(r, "rank_zeros")):
        if len(f) != len(g):
            same = False
            continue
        for a, b in zip(sorted(f, key=lambda t: (t[0], t[1])), sorted(g, key=lambda t: (t[0], t[1]))):
            same &= a[2] == b[2]
            worst = max(worst, abs(complex(a[0], a[1]) - complex(b[0], b[1])))
    th = worked_theta()
    m = minimal_function_from_theta(th)
    mr = minimal_function(model_operator(th), RootSet(tuple(th.det_inner().zeros)))
    worked = m.same_zeros(InnerFunction.z_power(2)) and mr.same_zeros(InnerFunction.z_power(2))
    sizes_ok = max(meas(r, "size")) <= 3 and max(meas(r, "degree")) <= 6
    ok = len(r.records) == 30 and same and worst <= 1e-7 and worked and sizes_ok \
        and r.summary["pass"] == 30
    finish(record_property, "minimal function from Theta matches the rank route", ok,
           f"30 products, worst zero gap {worst:.2e}, diag(z^2, z) -> z^2: {worked}")


def test_jordan_model_recovery(reports, record_property):
    r = reports["jordan"]
    recovered = [rec["checks"].get("recovered", False) for rec in r.records]
    witness_ok = sum(rec["checks"].get("witness", False) for rec in r.records)
    errors = [rec for rec in r.records if rec["status"] == "fail"]
    ok = len(r.records) == 40 and all(recovered) and witness_ok >= 0.95 * 40 and not errors
    finish(record_property, "Jordan models recovered, quasi-similarity witnessed", ok,
           f"recovered {sum(recovered)}/40, witness {witness_ok}/40, "
           f"inconclusive {r.summary['inconclusive']}")


def test_smirnov_normalization(reports, record_property):
    r = reports["smirnov"]
    norm = max(meas(r, "normalization_error"))
    a0 = [complex(*v) for v in meas(r, "a0")]
    outer = all(rec["checks"]["a_outer"] for rec in r.records)
    ok = len(r.records) == 100 and norm <= 1e-8 and outer and all(z.real > 0 for z in a0)
    finish(record_property, "canonical Smirnov triple normalized with a(0) > 0", ok,
           f"100 functions, worst | |a|^2+|b|^2-1 | {norm:.2e}, min a(0) {min(z.real for z in a0):.3g}")


def test_unbounded_shadow(reports, record_property):
    r = reports["blowup"]
    by_deg = {rec["measurements"]["degree"]: rec["measurements"] for rec in r.records}
    z1, z2 = by_deg[1], by_deg[2]
    exact = max(abs(n * e - 1) for n, e in zip(z1["norms"], BLOWUP_EPS))
    growth = min(z2["growth"])
    ok = exact <= 64 * np.finfo(float).eps and growth >= 50
    finish(record_property, "1/b_eps blows up: exactly 1/eps for z, >= 50 per decade for z^2", ok,
           f"relative error {exact:.1e}, min growth {growth:.1f}")


def test_closed_form_shift_matches_quadrature(reports, record_property):
    gaps = []
    for suite in ("commutant", "bicommutant", "membership", "lemma-embed", "jordan"):
        gaps += meas(reports[suite], "oracle_gap")
    worst = max(gaps)
    ok = worst <= 1e-8
    finish(record_property, "closed-form compressed shift matches quadrature oracle", ok,
           f"{len(gaps)} instances, worst Frobenius gap {worst:.2e}")
