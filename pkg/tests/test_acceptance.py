"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion lines
and timings.
"""
import time
from itertools import permutations

import pytest

from fibreg.fibcore import (
    pisano_period,
    primes_up_to,
    restricted_period,
)
from fibreg.kernel import conjecture_scan, kernel_rank
from fibreg.lengyel import (
    digit_sum_invariance_check,
    direct_valuation,
    lengyel_valuation,
    wall_check,
)
from fibreg.representation import (
    build_for_class,
    build_one_four,
    verify_monoid_structure,
    verify_relations,
)


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num} failed: {detail}"


@pytest.fixture(scope="module")
def scan_200():
    return conjecture_scan(200)


def test_criterion_1_triple_oracle_agreement():
    started = time.perf_counter()
    mismatches = []
    for p in primes_up_to(50):
        rep = build_for_class(p)
        for n in range(1, 5001):
            closed = lengyel_valuation(p, n)
            if closed != direct_valuation(p, n) or closed != rep.evaluate(n - 1):
                mismatches.append((p, n))
    elapsed = time.perf_counter() - started
    _line(
        1,
        not mismatches and elapsed < 60.0,
        f"direct = closed form = matrix for p <= 50, n <= 5000 "
        f"({len(mismatches)} mismatches, {elapsed:.1f}s)",
    )


def test_criterion_2_published_rank_values():
    expected = {2: 5, 5: 2, 11: 11, 29: 15, 47: 17}
    got = {p: kernel_rank(p) for p in expected}
    ok = all(r.rank == expected[p] and r.stabilized for p, r in got.items())
    _line(2, ok, "kernel ranks " + ", ".join(
        f"p={p}->{got[p].rank}(want {expected[p]})" for p in sorted(expected)))


@pytest.mark.parametrize("p,expected", [(113, 20), (233, 14)])
def test_criterion_2_stretch_ranks(p, expected):
    started = time.perf_counter()
    report = kernel_rank(p)
    elapsed = time.perf_counter() - started
    _line(
        2,
        report.rank == expected and report.stabilized and elapsed < 600.0,
        f"stretch p={p}: rank {report.rank} (want {expected}), "
        f"stabilized={report.stabilized}, {elapsed:.1f}s",
    )


def test_criterion_3_bound_compliance(scan_200):
    bad = [r.p for r in scan_200 if not (r.stabilized and r.rank <= r.theorem_bound)]
    for p in (2, 5):
        r = kernel_rank(p)
        if not (r.stabilized and r.rank <= r.theorem_bound):
            bad.append(p)
    _line(3, not bad, f"stabilized rank <= class bound for all p <= 200 "
                      f"(violations: {bad})")


def test_criterion_4_conjectured_rank_value(scan_200):
    bad = [r.p for r in scan_200 if not (r.stabilized and r.rank == r.alpha + 1)]
    _line(4, not bad, f"rank = alpha + 1 for all stabilized 3 <= p <= 200, p != 5 "
                      f"(violations: {bad})")


def test_criterion_5_relation_suites():
    plan = {
        2: 10,
        11: 2, 19: 2, 29: 2, 31: 2,
        13: 2, 17: 2, 37: 2,
        3: 4, 7: 4, 23: 4, 43: 4,
    }
    failures = []
    for p, count in plan.items():
        reports = verify_relations(p, 2000)
        if len(reports) != count or not all(r.ok for r in reports):
            failures.append((p, [(r.relation_id, len(r.failures)) for r in reports]))
    _line(5, not failures, f"all relation families clean at n_max = 2000 "
                           f"(failures: {failures})")


def test_criterion_6_digit_sum_examples():
    big = digit_sum_invariance_check(11, 31411600, 13310)
    family_ok = True
    values = set()
    for perm in permutations((1, 2, 8, 9)):
        n = 0
        for d in perm:
            n = n * 11 + d
        values.add(n)
        if lengyel_valuation(11, n) != 1:
            family_ok = False
    endpoints = {1670, 1680, 2330, 12970} <= values
    _line(
        6,
        big == 4 and family_ok and endpoints,
        f"nu_11(F_31411600) = nu_11(F_13310) = {big} (want 4); "
        f"all {len(values)} digit permutations of 1670 give valuation 1",
    )


def test_criterion_7_monoid_structure():
    bad = []
    for p in (11, 19, 29):
        report = verify_monoid_structure(build_one_four(p))
        if not (report.ok and report.products_checked == (p - 1) ** 2):
            bad.append(p)
    _line(7, not bad, f"digit-matrix group law and non-commutation for p in "
                      f"{{11, 19, 29}} (violations: {bad})")


def test_criterion_8_wall_scan_to_1e5():
    started = time.perf_counter()
    positives = []
    for p in primes_up_to(10**5):
        if not wall_check(p).wall_negative:
            positives.append(p)
    elapsed = time.perf_counter() - started
    _line(
        8,
        not positives and elapsed < 600.0,
        f"nu_p(F_alpha(p)) = 1 for all primes p <= 1e5 "
        f"(counterexamples: {positives}, {elapsed:.1f}s)",
    )


def test_criterion_9_quarter_period_identity():
    bad = [
        p
        for p in primes_up_to(10**4)
        if p % 20 in (13, 17) and 4 * restricted_period(p) != pisano_period(p)
    ]
    _line(9, not bad, f"4 alpha(p) = pi(p) for all p = 13,17 mod 20 up to 1e4 "
                      f"(violations: {bad})")
