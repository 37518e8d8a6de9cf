from __future__ import annotations

import json

import pytest
import sympy
from oracles import ll_reference

from mersenne_lab import primality as pt
from mersenne_lab.coefficients import phi_exact
from mersenne_lab.errors import CapExceeded
from mersenne_lab.explorer import (
    FactorReport,
    PartialSumTrace,
    PatternReport,
    ScanResult,
    TraceRecord,
    classify_epsilon_pattern,
    factor_sum,
    family_members,
    full_sum_exact,
    partial_sum_trace,
    scan_exponent_family,
)
from mersenne_lab.modarith import FactorWitness


def test_trace_p5():
    t = partial_sum_trace(5)
    assert t.order == [8, 0, 2, 4, 6]
    assert t.terms == [2, 2, -(2**3), 2**2 + 1, -1]
    assert t.running_sums == [2, 2**2, -(2**2), 1, 0]
    assert t.complete


def test_trace_p7_final_zero():
    assert partial_sum_trace(7).running_sums[-1] == 0


@pytest.mark.parametrize("p", [5, 7, 13, 17])
def test_trace_against_exact_terms(p):
    t = partial_sum_trace(p)
    M, n = 2**p - 1, 2 ** (p - 1)
    if p <= 7:
        for r in t.records:
            want = phi_exact(n, r.k) % M
            assert r.term % M == want
    running = 0
    for r in t.records:
        running += r.term
        assert (running - r.running_sum) % M == 0
        assert -M / 2 < r.running_sum <= M / 2


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_trace_sum_matches_v2_and_first_term(p):
    t = partial_sum_trace(p)
    assert t.records[0].term == 2
    v2 = pt.test_v2_closed_form(p)
    if t.complete:
        assert t.running_sums[-1] % (2**p - 1) == v2.residue
    else:
        assert t.witness == v2.factor_witness


def test_trace_witness_for_composite_m():
    t = partial_sum_trace(11)
    assert t.witness == FactorWitness(23, 2047)
    assert not t.complete
    assert t.order[-1] == 22


def test_trace_caps():
    with pytest.raises(CapExceeded):
        partial_sum_trace(23)
    with pytest.raises(ValueError):
        partial_sum_trace(3)


def test_trace_csv_and_round_trip():
    t = partial_sum_trace(5)
    assert t.to_csv().splitlines() == ["k,term,running_sum", "8,2,2", "0,2,4", "2,-8,-4", "4,5,1", "6,-1,0"]
    for tr in (t, partial_sum_trace(11)):
        assert PartialSumTrace.from_dict(json.loads(json.dumps(tr.to_dict()))) == tr


def test_classify_p5():
    r = classify_epsilon_pattern(partial_sum_trace(5))
    # +2, +4 and -4 fit exactly; the fourth sum is +1 where +8 + e is expected
    assert r.partial_sums == (2, 4, -4, 1, 0)
    assert r.deviations == (0, 0, 0, -7, 8)
    assert r.status == "mismatch" and r.mismatch_position == 4
    assert r.epsilons == (0,)
    assert r.relaxed_match
    assert r.beyond_template == 0


def test_classify_all_zero_trace():
    records = tuple(TraceRecord(k, 0, 0) for k in (8, 0, 2, 4, 6))
    r = classify_epsilon_pattern(PartialSumTrace(5, records))
    assert r.mismatch_position == 1 and not r.matches_hypothesis


def test_classify_empty_trace():
    r = classify_epsilon_pattern(PartialSumTrace(5, ()))
    assert r.mismatch_position == 1


def test_classify_synthetic_match_and_undetermined():
    sums = [2, 4, -3, 8, -9, 16, -16]
    records = tuple(TraceRecord(2 * i, 0, s) for i, s in enumerate(sums))
    r = classify_epsilon_pattern(PartialSumTrace(13, records))
    assert r.status == "match" and r.matches_hypothesis
    assert r.epsilons == (1, 0, -1, 0, 0)
    longer = records + (TraceRecord(99, 0, 5),)
    r2 = classify_epsilon_pattern(PartialSumTrace(13, longer))
    assert r2.status == "undetermined" and r2.beyond_template == 1


def test_classify_p11_recorded():
    r = classify_epsilon_pattern(partial_sum_trace(11))
    assert r.status in ("match", "mismatch", "undetermined")
    assert not r.complete_trace
    assert PatternReport.from_dict(json.loads(json.dumps(r.to_dict()))) == r


def test_full_sum_exact_p5():
    assert full_sum_exact(5) == 37634 == 2 * 31 * 607
    assert full_sum_exact(5) % 31 == 0


def test_full_sum_exact_direct():
    for p in (5, 7):
        n = 2 ** (p - 1)
        assert full_sum_exact(p) == sum(phi_exact(n, k) for k in range(0, n // 2 + 1, 2))


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_mersenne_divides_iff_prime(p):
    assert (full_sum_exact(p) % (2**p - 1) == 0) == ll_reference(p)


def test_full_sum_cap():
    with pytest.raises(CapExceeded):
        full_sum_exact(17)
    assert full_sum_exact(17, cap=17) % (2**17 - 1) == 0


def test_factor_sum_p5():
    r = factor_sum(5, budget_ms=2000)
    assert r.factors == ((2, 1), (31, 1), (607, 1))
    assert r.complete and r.mersenne_divides and r.m_factor_relation == ()


def test_factor_sum_p7():
    r = factor_sum(7, budget_ms=5000)
    assert dict(r.factors)[127] >= 1
    assert r.product() == abs(r.sum)
    if r.complete:
        assert dict(r.factors) == sympy.factorint(r.sum)


def test_factor_sum_p11_records_m_factors():
    r = factor_sum(11, budget_ms=2000)
    assert [q for q, _ in r.m_factor_relation] == [23, 89]
    for q, divides in r.m_factor_relation:
        assert divides == (r.sum % q == 0)
    assert not r.mersenne_divides
    assert r.product() == abs(r.sum)
    for q, _ in r.factors:
        assert sympy.isprime(q)


def test_factor_report_round_trip():
    r = factor_sum(11, budget_ms=500)
    assert FactorReport.from_dict(json.loads(json.dumps(r.to_dict()))) == r


def test_factor_sum_budget_validation():
    with pytest.raises(ValueError):
        factor_sum(5, budget_ms=0)


def test_family_members():
    assert family_members("2^a+1", range(1, 5)) == [(1, None, 3), (2, None, 5), (3, None, 9), (4, None, 17)]
    assert family_members("2^a-2^b+1", [3], [0, 1, 2, 3]) == [(3, 0, 8), (3, 1, 7), (3, 2, 5)]
    assert family_members("2^a+2^b-1", [3], [1]) == [(3, 1, 9)]
    with pytest.raises(ValueError):
        family_members("3^a", [1])


def test_scan_examples():
    s = scan_exponent_family("2^a+1", [2])
    assert [r.p for r in s.reports] == [5]
    assert s.reports[0] == classify_epsilon_pattern(partial_sum_trace(5))
    assert [r.p for r in scan_exponent_family("2^a-1", [3]).reports] == [7]
    assert [r.p for r in scan_exponent_family("2^a+1", [4]).reports] == [17]


def test_scan_skips_and_summary():
    s = scan_exponent_family("2^a-1", range(1, 7))
    assert [r.p for r in s.reports] == [7]
    assert dict(s.skipped) == {1: "not prime", 3: "below 5", 15: "not prime", 31: "above trace cap 19", 63: "not prime"}
    summary = s.summary
    assert summary["tested"] == 1
    assert summary["match"] + summary["mismatch"] + summary["undetermined"] == 1


def test_scan_empty_range():
    with pytest.raises(ValueError):
        scan_exponent_family("2^a+1", [])
    with pytest.raises(ValueError):
        scan_exponent_family("2^a+2^b+1", [3], [])


def test_scan_parallel_matches_serial():
    a = scan_exponent_family("2^a-2^b+1", range(2, 5), range(0, 4))
    b = scan_exponent_family("2^a-2^b+1", range(2, 5), range(0, 4), workers=2)
    assert a == b
    assert [r.p for r in a.reports] == sorted(r.p for r in a.reports)
    assert ScanResult.from_dict(json.loads(json.dumps(a.to_dict()))) == a
