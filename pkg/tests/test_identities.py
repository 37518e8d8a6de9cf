from __future__ import annotations

import json
from math import factorial

import pytest
import sympy
from oracles import brute_psi_row

from mersenne_lab import identities as ids
from mersenne_lab.errors import CapExceeded


@pytest.mark.parametrize(("m", "want"), [(0, 2), (1, 1), (2, 3)])
def test_lucas_small(m, want):
    assert ids.lucas_number(m) == want


def test_lucas_against_sympy():
    for m in (5, 16, 64, 300):
        assert ids.lucas_number(m) == int(sympy.lucas(m))
    assert ids.lucas_number(16) == 2207


def test_lucas_seq_recurrence_and_errors():
    seq = ids.LucasSeq()
    seq[30]
    c = seq.cache
    assert all(c[m + 1] == c[m] + c[m - 1] for m in range(1, len(c) - 1))
    with pytest.raises(ValueError):
        seq[-1]


@pytest.mark.parametrize(("n", "left", "right"), [(4, 32, 2 * 16), (1, 1, 1), (6, 384, 2 * 6 * 32), (3, 4, 4), (5, 32, 32)])
def test_factorial_examples(n, left, right):
    r = ids.factorial_identity_check(n)
    (c,) = r.checks
    assert (c.left, c.right, c.passed) == (left, right, True)
    assert left == 4 ** (n // 2) * factorial(n // 2)


def test_factorial_all_to_200():
    assert all(ids.factorial_identity_check(n).passed for n in range(1, 201))


def test_factorial_bad_n():
    with pytest.raises(ValueError):
        ids.factorial_identity_check(0)


def test_weighted_n16_against_brute_row():
    row = brute_psi_row(16)
    even = [(k, c) for k, c in enumerate(row) if k % 2 == 0]
    assert sum(c * 2**k for k, c in even) == 2
    assert sum(c for _, c in even) == -1
    assert sum(c * 3**k for k, c in even) == 2207
    r = ids.weighted_sum_identities(16)
    assert r.passed and r.conjectural
    assert [c.left for c in r.checks] == [2, -1, 2207]


@pytest.mark.parametrize("n", [16, 64, 256, 1024, 4096])
def test_weighted_powers_of_two(n):
    assert ids.weighted_sum_identities(n).passed


@pytest.mark.parametrize("n", [8, 24, 48, 4, 17])
def test_weighted_rejects_other_n(n):
    with pytest.raises(ValueError):
        ids.weighted_sum_identities(n)


def test_weighted_cap():
    with pytest.raises(CapExceeded):
        ids.weighted_sum_identities(1024, cap=512)


def test_weighted_sample_is_recorded_not_asserted():
    reports = ids.weighted_sum_sample()
    assert [r.n for r in reports] == [8, 24, 32]
    assert all(r.conjectural for r in reports)
    by_n = {r.n: r for r in reports}
    # n = 24 is not a power of two and the plain sum does not come out as -1
    assert not by_n[24].passed
    assert [c.identity for c in by_n[24].failures()] == ["sum_psi"]


def test_sign_table_rows_from_examples():
    r16 = ids.sign_zero_pattern_check(16, 8)[16]
    assert [c.left for c in r16.checks[:8]] == [1, 0, -1, 0, 1, 0, -1, 0]
    assert r16.checks[-1].identity == "top_k8" and r16.checks[-1].left == 1
    r11 = ids.sign_zero_pattern_check(11, 5)[11]
    assert [c.left for c in r11.checks[:2]] == [-1, 1]
    r2 = ids.sign_zero_pattern_check(2, 1)[2]
    assert [c.left for c in r2.checks] == [0, 1]


def test_sign_table_against_brute_rows():
    for n in range(0, 41):
        for k, v in enumerate(brute_psi_row(n)):
            sign = (v > 0) - (v < 0)
            assert ids.SIGNS[n % 8][k % 8] == sign, (n, k)


def test_sign_table_full():
    reports = ids.sign_zero_pattern_check(64, 64)
    assert all(r.passed for r in reports)


def test_sign_table_k_max_truncates():
    r = ids.sign_zero_pattern_check(20, 3)[20]
    assert [c.identity for c in r.checks] == ["sign_k0", "sign_k1", "sign_k2", "sign_k3"]


def test_sign_table_bounds():
    with pytest.raises(CapExceeded):
        ids.sign_zero_pattern_check(10, 3, cap=5)
    with pytest.raises(ValueError):
        ids.sign_zero_pattern_check(-1, 3)


def test_sign_periodicity():
    r = ids.sign_periodicity_check(64)
    assert r.passed
    assert len(r.checks) == 48  # 8 classes of n, 8 of k, minus 16 zero lanes


def test_report_round_trip():
    for r in (ids.factorial_identity_check(12), ids.weighted_sum_identities(64), ids.weighted_sum_sample()[1]):
        back = ids.IdentityReport.from_dict(json.loads(json.dumps(r.to_dict())))
        assert back == r
