from __future__ import annotations

import sympy
import pytest
from oracles import X, Y, brute_psi_row

from mersenne_lab.coefficients import psi_row_closed
from mersenne_lab.errors import CapExceeded
from mersenne_lab.modarith import QuadInt
from mersenne_lab.oracle import (
    Q,
    S,
    SymmetricPoly,
    expand_xy,
    numeric_spot_check,
    oracle_psi,
    power_sum_poly,
    quadratic_spot_check,
    quotient_xy,
    random_spot_checks,
)


@pytest.mark.parametrize(
    ("n", "want"),
    [
        (2, {(0, 1): 1}),
        (4, {(2, 0): -2, (0, 2): 1}),
        (1, {(0, 0): 1}),
        (0, {(0, 0): 2}),
    ],
)
def test_power_sum_poly_small(n, want):
    assert power_sum_poly(n).coeffs == want


def test_power_sum_poly_6():
    coeffs = power_sum_poly(6).coeffs
    assert coeffs[(2, 1)] == -3 and coeffs[(0, 3)] == 1


def test_oracle_psi_values():
    assert oracle_psi(16) == [2, 0, -16, 0, 20, 0, -8, 0, 1]
    assert oracle_psi(0) == [2]
    assert oracle_psi(3) == [-1, 1]


def test_oracle_matches_sympy_brute_force():
    for n in range(0, 41):
        assert tuple(oracle_psi(n)) == brute_psi_row(n)


def test_oracle_equals_closed_form_to_64():
    for n in range(0, 65):
        assert oracle_psi(n) == psi_row_closed(n)


def test_oracle_cap():
    with pytest.raises(CapExceeded):
        power_sum_poly(600)
    with pytest.raises(CapExceeded):
        power_sum_poly(20, cap=10)
    with pytest.raises(ValueError):
        power_sum_poly(-1)


def test_weighted_degree_is_homogeneous():
    for n in range(0, 41):
        assert power_sum_poly(n).weighted_degrees() == {n - n % 2}


def test_no_stored_zeros():
    p = SymmetricPoly({(1, 0): 0, (0, 1): 3})
    assert p.coeffs == {(0, 1): 3}
    assert (S - S).coeffs == {}


def test_poly_arithmetic():
    assert (Q * S).coeffs == {(1, 1): 1}
    assert (S + Q - Q).coeffs == S.coeffs
    assert S.shift(dq=2).coeffs == {(2, 1): 1}
    assert (S * S - Q.shift(dq=1)).evaluate(2, 5) == 21


def test_xy_expansion_matches_quotient():
    for n in range(0, 33):
        assert expand_xy(power_sum_poly(n)) == quotient_xy(n)


def test_quotient_xy_against_sympy():
    for n in (1, 3, 5, 8, 11):
        expr = sympy.cancel((X**n + Y**n) / (X + Y) ** (n % 2))
        poly = sympy.Poly(expr, X, Y)
        want = {m: int(c) for m, c in poly.terms()}
        assert quotient_xy(n) == want


def test_numeric_spot_check_examples():
    assert numeric_spot_check(5, 2, 1)
    assert (2**5 + 1) // 3 == 11
    assert numeric_spot_check(8, 1, 1)


def test_numeric_spot_check_precondition():
    with pytest.raises(ValueError):
        numeric_spot_check(3, 2, -2)


def test_random_spot_checks_all_hold():
    results = random_spot_checks(trials=100, n_max=40, bound=10)
    assert len(results) == 100
    assert all(ok for *_, ok in results)
    assert all(not (n % 2 and x + y == 0) for n, x, y, _ in results)


def test_random_spot_checks_reproducible():
    assert random_spot_checks(trials=10) == random_spot_checks(trials=10)


def test_quadratic_point_n16():
    assert quadratic_spot_check(16)
    x = QuadInt(1, 1) ** 16
    lhs = 2 * x.a
    r = sympy.expand((1 + sympy.sqrt(3)) ** 16 + (1 - sympy.sqrt(3)) ** 16)
    assert lhs == int(r)
    row = oracle_psi(16)
    assert sum(c * (-2) ** (8 - k) * 8**k for k, c in enumerate(row)) == lhs
    # phi sum and the Psi sum at (q, s) = (-2, 8) differ by exactly 2^8
    assert lhs == 2**8 * 37634


def test_quadratic_points_all_n():
    assert all(quadratic_spot_check(n) for n in range(0, 65))
