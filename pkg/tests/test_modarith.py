from __future__ import annotations

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from mersenne_lab.modarith import FactorWitness, MersenneModulus, QuadInt, first_shared_factor, is_small_prime, require_prime_exponent


def test_small_prime_against_sympy():
    assert [p for p in range(200) if is_small_prime(p)] == list(sympy.primerange(0, 200))


def test_require_prime_exponent():
    require_prime_exponent(5)
    for bad in (1, 4, 9):
        with pytest.raises(ValueError):
            require_prime_exponent(bad)
    with pytest.raises(ValueError):
        require_prime_exponent(3, minimum=5)
    with pytest.raises(TypeError):
        require_prime_exponent(5.0)
    with pytest.raises(TypeError):
        require_prime_exponent(True)


def test_modulus_fields():
    for p in (2, 3, 5, 7, 13, 31):
        mod = MersenneModulus(p)
        assert mod.M == 2 * mod.n - 1 == 2**p - 1
        if p >= 5:
            assert mod.n % 8 == 0


def test_modulus_rejects_composite():
    with pytest.raises(ValueError):
        MersenneModulus(11 * 1 + 4)


@given(st.integers(min_value=-(2**300), max_value=2**300), st.sampled_from([5, 7, 13, 31, 61, 89]))
def test_fold_reduce_matches_mod(x, p):
    mod = MersenneModulus(p)
    assert mod.reduce(x) == x % mod.M


@given(st.integers(min_value=-(2**80), max_value=2**80))
def test_signed_representative(x):
    mod = MersenneModulus(13)
    s = mod.signed(x)
    assert -mod.M / 2 < s <= mod.M / 2
    assert (s - x) % mod.M == 0


def test_inverse_and_witness():
    mod = MersenneModulus(11)
    assert mod.inverse(2) * 2 % 2047 == 1
    assert mod.inverse(46) == FactorWitness(23, 2047)
    with pytest.raises(ZeroDivisionError):
        mod.inverse(2047)


def test_factor_witness_validation():
    FactorWitness(23, 2047)
    with pytest.raises(ValueError):
        FactorWitness(24, 2047)
    with pytest.raises(ValueError):
        FactorWitness(2047, 2047)
    with pytest.raises(ValueError):
        FactorWitness(1, 2047)


def test_first_shared_factor():
    assert first_shared_factor(2047, 30) == FactorWitness(23, 2047)
    assert first_shared_factor(2047, 22) is None
    assert first_shared_factor(8191, 10**4) is None


def test_quadint_arithmetic():
    a = QuadInt(1, 1)
    assert a * a.conjugate() == QuadInt(-2, 0)
    assert (a + a.conjugate()) == QuadInt(2, 0)
    assert a**0 == QuadInt(1, 0)
    assert (a**5).a == int(sympy.expand(((1 + sympy.sqrt(3)) ** 5 + (1 - sympy.sqrt(3)) ** 5) / 2))
    assert QuadInt(10, -3, 7) == QuadInt(3, 4, 7)
    with pytest.raises(ValueError):
        a ** -1
