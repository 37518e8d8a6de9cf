"""Independent reference computations used only by the tests.

They rely on sympy and brute force, never on package code.
"""

from __future__ import annotations

from functools import lru_cache

import sympy

X, Y = sympy.symbols("x y")


@lru_cache(maxsize=None)
def brute_psi_row(n: int) -> tuple[int, ...]:
    """Coefficients of (x^n + y^n) / (x + y)^(n mod 2) in (xy, x^2 + y^2).

    Peels off the leading x-power one k at a time: (xy)^(h-k) (x^2+y^2)^k
    has top monomial x^(h+k) y^(h-k).
    """
    num = sympy.Poly(X**n + Y**n, X, Y)
    if n % 2:
        num, rem = sympy.div(num, sympy.Poly(X + Y, X, Y))
        assert rem.is_zero
    h = n // 2
    row = [0] * (h + 1)
    rest = num
    for k in range(h, -1, -1):
        c = int(rest.coeff_monomial(X ** (h + k) * Y ** (h - k)))
        row[k] = c
        if c:
            rest = rest - sympy.Poly(c * (X * Y) ** (h - k) * (X**2 + Y**2) ** k, X, Y)
    assert rest.is_zero, f"residual for n={n}: {rest}"
    return tuple(row)


def divisor_sum(N: int) -> int:
    return int(sympy.divisor_sigma(N))


def ll_reference(p: int) -> bool:
    """Primality of 2^p - 1 by sympy."""
    return bool(sympy.isprime(2**p - 1))
