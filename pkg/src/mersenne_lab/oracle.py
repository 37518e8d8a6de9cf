"""Brute-force expansion oracle in the coordinates q = xy and s = x^2 + y^2.

Works purely with polynomial arithmetic, independent of any closed form.
Power sums satisfy P_n = s P_{n-2} - q^2 P_{n-4} because x^2 and y^2 are the
roots of t^2 - s t + q^2; dividing by (x + y) preserves the recurrence, so
the odd sequence only needs its own seeds:

    P_1 = (x + y) / (x + y) = 1
    P_3 = (x^3 + y^3) / (x + y) = x^2 - xy + y^2 = s - q
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb

from . import config
from .errors import CapExceeded

Monomial = tuple[int, int]


@dataclass(frozen=True)
class SymmetricPoly:
    """Sparse polynomial in q and s; keys are (deg_q, deg_s)."""

    coeffs: dict[Monomial, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {mono: c for mono, c in self.coeffs.items() if c}
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def constant(cls, c: int) -> SymmetricPoly:
        return cls({(0, 0): c})

    def __add__(self, other: SymmetricPoly) -> SymmetricPoly:
        out = dict(self.coeffs)
        for mono, c in other.coeffs.items():
            out[mono] = out.get(mono, 0) + c
        return SymmetricPoly(out)

    def __neg__(self) -> SymmetricPoly:
        return SymmetricPoly({mono: -c for mono, c in self.coeffs.items()})

    def __sub__(self, other: SymmetricPoly) -> SymmetricPoly:
        return self + (-other)

    def __mul__(self, other: SymmetricPoly) -> SymmetricPoly:
        out: dict[Monomial, int] = {}
        for (a, b), c in self.coeffs.items():
            for (d, e), f in other.coeffs.items():
                key = (a + d, b + e)
                out[key] = out.get(key, 0) + c * f
        return SymmetricPoly(out)

    def shift(self, dq: int = 0, ds: int = 0) -> SymmetricPoly:
        """Multiply by q^dq s^ds."""
        return SymmetricPoly({(a + dq, b + ds): c for (a, b), c in self.coeffs.items()})

    def evaluate(self, q: int, s: int) -> int:
        return sum(c * q**a * s**b for (a, b), c in self.coeffs.items())

    def weighted_degrees(self) -> set[int]:
        return {2 * a + 2 * b for a, b in self.coeffs}


Q = SymmetricPoly({(1, 0): 1})
S = SymmetricPoly({(0, 1): 1})

_SEEDS = {
    0: SymmetricPoly.constant(2),
    1: SymmetricPoly.constant(1),
    2: S,
    3: S - Q,
}


def power_sum_poly(n: int, cap: int | None = None) -> SymmetricPoly:
    """(x^n + y^n) / (x + y)^(n mod 2) as a polynomial in q and s."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    limit = config.DEFAULT_ORACLE_CAP if cap is None else cap
    if n > limit:
        raise CapExceeded(f"oracle n={n} exceeds cap {limit}")
    if n in _SEEDS:
        return _SEEDS[n]
    older, old = _SEEDS[n % 2], _SEEDS[n % 2 + 2]
    for _ in range(n % 2 + 4, n + 1, 2):
        older, old = old, old.shift(ds=1) - older.shift(dq=2)
    return old


def oracle_psi(n: int, cap: int | None = None) -> list[int]:
    """[Psi_0(n), ..., Psi_{n//2}(n)] read off the oracle polynomial."""
    poly = power_sum_poly(n, cap)
    h = n // 2
    return [poly.coeffs.get((h - k, k), 0) for k in range(h + 1)]


def expand_xy(poly: SymmetricPoly) -> dict[Monomial, int]:
    """Expand a (q, s) polynomial into monomials x^i y^j."""
    out: dict[Monomial, int] = {}
    for (a, b), c in poly.coeffs.items():
        for t in range(b + 1):
            key = (a + 2 * t, a + 2 * (b - t))
            out[key] = out.get(key, 0) + c * comb(b, t)
    return {mono: c for mono, c in out.items() if c}


def quotient_xy(n: int) -> dict[Monomial, int]:
    """(x^n + y^n) / (x + y)^(n mod 2) directly in x, y."""
    if n == 0:
        return {(0, 0): 2}
    if n % 2 == 0:
        return {(n, 0): 1, (0, n): 1}
    return {(n - 1 - j, j): (-1) ** j for j in range(n)}


def _psi_sum(n: int, q: int, s: int, coeffs: list[int] | None = None) -> int:
    from .coefficients import psi_row_closed

    row = psi_row_closed(n) if coeffs is None else coeffs
    h = n // 2
    return sum(c * q ** (h - k) * s**k for k, c in enumerate(row))


def numeric_spot_check(n: int, x: int, y: int) -> bool:
    """Evaluate both sides of the Psi expansion exactly at an integer point."""
    lhs_num = x**n + y**n
    if n % 2:
        if x + y == 0:
            raise ValueError("x + y must be nonzero for odd n")
        lhs, rem = divmod(lhs_num, x + y)
        if rem:
            raise AssertionError(f"x+y does not divide x^{n}+y^{n}")
    else:
        lhs = lhs_num
    return lhs == _psi_sum(n, x * y, x * x + y * y)


def quadratic_spot_check(n: int) -> bool:
    """Check the expansion at x = 1 + sqrt 3, y = 1 - sqrt 3 (q = -2, s = 8).

    (1 + sqrt 3)^n + (1 - sqrt 3)^n = 2a where (1 + sqrt 3)^n = a + b sqrt 3.
    """
    from .modarith import QuadInt

    a = (QuadInt(1, 1) ** n).a
    lhs = 2 * a if n % 2 == 0 else a  # x + y = 2
    return lhs == _psi_sum(n, -2, 8)


def random_spot_checks(trials: int = 100, n_max: int = 40, bound: int = 10, seed: int = 20230401) -> list[tuple[int, int, int, bool]]:
    rng = random.Random(seed)
    out = []
    while len(out) < trials:
        n = rng.randint(0, n_max)
        x = rng.randint(-bound, bound)
        y = rng.randint(-bound, bound)
        if n % 2 and x + y == 0:
            continue
        out.append((n, x, y, numeric_spot_check(n, x, y)))
    return out
