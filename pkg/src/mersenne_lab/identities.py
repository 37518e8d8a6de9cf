"""Exact checks of identities satisfied by the Psi coefficients.

* factorial products: 4^h h! with h = n // 2 against a product that depends
  on n mod 4,
* weighted row sums over even k: sum Psi = -1, sum Psi 2^k = 2 and
  sum Psi 3^k = L(n) for n a power of two (conjectural, checked numerically),
* the sign and zero pattern of Psi_k(n), periodic in n and k mod 8.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Any

from . import config
from .coefficients import psi_row_closed
from .errors import CapExceeded

# SIGNS[n % 8][k % 8] is the sign of Psi_k(n): +1, -1, or 0 for a zero lane.
SIGNS: dict[int, tuple[int, ...]] = {
    0: (+1, 0, -1, 0, +1, 0, -1, 0),
    1: (+1, +1, -1, -1, +1, +1, -1, -1),
    2: (0, +1, 0, -1, 0, +1, 0, -1),
    3: (-1, +1, +1, -1, -1, +1, +1, -1),
    4: (-1, 0, +1, 0, -1, 0, +1, 0),
    5: (-1, -1, +1, +1, -1, -1, +1, +1),
    6: (0, -1, 0, +1, 0, -1, 0, +1),
    7: (+1, -1, -1, +1, +1, -1, -1, +1),
}

WEIGHTED_SAMPLE_N = (8, 24, 32)


class LucasSeq:
    """Lucas numbers L(0) = 2, L(1) = 1, L(m + 1) = L(m) + L(m - 1), cached."""

    def __init__(self) -> None:
        self.cache: list[int] = [2, 1]

    def __getitem__(self, m: int) -> int:
        if m < 0:
            raise ValueError(f"Lucas index must be non-negative, got {m}")
        c = self.cache
        while len(c) <= m:
            c.append(c[-1] + c[-2])
        return c[m]


_LUCAS = LucasSeq()


def lucas_number(m: int) -> int:
    return _LUCAS[m]


def _num_str(x: int | Fraction) -> str:
    return str(x)


def _parse_num(s: str) -> int | Fraction:
    value = Fraction(s)
    return value.numerator if value.denominator == 1 else value


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    left: int | Fraction
    right: int | Fraction
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "passed", self.left == self.right)

    def to_dict(self) -> dict[str, Any]:
        return {"identity": self.identity, "left": _num_str(self.left), "right": _num_str(self.right), "pass": self.passed}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> IdentityCheck:
        return cls(d["identity"], _parse_num(d["left"]), _parse_num(d["right"]))


@dataclass(frozen=True)
class IdentityReport:
    n: int
    checks: tuple[IdentityCheck, ...]
    conjectural: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "conjectural": self.conjectural,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> IdentityReport:
        return cls(int(d["n"]), tuple(IdentityCheck.from_dict(c) for c in d["checks"]), bool(d.get("conjectural", False)))


def factorial_product(n: int) -> int:
    """Right-hand product of the factorial identity for the class of n mod 4."""
    r = n % 4
    if r == 0:
        return 2 * prod(n * n - (4 * lam) ** 2 for lam in range(0, (n - 4) // 4 + 1))
    if r == 1:
        return prod((n + 1) ** 2 - (4 * lam - 2) ** 2 for lam in range(1, (n - 1) // 4 + 1))
    if r == 2:
        return 2 * n * prod(n * n - (4 * lam - 2) ** 2 for lam in range(1, (n - 2) // 4 + 1))
    return (n + 1) * prod((n + 1) ** 2 - (4 * lam) ** 2 for lam in range(1, (n - 3) // 4 + 1))


def factorial_identity_check(n: int) -> IdentityReport:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    h = n // 2
    left = 4**h * factorial(h)
    check = IdentityCheck(f"factorial_mod4_{n % 4}", left, factorial_product(n))
    return IdentityReport(n, (check,))


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _weighted_checks(n: int) -> tuple[IdentityCheck, ...]:
    row = psi_row_closed(n)
    even = [(k, c) for k, c in enumerate(row) if k % 2 == 0]
    return (
        IdentityCheck("sum_psi_2^k", sum(c * 2**k for k, c in even), 2),
        IdentityCheck("sum_psi", sum(c for _, c in even), -1),
        IdentityCheck("sum_psi_3^k", sum(c * 3**k for k, c in even), lucas_number(n)),
    )


def weighted_sum_identities(n: int, cap: int | None = None) -> IdentityReport:
    """Weighted even-k row sums for n = 2^(p-1), p > 3 (so n >= 16).

    Summing Psi_k 2^k rather than phi_k 2^(-k) keeps everything integral.
    Failures are findings, not errors: the report is marked conjectural.
    """
    if not _is_power_of_two(n) or n < 16:
        raise ValueError(f"n must be a power of two >= 16, got {n}")
    limit = config.table_cap() if cap is None else cap
    if n > limit:
        raise CapExceeded(f"row n={n} exceeds cap {limit}")
    return IdentityReport(n, _weighted_checks(n), conjectural=True)


def weighted_sum_sample(ns: Iterable[int] = WEIGHTED_SAMPLE_N) -> list[IdentityReport]:
    """The same three sums at other n, recorded without any expectation."""
    out = []
    for n in ns:
        if n < 0:
            raise ValueError(f"n must be non-negative, got {n}")
        out.append(IdentityReport(n, _weighted_checks(n), conjectural=True))
    return out


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def sign_zero_pattern_check(n_max: int, k_max: int, cap: int | None = None) -> list[IdentityReport]:
    """Compare sign(Psi_k(n)) against SIGNS for n <= n_max, k <= k_max.

    The top coefficient Psi_{n//2}(n) is 1 (2 at n = 0) and gets its own check.
    """
    limit = config.table_cap() if cap is None else cap
    if n_max < 0 or k_max < 0:
        raise ValueError("n_max and k_max must be non-negative")
    if n_max > limit:
        raise CapExceeded(f"n_max={n_max} exceeds cap {limit}")
    reports = []
    for n in range(n_max + 1):
        row = psi_row_closed(n)
        h = n // 2
        checks = [IdentityCheck(f"sign_k{k}", _sign(row[k]), SIGNS[n % 8][k % 8]) for k in range(min(k_max, h - 1) + 1)]
        if h <= k_max:
            # Psi_0(0) = 2 is the lone top coefficient other than 1
            checks.append(IdentityCheck(f"top_k{h}", row[h], 2 if n == 0 else 1))
        reports.append(IdentityReport(n, tuple(checks)))
    return reports


def sign_periodicity_check(n_max: int) -> IdentityReport:
    """Nonzero Psi_k(n) signs depend only on (n mod 8, k mod 8)."""
    seen: dict[tuple[int, int], set[int]] = {}
    for n in range(n_max + 1):
        for k, v in enumerate(psi_row_closed(n)):
            if v:
                seen.setdefault((n % 8, k % 8), set()).add(_sign(v))
    checks = tuple(IdentityCheck(f"class_{r}_{j}", len(s), 1) for (r, j), s in sorted(seen.items()))
    return IdentityReport(n_max, checks)
