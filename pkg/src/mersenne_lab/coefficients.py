"""Exact and modular generation of the Psi and phi coefficient families.

Psi_k(n) are the integer coefficients of

    (x^n + y^n) / (x + y)^(n mod 2) = sum_k Psi_k(n) (xy)^(n//2 - k) (x^2 + y^2)^k

and phi_k(n) = 4^k Psi_k(n).  Three independent routes are provided: the
eight residue-class closed forms, the four-term double-index recurrence
(``psi_table``), and the two-step ratio recurrence (``psi_row_ratio``).
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from . import config
from .errors import CapExceeded, InexactDivisionError, UndefinedRatio
from .modarith import FactorWitness, MersenneModulus, first_shared_factor

Direction = Literal["forward", "backward"]

# Psi_0(n) by n mod 8.
PSI_START = {0: 2, 1: 1, 2: 0, 3: -1, 4: -2, 5: -1, 6: 0, 7: 1}


def delta(n: int) -> int:
    """Parity indicator n mod 2 (so delta(-1) == 1)."""
    return n % 2


def _exact_div(num: int, den: int, context: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise InexactDivisionError(num, den, context)
    return q


def _prod(values) -> int:
    return math.prod(values)


def _check_index(n: int, k: int) -> None:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not 0 <= k <= n // 2:
        raise IndexError(f"k={k} outside 0..{n // 2} for n={n}")


def _psi_numerator(n: int, k: int) -> int:
    """Signed numerator of Psi_k(n) over the denominator 4^k k!, for k >= 1."""
    r = n % 8
    h = k // 2
    dk = delta(k)
    if r in (0, 4):
        if dk:
            return 0
        sign = (-1) ** (h + (r == 4))
        return 2 * sign * _prod(n * n - (4 * lam) ** 2 for lam in range(h))
    if r in (2, 6):
        if not dk:
            return 0
        sign = (-1) ** (h + (r == 6))
        return 2 * sign * n * _prod(n * n - (4 * lam - 2) ** 2 for lam in range(1, h + 1))
    m = n + 1
    if r in (1, 5):
        sign = (-1) ** (h + (r == 5))
        lead = (m - 2 * k) ** dk
        return sign * lead * _prod(m * m - (4 * lam - 2) ** 2 for lam in range(1, h + 1))
    # r in (3, 7)
    dk1 = delta(k - 1)
    sign = (-1) ** (h + (dk1 if r == 3 else dk))
    lead = m * (m - 2 * k) ** dk1
    return sign * lead * _prod(m * m - (4 * lam) ** 2 for lam in range(1, (k - 1) // 2 + 1))


def psi_closed_form(n: int, k: int) -> int:
    """Psi_k(n) from the eight residue-class closed forms.

    Raises InexactDivisionError if the division by 4^k k! leaves a remainder.
    """
    _check_index(n, k)
    if k == 0:
        return PSI_START[n % 8]
    den = 4**k * math.factorial(k)
    return _exact_div(_psi_numerator(n, k), den, f"Psi_{k}({n})")


def psi_row_closed(n: int) -> list[int]:
    return [psi_closed_form(n, k) for k in range(n // 2 + 1)]


def phi_exact(n: int, k: int) -> int:
    """phi_k(n) = 4^k Psi_k(n), evaluated with the k!-only denominator forms."""
    _check_index(n, k)
    if k == 0:
        return PSI_START[n % 8]
    r = n % 8
    h = k // 2
    dk = delta(k)
    m = n + 1
    if r in (0, 4):
        if dk:
            return 0
        num = 2 * (-1) ** (h + (r == 4)) * _prod(n * n - (4 * lam) ** 2 for lam in range(h))
    elif r in (2, 6):
        if not dk:
            return 0
        num = 2 * (-1) ** (h + (r == 6)) * n * _prod(n * n - (4 * lam - 2) ** 2 for lam in range(1, h + 1))
    elif r in (1, 5):
        num = (-1) ** (h + (r == 5)) * (m - 2 * k) ** dk * _prod(
            m * m - (4 * lam - 2) ** 2 for lam in range(1, h + 1)
        )
    else:
        dk1 = delta(k - 1)
        sign = (-1) ** (h + (dk1 if r == 3 else dk))
        top = h - dk1
        num = sign * m * (m - 2 * k) ** dk1 * _prod(m * m - (4 * lam) ** 2 for lam in range(1, top + 1))
    return _exact_div(num, math.factorial(k), f"phi_{k}({n})")


def psi_from_even(n: int, k: int, even_row: list[int] | None = None) -> int:
    """Psi_k(n) for odd n from row n+1, via the (d/dx + d/dy) relation.

    Psi_k(n) = [2(k+1) Psi_{k+1}(n+1) + ((n+1)//2 - k) Psi_k(n+1)] / (n+1)

    ``even_row`` supplies Psi_*(n+1); by default it is the closed-form row.
    """
    if n % 2 != 1:
        raise ValueError(f"psi_from_even needs odd n, got {n}")
    _check_index(n, k)
    m = n + 1
    row = even_row if even_row is not None else psi_row_closed(m)
    if len(row) != m // 2 + 1:
        raise ValueError(f"row for n+1={m} must have {m // 2 + 1} entries, got {len(row)}")
    num = 2 * (k + 1) * row[k + 1] + (m // 2 - k) * row[k]
    return _exact_div(num, m, f"odd row Psi_{k}({n})")


def psi_ratio(n: int, k: int) -> Fraction:
    """Psi_k(n) / Psi_{k-2}(n) as an exact rational.

    -([n + (-1)^(n//2 + k) delta(n)]^2 - [2k - 2 - 2 delta(n-1)]^2) / (16 k (k-1))
    """
    if k < 2:
        raise ValueError(f"ratio needs k >= 2, got {k}")
    _check_index(n, k)
    if psi_closed_form(n, k - 2) == 0:
        raise UndefinedRatio(f"Psi_{k - 2}({n}) = 0: ratio lies in a zero lane")
    return _ratio_formula(n, k)


def _ratio_formula(n: int, k: int) -> Fraction:
    a = n + (-1) ** (n // 2 + k) * delta(n)
    b = 2 * k - 2 - 2 * delta(n - 1)
    return Fraction(-(a * a - b * b), 16 * k * (k - 1))


def psi_row_ratio(n: int, direction: Direction = "forward") -> list[int]:
    """Row Psi_*(n) generated only by the two-step ratio recurrence.

    Forward seeds: Psi_0 and Psi_1 from their residue-class tables.
    Backward seeds: Psi_{n//2} = 1 (2 when n = 0) and Psi_{n//2 - 1} = -delta(n); the latter
    is the coefficient of xy (x^2+y^2)^(h-1), which must cancel x^(n-1) y
    for even n and reproduce -x^(n-1) y in (x^n+y^n)/(x+y) for odd n.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    h = n // 2
    row = [0] * (h + 1)
    if direction == "forward":
        row[0] = PSI_START[n % 8]
        if h >= 1:
            row[1] = _psi1_start(n)
        for k in range(2, h + 1):
            prev = row[k - 2]
            row[k] = 0 if prev == 0 else _integral(prev * _ratio_formula(n, k), n, k)
    elif direction == "backward":
        row[h] = 2 if n == 0 else 1
        if h >= 1:
            row[h - 1] = -delta(n)
        for k in range(h, 1, -1):
            cur = row[k]
            row[k - 2] = 0 if cur == 0 else _integral(cur / _ratio_formula(n, k), n, k - 2)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return row


def _psi1_start(n: int) -> int:
    r = n % 8
    table = {
        0: 0,
        1: Fraction(n - 1, 4),
        2: Fraction(n, 2),
        3: Fraction(n + 1, 4),
        4: 0,
        5: -Fraction(n - 1, 4),
        6: -Fraction(n, 2),
        7: -Fraction(n + 1, 4),
    }
    return _integral(Fraction(table[r]), n, 1)


def _integral(value: Fraction, n: int, k: int) -> int:
    if value.denominator != 1:
        raise InexactDivisionError(value.numerator, value.denominator, f"ratio step Psi_{k}({n})")
    return value.numerator


@dataclass
class PsiTable:
    """Exact Psi_k(m) for 0 <= m <= n_max, 0 <= k <= m//2."""

    rows: list[list[int]]

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def row(self, m: int) -> list[int]:
        return self.rows[m]

    def __getitem__(self, key: tuple[int, int]) -> int:
        m, k = key
        if not (0 <= m <= self.n_max and 0 <= k <= m // 2):
            raise KeyError(key)
        return self.rows[m][k]

    def __contains__(self, key: object) -> bool:
        if not isinstance(key, tuple) or len(key) != 2:
            return False
        m, k = key
        return 0 <= m <= self.n_max and 0 <= k <= m // 2

    def entries(self) -> Iterator[tuple[int, int, int]]:
        for m, row in enumerate(self.rows):
            for k, value in enumerate(row):
                yield m, k, value

    def to_csv(self, n_min: int = 0) -> str:
        lines = ["n,k,psi"]
        lines += [f"{m},{k},{v}" for m, k, v in self.entries() if m >= n_min]
        return "\n".join(lines) + "\n"


def psi_table(n_max: int, cap: int | None = None) -> PsiTable:
    """Psi table from the recurrence Psi_k(m) = Psi_{k-1}(m-2) - Psi_k(m-4).

    Only rows 0 and 2 are seeded; odd rows come from the next even row.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    limit = config.table_cap() if cap is None else cap
    if n_max > limit:
        raise CapExceeded(f"psi_table n_max={n_max} exceeds cap {limit}")
    top_even = n_max + (n_max % 2)
    even: dict[int, list[int]] = {0: [2], 2: [0, 1]}
    for m in range(4, top_even + 1, 2):
        a, b = even[m - 2], even[m - 4]
        row = [0] * (m // 2 + 1)
        for k in range(m // 2 + 1):
            up = a[k - 1] if k >= 1 else 0
            down = b[k] if k < len(b) else 0
            row[k] = up - down
        even[m] = row
    rows: list[list[int]] = []
    for m in range(n_max + 1):
        if m % 2 == 0:
            rows.append(even[m])
        else:
            rows.append([psi_from_even(m, k, even[m + 1]) for k in range(m // 2 + 1)])
    return PsiTable(rows)


@dataclass(frozen=True)
class PhiTermMod:
    k: int
    residue: int
    modulus: MersenneModulus = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.k % 2:
            raise ValueError(f"phi terms mod M are indexed by even k, got {self.k}")
        if not 0 <= self.residue < self.modulus.M:
            raise ValueError("residue out of range")


def _require_stream_modulus(mod: MersenneModulus) -> None:
    if mod.p < 5:
        raise ValueError(f"modular phi terms need p >= 5 (n = 0 mod 8), got p={mod.p}")


def phi_term_mod_at(mod: MersenneModulus, k: int) -> PhiTermMod | FactorWitness:
    """phi_k(n) mod M as 2 (-1)^(k/2) prod(n^2 - (4 lam)^2) / k!.

    Returns a FactorWitness when k! is not invertible mod M.
    """
    _require_stream_modulus(mod)
    if k % 2 or not 0 <= k <= mod.half:
        raise IndexError(f"k={k} must be even and within 0..{mod.half}")
    n2 = mod.reduce(mod.n * mod.n)
    num = 2
    fact = 1
    for lam in range(k // 2):
        num = mod.mul(num, n2 - 16 * lam * lam)
    for j in range(2, k + 1):
        fact = mod.mul(fact, j)
    if math.gcd(fact, mod.M) != 1:
        witness = first_shared_factor(mod.M, k)
        assert witness is not None
        return witness
    residue = mod.mul(num, pow(fact, -1, mod.M))
    if (k // 2) % 2:
        residue = mod.reduce(-residue)
    return PhiTermMod(k, residue, mod)


class PhiStream:
    """Lazy stream of the even-k terms phi_k(n) mod M.

    Forward starts at phi_0 = 2; backward starts at phi_{n/2} = 2^n.  Each
    step costs one modular multiply and one modular inverse.  A failed
    inverse stores a FactorWitness in ``witness`` and ends the stream.
    """

    def __init__(self, mod: MersenneModulus, direction: Direction = "forward") -> None:
        _require_stream_modulus(mod)
        if direction not in ("forward", "backward"):
            raise ValueError(f"unknown direction {direction!r}")
        self.modulus = mod
        self.direction = direction
        self.witness: FactorWitness | None = None
        self.terms_yielded = 0
        self._started = False

    def __iter__(self) -> Iterator[PhiTermMod]:
        if self._started:
            raise RuntimeError("PhiStream is single-consumer")
        self._started = True
        gen = self._forward() if self.direction == "forward" else self._backward()
        for term in gen:
            self.terms_yielded += 1
            yield term

    def _forward(self) -> Iterator[PhiTermMod]:
        mod = self.modulus
        n = mod.n
        t = 2
        yield PhiTermMod(0, t, mod)
        for k in range(2, mod.half + 1, 2):
            inv = mod.inverse(k * (k - 1))
            if isinstance(inv, FactorWitness):
                self.witness = inv
                return
            t = mod.mul(mod.mul(t, (2 * k - 4) ** 2 - n * n), inv)
            yield PhiTermMod(k, t, mod)

    def _backward(self) -> Iterator[PhiTermMod]:
        mod = self.modulus
        n = mod.n
        t = pow(2, n, mod.M)
        yield PhiTermMod(mod.half, t, mod)
        for k in range(mod.half, 1, -2):
            try:
                inv = mod.inverse((2 * k - 4) ** 2 - n * n)
            except ZeroDivisionError:
                seeded = phi_term_mod_at(mod, k - 2)
                if isinstance(seeded, FactorWitness):
                    self.witness = seeded
                    return
                t = seeded.residue
                yield seeded
                continue
            if isinstance(inv, FactorWitness):
                self.witness = inv
                return
            t = mod.mul(mod.mul(t, k * (k - 1)), inv)
            yield PhiTermMod(k - 2, t, mod)


def phi_stream_mod(mod: MersenneModulus, direction: Direction = "forward") -> PhiStream:
    return PhiStream(mod, direction)


def _chunk_sum(p: int, k_start: int, k_stop: int) -> tuple[int, int | None]:
    """Sum of phi_k mod M over even k in [k_start, k_stop), seeded by point evaluation."""
    mod = MersenneModulus(p)
    seed = phi_term_mod_at(mod, k_start)
    if isinstance(seed, FactorWitness):
        return 0, seed.divisor
    n = mod.n
    t = seed.residue
    total = t
    for k in range(k_start + 2, k_stop, 2):
        inv = mod.inverse(k * (k - 1))
        if isinstance(inv, FactorWitness):
            return total, inv.divisor
        t = mod.mul(mod.mul(t, (2 * k - 4) ** 2 - n * n), inv)
        total += t
    return mod.reduce(total), None


def phi_sum_chunked(mod: MersenneModulus, workers: int = 1, chunks: int | None = None) -> int | FactorWitness:
    """Sum of even-k phi terms mod M, split into independently seeded chunks.

    The result is identical to a sequential forward stream: the residue if
    every inverse exists, else the witness from the lowest failing chunk.
    """
    _require_stream_modulus(mod)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    count = mod.half // 2 + 1
    chunks = chunks or max(workers, 1)
    chunks = max(1, min(chunks, count))
    bounds = [2 * (count * i // chunks) for i in range(chunks + 1)]
    bounds[-1] = mod.half + 2
    jobs = [(mod.p, bounds[i], bounds[i + 1]) for i in range(chunks) if bounds[i] < bounds[i + 1]]
    if workers == 1:
        results = [_chunk_sum(*job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_chunk_sum, *zip(*jobs)))
    total = 0
    for partial, witness in results:
        if witness is not None:
            return FactorWitness(witness, mod.M)
        total += partial
    return mod.reduce(total)
