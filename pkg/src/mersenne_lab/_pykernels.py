"""Pure-Python hot loops; reference for the compiled ``_kernels`` module.

Every kernel works on p (M = 2^p - 1, n = 2^(p-1)) and returns plain ints.
Sum kernels return ``(residue, terms, witness)`` where ``witness`` is a
proper divisor of M (or 0) and ``residue`` is meaningless when it is set.
"""

from __future__ import annotations

from math import gcd

_GCD_EVERY = 64


def _first_divisor(M: int, upto: int) -> int:
    for j in range(2, upto + 1):
        g = gcd(j, M)
        if g > 1:
            return g
    return 0


def v1_table_sum(p: int) -> int:
    """Sum of even-k phi_k(n) mod M from rolling rows of the phi recurrence.

    phi_k(m) = 4 phi_{k-1}(m-2) - phi_k(m-4) over even m, seeded with
    phi_0(m) and phi_1(m) by m mod 8.
    """
    M = (1 << p) - 1
    n = 1 << (p - 1)
    older: list[int] = []
    old: list[int] = []
    for m in range(0, n + 1, 2):
        r = m % 8
        h = m // 2
        row = [0] * (h + 1)
        row[0] = (2, 0, -2, 0)[r // 2] % M
        if h >= 1:
            row[1] = (0, 2 * m, 0, -2 * m)[r // 2] % M
        cut = len(older)
        for k in range(2, h + 1):
            v = 4 * old[k - 1]
            if k < cut:
                v -= older[k]
            row[k] = v % M
        older, old = old, row
    return sum(old[0::2]) % M


def v2_fraction_sum(p: int) -> tuple[int, int, int]:
    """Closed-form terms 2 (-1)^(k/2) prod / k! summed as one running fraction.

    A/B accumulates the partial sum with B = k!, so a single inversion of B
    is needed at the end.
    """
    M = (1 << p) - 1
    n = 1 << (p - 1)
    n2 = n * n % M
    A, P, B = 2, 1, 1
    terms = 1
    for k in range(2, n // 2 + 1, 2):
        kk = k * (k - 1)
        P = P * (n2 - (2 * k - 4) ** 2) % M
        B = B * kk % M
        A = (A * kk + (-2 * P if (k >> 1) & 1 else 2 * P)) % M
        terms += 1
        if terms % _GCD_EVERY == 0 and gcd(B, M) != 1:
            return 0, terms, _first_divisor(M, k)
    if gcd(B, M) != 1:
        return 0, terms, _first_divisor(M, n // 2)
    return A * pow(B, -1, M) % M, terms, 0


def v3_ratio_sum(p: int, backward: bool = False) -> tuple[int, int, int]:
    """Ratio-recurrence stream phi_k / phi_{k-2} = ((2k-4)^2 - n^2) / (k(k-1))."""
    M = (1 << p) - 1
    n = 1 << (p - 1)
    n2 = n * n
    half = n // 2
    if not backward:
        t = total = 2
        terms = 1
        for k in range(2, half + 1, 2):
            den = k * (k - 1) % M
            g = gcd(den, M)
            if g != 1:
                return 0, terms, g
            t = t * (((2 * k - 4) ** 2 - n2) % M) % M * pow(den, -1, M) % M
            total += t
            terms += 1
        return total % M, terms, 0
    t = total = pow(2, n, M)
    terms = 1
    for k in range(half, 1, -2):
        den = ((2 * k - 4) ** 2 - n2) % M
        g = gcd(den, M)
        if g != 1:
            return 0, terms, g if g != M else gcd(n - 2 * k + 4, M)
        t = t * (k * (k - 1)) % M * pow(den, -1, M) % M
        total += t
        terms += 1
    return total % M, terms, 0


def ll_iterate(p: int) -> int:
    """s_0 = 4, s_{j+1} = s_j^2 - 2 mod M, p - 2 steps."""
    M = (1 << p) - 1
    s = 4 % M
    for _ in range(p - 2):
        s = (s * s - 2) % M
    return s
