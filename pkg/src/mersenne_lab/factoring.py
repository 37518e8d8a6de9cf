"""Integer factorization under a time budget.

Trial division by primes up to 10^6, then Brent's variant of Pollard rho
with a seeded generator.  Factors are certified by deterministic
Miller-Rabin below 2^64 and by Baillie-PSW above.
"""

from __future__ import annotations

import random
import time
from functools import lru_cache
from math import gcd, isqrt, prod

TRIAL_LIMIT = 10**6

# Deterministic for every n < 3.1 * 10^23.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4)
def primes_up_to(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    sieve = bytearray(b"\x01") * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, f in enumerate(sieve) if f)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameters (method A)."""
    if isqrt(n) ** 2 == n:
        return False
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    # Binary ladder for U_d, V_d.
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_probable_prime(n: int) -> bool:
    """Deterministic below 2^64 (and well beyond); Baillie-PSW above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 1 << 64:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    return _strong_probable_prime(n, 2) and _strong_lucas_probable_prime(n)


class BudgetExhausted(Exception):
    pass


def pollard_brent(n: int, rng: random.Random, deadline: float) -> int:
    """A nontrivial factor of the odd composite n, or BudgetExhausted."""
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            if time.perf_counter() > deadline:
                raise BudgetExhausted
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, budget_ms: int, seed: int = 0) -> tuple[dict[int, int], int, bool]:
    """Factor |n| as far as the budget allows.

    Returns ``(primes, cofactor, complete)`` with
    ``prod(p**e) * cofactor == |n|``; ``cofactor`` is 1 when complete.
    """
    n = abs(n)
    if n == 0:
        return {}, 0, False
    start = time.perf_counter()
    deadline = start + budget_ms / 1000
    found: dict[int, int] = {}

    def add(p: int) -> None:
        found[p] = found.get(p, 0) + 1

    for p in primes_up_to(TRIAL_LIMIT):
        if p * p > n:
            break
        while n % p == 0:
            add(p)
            n //= p
    if 1 < n < TRIAL_LIMIT**2:
        add(n)
        n = 1
    rng = random.Random(seed)
    pending = [n] if n > 1 else []
    leftover = 1
    while pending:
        m = pending.pop()
        if is_probable_prime(m):
            add(m)
            continue
        try:
            d = pollard_brent(m, rng, deadline)
        except BudgetExhausted:
            leftover *= m
            leftover *= prod(pending)
            pending = []
            break
        pending.extend((d, m // d))
    return dict(sorted(found.items())), leftover, leftover == 1

