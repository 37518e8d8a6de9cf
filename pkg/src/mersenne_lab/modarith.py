"""Arithmetic in Z/MZ for Mersenne moduli M = 2^p - 1."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt


def is_small_prime(p: int) -> bool:
    """Deterministic trial-division primality test for exponents."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0 or p % 3 == 0:
        return False
    for d in range(5, isqrt(p) + 1, 6):
        if p % d == 0 or p % (d + 2) == 0:
            return False
    return True


def require_prime_exponent(p: int, minimum: int = 2) -> None:
    if not isinstance(p, int) or isinstance(p, bool):
        raise TypeError(f"exponent must be an int, got {type(p).__name__}")
    if p < minimum:
        raise ValueError(f"exponent p={p} is below the minimum {minimum}")
    if not is_small_prime(p):
        raise ValueError(f"exponent p={p} is not prime")


@dataclass(frozen=True)
class FactorWitness:
    """A nontrivial divisor of a modulus, found by a failed inversion."""

    divisor: int
    modulus: int

    def __post_init__(self) -> None:
        if not 1 < self.divisor < self.modulus:
            raise ValueError(f"witness {self.divisor} is not a proper divisor size for {self.modulus}")
        if self.modulus % self.divisor:
            raise ValueError(f"witness {self.divisor} does not divide {self.modulus}")


def first_shared_factor(modulus: int, upto: int) -> FactorWitness | None:
    """Smallest j <= upto sharing a factor with modulus, as a witness.

    Any j < modulus with gcd(j, modulus) > 1 yields a proper divisor.
    """
    for j in range(2, min(upto, modulus - 1) + 1):
        g = gcd(j, modulus)
        if g > 1:
            return FactorWitness(g, modulus)
    return None


@dataclass(frozen=True)
class MersenneModulus:
    """The ring Z/MZ with M = 2^p - 1 and n = 2^(p-1), so M = 2n - 1."""

    p: int
    M: int = field(init=False)
    n: int = field(init=False)

    def __post_init__(self) -> None:
        require_prime_exponent(self.p)
        object.__setattr__(self, "M", (1 << self.p) - 1)
        object.__setattr__(self, "n", 1 << (self.p - 1))

    @property
    def half(self) -> int:
        """Largest coefficient index floor(n/2) of the degree-n row."""
        return self.n // 2

    def reduce(self, x: int) -> int:
        """Reduce x into [0, M) by folding the high bits onto the low bits.

        Since 2^p = 1 mod M, x = hi*2^p + lo is congruent to hi + lo.
        """
        p, M = self.p, self.M
        neg = x < 0
        if neg:
            x = -x
        while x > M:
            x = (x & M) + (x >> p)
        if x == M:
            x = 0
        if neg and x:
            x = M - x
        return x

    def mul(self, a: int, b: int) -> int:
        return self.reduce(a * b)

    def inverse(self, a: int) -> int | FactorWitness:
        """Inverse of a mod M, or a FactorWitness when gcd(a, M) > 1."""
        a = self.reduce(a)
        g = gcd(a, self.M)
        if g == 1:
            return pow(a, -1, self.M)
        if g == self.M:
            raise ZeroDivisionError("inverse of 0 mod M")
        return FactorWitness(g, self.M)

    def signed(self, x: int) -> int:
        """Representative of x in (-M/2, M/2]."""
        r = self.reduce(x)
        return r - self.M if 2 * r > self.M else r


@dataclass(frozen=True)
class QuadInt:
    """Element a + b*sqrt(3) of Z[sqrt 3], optionally reduced mod a modulus."""

    a: int
    b: int
    modulus: int | None = None

    def __post_init__(self) -> None:
        if self.modulus is not None:
            object.__setattr__(self, "a", self.a % self.modulus)
            object.__setattr__(self, "b", self.b % self.modulus)

    def __mul__(self, other: QuadInt) -> QuadInt:
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadInt(a * c + 3 * b * d, a * d + b * c, self.modulus)

    def __add__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.a + other.a, self.b + other.b, self.modulus)

    def conjugate(self) -> QuadInt:
        return QuadInt(self.a, -self.b, self.modulus)

    def __pow__(self, e: int) -> QuadInt:
        if e < 0:
            raise ValueError("negative exponent")
        result = QuadInt(1, 0, self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result
