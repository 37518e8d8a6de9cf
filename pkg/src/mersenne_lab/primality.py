"""Mersenne primality tests: classic Lucas-Lehmer and the phi-sum variants.

With n = 2^(p-1) and M = 2^p - 1 = 2n - 1, each phi-sum variant decides
primality of M by whether the even-k sum of phi_k(n) vanishes mod M:

* ``v1`` rolls rows of the four-term phi recurrence up to row n,
* ``v2`` sums the closed-form terms as a single running fraction,
* ``v3`` streams terms with the two-step ratio, forward or backward.

A failed modular inversion along the way exposes a divisor of M, which is
reported as a factor witness and settles the verdict as composite.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import gcd
from typing import Any, Literal

from . import config, kernels
from .coefficients import phi_sum_chunked
from .errors import CapExceeded, ConsistencyError
from .modarith import FactorWitness, MersenneModulus, QuadInt, first_shared_factor, require_prime_exponent

Variant = Literal["classic", "v1", "v2", "v3", "criterion"]
Verdict = Literal["prime", "composite", "inconclusive"]

VARIANTS: tuple[str, ...] = ("classic", "v1", "v2", "v3", "criterion")

# The phi-sum tests need n = 2^(p-1) divisible by 8, so p >= 5.
SMALL_P_VERDICTS = {2: "prime", 3: "prime"}

# even_perfect_check streams v2 up to here and uses the classic test above.
PERFECT_V2_MAX_P = 31

_GCD_EVERY = 64


@dataclass(frozen=True)
class TestVerdict:
    __test__ = False  # not a pytest class

    p: int
    variant: str
    verdict: str
    residue: int | None
    factor_witness: FactorWitness | None
    terms_evaluated: int
    elapsed: float
    direction: str | None = None
    backend: str | None = None

    def __post_init__(self) -> None:
        if self.verdict not in ("prime", "composite", "inconclusive"):
            raise ValueError(f"bad verdict {self.verdict!r}")
        if self.factor_witness is not None and self.verdict != "composite":
            raise ValueError("a factor witness implies a composite verdict")
        if self.verdict == "prime" and self.variant in ("v1", "v2", "v3") and self.residue != 0:
            raise ValueError("a prime verdict needs residue 0")

    @property
    def M(self) -> int:
        return (1 << self.p) - 1

    def to_dict(self) -> dict[str, Any]:
        w = self.factor_witness
        return {
            "p": self.p,
            "variant": self.variant,
            "verdict": self.verdict,
            "residue": None if self.residue is None else str(self.residue),
            "factor_witness": None if w is None else {"divisor": str(w.divisor), "modulus": str(w.modulus)},
            "terms_evaluated": self.terms_evaluated,
            "elapsed": self.elapsed,
            "direction": self.direction,
            "backend": self.backend,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> TestVerdict:
        w = d.get("factor_witness")
        return cls(
            p=int(d["p"]),
            variant=d["variant"],
            verdict=d["verdict"],
            residue=None if d.get("residue") is None else int(d["residue"]),
            factor_witness=None if w is None else FactorWitness(int(w["divisor"]), int(w["modulus"])),
            terms_evaluated=int(d["terms_evaluated"]),
            elapsed=float(d["elapsed"]),
            direction=d.get("direction"),
            backend=d.get("backend"),
        )


@dataclass(frozen=True)
class PerfectVerdict:
    N: int
    is_even_perfect: bool
    p: int | None = None

    def __post_init__(self) -> None:
        if self.is_even_perfect:
            if self.p is None or self.N != (1 << (self.p - 1)) * ((1 << self.p) - 1):
                raise ValueError("even perfect verdict needs N = 2^(p-1) (2^p - 1)")

    def to_dict(self) -> dict[str, Any]:
        return {"N": str(self.N), "is_even_perfect": self.is_even_perfect, "p": self.p}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PerfectVerdict:
        return cls(int(d["N"]), bool(d["is_even_perfect"]), None if d.get("p") is None else int(d["p"]))


def _sum_verdict(
    p: int,
    variant: str,
    outcome: tuple[int, int, int],
    start: float,
    direction: str | None = None,
    backend: str | None = None,
    zero_verdict: str = "prime",
) -> TestVerdict:
    residue, terms, divisor = outcome
    M = (1 << p) - 1
    if divisor:
        return TestVerdict(p, variant, "composite", None, FactorWitness(divisor, M), terms, time.perf_counter() - start, direction, backend)
    verdict = zero_verdict if residue == 0 else "composite"
    return TestVerdict(p, variant, verdict, residue, None, terms, time.perf_counter() - start, direction, backend)


def classic_forms(p: int, backend: kernels.Backend = "auto") -> tuple[bool, bool]:
    """Raw divisibility answers of both classic forms, without the small-p table.

    (a) M | (1 + sqrt 3)^n + (1 - sqrt 3)^n, computed in Z[sqrt 3] / M;
    (b) s_{p-2} = 0 for s_0 = 4, s_{j+1} = s_j^2 - 2 mod M.
    """
    require_prime_exponent(p)
    M = (1 << p) - 1
    n = 1 << (p - 1)
    x = QuadInt(1, 1, M) ** n
    ring = 2 * x.a % M == 0  # the sqrt 3 parts cancel against the conjugate
    iterate = kernels.ll_iterate(p, backend) == 0
    return ring, iterate


def lucas_lehmer_classic(p: int, backend: kernels.Backend = "auto") -> TestVerdict:
    require_prime_exponent(p)
    start = time.perf_counter()
    if p in SMALL_P_VERDICTS:
        return TestVerdict(p, "classic", SMALL_P_VERDICTS[p], None, None, 0, time.perf_counter() - start)
    ring, iterate = classic_forms(p, backend)
    if ring != iterate:
        raise ConsistencyError(f"classic forms disagree at p={p}: ring={ring}, iterate={iterate}")
    verdict = "prime" if ring else "composite"
    return TestVerdict(p, "classic", verdict, None, None, p - 2, time.perf_counter() - start, None, kernels.resolved_backend(p, backend))


def _require_variant_exponent(p: int) -> None:
    require_prime_exponent(p, minimum=5)


def test_v1_recurrence(p: int, cap: int | None = None, backend: kernels.Backend = "auto") -> TestVerdict:
    """Didactic variant; the work is quadratic in n, so n is capped."""
    _require_variant_exponent(p)
    limit = config.table_cap() if cap is None else cap
    n = 1 << (p - 1)
    if n > limit:
        raise CapExceeded(f"v1 needs rows up to n={n}, above the table cap {limit}; use v2 or v3")
    start = time.perf_counter()
    residue = kernels.v1_table_sum(p, backend)
    return _sum_verdict(p, "v1", (residue, n // 4 + 1, 0), start, backend=kernels.resolved_backend(p, backend))


def test_v2_closed_form(p: int, backend: kernels.Backend = "auto") -> TestVerdict:
    _require_variant_exponent(p)
    start = time.perf_counter()
    outcome = kernels.v2_fraction_sum(p, backend)
    return _sum_verdict(p, "v2", outcome, start, backend=kernels.resolved_backend(p, backend))


def test_v3_ratio(p: int, direction: str = "forward", workers: int = 1, backend: kernels.Backend = "auto") -> TestVerdict:
    """Ratio-stream variant.  ``workers > 1`` splits a forward sum into seeded chunks."""
    _require_variant_exponent(p)
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    start = time.perf_counter()
    if workers > 1 and direction == "forward":
        mod = MersenneModulus(p)
        result = phi_sum_chunked(mod, workers=workers)
        if isinstance(result, FactorWitness):
            outcome = (0, 0, result.divisor)
        else:
            outcome = (result, mod.half // 2 + 1, 0)
        return _sum_verdict(p, "v3", outcome, start, direction, "python")
    outcome = kernels.v3_ratio_sum(p, direction == "backward", backend)
    return _sum_verdict(p, "v3", outcome, start, direction, kernels.resolved_backend(p, backend))


for _fn in (test_v1_recurrence, test_v2_closed_form, test_v3_ratio):
    _fn.__test__ = False  # type: ignore[attr-defined]


def criterion_sum(p: int) -> tuple[int, int, int]:
    """Even-k sum of prod_{lam < k/2} ((4 lam)^2 - 1/4) / k! mod M.

    Accumulated as one fraction A / k! like ``v2``.  Returns
    ``(residue, terms, witness)``.
    """
    M = (1 << p) - 1
    n = 1 << (p - 1)
    inv4 = pow(4, -1, M)
    A = P = B = 1
    terms = 1
    for k in range(2, n // 2 + 1, 2):
        lam = k // 2 - 1
        kk = k * (k - 1)
        P = P * (16 * lam * lam - inv4) % M
        B = B * kk % M
        A = (A * kk + P) % M
        terms += 1
        if terms % _GCD_EVERY == 0 and gcd(B, M) != 1:
            return 0, terms, first_shared_factor(M, k).divisor
    if gcd(B, M) != 1:
        return 0, terms, first_shared_factor(M, n // 2).divisor
    return A * pow(B, -1, M) % M, terms, 0


def compositeness_criterion(p: int) -> TestVerdict:
    """Composite when the criterion sum is nonzero; a zero sum proves nothing."""
    _require_variant_exponent(p)
    start = time.perf_counter()
    return _sum_verdict(p, "criterion", criterion_sum(p), start, backend="python", zero_verdict="inconclusive")


def run_variant(p: int, variant: str, direction: str = "forward", workers: int = 1, backend: kernels.Backend = "auto") -> TestVerdict:
    if variant == "classic":
        return lucas_lehmer_classic(p, backend)
    if variant == "v1":
        return test_v1_recurrence(p, backend=backend)
    if variant == "v2":
        return test_v2_closed_form(p, backend)
    if variant == "v3":
        return test_v3_ratio(p, direction, workers, backend)
    if variant == "criterion":
        return compositeness_criterion(p)
    raise ValueError(f"unknown variant {variant!r}")


def even_perfect_check(N: int) -> PerfectVerdict:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    e = (N & -N).bit_length() - 1
    odd = N >> e
    p = e + 1
    if odd != (1 << p) - 1:
        return PerfectVerdict(N, False)
    try:
        require_prime_exponent(p)
    except ValueError:
        return PerfectVerdict(N, False)
    if p < 5 or p > PERFECT_V2_MAX_P:
        verdict = lucas_lehmer_classic(p)
    else:
        verdict = test_v2_closed_form(p)
    if verdict.verdict == "prime":
        return PerfectVerdict(N, True, p)
    return PerfectVerdict(N, False)
