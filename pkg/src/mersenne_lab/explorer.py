"""Partial-sum traces, the epsilon template, exact sums and their factors.

Traces take the even-k terms phi_k(n) mod M in the order k = n/2 first,
then k = 0, 2, ..., n/2 - 2, and record signed running sums.  The template
these sums are compared against is

    +2, +4, -4 + e, +8 + e, -8 + e, +16 + e, -16 + e, ...   (e in {-1, 0, 1})

Only the seven visible positions are checked; longer traces are flagged
as extending past the template instead of extrapolating its schedule.
"""

from __future__ import annotations

import logging
import time
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

from . import config
from .coefficients import phi_stream_mod
from .errors import CapExceeded, ConsistencyError, InexactDivisionError
from .factoring import factorize, is_probable_prime
from .modarith import FactorWitness, MersenneModulus, is_small_prime, require_prime_exponent

log = logging.getLogger(__name__)

# (base value, epsilon allowed) for template positions 1..7.
TEMPLATE: tuple[tuple[int, bool], ...] = (
    (2, False),
    (4, False),
    (-4, True),
    (8, True),
    (-8, True),
    (16, True),
    (-16, True),
)

FAMILIES = ("2^a+1", "2^a-1", "2^a+2^b+1", "2^a+2^b-1", "2^a-2^b+1", "2^a-2^b-1")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    term: int
    running_sum: int


@dataclass(frozen=True)
class PartialSumTrace:
    """Terms and running sums as signed residues in (-M/2, M/2]."""

    p: int
    records: tuple[TraceRecord, ...]
    witness: FactorWitness | None = None

    @property
    def M(self) -> int:
        return (1 << self.p) - 1

    @property
    def order(self) -> list[int]:
        return [r.k for r in self.records]

    @property
    def terms(self) -> list[int]:
        return [r.term for r in self.records]

    @property
    def running_sums(self) -> list[int]:
        return [r.running_sum for r in self.records]

    @property
    def complete(self) -> bool:
        return self.witness is None

    def to_csv(self) -> str:
        lines = ["k,term,running_sum"]
        lines += [f"{r.k},{r.term},{r.running_sum}" for r in self.records]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "M": str(self.M),
            "complete": self.complete,
            "witness": None if self.witness is None else str(self.witness.divisor),
            "records": [{"k": r.k, "term": str(r.term), "running_sum": str(r.running_sum)} for r in self.records],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PartialSumTrace:
        p = int(d["p"])
        w = d.get("witness")
        records = tuple(TraceRecord(int(r["k"]), int(r["term"]), int(r["running_sum"])) for r in d["records"])
        return cls(p, records, None if w is None else FactorWitness(int(w), (1 << p) - 1))


def partial_sum_trace(p: int, max_p: int | None = None) -> PartialSumTrace:
    require_prime_exponent(p, minimum=5)
    limit = config.DEFAULT_TRACE_MAX_P if max_p is None else max_p
    if p > limit:
        raise CapExceeded(f"trace for p={p} exceeds cap p <= {limit}")
    mod = MersenneModulus(p)
    first = pow(2, mod.n, mod.M)  # phi_{n/2} = 2^n
    total = first
    records = [TraceRecord(mod.half, mod.signed(first), mod.signed(total))]
    stream = phi_stream_mod(mod, "forward")
    for term in stream:
        if term.k == mod.half:
            if term.residue != first:
                raise ConsistencyError(f"stream ends at {term.residue}, expected 2^n = {first} mod M")
            break
        total = mod.reduce(total + term.residue)
        records.append(TraceRecord(term.k, mod.signed(term.residue), mod.signed(total)))
    return PartialSumTrace(p, tuple(records), stream.witness)


@dataclass(frozen=True)
class PatternReport:
    """Classification of a trace against the template.

    ``status`` is ``match`` (every sum checked and all fit), ``mismatch``
    (a visible position fails) or ``undetermined`` (the visible positions
    fit but the trace runs past them).  ``relaxed_match`` only asks that
    each visible sum be some +-2^j + e.
    """

    p: int
    status: str
    matches_hypothesis: bool
    mismatch_position: int | None
    epsilons: tuple[int, ...]
    deviations: tuple[int, ...]
    partial_sums: tuple[int, ...]
    beyond_template: int
    relaxed_match: bool
    complete_trace: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "status": self.status,
            "matches_hypothesis": self.matches_hypothesis,
            "mismatch_position": self.mismatch_position,
            "epsilons": list(self.epsilons),
            "deviations": [str(d) for d in self.deviations],
            "partial_sums": [str(s) for s in self.partial_sums],
            "beyond_template": self.beyond_template,
            "relaxed_match": self.relaxed_match,
            "complete_trace": self.complete_trace,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PatternReport:
        return cls(
            p=int(d["p"]),
            status=d["status"],
            matches_hypothesis=bool(d["matches_hypothesis"]),
            mismatch_position=d.get("mismatch_position"),
            epsilons=tuple(int(e) for e in d["epsilons"]),
            deviations=tuple(int(x) for x in d["deviations"]),
            partial_sums=tuple(int(s) for s in d["partial_sums"]),
            beyond_template=int(d["beyond_template"]),
            relaxed_match=bool(d["relaxed_match"]),
            complete_trace=bool(d.get("complete_trace", True)),
        )


def _signed(x: int, M: int) -> int:
    r = x % M
    return r - M if 2 * r > M else r


def _near_power_of_two(s: int, M: int) -> bool:
    """s = +-2^j + e (mod M) for some j >= 0 and e in {-1, 0, 1}."""
    for e in (-1, 0, 1):
        v = _signed(s - e, M)
        a = abs(v)
        if a and a & (a - 1) == 0:
            return True
    return False


def classify_epsilon_pattern(trace: PartialSumTrace) -> PatternReport:
    M = trace.M
    sums = trace.running_sums
    visible = sums[: len(TEMPLATE)]
    deviations = tuple(_signed(s - base, M) for s, (base, _) in zip(visible, TEMPLATE))
    epsilons: list[int] = []
    mismatch = None
    for i, (dev, (_, eps_ok)) in enumerate(zip(deviations, TEMPLATE), start=1):
        if dev == 0 or (eps_ok and abs(dev) == 1):
            if eps_ok:
                epsilons.append(dev)
            continue
        mismatch = i
        break
    if not sums:
        mismatch = 1
    beyond = max(0, len(sums) - len(TEMPLATE))
    if mismatch is not None:
        status = "mismatch"
    elif beyond or not trace.complete:
        status = "undetermined"
    else:
        status = "match"
    return PatternReport(
        p=trace.p,
        status=status,
        matches_hypothesis=status == "match",
        mismatch_position=mismatch,
        epsilons=tuple(epsilons),
        deviations=deviations,
        partial_sums=tuple(visible),
        beyond_template=beyond,
        relaxed_match=bool(visible) and all(_near_power_of_two(s, M) for s in visible),
        complete_trace=trace.complete,
    )


def full_sum_exact(p: int, cap: int | None = None) -> int:
    """Exact even-k sum of phi_k(n), n = 2^(p-1), via the exact ratio step."""
    require_prime_exponent(p, minimum=5)
    limit = config.DEFAULT_EXACT_SUM_MAX_P if cap is None else cap
    if p > limit:
        raise CapExceeded(f"exact sum for p={p} exceeds cap p <= {limit}")
    n = 1 << (p - 1)
    t = total = 2
    for k in range(2, n // 2 + 1, 2):
        num = t * ((2 * k - 4) ** 2 - n * n)
        den = k * (k - 1)
        t, rem = divmod(num, den)
        if rem:
            raise InexactDivisionError(num, den, f"phi_{k}({n})")
        total += t
    if t != 1 << n:
        raise ConsistencyError(f"last term {t} differs from 2^{n}")
    return total


@dataclass(frozen=True)
class FactorReport:
    p: int
    sum: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int
    complete: bool
    budget_spent: float  # milliseconds
    mersenne_divides: bool
    m_factor_relation: tuple[tuple[int, bool], ...] = field(default=())

    def product(self) -> int:
        out = self.cofactor
        for q, e in self.factors:
            out *= q**e
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "sum": str(self.sum),
            "factors": [[str(q), e] for q, e in self.factors],
            "cofactor": str(self.cofactor),
            "complete": self.complete,
            "budget_spent": self.budget_spent,
            "mersenne_divides": self.mersenne_divides,
            "m_factor_relation": [[str(q), d] for q, d in self.m_factor_relation],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> FactorReport:
        return cls(
            p=int(d["p"]),
            sum=int(d["sum"]),
            factors=tuple((int(q), int(e)) for q, e in d["factors"]),
            cofactor=int(d["cofactor"]),
            complete=bool(d["complete"]),
            budget_spent=float(d["budget_spent"]),
            mersenne_divides=bool(d["mersenne_divides"]),
            m_factor_relation=tuple((int(q), bool(x)) for q, x in d.get("m_factor_relation", [])),
        )


def factor_sum(p: int, budget_ms: int | None = None, seed: int = 0, cap: int | None = None) -> FactorReport:
    """Factor the exact sum; running out of budget gives complete=False."""
    budget = config.DEFAULT_FACTOR_BUDGET_MS if budget_ms is None else budget_ms
    if budget <= 0:
        raise ValueError("budget must be positive")
    start = time.perf_counter()
    total = full_sum_exact(p, cap)
    M = (1 << p) - 1
    primes, cofactor, complete = factorize(total, budget, seed)
    relation: tuple[tuple[int, bool], ...] = ()
    if not is_probable_prime(M):
        m_primes, _, _ = factorize(M, budget, seed)
        relation = tuple((q, total % q == 0) for q in m_primes)
    spent = (time.perf_counter() - start) * 1000
    return FactorReport(p, total, tuple(primes.items()), cofactor, complete, spent, total % M == 0, relation)


def family_members(family: str, a_range: Iterable[int], b_range: Iterable[int] | None = None) -> list[tuple[int, int | None, int]]:
    """(a, b, value) for each family member; b is None for one-term families."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    a_values = list(a_range)
    out: list[tuple[int, int | None, int]] = []
    if family in ("2^a+1", "2^a-1"):
        sign = 1 if family.endswith("+1") else -1
        out = [(a, None, (1 << a) + sign) for a in a_values if a >= 0]
    else:
        b_values = list(b_range) if b_range is not None else []
        mid = 1 if family[3] == "+" else -1
        last = 1 if family.endswith("+1") else -1
        out = [(a, b, (1 << a) + mid * (1 << b) + last) for a in a_values for b in b_values if 0 <= b < a]
    return out


@dataclass(frozen=True)
class ScanResult:
    family: str
    reports: tuple[PatternReport, ...]
    skipped: tuple[tuple[int, str], ...]

    @property
    def summary(self) -> dict[str, Any]:
        tested = len(self.reports)
        count = {s: sum(r.status == s for r in self.reports) for s in ("match", "mismatch", "undetermined")}
        relaxed = sum(r.relaxed_match for r in self.reports)
        return {
            "tested": tested,
            **count,
            "relaxed_match": relaxed,
            "match_rate": count["match"] / tested if tested else 0.0,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "family": self.family,
            "summary": self.summary,
            "reports": [r.to_dict() for r in self.reports],
            "skipped": [[p, why] for p, why in self.skipped],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ScanResult:
        return cls(
            d["family"],
            tuple(PatternReport.from_dict(r) for r in d["reports"]),
            tuple((int(p), why) for p, why in d["skipped"]),
        )


def _classify_p(p: int) -> PatternReport:
    return classify_epsilon_pattern(partial_sum_trace(p))


def scan_exponent_family(
    family: str,
    a_range: Iterable[int],
    b_range: Iterable[int] | None = None,
    max_p: int | None = None,
    workers: int = 1,
) -> ScanResult:
    members = family_members(family, a_range, b_range)
    if not members:
        raise ValueError(f"empty range for family {family}")
    limit = config.DEFAULT_TRACE_MAX_P if max_p is None else max_p
    todo: list[int] = []
    skipped: list[tuple[int, str]] = []
    for _, _, p in members:
        if p in todo or any(p == s for s, _ in skipped):
            continue
        if not is_small_prime(p):
            reason = "not prime"
        elif p < 5:
            reason = "below 5"
        elif p > limit:
            reason = f"above trace cap {limit}"
        else:
            todo.append(p)
            continue
        log.info("skipping p=%d (%s)", p, reason)
        skipped.append((p, reason))
    todo.sort()
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_classify_p, todo))
    else:
        reports = [_classify_p(p) for p in todo]
    return ScanResult(family, tuple(reports), tuple(sorted(skipped)))
