"""Command-line front end.

Every subcommand writes one report to stdout (json, csv or text) and
diagnostics to stderr.  Exit status: 0 on success, 64 for usage errors,
65 when two computations that must agree do not.  With ``--exit-verdict``
the ``test`` subcommand exits 0/20/21 for prime/composite/inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from . import config, identities, oracle
from .coefficients import phi_exact, phi_stream_mod, psi_closed_form, psi_from_even, psi_row_closed, psi_row_ratio, psi_table
from .errors import CapExceeded, ConsistencyError, InexactDivisionError, MersenneLabError
from .explorer import FAMILIES, classify_epsilon_pattern, factor_sum, partial_sum_trace, scan_exponent_family
from .modarith import MersenneModulus
from .primality import VARIANTS, even_perfect_check, run_variant

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_INCONSISTENT = 65
VERDICT_EXIT = {"prime": 0, "composite": 20, "inconclusive": 21}

log = logging.getLogger("mersenne_lab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse exits 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    p: int | None = None
    n: int | None = None
    N: int | None = None
    variant: str = "v2"
    direction: str = "forward"
    format: str = "json"
    k_max: int | None = None
    n_max: int | None = None
    budget_ms: int = config.DEFAULT_FACTOR_BUDGET_MS
    parallel: int = 1
    seed: int = 0
    exit_verdict: bool = False
    family: str | None = None
    a_range: range | None = None
    b_range: range | None = None
    table_cap: int = config.DEFAULT_TABLE_CAP

    def __post_init__(self) -> None:
        if self.format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.budget_ms <= 0 or self.table_cap <= 0:
            raise UsageError("caps must be positive")
        if self.parallel < 1:
            raise UsageError("--parallel must be >= 1")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        get = lambda name, default=None: getattr(args, name, default)  # noqa: E731
        return cls(
            subcommand=args.command,
            p=get("p"),
            n=get("n"),
            N=get("N"),
            variant=get("variant") or "v2",
            direction=get("direction") or "forward",
            format=args.format,
            k_max=get("k_max"),
            n_max=get("n_max"),
            budget_ms=get("budget_ms") or config.DEFAULT_FACTOR_BUDGET_MS,
            parallel=get("parallel") or 1,
            seed=get("seed") or 0,
            exit_verdict=bool(get("exit_verdict")),
            family=get("family"),
            a_range=get("a_range"),
            b_range=get("b_range"),
            table_cap=config.table_cap(),
        )


def _range_arg(text: str) -> range:
    """``A:B`` (inclusive) or a single integer."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return range(int(lo), int(hi) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B or an integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = _Parser(prog="mersenne-lab", description="Psi/phi coefficients and Mersenne primality tests.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("test", parents=[common], help="run a primality test on 2^p - 1")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--variant", choices=VARIANTS, default="v2")
    t.add_argument("--direction", choices=("forward", "backward"), default="forward")
    t.add_argument("--parallel", type=int, default=1, help="worker processes for v3 forward")
    t.add_argument("--exit-verdict", action="store_true", help="exit 0/20/21 for prime/composite/inconclusive")

    ps = sub.add_parser("psi", parents=[common], help="Psi_k(n) coefficients")
    ps.add_argument("--n", type=int, help="single row n")
    ps.add_argument("--n-max", type=int, help="full table for 0 <= m <= n-max")
    ps.add_argument("--k-max", type=int)

    ph = sub.add_parser("phi", parents=[common], help="phi_k(n) exactly (--n) or mod 2^p - 1 (--p)")
    ph.add_argument("--p", type=int)
    ph.add_argument("--n", type=int)
    ph.add_argument("--k-max", type=int, help="with --n: largest k; with --p: stop after k-max/2 + 1 stream terms")
    ph.add_argument("--direction", choices=("forward", "backward"), default="forward")

    v = sub.add_parser("verify", parents=[common], help="cross-check all coefficient routes against the oracle")
    v.add_argument("--n-max", type=int, default=64)
    v.add_argument("--seed", type=int, default=20230401)

    i = sub.add_parser("identities", parents=[common], help="factorial, weighted-sum and sign identities")
    i.add_argument("--n", type=int, help="check a single n")
    i.add_argument("--n-max", type=int, default=64, help="range for the sign table")
    i.add_argument("--k-max", type=int, help="k range for the sign table")

    e = sub.add_parser("explore", parents=[common], help="partial-sum trace and template classification")
    e.add_argument("--p", type=int, required=True)

    f = sub.add_parser("factor-sum", parents=[common], help="factor the exact phi sum")
    f.add_argument("--p", type=int, required=True)
    f.add_argument("--budget-ms", type=int, default=config.DEFAULT_FACTOR_BUDGET_MS)
    f.add_argument("--seed", type=int, default=0)

    pf = sub.add_parser("perfect", parents=[common], help="even perfect number check")
    pf.add_argument("--N", type=int, required=True)

    s = sub.add_parser("scan", parents=[common], help="classify traces over an exponent family")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--a-range", type=_range_arg, required=True, metavar="A:B")
    s.add_argument("--b-range", type=_range_arg, metavar="A:B")
    s.add_argument("--parallel", type=int, default=1)
    return parser


# Report builders return (payload dict, csv rows or None, text lines).
Report = tuple[dict[str, Any], list[list[Any]] | None, list[str]]


def _test(cfg: RunConfig) -> tuple[Report, str]:
    v = run_variant(cfg.p, cfg.variant, cfg.direction, cfg.parallel)
    d = v.to_dict()
    rows = [list(d.keys()), [_flat(x) for x in d.values()]]
    text = [f"p={v.p} M={v.M} variant={v.variant} verdict={v.verdict}"]
    if v.residue is not None:
        text.append(f"residue={v.residue}")
    if v.factor_witness is not None:
        text.append(f"factor witness: {v.factor_witness.divisor}")
    text.append(f"terms={v.terms_evaluated} elapsed={v.elapsed:.6f}s")
    return (d, rows, text), v.verdict


def _psi(cfg: RunConfig) -> Report:
    if (cfg.n is None) == (cfg.n_max is None):
        raise UsageError("psi needs exactly one of --n or --n-max")
    kmax = cfg.k_max
    if cfg.n_max is not None:
        table = psi_table(cfg.n_max, cap=cfg.table_cap)
        entries = [(m, k, v) for m, k, v in table.entries() if kmax is None or k <= kmax]
    else:
        if cfg.n < 0:
            raise UsageError("--n must be non-negative")
        if cfg.n > cfg.table_cap:
            raise CapExceeded(f"n={cfg.n} exceeds cap {cfg.table_cap}")
        entries = [(cfg.n, k, v) for k, v in enumerate(psi_row_closed(cfg.n)) if kmax is None or k <= kmax]
    payload = {"entries": [{"n": m, "k": k, "psi": str(v)} for m, k, v in entries]}
    rows = [["n", "k", "psi"]] + [[m, k, v] for m, k, v in entries]
    text = [f"Psi_{k}({m}) = {v}" for m, k, v in entries]
    return payload, rows, text


def _phi(cfg: RunConfig) -> Report:
    if (cfg.n is None) == (cfg.p is None):
        raise UsageError("phi needs exactly one of --n or --p")
    kmax = cfg.k_max
    if cfg.n is not None:
        if cfg.n < 0 or cfg.n > cfg.table_cap:
            raise UsageError(f"--n must be in 0..{cfg.table_cap}")
        terms = [(k, phi_exact(cfg.n, k)) for k in range(cfg.n // 2 + 1) if kmax is None or k <= kmax]
        payload = {"n": cfg.n, "terms": [{"k": k, "phi": str(v)} for k, v in terms]}
        rows = [["n", "k", "phi"]] + [[cfg.n, k, v] for k, v in terms]
        return payload, rows, [f"phi_{k}({cfg.n}) = {v}" for k, v in terms]
    mod = MersenneModulus(cfg.p)
    stream = phi_stream_mod(mod, cfg.direction)
    terms = []
    for term in stream:
        if kmax is not None and len(terms) > kmax // 2:
            break
        terms.append((term.k, term.residue))
    witness = stream.witness
    payload = {
        "p": cfg.p,
        "M": str(mod.M),
        "direction": cfg.direction,
        "terms": [{"k": k, "residue": str(r)} for k, r in terms],
        "witness": None if witness is None else str(witness.divisor),
    }
    rows = [["k", "residue"]] + [[k, r] for k, r in terms]
    text = [f"phi_{k}({mod.n}) = {r} mod {mod.M}" for k, r in terms]
    if witness is not None:
        text.append(f"stream stopped: factor witness {witness.divisor}")
    return payload, rows, text


def verify_all(n_max: int = 64, seed: int = 20230401) -> dict[str, Any]:
    """Every coefficient route against the oracle for n <= n_max."""
    table = psi_table(n_max)
    mismatches: list[str] = []
    for n in range(n_max + 1):
        ref = oracle.oracle_psi(n)
        routes = {
            "closed": [psi_closed_form(n, k) for k in range(n // 2 + 1)],
            "table": table.row(n),
            "ratio_forward": psi_row_ratio(n, "forward"),
            "ratio_backward": psi_row_ratio(n, "backward"),
            "phi": [phi_exact(n, k) >> (2 * k) for k in range(n // 2 + 1)],
        }
        if n % 2:
            routes["odd_from_even"] = [psi_from_even(n, k) for k in range(n // 2 + 1)]
        for name, row in routes.items():
            if row != ref:
                mismatches.append(f"{name} n={n}")
    spots = oracle.random_spot_checks(seed=seed)
    quad = [n for n in range(n_max + 1) if not oracle.quadratic_spot_check(n)]
    return {
        "n_max": n_max,
        "routes_agree": not mismatches,
        "mismatches": mismatches,
        "spot_checks": len(spots),
        "spot_checks_passed": sum(ok for *_, ok in spots),
        "quadratic_point_failures": quad,
        "passed": not mismatches and all(ok for *_, ok in spots) and not quad,
    }


def _verify(cfg: RunConfig) -> Report:
    n_max = 64 if cfg.n_max is None else cfg.n_max
    if n_max > config.DEFAULT_ORACLE_CAP:
        raise CapExceeded(f"--n-max {n_max} exceeds oracle cap {config.DEFAULT_ORACLE_CAP}")
    d = verify_all(n_max, cfg.seed or 20230401)
    if not d["passed"]:
        raise ConsistencyError("verification failed: " + ", ".join(d["mismatches"][:10]))
    rows = [["check", "value"]] + [[k, _flat(v)] for k, v in d.items()]
    return d, rows, [f"{k}: {v}" for k, v in d.items()]


def _identities(cfg: RunConfig) -> Report:
    reports: dict[str, list[identities.IdentityReport]] = {}
    if cfg.n is not None:
        if cfg.n < 1:
            raise UsageError("--n must be >= 1")
        reports["factorial"] = [identities.factorial_identity_check(cfg.n)]
        if cfg.n >= 16 and cfg.n & (cfg.n - 1) == 0:
            reports["weighted"] = [identities.weighted_sum_identities(cfg.n, cap=cfg.table_cap)]
        else:
            reports["weighted_sample"] = identities.weighted_sum_sample([cfg.n])
    else:
        n_max = 64 if cfg.n_max is None else cfg.n_max
        k_max = n_max // 2 if cfg.k_max is None else cfg.k_max
        reports["factorial"] = [identities.factorial_identity_check(n) for n in range(1, 201)]
        reports["weighted"] = [identities.weighted_sum_identities(n) for n in (16, 64, 256, 1024)]
        reports["weighted_sample"] = identities.weighted_sum_sample()
        reports["signs"] = identities.sign_zero_pattern_check(n_max, k_max, cap=cfg.table_cap)
        reports["sign_periodicity"] = [identities.sign_periodicity_check(n_max)]
    payload = {
        name: {"passed": all(r.passed for r in rs), "reports": [r.to_dict() for r in rs]} for name, rs in reports.items()
    }
    rows = [["group", "n", "identity", "left", "right", "pass"]]
    text = []
    for name, rs in reports.items():
        text.append(f"{name}: {'pass' if all(r.passed for r in rs) else 'FAIL'} ({len(rs)} reports)")
        for r in rs:
            for c in r.checks:
                rows.append([name, r.n, c.identity, c.left, c.right, c.passed])
                if not c.passed:
                    text.append(f"  n={r.n} {c.identity}: {c.left} != {c.right}")
    return payload, rows, text


def _explore(cfg: RunConfig) -> Report:
    trace = partial_sum_trace(cfg.p)
    pattern = classify_epsilon_pattern(trace)
    payload = {"trace": trace.to_dict(), "pattern": pattern.to_dict()}
    rows = [["k", "term", "running_sum"]] + [[r.k, r.term, r.running_sum] for r in trace.records]
    text = [f"p={cfg.p} M={trace.M}"]
    text += [f"k={r.k:>6} term={r.term:>+12} sum={r.running_sum:>+12}" for r in trace.records]
    if trace.witness is not None:
        text.append(f"stopped: factor witness {trace.witness.divisor}")
    text.append(f"template: {pattern.status} (mismatch at {pattern.mismatch_position}, relaxed {pattern.relaxed_match})")
    return payload, rows, text


def _factor_sum(cfg: RunConfig) -> Report:
    r = factor_sum(cfg.p, cfg.budget_ms, cfg.seed)
    d = r.to_dict()
    rows = [["prime", "multiplicity"]] + [[q, e] for q, e in r.factors]
    if r.cofactor != 1:
        rows.append([r.cofactor, "unfactored"])
    shown = " * ".join(f"{q}^{e}" if e > 1 else str(q) for q, e in r.factors)
    text = [f"sum = {r.sum}", f"factors: {shown}" + ("" if r.complete else f" * [{r.cofactor}]")]
    text.append(f"complete={r.complete} M divides sum: {r.mersenne_divides}")
    for q, divides in r.m_factor_relation:
        text.append(f"factor {q} of M {'divides' if divides else 'does not divide'} the sum")
    return d, rows, text


def _perfect(cfg: RunConfig) -> Report:
    if cfg.N is None or cfg.N < 1:
        raise UsageError("--N must be >= 1")
    r = even_perfect_check(cfg.N)
    d = r.to_dict()
    rows = [list(d.keys()), [_flat(x) for x in d.values()]]
    text = [f"N={r.N} even perfect: {r.is_even_perfect}" + (f" (p={r.p})" if r.p else "")]
    return d, rows, text


def _scan(cfg: RunConfig) -> Report:
    result = scan_exponent_family(cfg.family, cfg.a_range, cfg.b_range, workers=cfg.parallel)
    d = result.to_dict()
    rows = [["p", "status", "mismatch_position", "relaxed_match", "beyond_template"]]
    rows += [[r.p, r.status, r.mismatch_position, r.relaxed_match, r.beyond_template] for r in result.reports]
    text = [f"family {result.family}: {result.summary}"]
    text += [f"p={r.p} {r.status} relaxed={r.relaxed_match}" for r in result.reports]
    text += [f"skipped p={p}: {why}" for p, why in result.skipped]
    return d, rows, text


def _flat(x: Any) -> Any:
    if isinstance(x, (dict, list)):
        return json.dumps(x, separators=(",", ":"))
    return "" if x is None else x


def emit(report: Report, fmt: str, out: io.TextIOBase) -> None:
    payload, rows, text = report
    if fmt == "json":
        out.write(json.dumps(payload, separators=(",", ":")) + "\n")
    elif fmt == "csv":
        if rows is None:
            raise UsageError("csv output is not available for this report")
        w = csv.writer(out, lineterminator="\n")
        w.writerows(rows)
    else:
        out.write("\n".join(text) + "\n")


_HANDLERS = {
    "psi": _psi,
    "phi": _phi,
    "verify": _verify,
    "identities": _identities,
    "explore": _explore,
    "factor-sum": _factor_sum,
    "perfect": _perfect,
    "scan": _scan,
}


def run(argv: Sequence[str] | None = None, out: io.TextIOBase | None = None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    start = time.perf_counter()
    try:
        cfg = RunConfig.from_args(args)
        if cfg.subcommand == "test":
            report, verdict = _test(cfg)
            emit(report, cfg.format, out)
            status = VERDICT_EXIT[verdict] if cfg.exit_verdict else EXIT_OK
        else:
            emit(_HANDLERS[cfg.subcommand](cfg), cfg.format, out)
            status = EXIT_OK
    except (InexactDivisionError, ConsistencyError) as exc:
        print(f"mersenne-lab: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (UsageError, CapExceeded, ValueError, TypeError, IndexError) as exc:
        print(f"mersenne-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MersenneLabError as exc:
        print(f"mersenne-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    log.info("%s finished in %.3fs", args.command, time.perf_counter() - start)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
