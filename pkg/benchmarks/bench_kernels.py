"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--format text|json]
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit
from dataclasses import asdict, dataclass
from typing import Callable

from mersenne_lab import kernels


@dataclass
class Row:
    kernel: str
    p: int
    python_s: float
    native_s: float | None
    speedup: float | None
    agree: bool | None


CASES: list[tuple[str, int, Callable[[int, str], object]]] = [
    ("v1_table_sum", 13, lambda p, b: kernels.v1_table_sum(p, b)),
    ("v2_fraction_sum", 17, lambda p, b: kernels.v2_fraction_sum(p, b)[0]),
    ("v2_fraction_sum", 19, lambda p, b: kernels.v2_fraction_sum(p, b)[0]),
    ("v3_forward", 17, lambda p, b: kernels.v3_ratio_sum(p, False, b)[0]),
    ("v3_forward", 19, lambda p, b: kernels.v3_ratio_sum(p, False, b)[0]),
    ("v3_backward", 19, lambda p, b: kernels.v3_ratio_sum(p, True, b)[0]),
    ("ll_iterate", 4423, lambda p, b: kernels.ll_iterate(p, b)),
    ("ll_iterate", 61, lambda p, b: kernels.ll_iterate(p, b)),
]


def best_of(fn: Callable[[], object], repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench(repeat: int) -> list[Row]:
    rows = []
    for name, p, fn in CASES:
        py = best_of(lambda: fn(p, "python"), repeat)
        native = speed = agree = None
        if kernels.NATIVE_AVAILABLE and p <= kernels.NATIVE_MAX_P:
            native = best_of(lambda: fn(p, "native"), repeat)
            speed = py / native if native else None
            agree = fn(p, "python") == fn(p, "native")
        rows.append(Row(name, p, py, native, speed, agree))
    return rows


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--format", choices=("text", "json"), default="text")
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    if args.format == "json":
        print(json.dumps([asdict(r) for r in rows], indent=2))
    else:
        print(f"native extension available: {kernels.NATIVE_AVAILABLE}")
        print(f"{'kernel':<16} {'p':>5} {'python s':>10} {'native s':>10} {'speedup':>8}  agree")
        for r in rows:
            nat = "-" if r.native_s is None else f"{r.native_s:10.5f}"
            sp = "-" if r.speedup is None else f"{r.speedup:7.1f}x"
            print(f"{r.kernel:<16} {r.p:>5} {r.python_s:10.5f} {nat:>10} {sp:>8}  {'-' if r.agree is None else r.agree}")
    return 0 if all(r.agree is not False for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
