"""Resource caps.

The Psi table is quadratic in its size and exact coefficient sums grow like
2^n, so every expensive path is bounded by a cap from here.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

TABLE_CAP_ENV = "MERSENNE_LAB_MAX_TABLE"

DEFAULT_TABLE_CAP = 4096
DEFAULT_ORACLE_CAP = 512
DEFAULT_EXACT_SUM_MAX_P = 13
DEFAULT_TRACE_MAX_P = 19
DEFAULT_FACTOR_BUDGET_MS = 20_000


def table_cap() -> int:
    raw = os.environ.get(TABLE_CAP_ENV)
    if raw is None or raw == "":
        return DEFAULT_TABLE_CAP
    value = int(raw)
    if value <= 0:
        raise ValueError(f"{TABLE_CAP_ENV} must be positive, got {raw!r}")
    return value


@dataclass(frozen=True)
class Limits:
    table: int = DEFAULT_TABLE_CAP
    oracle: int = DEFAULT_ORACLE_CAP
    exact_sum_max_p: int = DEFAULT_EXACT_SUM_MAX_P
    trace_max_p: int = DEFAULT_TRACE_MAX_P
    factor_budget_ms: int = DEFAULT_FACTOR_BUDGET_MS

    def __post_init__(self) -> None:
        for name in ("table", "oracle", "exact_sum_max_p", "trace_max_p", "factor_budget_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"cap {name} must be positive")

    @classmethod
    def from_env(cls) -> Limits:
        return cls(table=table_cap())
