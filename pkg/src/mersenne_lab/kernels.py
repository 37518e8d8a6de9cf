"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it imported cleanly and the
exponent fits in a machine word (3 <= p <= 61); otherwise calls fall through
to ``_pykernels``.  Set ``MERSENNE_LAB_PURE=1`` to force pure Python.
"""

from __future__ import annotations

import os
from typing import Literal

from . import _pykernels

PURE_ENV = "MERSENNE_LAB_PURE"

Backend = Literal["auto", "native", "python"]

try:
    if os.environ.get(PURE_ENV, "") not in ("", "0"):
        raise ImportError("pure Python forced by environment")
    from . import _kernels as _native
except ImportError:
    _native = None

NATIVE_AVAILABLE = _native is not None
NATIVE_MAX_P = 61
BACKEND = "native" if NATIVE_AVAILABLE else "python"


def _impl(p: int, backend: Backend):
    if backend not in ("auto", "native", "python"):
        raise ValueError(f"unknown backend {backend!r}")
    fits = 3 <= p <= NATIVE_MAX_P
    if backend == "native":
        if not NATIVE_AVAILABLE:
            raise RuntimeError("compiled kernels are not available")
        if not fits:
            raise ValueError(f"compiled kernels support 3 <= p <= {NATIVE_MAX_P}, got {p}")
        return _native
    if backend == "auto" and NATIVE_AVAILABLE and fits:
        return _native
    return _pykernels


def resolved_backend(p: int, backend: Backend = "auto") -> str:
    return "native" if _impl(p, backend) is _native else "python"


def v1_table_sum(p: int, backend: Backend = "auto") -> int:
    return _impl(p, backend).v1_table_sum(p)


def v2_fraction_sum(p: int, backend: Backend = "auto") -> tuple[int, int, int]:
    return _impl(p, backend).v2_fraction_sum(p)


def v3_ratio_sum(p: int, backward: bool = False, backend: Backend = "auto") -> tuple[int, int, int]:
    return _impl(p, backend).v3_ratio_sum(p, backward)


def ll_iterate(p: int, backend: Backend = "auto") -> int:
    return _impl(p, backend).ll_iterate(p)
