"""Compiled and pure-Python kernels must agree exactly."""

from __future__ import annotations

import pytest

from mersenne_lab import _pykernels, kernels
from mersenne_lab.coefficients import phi_stream_mod
from mersenne_lab.explorer import full_sum_exact
from mersenne_lab.modarith import MersenneModulus

PRIMES = [5, 7, 11, 13, 17, 19, 23]
needs_native = pytest.mark.skipif(not kernels.NATIVE_AVAILABLE, reason="compiled kernels not built")


def _stream_sum(p):
    stream = phi_stream_mod(MersenneModulus(p))
    total = sum(t.residue for t in stream) % (2**p - 1)
    return stream.witness, total


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_python_kernels_against_stream(p):
    witness, total = _stream_sum(p)
    v1 = _pykernels.v1_table_sum(p)
    v2 = _pykernels.v2_fraction_sum(p)
    v3f = _pykernels.v3_ratio_sum(p)
    v3b = _pykernels.v3_ratio_sum(p, backward=True)
    if witness is None:
        assert v1 == total
        assert v2[0] == v3f[0] == v3b[0] == total
        assert v2[2] == v3f[2] == v3b[2] == 0
    else:
        for out in (v2, v3f, v3b):
            assert out[2] == witness.divisor
    # v1 never inverts anything, so it always yields the true residue
    assert v1 == full_sum_exact(p) % (2**p - 1)


def test_python_ll_iterate():
    s = 4
    M = 2**13 - 1
    for _ in range(11):
        s = (s * s - 2) % M
    assert _pykernels.ll_iterate(13) == s == 0


@needs_native
@pytest.mark.parametrize("p", PRIMES)
def test_native_matches_python(p):
    if p <= 13:
        assert kernels.v1_table_sum(p, "native") == kernels.v1_table_sum(p, "python")
    assert kernels.v2_fraction_sum(p, "native") == kernels.v2_fraction_sum(p, "python")
    for backward in (False, True):
        assert kernels.v3_ratio_sum(p, backward, "native") == kernels.v3_ratio_sum(p, backward, "python")
    assert kernels.ll_iterate(p, "native") == kernels.ll_iterate(p, "python")


@needs_native
@pytest.mark.parametrize("p", [29, 37, 41, 43, 47, 53, 59])
def test_native_witnesses_for_composite_m(p):
    for backward in (False, True):
        assert kernels.v3_ratio_sum(p, backward, "native") == kernels.v3_ratio_sum(p, backward, "python")
        r, _, w = kernels.v3_ratio_sum(p, backward, "native")
        assert w > 1 and (2**p - 1) % w == 0
    assert kernels.v2_fraction_sum(p, "native") == kernels.v2_fraction_sum(p, "python")


@needs_native
@pytest.mark.parametrize("p", [3, 5, 31, 61])
def test_native_ll_edge_exponents(p):
    assert kernels.ll_iterate(p, "native") == _pykernels.ll_iterate(p)


@needs_native
def test_native_range_guard():
    with pytest.raises(ValueError):
        kernels.ll_iterate(89, "native")
    with pytest.raises(ValueError):
        kernels.ll_iterate(2, "native")


def test_auto_falls_back_outside_word_range():
    assert kernels.resolved_backend(89) == "python"
    assert kernels.ll_iterate(89) == 0
    assert kernels.resolved_backend(2) == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.ll_iterate(5, "gpu")


def test_backend_constant():
    assert kernels.BACKEND in ("native", "python")
    assert kernels.BACKEND == ("native" if kernels.NATIVE_AVAILABLE else "python")
