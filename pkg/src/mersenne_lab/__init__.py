"""Psi/phi coefficient engine and Lucas-Lehmer style tests for 2^p - 1."""

from __future__ import annotations

from .coefficients import (
    PhiStream,
    PhiTermMod,
    PsiTable,
    delta,
    phi_exact,
    phi_stream_mod,
    phi_sum_chunked,
    phi_term_mod_at,
    psi_closed_form,
    psi_from_even,
    psi_ratio,
    psi_row_closed,
    psi_row_ratio,
    psi_table,
)
from .errors import CapExceeded, ConsistencyError, InexactDivisionError, MersenneLabError, UndefinedRatio
from .explorer import (
    FactorReport,
    PartialSumTrace,
    PatternReport,
    classify_epsilon_pattern,
    factor_sum,
    full_sum_exact,
    partial_sum_trace,
    scan_exponent_family,
)
from .identities import (
    IdentityReport,
    LucasSeq,
    factorial_identity_check,
    lucas_number,
    sign_zero_pattern_check,
    weighted_sum_identities,
)
from .kernels import BACKEND
from .modarith import FactorWitness, MersenneModulus
from .oracle import SymmetricPoly, numeric_spot_check, oracle_psi, power_sum_poly
from .primality import (
    PerfectVerdict,
    TestVerdict,
    compositeness_criterion,
    even_perfect_check,
    lucas_lehmer_classic,
    test_v1_recurrence,
    test_v2_closed_form,
    test_v3_ratio,
)

__version__ = "0.1.0"
