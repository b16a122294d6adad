"""Closed-form and direct evaluation of 3F2(a, b, c; b+1+m, c+1+n; 1)."""

from .identities import (
    METHODS,
    REGISTRY,
    IdentityId,
    eval_a1_limit,
    eval_corollary1,
    eval_karlsson_kb,
    eval_miller_paris,
    eval_milgram_om,
    eval_special_7_4_4_16,
    eval_theorem1,
    eval_theorem2,
    eval_zx,
    eval_zy,
    evaluate,
)
from .numerics import (
    DomainViolation,
    Hyp32Error,
    NearSingular,
    SlowConvergence,
    Status,
    Tolerance,
    ValueWithError,
)
from .series import GaussSpec, Hyp32Spec, Params3F2NegDiff, sum_3f2_unit_oracle
from .verify import SampleConstraints, VerifyReport, check_identity, probe_singular

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "REGISTRY",
    "IdentityId",
    "eval_a1_limit",
    "eval_corollary1",
    "eval_karlsson_kb",
    "eval_miller_paris",
    "eval_milgram_om",
    "eval_special_7_4_4_16",
    "eval_theorem1",
    "eval_theorem2",
    "eval_zx",
    "eval_zy",
    "evaluate",
    "DomainViolation",
    "Hyp32Error",
    "NearSingular",
    "SlowConvergence",
    "Status",
    "Tolerance",
    "ValueWithError",
    "GaussSpec",
    "Hyp32Spec",
    "Params3F2NegDiff",
    "sum_3f2_unit_oracle",
    "SampleConstraints",
    "VerifyReport",
    "check_identity",
    "probe_singular",
]
