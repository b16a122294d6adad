"""Shared numerical plumbing: status flags, error-tracked values, tolerances
and compensated accumulation."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "Status",
    "ValueWithError",
    "Tolerance",
    "Hyp32Error",
    "DomainViolation",
    "NearSingular",
    "SlowConvergence",
    "EPS",
    "compensated_sum",
    "rel_err",
    "is_nonpositive_integer",
    "nearest_integer_distance",
]

EPS = 2.220446049250313e-16


class Status(str, enum.Enum):
    OK = "ok"
    SLOW_CONVERGENCE = "slow_convergence"
    NEAR_SINGULAR = "near_singular"
    DOMAIN_VIOLATION = "domain_violation"

    @property
    def severity(self) -> int:
        return _SEVERITY[self]

    def worst(self, other: "Status") -> "Status":
        return self if self.severity >= other.severity else other


_SEVERITY = {
    Status.OK: 0,
    Status.SLOW_CONVERGENCE: 1,
    Status.NEAR_SINGULAR: 2,
    Status.DOMAIN_VIOLATION: 3,
}


class Hyp32Error(ArithmeticError):
    """Base class; ``status`` tells callers which flag the failure maps to."""

    status = Status.DOMAIN_VIOLATION


class DomainViolation(Hyp32Error, ValueError):
    status = Status.DOMAIN_VIOLATION


class NearSingular(Hyp32Error):
    status = Status.NEAR_SINGULAR


class SlowConvergence(Hyp32Error):
    status = Status.SLOW_CONVERGENCE


@dataclass(frozen=True)
class ValueWithError:
    """A complex value with an absolute error estimate.

    When ``status`` is ``Status.OK`` the estimate is meant as a bound on
    ``|true - value|``; other statuses mean the value is usable but suspect.
    """

    value: complex
    abs_err: float = 0.0
    status: Status = Status.OK
    reason: str = ""

    def __post_init__(self):
        if not self.abs_err >= 0.0:
            raise ValueError(f"abs_err must be >= 0, got {self.abs_err!r}")

    @property
    def ok(self) -> bool:
        return self.status is Status.OK

    def scaled(self, factor: complex, factor_rel_err: float = 0.0) -> "ValueWithError":
        v = self.value * factor
        err = self.abs_err * abs(factor) + abs(v) * factor_rel_err
        return ValueWithError(v, err, self.status, self.reason)


@dataclass(frozen=True)
class Tolerance:
    rel_tol: float = 1e-10
    abs_floor: float = 1e-300
    max_terms: int = 10**7

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


def compensated_sum(terms: Iterable[complex]) -> complex:
    """Sum complex terms with exactly rounded accumulation of each component.

    >>> compensated_sum([1.0, 1e16, -1e16])
    (1+0j)
    """
    re: list[float] = []
    im: list[float] = []
    for t in terms:
        t = complex(t)
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def rel_err(x: complex, y: complex, abs_floor: float = 1e-300) -> float:
    """Relative error of ``x`` with respect to the reference ``y``.

    The denominator is ``max(|y|, abs_floor)``, so the function is not
    symmetric; use ``max(rel_err(x, y), rel_err(y, x))`` for a symmetric
    variant.
    """
    d = abs(complex(x) - complex(y))
    if d == 0.0:
        return 0.0
    return d / max(abs(complex(y)), abs_floor)


def is_nonpositive_integer(z: complex) -> bool:
    """Exact test; no tolerance is applied."""
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def nearest_integer_distance(z: complex) -> tuple[int, float]:
    """Nearest integer to ``z`` and the complex distance to it."""
    z = complex(z)
    k = round(z.real)
    return k, abs(z - k)
