"""Direct series evaluation.

This module is the independent reference for every closed form in
:mod:`hyp32.identities`: it only ever sums the defining hypergeometric
series term by term (plus a controlled tail model at unit argument).  It
never uses Gamma-function summation results except in
:func:`gauss_2f1_unit`, which is Gauss's theorem itself.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .gamma_kit import gamma_ratio, pochhammer
from .numerics import (
    EPS,
    DomainViolation,
    NearSingular,
    SlowConvergence,
    Status,
    Tolerance,
    ValueWithError,
    compensated_sum,
    is_nonpositive_integer,
)

__all__ = [
    "Params3F2NegDiff",
    "Hyp32Spec",
    "GaussSpec",
    "MIN_UNIT_DECAY",
    "sum_3f2_unit_oracle",
    "sum_3f2_unit",
    "sum_3f2_series",
    "sum_3f2",
    "sum_terminating_3f2",
    "gauss_2f1_unit",
    "sum_2f1_series",
    "partial_sum_2f1",
    "partial_sum_via_3f2",
    "incomplete_beta",
    "incomplete_beta_paths",
]

MIN_UNIT_DECAY = 0.25
_CHUNK = 4096


@dataclass(frozen=True)
class Params3F2NegDiff:
    """Parameters of 3F2(a, b, c; b+1+m, c+1+n; z)."""

    a: complex
    b: complex
    c: complex
    m: int
    n: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("m", "n"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise DomainViolation(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        for d in self.denominators:
            if is_nonpositive_integer(d):
                raise DomainViolation(f"denominator parameter {d.real:g} is a nonpositive integer")

    @property
    def denominators(self) -> tuple[complex, complex]:
        return (self.b + 1 + self.m, self.c + 1 + self.n)

    @property
    def decay_exponent(self) -> complex:
        """Parametric excess 2 - a + m + n; terms decay like k**-(1 + excess)."""
        return 2 - self.a + self.m + self.n

    @property
    def s(self) -> float:
        return self.decay_exponent.real

    def spec(self, z: complex = 1.0) -> "Hyp32Spec":
        return Hyp32Spec((self.a, self.b, self.c), self.denominators, z)

    def replace(self, **changes) -> "Params3F2NegDiff":
        fields = dict(a=self.a, b=self.b, c=self.c, m=self.m, n=self.n)
        fields.update(changes)
        return Params3F2NegDiff(**fields)

    def as_dict(self) -> dict:
        return {
            "a": {"re": self.a.real, "im": self.a.imag},
            "b": {"re": self.b.real, "im": self.b.imag},
            "c": {"re": self.c.real, "im": self.c.imag},
            "m": self.m,
            "n": self.n,
        }


@dataclass(frozen=True)
class Hyp32Spec:
    """A general 3F2(num; den; z)."""

    num: tuple[complex, complex, complex]
    den: tuple[complex, complex]
    z: complex = 1.0

    def __post_init__(self):
        num = tuple(complex(x) for x in self.num)
        den = tuple(complex(x) for x in self.den)
        if len(num) != 3 or len(den) != 2:
            raise DomainViolation("3F2 needs three numerator and two denominator parameters")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "z", complex(self.z))

    @property
    def excess(self) -> complex:
        return sum(self.den) - sum(self.num)

    @property
    def thomae_p(self) -> complex:
        """d + e - a - b, the parameter p of the two-term Thomae relation."""
        return self.den[0] + self.den[1] - self.num[0] - self.num[1]

    def terminating_order(self) -> int | None:
        """N when the series stops after the term of index N, else None."""
        orders = [int(-x.real) for x in self.num if is_nonpositive_integer(x)]
        return min(orders) if orders else None


@dataclass(frozen=True)
class GaussSpec:
    a: complex
    b: complex
    c: complex
    z: complex = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def terminating_order(self) -> int | None:
        orders = [int(-x.real) for x in (self.a, self.b) if is_nonpositive_integer(x)]
        return min(orders) if orders else None


def _terminating_sum(num: Sequence[complex], den: Sequence[complex], z: complex,
                     order: int) -> tuple[complex, float]:
    terms = [1.0 + 0j]
    weight = 2.0
    t = 1.0 + 0j
    for k in range(order):
        d = (k + 1.0)
        for x in den:
            d *= x + k
        if d == 0:
            raise DomainViolation("denominator vanishes before the series terminates")
        r = z
        for x in num:
            r *= x + k
        t = t * r / d
        terms.append(t)
        weight += (len(num) + len(den) + 2) * (k + 1) * abs(t)
    return compensated_sum(terms), EPS * weight


def sum_terminating_3f2(s: Hyp32Spec) -> complex:
    """Finite sum of a 3F2 whose numerator holds an exact nonpositive integer."""
    order = s.terminating_order()
    if order is None:
        raise DomainViolation("3F2 does not terminate (no nonpositive integer numerator)")
    value, _ = _terminating_sum(s.num, s.den, s.z, order)
    return value


def _chunk_terms(num, den, z, t_start: complex, k0: int, k1: int) -> np.ndarray:
    """Terms t_{k0} .. t_{k1-1} given t_{k0}."""
    k = np.arange(k0, k1 - 1, dtype=float)
    r = np.full(k.shape, complex(z), dtype=complex)
    for x in num:
        r *= x + k
    d = k + 1.0
    for x in den:
        d = d * (x + k)
    r /= d
    out = np.empty(k1 - k0, dtype=complex)
    out[0] = t_start
    if k1 - k0 > 1:
        out[1:] = t_start * np.cumprod(r)
    return out


def _next_term(num, den, z, t: complex, k: int) -> complex:
    r = complex(z)
    d = k + 1.0
    for x in num:
        r *= x + k
    for x in den:
        d *= x + k
    return t * r / d


class _TermStream:
    """Lazily extended array of series terms t_0, t_1, ..."""

    def __init__(self, num, den, z):
        self.num, self.den, self.z = tuple(num), tuple(den), complex(z)
        for x in self.den:
            if is_nonpositive_integer(x):
                raise DomainViolation(f"denominator parameter {x.real:g} is a nonpositive integer")
        self.terms = np.array([1.0 + 0j])

    def extend_to(self, count: int) -> np.ndarray:
        while len(self.terms) < count:
            k0 = len(self.terms) - 1
            k1 = min(count, k0 + 1 + 4 * _CHUNK)
            t_next = _next_term(self.num, self.den, self.z, self.terms[-1], k0)
            chunk = _chunk_terms(self.num, self.den, self.z, t_next, k0 + 1, k1 + 1)
            self.terms = np.concatenate([self.terms, chunk])
        return self.terms

    def partial(self, count: int) -> complex:
        t = self.extend_to(count)[:count]
        return complex(math.fsum(t.real), math.fsum(t.imag))

    def term(self, k: int) -> complex:
        return complex(self.extend_to(k + 1)[k])


def sum_3f2_unit(s: Hyp32Spec, tol: Tolerance | None = None) -> ValueWithError:
    """3F2(num; den; 1) by direct summation with a Richardson-refined tail.

    With excess sigma = sum(den) - sum(num), terms behave like
    C k**-(1+sigma) (1 + c1/k + ...).  The tail beyond K is modelled as
    t_K K / sigma; the residual is a series in K**-(1+sigma), K**-(2+sigma),
    ... and two Richardson levels over K, 2K, 4K remove its first two
    orders.  K doubles until successive level-two estimates agree.
    """
    tol = tol or Tolerance()
    order = s.terminating_order()
    if order is not None:
        value, err = _terminating_sum(s.num, s.den, 1.0, order)
        return ValueWithError(value, err)
    if s.z != 1:
        raise DomainViolation("sum_3f2_unit needs z = 1")
    sigma = s.excess
    if sigma.real < MIN_UNIT_DECAY:
        raise SlowConvergence(
            f"parametric excess {sigma.real:.3g} < {MIN_UNIT_DECAY}: unit-argument series "
            "converges too slowly for direct summation")
    stream = _TermStream(s.num, s.den, 1.0)
    p = 1.0 + sigma
    f1 = 2.0 ** p
    f2 = 2.0 ** (p + 1)
    scale = max(abs(x) for x in s.num + s.den)
    K = max(512, int(32 * scale))

    def estimate(k: int) -> complex:
        return stream.partial(k) + stream.term(k) * k / sigma

    best = None
    status = Status.OK
    while True:
        if 8 * K + 1 > tol.max_terms:
            status = Status.SLOW_CONVERGENCE
            break
        stream.extend_to(8 * K + 1)
        e = [estimate(K * 2**i) for i in range(4)]
        r1 = [(f1 * e[i + 1] - e[i]) / (f1 - 1) for i in range(3)]
        r2 = [(f2 * r1[i + 1] - r1[i]) / (f2 - 1) for i in range(2)]
        value = r2[1]
        err = abs(r2[1] - r2[0]) + abs(r2[1] - r1[2]) * 1e-3
        best = (value, err)
        if err <= max(tol.rel_tol * abs(value), tol.abs_floor):
            break
        K *= 2
    if best is None:
        t = stream.extend_to(min(tol.max_terms, 1 << 20))
        value = complex(math.fsum(t.real), math.fsum(t.imag))
        best = (value, abs(t[-1]) * len(t) / max(sigma.real, 1e-300))
    value, err = complex(best[0]), float(best[1])
    n_used = len(stream.terms)
    absum = float(np.sum(np.abs(stream.terms)))
    err += EPS * absum * (8 + 3 * math.log2(n_used + 1))
    return ValueWithError(value, err, status,
                          "" if status is Status.OK else "term budget exhausted")


def sum_3f2_unit_oracle(p: Params3F2NegDiff, tol: Tolerance | None = None) -> ValueWithError:
    """Reference value of 3F2(a, b, c; b+1+m, c+1+n; 1) from its defining series."""
    if p.s < MIN_UNIT_DECAY and p.spec().terminating_order() is None:
        raise SlowConvergence(f"Re(2 - a + m + n) = {p.s:.3g} < {MIN_UNIT_DECAY}")
    return sum_3f2_unit(p.spec(), tol)


def _geometric_series(num, den, z: complex, tol: Tolerance) -> ValueWithError:
    """Direct summation for |z| < 1, with a ratio-based tail bound."""
    stream = _TermStream(num, den, z)
    az = abs(z)
    hump = int(4 * max([abs(x) for x in tuple(num) + tuple(den)] + [1.0])) + 16
    count = max(256, hump)
    while True:
        if count > tol.max_terms:
            t = stream.extend_to(tol.max_terms)
            value = complex(math.fsum(t.real), math.fsum(t.imag))
            return ValueWithError(value, float(abs(t[-1])) / max(1 - az, 1e-300),
                                  Status.SLOW_CONVERGENCE, "term budget exhausted")
        t = stream.extend_to(count)
        last = complex(t[-1])
        prev = complex(t[-2])
        ratio = abs(last / prev) if prev != 0 else 0.0
        r = max(ratio, az)
        if last == 0:
            tail = 0.0
        elif r < 1:
            tail = abs(last) * r / (1 - r)
        else:
            tail = math.inf
        value = complex(math.fsum(t.real), math.fsum(t.imag))
        if tail <= max(0.25 * tol.rel_tol * abs(value), tol.abs_floor):
            err = tail + EPS * float(np.sum(np.abs(t))) * (4 + 3 * math.log2(count))
            return ValueWithError(value, float(err))
        # enough terms to shrink the tail by the required factor, at least doubling
        grow = count
        if 0 < r < 1 and tail > 0:
            need = math.log(max(0.25 * tol.rel_tol * abs(value), tol.abs_floor) / tail) / math.log(r)
            grow = max(count, int(need) + 1)
        count += grow


def sum_3f2_series(s: Hyp32Spec, tol: Tolerance | None = None) -> ValueWithError:
    """3F2(num; den; z) for |z| < 1 by direct summation."""
    tol = tol or Tolerance()
    order = s.terminating_order()
    if order is not None:
        value, err = _terminating_sum(s.num, s.den, s.z, order)
        return ValueWithError(value, err)
    if not abs(s.z) < 1:
        raise DomainViolation(f"|z| = {abs(s.z):g} is outside the disk of convergence")
    return _geometric_series(s.num, s.den, s.z, tol)


def sum_3f2(s: Hyp32Spec, tol: Tolerance | None = None) -> ValueWithError:
    """Dispatch to the terminating, unit-argument or |z| < 1 summation."""
    if s.terminating_order() is not None or abs(s.z) < 1:
        return sum_3f2_series(s, tol)
    if s.z == 1:
        return sum_3f2_unit(s, tol)
    raise DomainViolation(f"no direct summation available at z = {s.z}")


def gauss_2f1_unit(a: complex, b: complex, c: complex) -> ValueWithError:
    """2F1(a, b; c; 1) by Gauss's summation theorem.

    Terminating cases use the Chu-Vandermonde form (c-b)_N / (c)_N, which
    needs no convergence condition.
    """
    a, b, c = complex(a), complex(b), complex(c)
    for x, y in ((a, b), (b, a)):
        if is_nonpositive_integer(x):
            N = int(-x.real)
            den = pochhammer(c, N)
            if den == 0:
                raise DomainViolation("terminating 2F1(1) with a vanishing denominator")
            v = pochhammer(c - y, N) / den
            return ValueWithError(v, EPS * abs(v) * (4 * N + 4))
    if (c - a - b).real <= 0:
        raise DomainViolation(f"Gauss sum diverges: Re(c - a - b) = {(c - a - b).real:g} <= 0")
    if is_nonpositive_integer(c):
        raise DomainViolation("c is a nonpositive integer")
    v = gamma_ratio(c, c - a) * gamma_ratio(c - a - b, c - b)
    err = 64 * EPS * abs(v) * (1 + abs(c) + abs(c - a - b))
    return ValueWithError(v, err)


def _on_branch_cut(z: complex) -> bool:
    return z.imag == 0 and z.real >= 1


def sum_2f1_series(g: GaussSpec, tol: Tolerance | None = None,
                   allow_pfaff: bool = True) -> ValueWithError:
    """2F1(a, b; c; z) by its power series, applying the Pfaff transformation
    2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1)) when that shrinks the
    argument (unless ``allow_pfaff`` is false)."""
    tol = tol or Tolerance()
    z = g.z
    if z == 0:
        return ValueWithError(1.0 + 0j)
    order = g.terminating_order()
    if is_nonpositive_integer(g.c) and (order is None or order > -g.c.real):
        raise DomainViolation("c is a nonpositive integer")
    if order is not None:
        value, err = _terminating_sum((g.a, g.b), (g.c,), z, order)
        return ValueWithError(value, err)
    if _on_branch_cut(z):
        raise DomainViolation(f"z = {z} violates |arg(1 - z)| < pi")
    w = z / (z - 1)
    if allow_pfaff and abs(w) < abs(z) and abs(w) < 1:
        inner = _geometric_series((g.a, g.c - g.b), (g.c,), w, tol)
        factor = (1 - z) ** (-g.a)
        return inner.scaled(factor, 4 * EPS * (1 + abs(g.a)))
    if abs(z) < 1:
        return _geometric_series((g.a, g.b), (g.c,), z, tol)
    raise DomainViolation(f"neither z = {z} nor z/(z-1) = {w} lies in the unit disk")


def partial_sum_2f1(a: complex, b: complex, c: complex, n: int) -> complex:
    """sum_{k=0}^{n} (a)_k (b)_k / ((c)_k k!)."""
    a, b, c = complex(a), complex(b), complex(c)
    if n < 0:
        raise DomainViolation("n must be >= 0")
    terms = [1.0 + 0j]
    t = 1.0 + 0j
    for k in range(n):
        d = (c + k) * (k + 1)
        if d == 0:
            raise DomainViolation(f"(c)_k vanishes at k = {k + 1}")
        t = t * (a + k) * (b + k) / d
        terms.append(t)
    return compensated_sum(terms)


def partial_sum_via_3f2(a: complex, b: complex, c: complex, n: int) -> complex:
    """The same partial sum written as (1+b)_n/n! 3F2(-n, b, c-a; 1+b, c; 1)."""
    a, b, c = complex(a), complex(b), complex(c)
    if n < 0:
        raise DomainViolation("n must be >= 0")
    f = sum_terminating_3f2(Hyp32Spec((-n, b, c - a), (1 + b, c), 1.0))
    return pochhammer(1 + b, n) / math.factorial(n) * f


def incomplete_beta_paths(z: complex, a: complex, b: complex,
                          tol: Tolerance | None = None) -> tuple[ValueWithError, ValueWithError]:
    """Incomplete Beta B_z(a, b) by its two hypergeometric representations.

    Path one sums z^a/a 2F1(a, 1-b; a+1; z); path two sums
    z^a/a (1-z)^(b-1) 2F1(1, 1-b; a+1; z/(z-1)).
    """
    z, a, b = complex(z), complex(a), complex(b)
    if a == 0:
        raise DomainViolation("B_z(a, b) needs a != 0")
    if is_nonpositive_integer(a + 1):
        raise DomainViolation("a + 1 is a nonpositive integer")
    if z == 0:
        zero = ValueWithError(0j)
        return zero, zero
    tol = tol or Tolerance(rel_tol=1e-15)
    pre = z**a / a
    first = sum_2f1_series(GaussSpec(a, 1 - b, a + 1, z), tol).scaled(pre, 4 * EPS)
    if z == 1:
        raise DomainViolation("the second representation is singular at z = 1")
    second = sum_2f1_series(GaussSpec(1, 1 - b, a + 1, z / (z - 1)), tol)
    second = second.scaled(pre * (1 - z) ** (b - 1), 8 * EPS * (1 + abs(b)))
    return first, second


def incomplete_beta(z: complex, a: complex, b: complex,
                    tol: Tolerance | None = None) -> ValueWithError:
    """B_z(a, b) = integral_0^z t^(a-1) (1-t)^(b-1) dt.

    The value comes from the first representation; the disagreement with
    the second is folded into the error estimate.
    """
    first, second = incomplete_beta_paths(z, a, b, tol)
    err = first.abs_err + abs(first.value - second.value)
    status = first.status.worst(second.status)
    return ValueWithError(first.value, err, status, first.reason or second.reason)
