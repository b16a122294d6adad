"""Value-preserving rewrites of 3F2 and 2F1 functions.

Each rule returns the rewritten functions and their coefficients without
evaluating them, so every step of a derivation can be checked on its own::

    rw = thomae_two_term(Hyp32Spec((-2, 1, 0.5), (3, 2.5)))
    rw.evaluate()   # equals the terminating sum of the input

Rules that need an integer shift (the (a, a-n) pair, the -n top
parameter) take that integer from the caller; matching is never inferred
from floating-point parameters.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

from .arith import BINARY64, pre_err, run_escalating
from .gamma_kit import gamma_ratio, pochhammer
from .numerics import (
    EPS,
    DomainViolation,
    NearSingular,
    Tolerance,
    ValueWithError,
    compensated_sum,
    is_nonpositive_integer,
)
from .series import (
    GaussSpec,
    Hyp32Spec,
    Params3F2NegDiff,
    gauss_2f1_unit,
    sum_2f1_series,
    sum_3f2,
)

__all__ = [
    "Hyp10Spec",
    "Rewrite",
    "KarMintonSpec",
    "evaluate_spec",
    "thomae_two_term",
    "thomae_three_term",
    "pf_reduce",
    "rd_reverse",
    "re_transform",
    "pfaff_linear",
    "karlsson_z_reduce",
    "eval_karlsson_z",
    "karlsson_minton_reduce",
    "KARLSSON_MINTON_MAX_M",
]

KARLSSON_MINTON_MAX_M = 16


@dataclass(frozen=True)
class Hyp10Spec:
    """1F0(a;; z) = (1 - z)^(-a)."""

    a: complex
    z: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "z", complex(self.z))


Spec = Union[Hyp32Spec, GaussSpec, Hyp10Spec]


def _hyp10(s: Hyp10Spec) -> ValueWithError:
    if is_nonpositive_integer(s.a):
        # finite binomial sum; exact at z = 1
        n = int(-s.a.real)
        if s.z == 1:
            return ValueWithError(1.0 + 0j if n == 0 else 0j)
        return ValueWithError((1 - s.z) ** n, EPS * (n + 1) * abs(1 - s.z) ** n)
    if s.z == 1:
        if s.a.real < 0:
            return ValueWithError(0j)
        raise DomainViolation("1F0(a;;1) diverges for Re(a) >= 0")
    if s.z.imag == 0 and s.z.real > 1:
        raise DomainViolation("z on the branch cut of (1-z)^(-a)")
    v = cmath.exp(-s.a * cmath.log(1 - s.z))
    return ValueWithError(v, 4 * EPS * abs(v) * (1 + abs(s.a)))


def evaluate_spec(s: Spec, tol: Tolerance | None = None, allow_pfaff: bool = True) -> ValueWithError:
    """Numerical value of a 3F2, 2F1 or 1F0 spec by the series engine."""
    if isinstance(s, Hyp10Spec):
        return _hyp10(s)
    if isinstance(s, GaussSpec):
        if s.z == 1:
            return gauss_2f1_unit(s.a, s.b, s.c)
        return sum_2f1_series(s, tol, allow_pfaff=allow_pfaff)
    return sum_3f2(s, tol)


@dataclass(frozen=True)
class Rewrite:
    """value(input) = prefactor * sum(coefficient_i * value(spec_i))."""

    prefactor: complex
    results: list[tuple[complex, Spec]] = field(default_factory=list)

    def evaluate(self, tol: Tolerance | None = None, allow_pfaff: bool = True) -> ValueWithError:
        vals = [(c, evaluate_spec(s, tol, allow_pfaff)) for c, s in self.results]
        terms = [c * v.value for c, v in vals]
        total = compensated_sum(terms)
        err = sum(abs(c) * v.abs_err for c, v in vals) + 4 * EPS * sum(abs(t) for t in terms)
        value = self.prefactor * total
        return ValueWithError(value, abs(self.prefactor) * err + 8 * EPS * abs(value))


def _converges_at_one(s: Hyp32Spec) -> bool:
    return s.terminating_order() is not None or s.excess.real > 0


def _ratio(x: complex, y: complex) -> complex:
    try:
        return gamma_ratio(x, y)
    except NearSingular:
        raise
    except DomainViolation as exc:
        raise NearSingular(str(exc)) from None


# ---------------------------------------------------------------- Thomae

def thomae_two_term(s: Hyp32Spec) -> Rewrite:
    """3F2(a,b,c; d,e; 1) = G(d)G(p-c)/(G(p)G(d-c)) 3F2(e-a, e-b, c; p, e; 1),
    p = d + e - a - b.  The pair (c, e) is carried over unchanged."""
    if s.z != 1:
        raise DomainViolation("the Thomae relations are identities at z = 1")
    a, b, c = s.num
    d, e = s.den
    p = s.thomae_p
    out = Hyp32Spec((e - a, e - b, c), (p, e), 1.0)
    if not (_converges_at_one(s) and _converges_at_one(out)):
        raise DomainViolation("one side of the two-term Thomae relation diverges")
    pref = _ratio(d, d - c) * _ratio(p - c, p)
    return Rewrite(pref, [(1.0 + 0j, out)])


def thomae_three_term(s: Hyp32Spec) -> Rewrite:
    """Three-term Thomae relation for 3F2(a, b, c; e, f; 1).

    The first result keeps (a, b) and replaces c by f - c; the second
    shifts every parameter by the excess.  Requires Re(e+f-a-b-c) > 0
    and Re(1+c-e) > 0.
    """
    if s.z != 1:
        raise DomainViolation("the Thomae relations are identities at z = 1")
    a, b, c = s.num
    e, f = s.den
    excess = e + f - a - b - c
    if not excess.real > 0 or not (1 + c - e).real > 0:
        raise DomainViolation("three-term relation needs Re(e+f-a-b-c) > 0 and Re(1+c-e) > 0")
    first = Hyp32Spec((a, b, f - c), (a + b - e + 1, f), 1.0)
    second = Hyp32Spec((e - a, e - b, excess), (e - a - b + 1, e + f - a - b), 1.0)
    c1 = _ratio(e, e - a) * _ratio(e - a - b, e - b)
    c2 = (_ratio(e, b) * _ratio(f, f - c) * _ratio(a + b - e, a)
          * _ratio(excess, e + f - a - b))
    return Rewrite(1.0 + 0j, [(c1, first), (c2, second)])


# ---------------------------------------------------------------- terminating rules

def _close(x: complex, y: complex) -> bool:
    return abs(x - y) <= 1e-12 * (1 + abs(x))


def pf_reduce(s: Hyp32Spec, n: int) -> list[tuple[complex, GaussSpec]]:
    """3F2(a, b, c; a-n, d; z) as n+1 weighted 2F1(b+p, c+p; d+p; z).

    The caller orders the spec so that num[0] = a and den[0] = a - n.
    """
    if n < 0:
        raise DomainViolation("n must be >= 0")
    a, b, c = s.num
    a_minus_n, d = s.den
    if not _close(a - n, a_minus_n):
        raise DomainViolation(f"den[0] = {a_minus_n} is not num[0] - {n}")
    base = pochhammer(1 - a, n)
    if base == 0:
        raise DomainViolation("(1-a)_n vanishes")
    out = []
    for p in range(n + 1):
        coef = ((-s.z) ** p * math.comb(n, p) * pochhammer(1 - a, n - p)
                * pochhammer(b, p) * pochhammer(c, p) / (pochhammer(d, p) * base))
        out.append((coef, GaussSpec(b + p, c + p, d + p, s.z)))
    return out


def _top(s: Hyp32Spec, n: int) -> None:
    if n < 0 or s.num[0] != -n:
        raise DomainViolation(f"num[0] must be exactly -{n}")
    if s.z != 1:
        raise DomainViolation("this rule holds at z = 1")


def rd_reverse(s: Hyp32Spec, n: int) -> Rewrite:
    """3F2(-n, a, b; c-n, d; 1) = (1+a-c)_n/(1-c)_n 3F2(-n, a, d-b; 1+a-c, d; 1)."""
    _top(s, n)
    _, a, b = s.num
    c = s.den[0] + n
    d = s.den[1]
    den = pochhammer(1 - c, n)
    if den == 0:
        raise DomainViolation("(1-c)_n vanishes")
    return Rewrite(pochhammer(1 + a - c, n) / den,
                   [(1.0 + 0j, Hyp32Spec((-n, a, d - b), (1 + a - c, d), 1.0))])


def re_transform(s: Hyp32Spec, n: int) -> Rewrite:
    """3F2(-n, a, b-n; c-n, d-n; 1)
    = (1+a-c)_n (1-b)_n / ((1-c)_n (1-d)_n) 3F2(-n, d-b, 1-c; 1+a-c, 1-b; 1)."""
    _top(s, n)
    a = s.num[1]
    b = s.num[2] + n
    c = s.den[0] + n
    d = s.den[1] + n
    den = pochhammer(1 - c, n) * pochhammer(1 - d, n)
    if den == 0:
        raise DomainViolation("(1-c)_n (1-d)_n vanishes")
    pref = pochhammer(1 + a - c, n) * pochhammer(1 - b, n) / den
    return Rewrite(pref, [(1.0 + 0j, Hyp32Spec((-n, d - b, 1 - c), (1 + a - c, 1 - b), 1.0))])


def pfaff_linear(g: GaussSpec) -> tuple[complex, GaussSpec]:
    """2F1(a, b; c; z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))."""
    z = g.z
    if z == 1:
        raise DomainViolation("z = 1 is excluded")
    if z.imag == 0 and z.real > 1:
        raise DomainViolation("|arg(1-z)| < pi fails on the cut z > 1")
    pref = cmath.exp(-g.a * cmath.log(1 - z))
    return pref, GaussSpec(g.a, g.c - g.b, g.c, z / (z - 1))


# ---------------------------------------------------------------- Karlsson

def _ka_pieces(k, p: Params3F2NegDiff, z: complex):
    """(coefficient, x) pairs; each multiplies 2F1(a, x; x+1; z)."""
    if z.imag == 0 and z.real > 1:
        raise DomainViolation("|arg(1-z)| < pi fails on the cut z > 1")
    b, c, m, n = k.num(p.b), k.num(p.c), p.m, p.n
    for x in (p.b, p.c):
        if is_nonpositive_integer(x):
            raise DomainViolation("b and c must not be nonpositive integers")
    mn = k.fact(m) * k.fact(n)
    pb = [b + i for i in range(m + 1)]
    pc = [c + j for j in range(n + 1)]
    full_b, full_c = math.prod(pb), math.prod(pc)
    out = []
    for i in range(m + 1):
        for j in range(n + 1):
            d = b - c + i - j
            if d == 0:
                raise DomainViolation(f"b - c + {i} - {j} vanishes")
            w = (-1) ** (i + j) * math.comb(m, i) * math.comb(n, j)
            # (b)_{m+1} / (b+i) and (c)_{n+1} / (c+j) as products without division
            skip_b = math.prod(pb[:i] + pb[i + 1:])
            skip_c = math.prod(pc[:j] + pc[j + 1:])
            out.append((w * skip_b * full_c / (-d * mn), pb[i]))
            out.append((w * full_b * skip_c / (d * mn), pc[j]))
    return out


def karlsson_z_reduce(p: Params3F2NegDiff, z: complex) -> list[tuple[complex, GaussSpec]]:
    """3F2(a, b, c; b+1+m, c+1+n; z) as 2(m+1)(n+1) weighted 2F1.

    Terms come in pairs for each (i, j): first 2F1(a, b+i; b+i+1; z),
    then 2F1(a, c+j; c+j+1; z).  The factor (b)_{m+1}(c)_{n+1}/(m! n!)
    is folded into the coefficients, so for m = n = 0 they are c/(c-b)
    and -b/(c-b).
    """
    z = complex(z)
    return [(coef, GaussSpec(p.a, x, x + 1, z)) for coef, x in _ka_pieces(BINARY64, p, z)]


def _core_ka(k, p: Params3F2NegDiff, z: complex):
    a = k.num(p.a)
    pieces = []
    for coef, x in _ka_pieces(k, p, z):
        v, e = k.series_2f1(a, x, x + 1, k.num(z))
        pieces.append((coef, v, e))
    return pieces, 1


def eval_karlsson_z(p: Params3F2NegDiff, z: complex) -> ValueWithError:
    """Value of the reduction of :func:`karlsson_z_reduce`.

    The weighted terms can cancel by several orders of magnitude, so the
    sum is redone in wide arithmetic when the binary64 estimate is poor.
    At z = 1 each 2F1 is Gauss-summable; use the unit-argument closed
    forms there instead.
    """
    z = complex(z)
    if z == 1:
        raise DomainViolation("use the unit-argument closed forms at z = 1")
    rel = pre_err(p.b, p.c, p.m, p.n)
    return run_escalating(_core_ka, (p, z), rel)[0]


@dataclass(frozen=True)
class KarMintonSpec:
    """3F2 with r <= 2 numerator parameters exceeding a denominator by a
    nonnegative integer: numerators (b1+m1, [b2+m2,] rest_num...),
    denominators (b1, [b2,] rest_den...)."""

    b1: complex
    m1: int
    remaining_num: tuple[complex, ...]
    remaining_den: tuple[complex, ...]
    z: complex = 1.0
    b2: complex | None = None
    m2: int = 0

    def __post_init__(self):
        object.__setattr__(self, "b1", complex(self.b1))
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "remaining_num", tuple(complex(x) for x in self.remaining_num))
        object.__setattr__(self, "remaining_den", tuple(complex(x) for x in self.remaining_den))
        if self.b2 is not None:
            object.__setattr__(self, "b2", complex(self.b2))
        r = self.r
        if len(self.remaining_num) != 3 - r or len(self.remaining_den) != 2 - r:
            raise DomainViolation("parameter counts must add up to a 3F2")
        for m in (self.m1, self.m2):
            if not 0 <= m <= KARLSSON_MINTON_MAX_M:
                raise DomainViolation(f"m must lie in [0, {KARLSSON_MINTON_MAX_M}]")

    @property
    def r(self) -> int:
        return 1 if self.b2 is None else 2

    def as_3f2(self) -> Hyp32Spec:
        if self.r == 1:
            num = (self.b1 + self.m1,) + self.remaining_num
            den = (self.b1,) + self.remaining_den
        else:
            num = (self.b1 + self.m1, self.b2 + self.m2) + self.remaining_num
            den = (self.b1, self.b2)
        return Hyp32Spec(num, den, self.z)


def karlsson_minton_reduce(s: KarMintonSpec) -> list[tuple[complex, Spec]]:
    """Reduce the positive-difference pairs to finite sums of lower-order
    functions with all parameters shifted by J = j1 (+ j2).

    r = 1: 3F2(b1+m1, a2, a3; b1, b2; z)
           = sum_j C(m1,j) (a2)_j (a3)_j / ((b1)_j (b2)_j) z^j 2F1(a2+j, a3+j; b2+j; z)
    r = 2: 3F2(b1+m1, b2+m2, a3; b1, b2; z)
           = sum_{j1,j2} L(j1,j2) z^J 1F0(a3+J;; z),  J = j1 + j2,
           L = C(m1,j1) C(m2,j2) (b2+m2)_{j1} (a3)_J / ((b1)_{j1} (b2)_J).
    """
    z = s.z
    if s.r == 1:
        a2, a3 = s.remaining_num
        (b2,) = s.remaining_den
        out = []
        for j in range(s.m1 + 1):
            den = pochhammer(s.b1, j) * pochhammer(b2, j)
            if den == 0:
                raise DomainViolation("denominator Pochhammer vanishes")
            coef = math.comb(s.m1, j) * pochhammer(a2, j) * pochhammer(a3, j) / den * z ** j
            out.append((coef, GaussSpec(a2 + j, a3 + j, b2 + j, z)))
        return out
    (a3,) = s.remaining_num
    out = []
    for j1 in range(s.m1 + 1):
        for j2 in range(s.m2 + 1):
            J = j1 + j2
            den = pochhammer(s.b1, j1) * pochhammer(s.b2, J)
            if den == 0:
                raise DomainViolation("denominator Pochhammer vanishes")
            lam = (math.comb(s.m1, j1) * math.comb(s.m2, j2)
                   * pochhammer(s.b2 + s.m2, j1) * pochhammer(a3, J) / den)
            if lam == 0:
                # (a3)_J = 0 past the termination order
                continue
            out.append((lam * z ** J, Hyp10Spec(a3 + J, z)))
    return out
