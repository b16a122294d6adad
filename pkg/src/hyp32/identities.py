"""Closed-form summation formulas for 3F2(a, b, c; b+1+m, c+1+n; 1).

Every evaluator returns the value of the same function (possibly after a
documented parameter map) so that all of them can be checked against the
direct-summation oracle and against each other.  Terminating 3F2(1)
factors are summed forward term by term; Gamma prefactors are paired into
ratios so integer offsets reduce to exact Pochhammer products.

Each formula is written once as a "core" that returns its terms as
(prefactor, series, series error) triples plus a common outer factor.  The
core runs in binary64 first.  The two-term forms can cancel badly for
large m, n and large Re b, Re c, so when the propagated error estimate
exceeds ``WIDE_TRIGGER`` relative, the same core is rerun in mpmath at a
precision sized to the estimated digit loss.

The canonical evaluator is :func:`eval_zy`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

from .arith import BINARY64, WIDE_TRIGGER, pre_err as _pre_err, run_escalating
from .numerics import (
    EPS,
    DomainViolation,
    NearSingular,
    Status,
    ValueWithError,
    compensated_sum,
    nearest_integer_distance,
)
from .series import Params3F2NegDiff, sum_3f2_unit_oracle

__all__ = [
    "IdentityId",
    "IdentityInfo",
    "Theorem2Terms",
    "REGISTRY",
    "METHODS",
    "A1_PROXIMITY",
    "LATTICE_PROXIMITY",
    "WIDE_TRIGGER",
    "eval_zy",
    "zy_terms",
    "eval_zx",
    "eval_theorem1",
    "eval_corollary1",
    "eval_theorem2",
    "eval_karlsson_kb",
    "eval_inner_sum_su",
    "inner_sum_su_closed",
    "eval_milgram_om",
    "eval_miller_paris",
    "eval_special_7_4_4_16",
    "eval_a1_limit",
    "bc_lattice_distance",
    "om_params",
    "miller_paris_params",
    "corollary1_params",
    "evaluate",
]

A1_PROXIMITY = 1e-8
LATTICE_PROXIMITY = 1e-6


class IdentityId(str, enum.Enum):
    ZY = "ZY"
    ZX = "ZX"
    TT = "TT"
    TC = "TC"
    MN = "MN"
    KB = "KB"
    OM = "OM"
    MP = "MP"
    FA = "FA"
    FB = "FB"
    P7_4_4_16 = "P7_4_4_16"
    A1_LIMIT = "A1_LIMIT"


@dataclass(frozen=True)
class Theorem2Terms:
    t1: complex
    t2: complex


# ---------------------------------------------------------------- plumbing

def _div(x, y, what: str):
    if y == 0:
        raise NearSingular(f"{what} vanishes")
    return x / y


def _run(core: Callable, args: tuple, rel: float, status: Status = Status.OK,
         reason: str = "") -> tuple[ValueWithError, list[complex]]:
    return run_escalating(core, args, rel, status, reason)


def _require_decay(p: Params3F2NegDiff) -> None:
    if not p.s > 0:
        raise DomainViolation(f"Re(2 - a + m + n) = {p.s:.3g} must be positive")


def _require_a_off_one(a: complex) -> None:
    if abs(a - 1) < A1_PROXIMITY:
        raise NearSingular("a is within 1e-8 of 1; the Beta prefactors are singular "
                           "(use eval_a1_limit)")


def bc_lattice_distance(p: Params3F2NegDiff) -> float:
    """Distance of b - c from the integers in [-m, n] where the two-term
    closed forms have cancelling poles."""
    k, d = nearest_integer_distance(p.b - p.c)
    if -p.m <= k <= p.n:
        return d
    return min(abs(p.b - p.c + p.m), abs(p.b - p.c - p.n))


def _singular_status(p: Params3F2NegDiff) -> tuple[Status, str]:
    d = bc_lattice_distance(p)
    if d == 0:
        raise NearSingular("b - c is an integer in [-m, n]")
    if d < LATTICE_PROXIMITY:
        return Status.NEAR_SINGULAR, f"b - c within {d:.2g} of a colliding integer"
    if abs(p.a - 1) < LATTICE_PROXIMITY:
        return Status.NEAR_SINGULAR, f"a within {abs(p.a - 1):.2g} of 1"
    return Status.OK, ""


def _symmetric_limit(fn: Callable[[complex], ValueWithError], a: complex,
                     steps: tuple[float, float], consistency: float) -> ValueWithError:
    """Limit of an analytic function at a removable singularity a.

    Averages fn(a+h) and fn(a-h) (odd orders cancel) for two step sizes and
    removes the h**2 term by Richardson extrapolation.
    """
    h1, h2 = steps
    g, errs = [], []
    for h in steps:
        up, down = fn(a + h), fn(a - h)
        g.append(0.5 * (up.value + down.value))
        errs.append(0.5 * (up.abs_err + down.abs_err))
    q = (h1 / h2) ** 2
    limit = (q * g[1] - g[0]) / (q - 1)
    spread = abs(g[0] - g[1])
    err = abs(limit - g[1]) * 1e-2 + errs[1] * (q + 1) / (q - 1) + errs[0] / (q - 1)
    status, reason = Status.OK, ""
    if spread > consistency * max(abs(limit), 1e-300):
        status = Status.NEAR_SINGULAR
        reason = f"extrapolation inconsistent: relative spread {spread / abs(limit):.2g}"
    return ValueWithError(limit, err, status, reason)


# ---------------------------------------------------------------- three-term forms

def _core_zy(k, a, b, c, m, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    outer = k.poch(b, m + 1) * k.poch(c, n + 1)
    s1, e1 = k.tsum(m, b, b - c - n, 1 + b - a, 1 + b - c)
    s2, e2 = k.tsum(n, c, c - b - m, 1 + c - a, 1 + c - b)
    pf1 = _div(k.beta(1 - a, b), k.poch(c - b, n + 1) * k.fact(m), "(c-b)_{n+1}")
    pf2 = _div(k.beta(1 - a, c), k.poch(b - c, m + 1) * k.fact(n), "(b-c)_{m+1}")
    return [(pf1, s1, e1), (pf2, s2, e2)], outer


def zy_terms(p: Params3F2NegDiff) -> tuple[ValueWithError, ValueWithError]:
    """The two terms of the three-term formula in binary64, each multiplied
    by (b)_{m+1} (c)_{n+1}, so that their sum is the function value."""
    pieces, outer = _core_zy(BINARY64, p.a, p.b, p.c, p.m, p.n)
    rel = _pre_err(p.a, p.b, p.c, p.m, p.n)
    out = []
    for pf, sv, se in pieces:
        v = outer * pf * sv
        out.append(ValueWithError(v, abs(outer * pf) * se + abs(v) * (2 * rel + 4 * EPS)))
    return out[0], out[1]


def eval_zy(p: Params3F2NegDiff) -> ValueWithError:
    """Symmetric three-term closed form for arbitrary m, n >= 0."""
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    return _run(_core_zy, (p.a, p.b, p.c, p.m, p.n), _pre_err(p.a, p.b, p.c, p.m, p.n),
                status, reason)[0]


def _core_zx(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    outer = k.poch(b, n + 1) * k.poch(c, n + 1) / k.fact(n)
    s1, e1 = k.tsum(n, b, b - c - n, 1 + b - a, 1 + b - c)
    s2, e2 = k.tsum(n, c, c - b - n, 1 + c - a, 1 + c - b)
    pf1 = _div(k.beta(1 - a, b), k.poch(c - b, n + 1), "(c-b)_{n+1}")
    pf2 = _div(k.beta(1 - a, c), k.poch(b - c, n + 1), "(b-c)_{n+1}")
    return [(pf1, s1, e1), (pf2, s2, e2)], outer


def eval_zx(p: Params3F2NegDiff) -> ValueWithError:
    """The m = n case written in its manifestly b <-> c symmetric form."""
    if p.m != p.n:
        raise DomainViolation("eval_zx needs m == n")
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    return _run(_core_zx, (p.a, p.b, p.c, p.n), _pre_err(p.a, p.b, p.c, p.n), status, reason)[0]


# ---------------------------------------------------------------- two-sum forms

def _theorem1_outer(k, b, c, n):
    """Inverse of the left-side factor (c-b)_{n+1} n! / ((b)_{n+1} (c)_{n+1})."""
    num = k.poch(b, n + 1) * k.poch(c, n + 1)
    return _div(num, k.poch(c - b, n + 1) * k.fact(n), "(c-b)_{n+1}")


def _core_tt(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    s1, e1 = k.tsum(n, b, 1 + n, 1 + b - c, a - n)
    s2, e2 = k.tsum(n, 1 - a + b + n, 1 + n, 1 + b - c, 2 - a + n)
    pf1 = k.beta(1 - a, b) * _div(k.poch(1 - a, n), k.poch(1 + b - a, n), "(1+b-a)_n")
    pf2 = (-1) ** (1 + n) * k.beta(1 - a, c) * _div(
        k.poch(2 - a + n, n), k.poch(1 - a + c, n), "(1-a+c)_n")
    return [(pf1, s1, e1), (pf2, s2, e2)], _theorem1_outer(k, b, c, n)


def eval_theorem1(p: Params3F2NegDiff) -> ValueWithError:
    """Two Gauss-sum form for equal enhancements m = n."""
    if p.m != p.n:
        raise DomainViolation("eval_theorem1 needs m == n")
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    return _run(_core_tt, (p.a, p.b, p.c, p.n), _pre_err(p.a, p.b, p.c, p.n), status, reason)[0]


def _core_tc(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    s1, e1 = k.tsum(n, b, 1 + n, 1 + b - c, a + n)
    s2, e2 = k.tsum(n, 1 - a + b - n, 1 + n, 1 + b - c, 2 - a - n)
    pf1 = k.gamma(b) * k.gamma_ratio(1 - a - n, 1 - a + b - n)
    pf2 = k.gamma(2 - a) * k.gamma_ratio(c, 1 - a + c - n) * k.gamma_ratio(a + n - 1, a + 2 * n)
    return [(pf1, s1, e1), (pf2, s2, e2)], _theorem1_outer(k, b, c, n)


def eval_corollary1(a: complex, b: complex, c: complex, n: int) -> ValueWithError:
    """3F2(a+2n, b, c; b+1+n, c+1+n; 1) via the shifted equal-enhancement form.

    At integer a the two Gamma-weighted terms can have cancelling poles; the
    value there is the two-sided limit in a.
    """
    a, b, c = complex(a), complex(b), complex(c)
    if not (2 - a).real > 0:
        raise DomainViolation("Re(2 - a) must be positive")
    status, reason = _singular_status(corollary1_params(a, b, c, n))
    rel = _pre_err(a, b, c, n)

    def direct(x: complex) -> ValueWithError:
        return _run(_core_tc, (x, b, c, n), rel)[0]

    try:
        out = direct(a)
    except NearSingular:
        k, d = nearest_integer_distance(a)
        if d > A1_PROXIMITY:
            raise
        out = _symmetric_limit(direct, complex(k), (1e-3, 5e-4), 1e-4)
    if status is not Status.OK:
        return ValueWithError(out.value, out.abs_err, status.worst(out.status), reason)
    return out


def _core_mn(k, a, b, c, m, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    s1, e1 = k.tsum(m, b, 1 + n, 1 + b - c, a - m)
    s2, e2 = k.tsum(n, 1 - a + b + m, 1 + m, 2 - a + m, 1 + b - c + m - n)
    pf1 = k.beta(1 - a, b) * _div(k.poch(1 - a, m), k.poch(1 + b - a, m) * k.fact(m),
                                  "(1+b-a)_m")
    try:
        shift = k.poch(c - b, n - m)
    except DomainViolation as exc:
        raise NearSingular(str(exc)) from None
    pf2 = ((-1) ** (1 + m) * k.beta(1 - a, c)
           * _div(k.poch(2 - a + m, n), k.poch(1 - a + c, n) * k.fact(n), "(1-a+c)_n")
           * shift)
    outer = _div(k.poch(b, m + 1) * k.poch(c, n + 1), k.poch(c - b, n + 1), "(c-b)_{n+1}")
    return [(pf1, s1, e1), (pf2, s2, e2)], outer


def eval_theorem2(p: Params3F2NegDiff) -> tuple[Theorem2Terms, ValueWithError]:
    """Two-sum form with independent m and n.

    Returns the two bracketed terms T1, T2 and the assembled value
    (b)_{m+1} (c)_{n+1} / (c-b)_{n+1} (T1 + T2).
    """
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    value, terms = _run(_core_mn, (p.a, p.b, p.c, p.m, p.n),
                        _pre_err(p.a, p.b, p.c, p.m, p.n), status, reason)
    return Theorem2Terms(terms[0], terms[1]), value


# ---------------------------------------------------------------- Karlsson

def eval_inner_sum_su(m: int, bc_diff: complex, j: int) -> complex:
    """sum_{k=0}^{m} (-m)_k / ((b-c-j+k) k!) summed directly."""
    x = complex(bc_diff) - j
    terms = []
    for k in range(m + 1):
        d = x + k
        if d == 0:
            raise DomainViolation("b - c - j + k vanishes")
        terms.append((-1) ** k * math.comb(m, k) / d)
    return compensated_sum(terms)


def inner_sum_su_closed(m: int, bc_diff: complex, j: int) -> complex:
    """Closed form m!/(b-c)_{m+1} (c-b-m)_j/(1+c-b)_j of the same inner sum."""
    x = complex(bc_diff)
    den = BINARY64.poch(x, m + 1) * BINARY64.poch(1 - x, j)
    if den == 0:
        raise DomainViolation("pole of the inner-sum closed form")
    return math.factorial(m) * BINARY64.poch(-x - m, j) / den


def _core_kb(k, a, b, c, m, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    # B(1-a, y+1) = B(1-a, y) y / (1-a+y): all Beta values share one rounding
    bc = [k.beta(1 - a, c)]
    for j in range(n):
        bc.append(bc[-1] * (c + j) / (1 - a + c + j))
    bb = [k.beta(1 - a, b)]
    for i in range(m):
        bb.append(bb[-1] * (b + i) / (1 - a + b + i))
    pieces = []
    for i in range(m + 1):
        wi = (-1) ** i * math.comb(m, i)
        for j in range(n + 1):
            w = wi * (-1) ** j * math.comb(n, j)
            pieces.append((w * bc[j] / (b - c + i - j), 1, 0.0))
            pieces.append((w * bb[i] / (c - b + j - i), 1, 0.0))
    outer = k.poch(b, m + 1) * k.poch(c, n + 1) / (k.fact(m) * k.fact(n))
    return pieces, outer


def eval_karlsson_kb(p: Params3F2NegDiff) -> ValueWithError:
    """Karlsson's double finite sum at unit argument."""
    _require_decay(p)
    _require_a_off_one(p.a)
    k, d = nearest_integer_distance(p.b - p.c)
    if abs(k) <= p.m + p.n and d <= 1e-12:
        raise DomainViolation("b - c is an integer: some b - c + i - j vanishes")
    status, reason = Status.OK, ""
    if abs(k) <= p.m + p.n and d < LATTICE_PROXIMITY:
        status, reason = Status.NEAR_SINGULAR, f"b - c within {d:.2g} of an integer"
    return _run(_core_kb, (p.a, p.b, p.c, p.m, p.n),
                _pre_err(p.a, p.b, p.c, p.m, p.n), status, reason)[0]


# ---------------------------------------------------------------- earlier results

def om_params(a: complex, b: complex, c: complex, n: int) -> Params3F2NegDiff:
    """3F2(a, b, c; b+n, c+1; 1) is the family member with m = n-1, n = 0."""
    if n < 1:
        raise DomainViolation("this form needs n >= 1")
    return Params3F2NegDiff(a, b, c, n - 1, 0)


def miller_paris_params(variant: str, a: complex, b: complex, c: complex,
                        n: int) -> Params3F2NegDiff:
    """MP uses denominators (b+n, c+1); FA and FB use (b+1+n, c+1)."""
    variant = variant.upper()
    if variant == "MP":
        return om_params(a, b, c, n)
    if variant in ("FA", "FB"):
        return Params3F2NegDiff(a, b, c, n, 0)
    raise DomainViolation(f"unknown variant {variant!r}")


def corollary1_params(a: complex, b: complex, c: complex, n: int) -> Params3F2NegDiff:
    """The shifted form evaluates the family member with first parameter a+2n, m = n."""
    return Params3F2NegDiff(complex(a) + 2 * n, b, c, n, n)


def _core_om(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    first = c * k.beta(1 - a, c) * _div(k.poch(b, n), k.poch(b - c, n), "(b-c)_n")
    pieces = [(first, 1, 0.0)]
    for ell in range(n):
        t = ((-1) ** ell
             * k.gamma_ratio(n - ell - a, b + n - a - ell)
             * k.gamma_ratio(b + n, n - ell)
             * k.gamma_ratio(c - b + 1 - n, c - b - n + 2 + ell))
        pieces.append((c * t, 1, 0.0))
    return pieces, 1


def eval_milgram_om(a: complex, b: complex, c: complex, n: int) -> ValueWithError:
    """3F2(a, b, c; b+n, c+1; 1) as a closed term plus a finite sum of Gamma ratios."""
    p = om_params(a, b, c, n)
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    return _run(_core_om, (p.a, p.b, p.c, n), _pre_err(p.a, p.b, p.c, n), status, reason)[0]


def _core_mp(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    ps = k.partial_2f1(1 - a, b - c, 1 + b - a, n - 1)
    outer = c * _div(k.poch(b, n), k.poch(b - c, n), "(b-c)_n")
    return [(k.beta(1 - a, c), 1, 0.0),
            (-k.beta(1 - a, b), ps, 8 * n * EPS * abs(complex(ps)))], outer


def _core_fa(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    s, e = k.tsum(n, b, b - c, 1 + b - a, 1 + b - c)
    pieces = [(_div(k.beta(1 - a, c), k.poch(b - c, n + 1), "(b-c)_{n+1}"), 1, 0.0),
              (-_div(k.beta(1 - a, b), (b - c) * k.fact(n), "b-c"), s, e)]
    return pieces, c * k.poch(b, n + 1)


def _core_fb(k, a, b, c, n):
    a, b, c = k.num(a), k.num(b), k.num(c)
    s, e = k.tsum(n, 1 - a, 1 - a + c, 2 - a, 1 - a + b)
    outer = c * _div(k.poch(b, n + 1), k.poch(b - c, n + 1), "(b-c)_{n+1}")
    pieces = [(k.beta(1 - a, c), 1, 0.0),
              (-k.beta(1 - a, b) * k.poch(2 - a, n) / k.fact(n), s, e)]
    return pieces, outer


_MILLER_PARIS = {"MP": _core_mp, "FA": _core_fa, "FB": _core_fb}


def eval_miller_paris(variant: str, a: complex, b: complex, c: complex, n: int) -> ValueWithError:
    """Three equivalent forms for denominators (b+n, c+1) [MP] or (b+1+n, c+1) [FA, FB].

    The FA form carries the factor 1/(b-c) on its second term; without it
    the formula disagrees with the defining series.
    """
    variant = variant.upper()
    p = miller_paris_params(variant, a, b, c, n)
    _require_decay(p)
    _require_a_off_one(p.a)
    status, reason = _singular_status(p)
    return _run(_MILLER_PARIS[variant], (p.a, p.b, p.c, n), _pre_err(p.a, p.b, p.c, n),
                status, reason)[0]


def _core_p7(k, a, b, c):
    a, b, c = k.num(a), k.num(b), k.num(c)
    return [(k.beta(1 - a, b), 1, 0.0), (-k.beta(1 - a, c), 1, 0.0)], b * c / (c - b)


def eval_special_7_4_4_16(a: complex, b: complex, c: complex) -> ValueWithError:
    """3F2(a, b, c; b+1, c+1; 1) = bc/(c-b) Gamma(1-a) [Gamma(b)/Gamma(1-a+b) - Gamma(c)/Gamma(1-a+c)]."""
    a, b, c = complex(a), complex(b), complex(c)
    if b == c:
        raise DomainViolation("b == c")
    p = Params3F2NegDiff(a, b, c, 0, 0)
    _require_decay(p)
    _require_a_off_one(a)
    status, reason = _singular_status(p)
    return _run(_core_p7, (a, b, c), _pre_err(a, b, c), status, reason)[0]


# ---------------------------------------------------------------- a -> 1

def _first_order_sum(k, m: int, x, w, b):
    """S(e) = 3F2(-m, b, x; b+e, w; 1) at e = 0 and its e-derivative there,
    plus the sum of term moduli."""
    t = k.num(1)
    harmonic = k.num(0)
    vals, ders = [t], []
    for j in range(m):
        t = t * (j - m) * (x + j) / ((w + j) * (j + 1))
        harmonic += 1 / (b + j)
        vals.append(t)
        ders.append(-t * harmonic)
    scale = sum(abs(complex(v)) for v in vals) + sum(abs(complex(d)) for d in ders)
    return k.total(vals), k.total(ders), scale


def _core_a1(k, b, c, m, n):
    b, c = k.num(b), k.num(c)
    outer = k.poch(b, m + 1) * k.poch(c, n + 1)
    c1 = _div(1, k.poch(c - b, n + 1) * k.fact(m), "(c-b)_{n+1}")
    c2 = _div(1, k.poch(b - c, m + 1) * k.fact(n), "(b-c)_{m+1}")
    s1, d1, k1 = _first_order_sum(k, m, b - c - n, 1 + b - c, b)
    s2, d2, k2 = _first_order_sum(k, n, c - b - m, 1 + c - b, c)
    pb, pc = k.digamma(b), k.digamma(c)
    ulps = EPS * (16 + 4 * (m + n))
    return [(c1, d1 - pb * s1, k1 * (1 + abs(complex(pb))) * ulps),
            (c2, d2 - pc * s2, k2 * (1 + abs(complex(pc))) * ulps)], outer


def eval_a1_limit(p: Params3F2NegDiff) -> ValueWithError:
    """Value at a = 1, where both Beta prefactors of the three-term form are
    singular but their poles cancel.

    With e = 1 - a, B(e, x) = 1/e - gamma - psi(x) + O(e) and each
    terminating factor is expanded to first order in e.  The 1/e parts
    cancel (Chu-Vandermonde makes them equal and opposite), which leaves

        (b)_{m+1} (c)_{n+1} [C1 (S1' - psi(b) S1) + C2 (S2' - psi(c) S2)].

    As a cross-check the three-term formula is also evaluated at a = 1 +- h
    for h = 1e-4 and 1e-5 and Richardson-extrapolated; disagreement beyond
    that estimate's own error flags the result as near_singular.
    """
    if abs(p.a - 1) > A1_PROXIMITY:
        raise DomainViolation("eval_a1_limit needs a == 1")
    _require_decay(p.replace(a=1.0))
    status, reason = _singular_status(p.replace(a=0.0))
    out, _ = _run(_core_a1, (p.b, p.c, p.m, p.n), _pre_err(p.b, p.c, p.m, p.n), status, reason)

    def at(a: complex) -> ValueWithError:
        first, second = zy_terms(p.replace(a=a))
        return ValueWithError(first.value + second.value, first.abs_err + second.abs_err)

    check = _symmetric_limit(at, 1.0 + 0j, (1e-4, 1e-5), 1e-6)
    gap = abs(check.value - out.value)
    if gap > 1e-6 * abs(out.value) and gap > 4 * (check.abs_err + out.abs_err):
        return ValueWithError(out.value, out.abs_err, Status.NEAR_SINGULAR,
                              f"extrapolated limit disagrees by {gap / abs(out.value):.2g} relative")
    return out


# ---------------------------------------------------------------- registry

@dataclass(frozen=True)
class IdentityInfo:
    """One registered closed form.

    ``project`` maps an arbitrary family member onto the identity's own
    domain (e.g. forcing m == n), ``applies`` tests membership, and
    ``evaluate`` returns the value of 3F2(a, b, c; b+1+m, c+1+n; 1).
    """

    tag: IdentityId
    label: str
    summary: str
    applies: Callable[[Params3F2NegDiff], bool]
    project: Callable[[Params3F2NegDiff], Params3F2NegDiff]
    evaluate: Callable[[Params3F2NegDiff], ValueWithError]


def _always(p):
    return True


def _same(p):
    return p


def _diag(p):
    return p.m == p.n


def _to_diag(p):
    return p.replace(m=p.n)


def _n_zero(p):
    return p.n == 0


def _to_n_zero(p):
    return p.replace(n=0)


REGISTRY: dict[IdentityId, IdentityInfo] = {
    info.tag: info for info in [
        IdentityInfo(IdentityId.ZY, "three-term", "symmetric three-term formula, any m, n",
                     _always, _same, eval_zy),
        IdentityInfo(IdentityId.ZX, "three-term m=n", "three-term formula, m = n",
                     _diag, _to_diag, eval_zx),
        IdentityInfo(IdentityId.TT, "two Gauss sums", "two 2F1(1) sums and a finite sum, m = n",
                     _diag, _to_diag, eval_theorem1),
        IdentityInfo(IdentityId.TC, "shifted m=n", "first parameter a+2n, m = n",
                     _diag, _to_diag,
                     lambda p: eval_corollary1(p.a - 2 * p.n, p.b, p.c, p.n)),
        IdentityInfo(IdentityId.MN, "two-sum", "two finite-sum terms T1, T2, any m, n",
                     _always, _same, lambda p: eval_theorem2(p)[1]),
        IdentityInfo(IdentityId.KB, "Karlsson", "Karlsson double sum, any m, n",
                     _always, _same, eval_karlsson_kb),
        IdentityInfo(IdentityId.OM, "Milgram", "denominators (b+m+1, c+1), n = 0",
                     _n_zero, _to_n_zero,
                     lambda p: eval_milgram_om(p.a, p.b, p.c, p.m + 1)),
        IdentityInfo(IdentityId.MP, "Miller-Paris", "partial-sum form, n = 0",
                     _n_zero, _to_n_zero,
                     lambda p: eval_miller_paris("MP", p.a, p.b, p.c, p.m + 1)),
        IdentityInfo(IdentityId.FA, "Miller-Paris A", "terminating 3F2 form, n = 0",
                     _n_zero, _to_n_zero,
                     lambda p: eval_miller_paris("FA", p.a, p.b, p.c, p.m)),
        IdentityInfo(IdentityId.FB, "Miller-Paris B", "Thomae-transformed terminating form, n = 0",
                     _n_zero, _to_n_zero,
                     lambda p: eval_miller_paris("FB", p.a, p.b, p.c, p.m)),
        IdentityInfo(IdentityId.P7_4_4_16, "m = n = 0", "m = n = 0 Gamma-ratio form",
                     lambda p: p.m == 0 and p.n == 0, lambda p: p.replace(m=0, n=0),
                     lambda p: eval_special_7_4_4_16(p.a, p.b, p.c)),
        IdentityInfo(IdentityId.A1_LIMIT, "a -> 1 limit", "a -> 1 limit of the three-term formula",
                     lambda p: abs(p.a - 1) <= A1_PROXIMITY, lambda p: p.replace(a=1.0),
                     eval_a1_limit),
    ]
}

METHODS = {
    "zy": IdentityId.ZY, "zx": IdentityId.ZX, "tt": IdentityId.TT, "tc": IdentityId.TC,
    "mn": IdentityId.MN, "kb": IdentityId.KB, "om": IdentityId.OM, "mp": IdentityId.MP,
    "fa": IdentityId.FA, "fb": IdentityId.FB, "p7": IdentityId.P7_4_4_16,
    "a1": IdentityId.A1_LIMIT,
}


def evaluate(p: Params3F2NegDiff, method: str = "auto", tol=None) -> tuple[ValueWithError, str]:
    """Evaluate with a named method; returns (value, method actually used).

    ``auto`` takes the a -> 1 limit near a = 1, uses the oracle when a = 0
    (the series stops after one term) or when b - c sits within 1e-6 of a
    colliding integer, and otherwise uses the three-term formula.
    """
    method = method.lower()
    if method == "auto":
        if abs(p.a - 1) <= A1_PROXIMITY:
            method = "a1"
        elif p.a == 0 or bc_lattice_distance(p) < LATTICE_PROXIMITY:
            method = "oracle"
        else:
            method = "zy"
    if method == "oracle":
        return sum_3f2_unit_oracle(p, tol), "oracle"
    if method not in METHODS:
        raise DomainViolation(f"unknown method {method!r}")
    info = REGISTRY[METHODS[method]]
    if not info.applies(p):
        raise DomainViolation(f"{info.label} does not apply to m={p.m}, n={p.n}, a={p.a}")
    return info.evaluate(p), method
