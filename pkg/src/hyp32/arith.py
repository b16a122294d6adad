"""Arithmetic backends for the closed-form evaluators.

Every closed form is written once against the small interface below and
run first in binary64.  When the binary64 error estimate shows that the
terms cancel too strongly, the same code is rerun with mpmath numbers at a
working precision chosen from the estimated digit loss.
"""

from __future__ import annotations

import math
from typing import Callable

import mpmath

from . import gamma_kit
from .numerics import (
    EPS,
    DomainViolation,
    NearSingular,
    SlowConvergence,
    Status,
    Tolerance,
    ValueWithError,
    compensated_sum,
)
from .series import GaussSpec, _terminating_sum, partial_sum_2f1, sum_2f1_series

__all__ = ["Binary64", "Wide", "BINARY64", "WIDE_TRIGGER", "pre_err", "run_escalating"]

# estimated relative error above which a formula is re-evaluated in mpmath
WIDE_TRIGGER = 1e-12
_MAX_DPS = 400
# relative error of one Beta/Gamma prefactor, in units of EPS per unit |argument|
_PREFACTOR_ULPS = 64
_WIDE_SERIES_TERMS = 10**6
_SERIES_TOL = Tolerance(rel_tol=EPS)


class Binary64:
    """binary64 complex arithmetic with error-tracked terminating sums."""

    wide = False

    def num(self, x):
        return complex(x)

    def fact(self, n: int):
        return float(math.factorial(n))

    def poch(self, x, n: int):
        return gamma_kit.pochhammer(x, n)

    def beta(self, x, y):
        return gamma_kit.beta(x, y)

    def gamma(self, x):
        return gamma_kit.gamma(x)

    def gamma_ratio(self, x, y):
        return gamma_kit.gamma_ratio(x, y)

    def digamma(self, x):
        return gamma_kit.digamma(x)

    def tsum(self, n: int, x, y, u, v):
        """Terminating 3F2(-n, x, y; u, v; 1) and its absolute error."""
        try:
            return _terminating_sum((-n, x, y), (u, v), 1.0, n)
        except DomainViolation as exc:
            raise NearSingular(str(exc)) from None

    def partial_2f1(self, a, b, c, n: int):
        return partial_sum_2f1(a, b, c, n)

    def series_2f1(self, a, b, c, z):
        """2F1(a, b; c; z) for |z| < 1 and its absolute error."""
        v = sum_2f1_series(GaussSpec(a, b, c, z), _SERIES_TOL)
        return v.value, v.abs_err

    def total(self, terms):
        return compensated_sum(terms)

    def out(self, x) -> complex:
        return complex(x)


BINARY64 = Binary64()


def _mp_is_pole(z) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == mpmath.floor(z.real)


class Wide:
    """mpmath arithmetic; use inside ``mpmath.workdps``.

    Only elementary operations and mpmath's Gamma/Beta values are taken
    from mpmath; the sums and products are formed here exactly as in the
    binary64 path.
    """

    wide = True

    def num(self, x):
        return mpmath.mpc(x)

    def fact(self, n: int):
        return mpmath.mpf(math.factorial(n))

    def poch(self, x, n: int):
        x = mpmath.mpc(x)
        if n < 0:
            den = self.poch(1 - x, -n)
            if den == 0:
                raise DomainViolation(f"({x})_{n} is infinite")
            return (-1) ** (-n) / den
        p = mpmath.mpc(1)
        for k in range(n):
            p *= x + k
        return p

    def _check(self, *args):
        for z in args:
            if _mp_is_pole(z):
                raise NearSingular(f"Gamma pole at {z}")

    def beta(self, x, y):
        x, y = mpmath.mpc(x), mpmath.mpc(y)
        self._check(x, y)
        return mpmath.beta(x, y)

    def gamma(self, x):
        x = mpmath.mpc(x)
        self._check(x)
        return mpmath.gamma(x)

    def gamma_ratio(self, x, y):
        x, y = mpmath.mpc(x), mpmath.mpc(y)
        d = y - x
        k = int(mpmath.nint(d.real))
        if abs(d - k) <= mpmath.mpf(10) ** (-mpmath.mp.dps + 6) * (1 + abs(x)) and abs(k) <= 64:
            if k >= 0:
                p = self.poch(x, k)
                if p == 0:
                    raise NearSingular(f"Gamma({x})/Gamma({y}) is a pole")
                return 1 / p
            return self.poch(y, -k)
        self._check(x)
        if _mp_is_pole(y):
            return mpmath.mpc(0)
        return mpmath.gamma(x) / mpmath.gamma(y)

    def digamma(self, x):
        x = mpmath.mpc(x)
        self._check(x)
        return mpmath.digamma(x)

    def tsum(self, n: int, x, y, u, v):
        t = mpmath.mpc(1)
        s = mpmath.mpc(1)
        for k in range(n):
            d = (u + k) * (v + k) * (k + 1)
            if d == 0:
                raise NearSingular("denominator vanishes before the series terminates")
            t = t * (k - n) * (x + k) * (y + k) / d
            s += t
        return s, 0.0

    def partial_2f1(self, a, b, c, n: int):
        t = mpmath.mpc(1)
        s = mpmath.mpc(1)
        for k in range(n):
            d = (c + k) * (k + 1)
            if d == 0:
                raise DomainViolation(f"(c)_k vanishes at k = {k + 1}")
            t = t * (a + k) * (b + k) / d
            s += t
        return s

    def series_2f1(self, a, b, c, z):
        a, b, c, z = (mpmath.mpc(x) for x in (a, b, c, z))
        w = z / (z - 1)
        pre = mpmath.mpc(1)
        if abs(w) < abs(z) and abs(w) < 1:
            pre = (1 - z) ** (-a)
            b, z = c - b, w
        if not abs(z) < 1:
            raise DomainViolation(f"|z| = {float(abs(z)):g} is outside the unit disk")
        t = mpmath.mpc(1)
        s = mpmath.mpc(1)
        eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
        settle = (1 + abs(z)) / 2
        for k in range(_WIDE_SERIES_TERMS):
            d = (c + k) * (k + 1)
            if d == 0:
                raise DomainViolation("c is a nonpositive integer")
            ratio = (a + k) * (b + k) / d * z
            t = t * ratio
            s += t
            # stop once the terms are negligible and shrinking geometrically
            if t == 0 or (abs(t) <= eps * abs(s) and abs(ratio) < settle):
                return pre * s, 0.0
        raise SlowConvergence("wide 2F1 series did not converge")

    def total(self, terms):
        return mpmath.fsum(terms)

    def out(self, x) -> complex:
        return complex(x)




def pre_err(*args) -> float:
    """Relative binary64 error assumed for a Gamma-type prefactor."""
    return _PREFACTOR_ULPS * EPS * (1.0 + sum(abs(complex(x)) for x in args))


def run_escalating(core: Callable, args: tuple, rel: float, status: Status = Status.OK,
                   reason: str = "") -> tuple[ValueWithError, list[complex]]:
    """Evaluate ``core`` and return the value plus its raw terms.

    ``core(k, *args)`` returns ([(prefactor, series, series_err)], outer)
    computed with the backend ``k``.  The binary64 error is propagated
    additively over the terms and relatively through prefactors; if it
    exceeds ``WIDE_TRIGGER`` relative, the core is rerun in wide
    arithmetic at a precision sized to the estimated digit loss.
    """
    pieces, outer = core(BINARY64, *args)
    terms = [pf * sv for pf, sv, _ in pieces]
    total = compensated_sum(terms)
    value = outer * total
    size = sum(abs(t) for t in terms)
    err = sum(abs(pf) * se for pf, _, se in pieces) + (rel + 4 * EPS) * size
    err = abs(outer) * err + abs(value) * rel
    if WIDE_TRIGGER and err > WIDE_TRIGGER * abs(value):
        lost = math.log10(max(err / max(abs(value) * EPS, 1e-300), 1.0))
        dps = min(_MAX_DPS, 24 + math.ceil(lost))
        with mpmath.workdps(dps):
            wpieces, wouter = core(Wide(), *args)
            wterms = [pf * sv for pf, sv, _ in wpieces]
            wvalue = wouter * mpmath.fsum(wterms)
            wsize = float(abs(wouter) * mpmath.fsum(abs(t) for t in wterms))
            value = complex(wvalue)
            terms = [complex(t) for t in wterms]
        err = abs(value) * EPS + wsize * 10.0 ** (2 - dps)
    return ValueWithError(value, err, status, reason), terms
