"""Gamma, log-Gamma, Beta and Pochhammer arithmetic over the complex plane.

``lgamma`` uses the Lanczos approximation (g=7, nine coefficients) in the
right half plane and the reflection formula elsewhere.  Poles are reported
by raising :class:`~hyp32.numerics.NearSingular` instead of returning
infinities, so callers can route around them.
"""

from __future__ import annotations

import cmath
import math

from .numerics import EPS, DomainViolation, NearSingular, is_nonpositive_integer

__all__ = [
    "POLE_PROXIMITY",
    "lgamma",
    "gamma",
    "reflection",
    "pochhammer",
    "beta",
    "gamma_ratio",
    "pole_distance",
    "digamma",
]

POLE_PROXIMITY = 1e-13
# max |order| summed as an explicit product
DIRECT_PRODUCT_LIMIT = 64

_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
_FACTORIALS = [float(math.factorial(k)) for k in range(171)]


def pole_distance(z: complex) -> float:
    """Distance from ``z`` to the nearest nonpositive integer (inf if Re z > 0.5)."""
    z = complex(z)
    if z.real > 0.5:
        return math.inf
    k = min(round(z.real), 0)
    return abs(z - k)


def _check_pole(z: complex) -> None:
    if is_nonpositive_integer(z):
        raise NearSingular(f"Gamma pole at {z.real:g}")
    if pole_distance(z) < POLE_PROXIMITY:
        raise NearSingular(f"argument {z} within {POLE_PROXIMITY:g} of a Gamma pole")


def _lanczos_lgamma(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _sinpi(z: complex) -> complex:
    # reduce the real part first so sin(pi*z) keeps its relative accuracy
    r = math.fmod(z.real, 2.0)
    return cmath.sin(math.pi * complex(r, z.imag))


def lgamma(z: complex) -> complex:
    """Principal branch of log Gamma(z)."""
    z = complex(z)
    _check_pole(z)
    if z.real >= 0.5:
        return _lanczos_lgamma(z)
    # reflection; the 2*pi*i shift keeps the principal branch
    shift = math.copysign(2.0 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
    return complex(_LOG_PI, shift) - cmath.log(_sinpi(z)) - _lanczos_lgamma(1.0 - z)


def gamma(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0.0 and z.real > 0 and z.real == math.floor(z.real) and z.real <= 171:
        return complex(_FACTORIALS[int(z.real) - 1])
    lg = lgamma(z)
    if lg.real > 709.0:
        raise NearSingular(f"Gamma({z}) overflows")
    return cmath.exp(lg)


def reflection(a: complex, j: int) -> complex:
    """Gamma(a - j) from Gamma(a) as (-1)^j Gamma(a) / (1-a)_j."""
    a = complex(a)
    if a.imag == 0.0 and a.real == math.floor(a.real):
        raise DomainViolation("reflection needs a non-integer argument")
    return (-1) ** j * gamma(a) / pochhammer(1.0 - a, j)


def pochhammer(base: complex, order: int) -> complex:
    """Rising factorial (base)_order for any integer order.

    Orders up to 64 in magnitude are explicit products, so a nonpositive
    integer base inside the range yields an exact zero.  Negative orders use
    (x)_{-m} = (-1)^m / (1-x)_m.
    """
    base = complex(base)
    order = int(order)
    if order == 0:
        return 1.0 + 0j
    if order < 0:
        m = -order
        den = pochhammer(1.0 - base, m)
        if den == 0:
            raise DomainViolation(f"({base})_{order} is infinite")
        return (-1) ** m / den
    if order <= DIRECT_PRODUCT_LIMIT:
        p = 1.0 + 0j
        for k in range(order):
            p *= base + k
        return p
    if is_nonpositive_integer(base) and -base.real < order:
        return 0j
    return cmath.exp(lgamma(base + order) - lgamma(base))


def _integer_offset(x: complex, y: complex) -> int | None:
    d = y - x
    k = round(d.real)
    # only offsets that are integers up to the rounding of y = x + k
    if abs(d - k) <= 4 * EPS * (1.0 + abs(x) + abs(y)) and abs(k) <= DIRECT_PRODUCT_LIMIT:
        return k
    return None


def gamma_ratio(x: complex, y: complex) -> complex:
    """Gamma(x) / Gamma(y).

    An integer offset k = y - x (|k| <= 64) is handled as 1/(x)_k, which
    stays exact and also resolves ratios of two poles.
    """
    x, y = complex(x), complex(y)
    k = _integer_offset(x, y)
    if k is not None:
        if k >= 0:
            p = pochhammer(x, k)
            if p == 0:
                raise NearSingular(f"Gamma({x})/Gamma({y}) is a pole")
            return 1.0 / p
        return pochhammer(y, -k)
    try:
        lx = lgamma(x)
    except NearSingular:
        raise NearSingular(f"Gamma({x}) pole in ratio") from None
    try:
        ly = lgamma(y)
    except NearSingular:
        return 0j
    return cmath.exp(lx - ly)


def beta(a: complex, b: complex) -> complex:
    """Gamma(a) Gamma(b) / Gamma(a+b)."""
    a, b = complex(a), complex(b)
    for arg in (a, b):
        if is_nonpositive_integer(arg) or pole_distance(arg) < POLE_PROXIMITY:
            raise NearSingular(f"Beta({a}, {b}): Gamma pole at argument {arg}")
    return gamma(b) * gamma_ratio(a, a + b)


# Bernoulli terms B_2k / (2k) of the digamma asymptotic series
_PSI_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(z: complex) -> complex:
    """Logarithmic derivative of Gamma."""
    z = complex(z)
    _check_pole(z)
    if z.real < 0.5:
        r = math.fmod(z.real, 2.0)
        w = math.pi * complex(r, z.imag)
        return digamma(1.0 - z) - math.pi * cmath.cos(w) / cmath.sin(w)
    acc = 0j
    while abs(z) < 12.0:
        acc -= 1.0 / z
        z += 1.0
    inv2 = 1.0 / (z * z)
    series = 0j
    power = inv2
    for coef in _PSI_ASYMPTOTIC:
        series += coef * power
        power *= inv2
    return acc + cmath.log(z) - 0.5 / z - series
