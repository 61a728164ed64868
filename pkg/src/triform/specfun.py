"""Floating complex log-Gamma, reciprocal Gamma and rising factorial.

Lanczos approximation with g = 7 and nine coefficients, plus the reflection
formula for Re z < 1/2. Values only: every decision of the form "is this
factor zero?" is made exactly in :mod:`triform.exact_arith`.
"""
from __future__ import annotations

import cmath
import math

from .errors import PoleOfGamma
from .exact_arith import QComplex, nonpositive_integer

__all__ = ["log_gamma", "recip_gamma", "gamma", "pochhammer_f", "near_pole", "sinpi"]

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

POLE_TOL = 1e-12
RECIP_SNAP_TOL = 1e-9
_NEAR_POLE = 0.25


def near_pole(z: complex, tol: float) -> bool:
    """True when ``z`` lies within ``tol`` (componentwise) of 0, -1, -2, ..."""
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol and abs(z.imag) <= tol


def sinpi(z: complex) -> complex:
    """sin(pi z) with the real part reduced to [-1/2, 1/2] first (exact in binary)."""
    z = complex(z)
    r = round(z.real)
    val = cmath.sin(math.pi * complex(z.real - r, z.imag))
    return -val if r % 2 else val


def _lanczos_log(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _principal(w: complex) -> complex:
    im = math.remainder(w.imag, 2.0 * math.pi)
    if im <= -math.pi:
        im += 2.0 * math.pi
    return complex(w.real, im)


def log_gamma(z) -> complex:
    """Principal logarithm of Gamma(z).

    The imaginary part is reduced to (-pi, pi]; ``exp`` of the result is
    Gamma(z). Raises :class:`PoleOfGamma` within 1e-12 of 0, -1, -2, ...
    """
    z = complex(z)
    if near_pole(z, POLE_TOL):
        raise PoleOfGamma(f"Gamma has a pole at {z!r}")
    if z.real < 0.5:
        w = _LOG_PI - cmath.log(sinpi(z)) - _lanczos_log(1.0 - z)
    else:
        w = _lanczos_log(z)
    return _principal(w)


def gamma(z) -> complex:
    return cmath.exp(log_gamma(z))


def recip_gamma(z, exact: QComplex | None = None) -> complex:
    """1/Gamma(z), an entire function.

    If ``exact`` (the exact value of the argument) is given, it alone decides
    whether the result is zero. Otherwise the result is forced to 0.0 within
    1e-9 of a nonpositive integer.
    """
    z = complex(z)
    if exact is not None:
        if nonpositive_integer(exact) is not None:
            return 0j
        r = round(z.real)
        if r <= 0 and abs(z - r) < _NEAR_POLE:
            # z = -j + e with e taken from the exact argument, so the rounding
            # of z itself does not swamp a small e:
            # 1/Gamma(-j + e) = (-1)^j Gamma(1 + j - e) sin(pi e) / pi
            eps = complex(exact - r)
            val = cmath.exp(log_gamma(complex(1 - r) - eps)) * cmath.sin(math.pi * eps) / math.pi
            return -val if r % 2 else val
        return cmath.exp(-log_gamma(z))
    if near_pole(z, RECIP_SNAP_TOL):
        return 0j
    return cmath.exp(-log_gamma(z))


def pochhammer_f(x, m: int) -> complex:
    """Rising factorial by repeated multiplication."""
    if m < 0:
        raise ValueError("m must be a natural number")
    x = complex(x)
    acc = 1 + 0j
    for j in range(m):
        acc *= x + j
    return acc
