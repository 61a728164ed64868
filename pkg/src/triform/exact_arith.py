"""Exact complex-rational arithmetic.

Rationals are :class:`fractions.Fraction`; :class:`QComplex` pairs two of them.
Every pole and zero decision in the package goes through this module, so
nothing here ever touches floating point except the explicit conversions
(``__complex__``, :meth:`QComplex.snap`).
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import ParseError

__all__ = [
    "QComplex",
    "as_qcomplex",
    "parse_rational",
    "format_rational",
    "snap_float",
    "pochhammer_exact",
    "pochhammer_vanishes",
    "progression_index",
    "nonpositive_integer",
]

_RAT = r"\d+(?:\.\d*)?(?:/\d+)?|\.\d+"
_RATIONAL_RE = re.compile(rf"^[+-]?(?:{_RAT})$")


def _normalize_text(text: str) -> str:
    # U+2212 MINUS SIGN shows up when values are pasted from typeset sources.
    return text.strip().replace("−", "-").replace(" ", "")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"``, ``"p/q"`` or an exact decimal such as ``"-1.5"``."""
    s = _normalize_text(text)
    if not _RATIONAL_RE.match(s):
        raise ParseError(f"not a rational: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator: {text!r}") from None


def format_rational(x: Fraction) -> str:
    return str(x)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class QComplex:
    """Immutable complex number with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QComplex is immutable")

    # construction -------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> QComplex:
        """Parse the text form printed by ``str()``: ``"-3"``, ``"1/2-2i"``, ``"3/4i"``."""
        s = _normalize_text(text)
        if not s.endswith("i"):
            return cls(parse_rational(s))
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut > 0:
            re_txt, im_txt = body[:cut], body[cut:]
        else:
            re_txt, im_txt = "", body
        if im_txt in ("", "+", "-"):
            im_txt += "1"
        try:
            re_part = parse_rational(re_txt) if re_txt else Fraction(0)
            im_part = parse_rational(im_txt)
        except ParseError:
            raise ParseError(f"not a complex rational: {text!r}") from None
        return cls(re_part, im_part)

    @classmethod
    def from_complex_exact(cls, z: complex) -> QComplex:
        """Exact binary-rational image of a double (no snapping)."""
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite value {z!r}")
        return cls(Fraction(z.real), Fraction(z.imag))

    @classmethod
    def snap(cls, z: complex, tol: float) -> QComplex:
        """Simplest rationals within ``tol`` of each component of ``z``."""
        z = complex(z)
        return cls(snap_float(z.real, tol), snap_float(z.imag, tol))

    # predicates / conversion ---------------------------------------------

    def is_real(self) -> bool:
        return self.im == 0

    def conjugate(self) -> QComplex:
        return QComplex(self.re, -self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self) -> str:
        return f"QComplex({str(self)!r})"

    # equality: structural, after reduction. No ordering on purpose.

    def __eq__(self, other) -> bool:
        if isinstance(other, QComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    # arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QComplex):
            return other
        if isinstance(other, (int, Fraction)):
            return QComplex(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.im == 0 and o.im == 0:
            return QComplex(self.re * o.re)
        return QComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("QComplex division by zero")
        if o.im == 0:
            return QComplex(self.re / o.re, self.im / o.re)
        d = o.re * o.re + o.im * o.im
        return QComplex(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __pos__(self):
        return self


def as_qcomplex(x) -> QComplex:
    """Coerce int, Fraction, QComplex or text to :class:`QComplex`."""
    if isinstance(x, QComplex):
        return x
    if isinstance(x, str):
        return QComplex.parse(x)
    return QComplex(_as_fraction(x))


def snap_float(x: float, tol: float) -> Fraction:
    """Return the continued-fraction convergent of ``x`` with the smallest
    denominator lying within ``tol`` of ``x``."""
    if tol <= 0:
        raise ValueError("snapping tolerance must be positive")
    if not math.isfinite(x):
        raise ValueError(f"cannot snap non-finite value {x!r}")
    target = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    rest = target
    while True:
        a = math.floor(rest)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        cand = Fraction(h1, k1)
        if abs(cand - target) <= tol or cand == target:
            return cand
        rest = 1 / (rest - a)


def nonpositive_integer(x: QComplex) -> int | None:
    """``j`` if ``x == -j`` for some natural ``j``, else ``None``."""
    return progression_index(x, Fraction(0), Fraction(-1))


def progression_index(x, base, step) -> int | None:
    """``k`` if ``x == base + k*step`` for some natural ``k``, else ``None``.

    Non-real ``x`` is never a member.
    """
    x = as_qcomplex(x)
    base = _as_fraction(base)
    step = _as_fraction(step)
    if step == 0:
        raise ValueError("step must be nonzero")
    if x.im != 0:
        return None
    k = (x.re - base) / step
    if k.denominator != 1 or k < 0:
        return None
    return int(k)


def pochhammer_exact(x, m: int) -> QComplex:
    """Rising factorial ``x (x+1) ... (x+m-1)``; ``1`` for ``m == 0``."""
    if m < 0:
        raise ValueError("m must be a natural number")
    x = as_qcomplex(x)
    if x.im == 0:
        acc = Fraction(1)
        for j in range(m):
            acc *= x.re + j
            if acc == 0:
                break
        return QComplex(acc)
    out = QComplex(1)
    for j in range(m):
        out = out * (x + j)
    return out


def pochhammer_vanishes(x, m: int) -> bool:
    """Decide ``(x)_m == 0`` without forming the product: ``x = -j`` with ``m > j``."""
    j = nonpositive_integer(as_qcomplex(x))
    return j is not None and m > j
