"""The normalized trilinear form on the K-invariant polynomials.

For a multi-index ``a = (a1, a2, a3)`` the test function is
``|x-y|^(2 a3) |y-z|^(2 a1) |z-x|^(2 a2)``. Its pairing with the normalized
form is a pure product:

    prefactor * (sum(alpha)/2 + 2 rho)_{|a|} * prod_j (alpha_j/2 + rho)_{a_j}
              / prod_{i<j} Gamma((alpha_i + alpha_j)/2 + 2 rho + a_i + a_j)

so it vanishes exactly when one Pochhammer factor vanishes or one Gamma
argument is a nonpositive integer. Zero decisions use that structure on
exact parameters; the floating evaluation only produces values.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .errors import FormulaMismatch, IsAPole
from .exact_arith import QComplex, nonpositive_integer
from .params import ParamPoint, classify_pole
from .specfun import log_gamma, pochhammer_f, recip_gamma

__all__ = [
    "MultiIndex",
    "multi_indices",
    "eval_alpha_form",
    "eval_lambda_form",
    "eval_normalized",
    "is_exact_zero",
    "vanishes_up_to",
    "unnormalized_br",
    "normalization_gamma",
    "find_witness",
    "FORM_RTOL",
]

FORM_RTOL = 1e-9
_LOG2 = math.log(2.0)
_PAIRS = ((0, 1), (1, 2), (2, 0))
_HALF = Fraction(1, 2)


@dataclass(frozen=True, order=True)
class MultiIndex:
    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        if min(self.a1, self.a2, self.a3) < 0:
            raise ValueError("multi-index entries must be natural numbers")

    @classmethod
    def of(cls, a) -> MultiIndex:
        if isinstance(a, MultiIndex):
            return a
        return cls(*(int(v) for v in a))

    @property
    def order(self) -> int:
        return self.a1 + self.a2 + self.a3

    def __iter__(self):
        return iter((self.a1, self.a2, self.a3))

    def __getitem__(self, j):
        return (self.a1, self.a2, self.a3)[j]

    def __str__(self):
        return f"{self.a1},{self.a2},{self.a3}"


def multi_indices(max_order: int) -> Iterator[MultiIndex]:
    """All multi-indices by increasing order, lexicographic within an order."""
    for order in range(max_order + 1):
        for a1 in range(order + 1):
            for a2 in range(order - a1 + 1):
                yield MultiIndex(a1, a2, order - a1 - a2)


def _cpow2(z: QComplex) -> complex:
    return cmath.exp(complex(z) * _LOG2)


# -- floating evaluation ----------------------------------------------------


def eval_alpha_form(p: ParamPoint, a) -> complex:
    """The evaluation formula written in the geometric parameter."""
    a = MultiIndex.of(a)
    rho = p.rho
    al = p.alpha
    s = p.alpha_sum
    pref = (math.pi / 2) ** (3 * (p.n - 1) / 2) * _cpow2(s) * 4.0 ** a.order
    num = pochhammer_f(complex(s * _HALF + 2 * rho), a.order)
    for j in range(3):
        num *= pochhammer_f(complex(al[j] * _HALF + rho), a[j])
    den = 1 + 0j
    for i, j in _PAIRS:
        arg = (al[i] + al[j]) * _HALF + 2 * rho + a[i] + a[j]
        den *= recip_gamma(complex(arg), exact=arg)
    return pref * num * den


def eval_lambda_form(p: ParamPoint, a) -> complex:
    """The same quantity written in the spectral parameter."""
    a = MultiIndex.of(a)
    rho = p.rho
    l1, l2, l3 = p.lam
    pref = (math.sqrt(math.pi) / 2) ** (3 * (p.n - 1)) * _cpow2(p.lambda_sum) * 4.0 ** a.order
    num = pochhammer_f(complex((l1 + l2 + l3 + rho) * _HALF), a.order)
    num *= pochhammer_f(complex((-l1 + l2 + l3 + rho) * _HALF), a.a1)
    num *= pochhammer_f(complex((l1 - l2 + l3 + rho) * _HALF), a.a2)
    num *= pochhammer_f(complex((l1 + l2 - l3 + rho) * _HALF), a.a3)
    den = 1 + 0j
    for lam, shift in ((l1, a.a2 + a.a3), (l2, a.a3 + a.a1), (l3, a.a1 + a.a2)):
        arg = lam + rho + shift
        den *= recip_gamma(complex(arg), exact=arg)
    return pref * num * den


def _close(u: complex, v: complex, rtol: float) -> bool:
    scale = max(abs(u), abs(v))
    return scale == 0 or abs(u - v) <= rtol * scale


def eval_normalized(p: ParamPoint, a) -> complex:
    """Value of the normalized form on the polynomial indexed by ``a``.

    Entire in the parameters, so defined everywhere. The spectral-form value
    is computed too and must agree to 1e-9 relative.
    """
    va = eval_alpha_form(p, a)
    vl = eval_lambda_form(p, a)
    if not _close(va, vl, FORM_RTOL):
        raise FormulaMismatch(f"alpha/lambda forms disagree at {p.to_json()}, a={a}: {va} vs {vl}")
    return va


# -- exact zero analysis -------------------------------------------------------


@dataclass(frozen=True)
class _ZeroProfile:
    # j with base == -j, or None, for each factor of the product
    total: int | None
    single: tuple[int | None, int | None, int | None]
    pair: tuple[int | None, int | None, int | None]

    def vanishes(self, a: MultiIndex) -> bool:
        if self.total is not None and a.order > self.total:
            return True
        for j in range(3):
            s = self.single[j]
            if s is not None and a[j] > s:
                return True
        for (i, j), g in zip(_PAIRS, self.pair):
            # Gamma((alpha_i+alpha_j)/2 + 2rho + a_i + a_j) singular
            if g is not None and a[i] + a[j] <= g:
                return True
        return False


def _integer_offset(x: QComplex) -> int | None:
    """``-x`` when ``x`` is an integer (of any sign), else None."""
    if x.im != 0 or x.re.denominator != 1:
        return None
    return -int(x.re)


@lru_cache(maxsize=4096)
def _profile(p: ParamPoint) -> _ZeroProfile:
    rho = p.rho
    al = p.alpha
    total = nonpositive_integer(p.alpha_sum * _HALF + 2 * rho)
    single = tuple(nonpositive_integer(al[j] * _HALF + rho) for j in range(3))
    pair = tuple(_integer_offset((al[i] + al[j]) * _HALF + 2 * rho) for i, j in _PAIRS)
    return _ZeroProfile(total, single, pair)  # type: ignore[arg-type]


def is_exact_zero(p: ParamPoint, a) -> bool:
    """Exact decision of whether the normalized form kills the polynomial ``a``."""
    return _profile(p).vanishes(MultiIndex.of(a))


def vanishes_up_to(p: ParamPoint, max_order: int) -> bool:
    """True when every polynomial of order <= ``max_order`` is killed."""
    prof = _profile(p)
    return all(prof.vanishes(a) for a in multi_indices(max_order))


def find_witness(p: ParamPoint, max_order: int) -> MultiIndex | None:
    """Smallest-order multi-index (ties lexicographic) not killed by the form.

    Brute force. Off the zero set a witness always exists; the explicit
    constructions for type II points in the double-plane cases need at most
    ``a1 + a2 + a3 <= k`` (k the type II index), and type I points are settled
    by ``(0, a2, a3)`` once ``a2, a3`` clear the finitely many singular Gamma
    arguments, so ``max_order = 12`` covers every pole index up to 4.
    """
    prof = _profile(p)
    for a in multi_indices(max_order):
        if not prof.vanishes(a):
            return a
    return None


# -- unnormalized closed form -------------------------------------------------


def normalization_gamma(p: ParamPoint) -> complex:
    """Product of the four Gamma factors removed by the normalization."""
    rho = p.rho
    args = [a * _HALF + rho for a in p.alpha] + [p.alpha_sum * _HALF + 2 * rho]
    return cmath.exp(sum(log_gamma(complex(x)) for x in args))


def unnormalized_br(p: ParamPoint) -> complex:
    """Closed form of the triple sphere integral of the kernel against 1.

    Raises :class:`IsAPole` on any plane of poles.
    """
    if classify_pole(p).is_pole:
        raise IsAPole(f"{p.to_json()['alpha']} lies on a plane of poles")
    rho = p.rho
    al = p.alpha
    pref = (math.pi / 2) ** (3 * (p.n - 1) / 2) * _cpow2(p.alpha_sum)
    num = [a * _HALF + rho for a in al] + [p.alpha_sum * _HALF + 2 * rho]
    value = pref * cmath.exp(sum(log_gamma(complex(x)) for x in num))
    for i, j in _PAIRS:
        arg = (al[i] + al[j]) * _HALF + 2 * rho
        value *= recip_gamma(complex(arg), exact=arg)
    return value
