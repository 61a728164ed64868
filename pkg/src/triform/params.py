"""Parameter space of the trilinear family.

Two affine coordinate systems on C^3 describe the same point: the spectral
triple ``lam`` (which representations the form is invariant for) and the
geometric triple ``alpha`` (the kernel exponents). Both are kept on every
:class:`ParamPoint`. All classification here is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionTooSmall, FormulaMismatch
from .exact_arith import QComplex, as_qcomplex, nonpositive_integer, progression_index

__all__ = [
    "ParamPoint",
    "PoleClass",
    "ZkVerdict",
    "rho_of",
    "from_lambda",
    "from_alpha",
    "from_floats",
    "classify_pole",
    "in_zero_set",
    "zero_set_alpha_form",
    "zero_set_lambda_form",
    "in_Zk",
    "is_irreducible",
    "zk_third_lambda",
    "ZK_CONDITIONS",
]

MIN_DIMENSION = 4
ZK_CONDITIONS = ("i", "ii", "iii", "iv", "v", "vi")

Triple = tuple[QComplex, QComplex, QComplex]


def rho_of(n: int) -> Fraction:
    return Fraction(n - 1, 2)


def _check_dimension(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError("n must be an integer")
    if n < MIN_DIMENSION:
        raise DimensionTooSmall(f"n = {n}; the sphere must live in R^n with n >= {MIN_DIMENSION}")


def _triple(values: Sequence) -> Triple:
    if len(values) != 3:
        raise ValueError(f"expected a triple, got {len(values)} values")
    return tuple(as_qcomplex(v) for v in values)  # type: ignore[return-value]


def _alpha_from_lambda(rho: Fraction, lam: Triple) -> Triple:
    l1, l2, l3 = lam
    return (-rho - l1 + l2 + l3, -rho + l1 - l2 + l3, -rho + l1 + l2 - l3)


def _lambda_from_alpha(rho: Fraction, alpha: Triple) -> Triple:
    a1, a2, a3 = alpha
    half = Fraction(1, 2)
    return (rho + (a2 + a3) * half, rho + (a3 + a1) * half, rho + (a1 + a2) * half)


@dataclass(frozen=True)
class ParamPoint:
    """A point of C^3 in both coordinate systems, for the sphere in R^n."""

    n: int
    lam: Triple
    alpha: Triple
    rho: Fraction = field(init=False)

    def __post_init__(self):
        _check_dimension(self.n)
        object.__setattr__(self, "rho", rho_of(self.n))
        if _alpha_from_lambda(self.rho, self.lam) != self.alpha:
            raise ValueError("lam and alpha are not associated parameters")

    @property
    def alpha_sum(self) -> QComplex:
        return self.alpha[0] + self.alpha[1] + self.alpha[2]

    @property
    def lambda_sum(self) -> QComplex:
        return self.lam[0] + self.lam[1] + self.lam[2]

    def is_real(self) -> bool:
        return all(a.is_real() for a in self.alpha)

    def permuted(self, perm: Sequence[int]) -> ParamPoint:
        """Point whose j-th coordinates are this point's ``perm[j]``-th."""
        return from_lambda(self.n, [self.lam[i] for i in perm])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rho": str(self.rho),
            "lambda": [str(v) for v in self.lam],
            "alpha": [str(v) for v in self.alpha],
        }


def from_lambda(n: int, lam: Sequence) -> ParamPoint:
    _check_dimension(n)
    lam = _triple(lam)
    return ParamPoint(n, lam, _alpha_from_lambda(rho_of(n), lam))


def from_alpha(n: int, alpha: Sequence) -> ParamPoint:
    _check_dimension(n)
    alpha = _triple(alpha)
    lam = _lambda_from_alpha(rho_of(n), alpha)
    return ParamPoint(n, lam, alpha)


def from_floats(n: int, values: Sequence[complex], tol: float, kind: str = "alpha") -> ParamPoint:
    """Build a point from doubles, snapping each to the simplest rational within ``tol``."""
    snapped = [QComplex.snap(v, tol) for v in values]
    if kind == "alpha":
        return from_alpha(n, snapped)
    if kind == "lambda":
        return from_lambda(n, snapped)
    raise ValueError(f"kind must be 'alpha' or 'lambda', not {kind!r}")


# -- poles ------------------------------------------------------------------


@dataclass(frozen=True)
class PoleClass:
    """Which planes of poles a point lies on.

    ``type_I`` lists ``(j, k_j)`` with alpha_j = -(n-1) - 2 k_j (j is 1-based);
    ``type_II`` is ``k`` with sum(alpha) = -2(n-1) - 2k, or None.
    """

    type_I: tuple[tuple[int, int], ...]
    type_II: int | None

    @property
    def is_pole(self) -> bool:
        return bool(self.type_I) or self.type_II is not None

    @property
    def generic(self) -> bool:
        return len(self.type_I) + (self.type_II is not None) == 1

    @property
    def label(self) -> str:
        if not self.is_pole:
            return "not-a-pole"
        if self.type_I and self.type_II is not None:
            return "I+II"
        return "I" if self.type_I else "II"

    def to_json(self) -> dict:
        return {
            "is_pole": self.is_pole,
            "label": self.label,
            "type_I": [{"j": j, "k": k} for j, k in self.type_I],
            "type_II": None if self.type_II is None else {"k": self.type_II},
            "generic": self.generic,
        }


def _type_I_index(p: ParamPoint, a: QComplex) -> int | None:
    return progression_index(a, -(p.n - 1), -2)


def _type_II_index(p: ParamPoint) -> int | None:
    return progression_index(p.alpha_sum, -2 * (p.n - 1), -2)


def classify_pole(p: ParamPoint) -> PoleClass:
    type_I = []
    for j, a in enumerate(p.alpha, start=1):
        k = _type_I_index(p, a)
        if k is not None:
            type_I.append((j, k))
    return PoleClass(tuple(type_I), _type_II_index(p))


# -- zero set ---------------------------------------------------------------


def zero_set_alpha_form(p: ParamPoint) -> bool:
    """Two exponents on type-I planes, or a type-II point with an exponent in 2N."""
    on_type_I = [_type_I_index(p, a) is not None for a in p.alpha]
    if sum(on_type_I) >= 2:
        return True
    if _type_II_index(p) is None:
        return False
    return any(progression_index(a, 0, 2) is not None for a in p.alpha)


def _integer(x: QComplex) -> int | None:
    if x.im != 0 or x.re.denominator != 1:
        return None
    return int(x.re)


def zero_set_lambda_form(p: ParamPoint) -> bool:
    """Some lambda_c = -rho - l and lambda_a -+ lambda_b = m with |m| <= l, m = l (mod 2)."""
    for c in range(3):
        l = nonpositive_integer(p.lam[c] + p.rho)
        if l is None:
            continue
        a, b = (i for i in range(3) if i != c)
        for m in (_integer(p.lam[a] - p.lam[b]), _integer(p.lam[a] + p.lam[b])):
            if m is not None and abs(m) <= l and (l - m) % 2 == 0:
                return True
    return False


def in_zero_set(p: ParamPoint) -> bool:
    """Membership in the set where the normalized family vanishes identically.

    Both the geometric and the spectral characterisation are evaluated; a
    disagreement raises :class:`FormulaMismatch`.
    """
    by_alpha = zero_set_alpha_form(p)
    by_lambda = zero_set_lambda_form(p)
    if by_alpha != by_lambda:
        raise FormulaMismatch(f"zero-set forms disagree at {p.to_json()}")
    return by_alpha


# -- the planes H_k ----------------------------------------------------------


@dataclass(frozen=True)
class ZkVerdict:
    satisfied: tuple[str, ...]

    @property
    def in_Zk(self) -> bool:
        return bool(self.satisfied)

    def to_json(self) -> dict:
        return {"in_Zk": self.in_Zk, "satisfied_conditions": list(self.satisfied)}


def _in_shifted_range(x: QComplex, lo: int, count: int) -> bool:
    # x in {lo, lo+1, ..., lo+count-1}
    j = progression_index(x, lo, 1)
    return j is not None and j < count


def zk_third_lambda(n: int, k: int, lam1, lam2) -> QComplex:
    """lambda_3 completing (lambda_1, lambda_2) onto the plane sum = -rho - 2k."""
    return -rho_of(n) - 2 * k - as_qcomplex(lam1) - as_qcomplex(lam2)


def in_Zk(n: int, k: int, lam1, lam2) -> ZkVerdict:
    """Evaluate the six conditions characterising Z on the plane sum(lambda) = -rho - 2k."""
    _check_dimension(n)
    if k < 0:
        raise ValueError("k must be a natural number")
    l1, l2 = as_qcomplex(lam1), as_qcomplex(lam2)
    rho = rho_of(n)
    hits = []
    if progression_index(l1 + l2, -k, 1) is not None:
        hits.append("i")
    if progression_index(l1, -rho - k, -1) is not None:
        hits.append("ii")
    if progression_index(l2, -rho - k, -1) is not None:
        hits.append("iii")
    l = nonpositive_integer(l1 + rho)
    if l is not None and _in_shifted_range(l2, -k, l + 1):
        hits.append("iv")
    l = nonpositive_integer(l2 + rho)
    if l is not None and _in_shifted_range(l1, -k, l + 1):
        hits.append("v")
    p_ = progression_index(l1, -k, 1)
    q_ = progression_index(l2, -k, 1)
    if p_ is not None and q_ is not None and p_ + q_ <= k:
        hits.append("vi")
    verdict = ZkVerdict(tuple(hits))
    full = from_lambda(n, (l1, l2, zk_third_lambda(n, k, l1, l2)))
    if verdict.in_Zk != in_zero_set(full):
        raise FormulaMismatch(f"Z_k conditions disagree with the zero set at {full.to_json()}, k={k}")
    return verdict


def is_irreducible(n: int, lam) -> bool:
    """Whether the spherical principal series with parameter ``lam`` is irreducible."""
    _check_dimension(n)
    x = as_qcomplex(lam)
    rho = rho_of(n)
    return progression_index(x, -rho, -1) is None and progression_index(x, rho, 1) is None
