"""Covariant bi-differential operators as a homogeneous linear system.

An operator ``sum c_{r,t} D_xx^r D_xy^s D_yy^t`` (``s = k - r - t``) is
covariant exactly when its coefficients solve two families of three-term
recurrences, one per direction. This module builds that system and computes
its nullspace, exactly for rational (or complex-rational) parameters and by
SVD for floating ones.

Unknowns outside ``r, t >= 0, r + t <= k`` are zero; with that convention
the k = 0 and k = 1 systems reproduce the product and the first
Rankin-Cohen-type operator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

import numpy as np

from .exact_arith import QComplex, as_qcomplex
from .params import _check_dimension, rho_of

__all__ = [
    "BidiffSystem",
    "NullspaceResult",
    "unknown_index",
    "build_system",
    "nullspace",
]


def unknown_index(k: int) -> list[tuple[int, int]]:
    """Unknowns ``(r, t)`` with ``r + t <= k`` in lexicographic order."""
    return [(r, t) for r in range(k + 1) for t in range(k + 1 - r)]


@dataclass(frozen=True)
class BidiffSystem:
    n: int
    k: int
    lambda1: object
    lambda2: object
    unknowns: tuple[tuple[int, int], ...]
    rows: tuple[dict, ...]  # column index -> coefficient; identically-zero rows dropped
    labels: tuple[tuple[str, int, int], ...]  # ("E1" | "E2", r, t) for each row
    exact: bool

    @property
    def nunknowns(self) -> int:
        return len(self.unknowns)

    def dense(self) -> np.ndarray:
        a = np.zeros((len(self.rows), self.nunknowns), dtype=complex)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                a[i, j] = complex(v)
        return a

    def residuals(self, vector) -> list:
        return [sum(c * vector[j] for j, c in row.items()) for row in self.rows]


@dataclass(frozen=True)
class NullspaceResult:
    nullity: int
    basis: tuple[tuple, ...]
    unknowns: tuple[tuple[int, int], ...]
    exact: bool

    def coefficient_map(self, i: int = 0) -> dict:
        return dict(zip(self.unknowns, self.basis[i]))

    def to_json(self, k: int | None = None) -> dict:
        def fmt(v):
            return str(v) if self.exact else [float(v.real), float(v.imag)]

        out = {} if k is None else {"k": k}
        out["nullity"] = self.nullity
        out["exact"] = self.exact
        out["basis"] = [
            [{"r": r, "t": t, "c": fmt(c)} for (r, t), c in zip(self.unknowns, vec)]
            for vec in self.basis
        ]
        return out


def _is_exact_input(x) -> bool:
    return isinstance(x, (QComplex, int, Fraction, str))


def build_system(n: int, k: int, lambda1, lambda2) -> BidiffSystem:
    """Instantiate both recurrence families for every ``(r, t)`` with ``r + t <= k``.

    Exact inputs (int, Fraction, QComplex, text) give exact coefficients;
    float or complex inputs give a floating system.
    """
    _check_dimension(n)
    if k < 0:
        raise ValueError("k must be a natural number")
    exact = _is_exact_input(lambda1) and _is_exact_input(lambda2)
    if exact:
        l1, l2 = as_qcomplex(lambda1), as_qcomplex(lambda2)
        rho = QComplex(rho_of(n))
    elif isinstance(lambda1, Number) and isinstance(lambda2, Number):
        l1, l2 = complex(lambda1), complex(lambda2)
        rho = (n - 1) / 2
    else:
        raise TypeError("lambda values must be exact rationals or floating numbers")

    zero = QComplex(0) if exact else 0j
    unknowns = unknown_index(k)
    col = {rt: j for j, rt in enumerate(unknowns)}
    rows, labels = [], []

    def add(label, terms):
        row = {}
        for coeff, rt in terms:
            j = col.get(rt)
            if j is None or coeff == 0:
                continue
            row[j] = row.get(j, zero) + coeff
        row = {j: v for j, v in row.items() if v != 0}
        if row:
            rows.append(row)
            labels.append(label)

    for r, t in unknowns:
        s = k - r - t
        tail = -(s + 1) * s
        add(
            ("E1", r, t),
            [
                (4 * (r + 1) * (r + 1 + l1), (r + 1, t)),
                (2 * s * (k - r + t - 1 + rho + l2), (r, t)),
                (tail, (r, t - 1)),
            ],
        )
        add(
            ("E2", r, t),
            [
                (4 * (t + 1) * (t + 1 + l2), (r, t + 1)),
                (2 * s * (k + r - t - 1 + rho + l1), (r, t)),
                (tail, (r - 1, t)),
            ],
        )
    return BidiffSystem(
        n, k, l1, l2, tuple(unknowns), tuple(rows), tuple(labels), exact
    )


# -- exact elimination ---------------------------------------------------------


def _integer_row(row: dict) -> dict:
    # Fraction-valued sparse row -> primitive integer row
    den = 1
    for v in row.values():
        den = den * v.denominator // math.gcd(den, v.denominator)
    out = {j: int(v * den) for j, v in row.items()}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
    if g > 1:
        row = {j: v // g for j, v in row.items()}
    return row


def _rref_integer(rows: list[dict], ncols: int) -> dict[int, dict]:
    """Fraction-free Gauss-Jordan over Z on sparse rows; returns pivot column -> row."""
    pending = [r for r in rows if r]
    pivots: dict[int, dict] = {}
    for c in range(ncols):
        candidates = [r for r in pending if c in r]
        if not candidates:
            continue
        piv = min(candidates, key=len)
        pending = [r for r in pending if r is not piv]
        pc = piv[c]

        def eliminate(row):
            f = row[c]
            out = {j: pc * v for j, v in row.items()}
            for j, v in piv.items():
                out[j] = out.get(j, 0) - f * v
            return _primitive({j: v for j, v in out.items() if v != 0})

        pending = [eliminate(r) if c in r else r for r in pending]
        pending = [r for r in pending if r]
        for pcol, prow in list(pivots.items()):
            if c in prow:
                pivots[pcol] = eliminate(prow)
        pivots[c] = piv
    return pivots


def _rref_field(rows: list[dict], ncols: int) -> dict[int, dict]:
    """Gauss-Jordan over Q(i) with QComplex entries; pivot rows scaled to 1."""
    pending = [dict(r) for r in rows if r]
    pivots: dict[int, dict] = {}
    for c in range(ncols):
        candidates = [r for r in pending if c in r]
        if not candidates:
            continue
        piv = min(candidates, key=len)
        pending = [r for r in pending if r is not piv]
        inv = QComplex(1) / piv[c]
        piv = {j: v * inv for j, v in piv.items()}

        def eliminate(row):
            f = row[c]
            out = dict(row)
            for j, v in piv.items():
                out[j] = out.get(j, QComplex(0)) - f * v
            return {j: v for j, v in out.items() if v}

        pending = [r for r in (eliminate(r) if c in r else r for r in pending) if r]
        for pcol, prow in list(pivots.items()):
            if c in prow:
                pivots[pcol] = eliminate(prow)
        pivots[c] = piv
    return pivots


def _normalize_first(vec: list, is_zero) -> list:
    for v in vec:
        if not is_zero(v):
            return [x / v for x in vec]
    raise ValueError("zero vector")


def _nullspace_exact(sys: BidiffSystem) -> NullspaceResult:
    ncols = sys.nunknowns
    real = all(v.im == 0 for row in sys.rows for v in row.values())
    if real:
        pivots = _rref_integer([_integer_row({j: v.re for j, v in r.items()}) for r in sys.rows], ncols)
        lead = {c: Fraction(row[c]) for c, row in pivots.items()}
    else:
        pivots = _rref_field(list(sys.rows), ncols)
        lead = {c: QComplex(1) for c in pivots}
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for c, row in pivots.items():
            if f in row:
                vec[c] = -row[f] / lead[c]
        vec = [as_qcomplex(v) for v in vec]
        basis.append(tuple(_normalize_first(vec, lambda v: not v)))
    for vec in basis:
        if any(sys.residuals(vec)):
            raise ArithmeticError("exact nullspace vector fails a row")
    return NullspaceResult(len(basis), tuple(basis), sys.unknowns, True)


# -- floating path -----------------------------------------------------------------

SVD_RTOL = 1e-12


def _canonical_float_basis(null: np.ndarray) -> list:
    # Row-reduce basis vectors (rows) so the result does not depend on the SVD.
    b = null.copy()
    m, ncols = b.shape
    lead_row = 0
    for c in range(ncols):
        if lead_row == m:
            break
        piv = lead_row + int(np.argmax(np.abs(b[lead_row:, c])))
        if abs(b[piv, c]) <= 1e-10:
            continue
        b[[lead_row, piv]] = b[[piv, lead_row]]
        b[lead_row] /= b[lead_row, c]
        for i in range(m):
            if i != lead_row:
                b[i] -= b[i, c] * b[lead_row]
        lead_row += 1
    out = []
    for vec in b:
        scale = np.max(np.abs(vec))
        cleaned = np.where(np.abs(vec) <= 1e-12 * scale, 0, vec)
        out.append(tuple(_normalize_first(list(cleaned), lambda v: v == 0)))
    return out


def _nullspace_svd(sys: BidiffSystem) -> NullspaceResult:
    a = sys.dense()
    ncols = sys.nunknowns
    if a.shape[0] == 0:
        basis = [tuple(complex(i == j) for j in range(ncols)) for i in range(ncols)]
        return NullspaceResult(ncols, tuple(basis), sys.unknowns, False)
    _, s, vh = np.linalg.svd(a)
    thresh = (s[0] if s.size else 0.0) * max(a.shape) * SVD_RTOL
    rank = int(np.sum(s > thresh))
    null = vh[rank:].conj()
    basis = _canonical_float_basis(null) if len(null) else []
    for vec in basis:
        v = np.asarray(vec)
        for row in a:
            if abs(row @ v) >= 1e-10 * np.linalg.norm(row) * np.linalg.norm(v):
                raise ArithmeticError("SVD nullspace vector fails a row")
    return NullspaceResult(len(basis), tuple(basis), sys.unknowns, False)


def nullspace(sys: BidiffSystem, method: str = "auto") -> NullspaceResult:
    """Nullspace with each basis vector scaled so its first nonzero entry is 1.

    ``method`` is ``"exact"``, ``"svd"`` or ``"auto"`` (exact when the system is).
    """
    if method == "auto":
        method = "exact" if sys.exact else "svd"
    if method == "exact":
        if not sys.exact:
            raise ValueError("exact elimination needs an exact system")
        return _nullspace_exact(sys)
    if method == "svd":
        return _nullspace_svd(sys)
    raise ValueError(f"unknown method {method!r}")
