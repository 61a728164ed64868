"""Conformal geometry of the unit sphere S^(n-1) in R^n.

Points are numpy arrays of shape ``(n,)`` or stacks of shape ``(N, n)``;
every function here broadcasts over the leading axis. Only the boost
subgroup ``a_t`` along the first axis and rotations are implemented.
"""
from __future__ import annotations

import enum

import numpy as np

__all__ = [
    "Orbit",
    "ORBIT_TOL",
    "at_action",
    "kappa_at",
    "orbit_of",
    "sample_sphere",
    "random_rotation",
    "rotate",
    "distance",
]

ORBIT_TOL = 1e-9


class Orbit(enum.Enum):
    """The five orbits of the diagonal action on S x S x S."""

    O0 = 0  # x, y, z pairwise distinct
    O1 = 1  # y = z != x
    O2 = 2  # z = x != y
    O3 = 3  # x = y != z
    O4 = 4  # x = y = z


def _as_points(x):
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2):
        raise ValueError("expected a point (n,) or a stack of points (N, n)")
    return x


def distance(x, y):
    return np.linalg.norm(_as_points(x) - _as_points(y), axis=-1)


def kappa_at(t: float, x):
    """Conformal factor of ``a_t`` at ``x``: 1 / (cosh t + x_1 sinh t).

    ``t`` may be a scalar or an array with one entry per point.
    """
    x = _as_points(x)
    return 1.0 / (np.cosh(t) + x[..., 0] * np.sinh(t))


def at_action(t: float, x):
    """Image of ``x`` under the boost ``a_t``, renormalized to the sphere.

    ``t`` may be a scalar or an array with one entry per point.
    """
    x = _as_points(x)
    if np.isscalar(t) and t == 0:
        return x.copy()
    ch, sh = np.cosh(t), np.sinh(t)
    denom = ch + x[..., 0] * sh
    out = x / denom[..., None]
    out[..., 0] = (sh + x[..., 0] * ch) / denom
    return out / np.linalg.norm(out, axis=-1, keepdims=True)


def orbit_of(x, y, z, tol: float = ORBIT_TOL) -> Orbit:
    """Stratum of a single triple, deciding coincidence by distance < ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    xy = float(distance(x, y)) < tol
    yz = float(distance(y, z)) < tol
    zx = float(distance(z, x)) < tol
    hits = xy + yz + zx
    if hits >= 2:
        return Orbit.O4
    if yz:
        return Orbit.O1
    if zx:
        return Orbit.O2
    if xy:
        return Orbit.O3
    return Orbit.O0


def sample_sphere(n: int, rng: np.random.Generator, size: int | None = None):
    """Uniform point(s) on S^(n-1) from normalized standard Gaussians."""
    if n < 2:
        raise ValueError("n must be at least 2")
    shape = (n,) if size is None else (size, n)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def random_rotation(n: int, rng: np.random.Generator):
    """Haar-random element of SO(n)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotate(rotation, x):
    return _as_points(x) @ np.asarray(rotation).T
