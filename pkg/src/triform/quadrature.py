"""Monte Carlo estimates of the trilinear integral in its convergence region.

Estimates are means against the uniform *probability* measure on S x S x S.
Samples are drawn in fixed-size chunks, chunk ``i`` seeded by
``SeedSequence(seed, spawn_key=(i,))``; chunk statistics are merged in chunk
order, so results do not depend on the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DivergentRegion
from .geometry import at_action, kappa_at, sample_sphere
from .params import ParamPoint
from .trilinear import MultiIndex

__all__ = [
    "McEstimate",
    "check_convergent",
    "mc_kernel",
    "mc_invariance",
    "CHUNK",
    "MIN_SAMPLES",
]

CHUNK = 1 << 16
MIN_SAMPLES = 1000
MIN_SEPARATION = 1e-14
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int

    @property
    def rel_stderr(self) -> float:
        return self.stderr / abs(self.estimate) if self.estimate else math.inf

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def check_convergent(p: ParamPoint) -> tuple[float, float, float]:
    """Real exponents of ``p`` if the integral converges absolutely, else raise."""
    if not p.is_real():
        raise DivergentRegion("Monte Carlo estimates need real alpha")
    bound = -(p.n - 1)
    if any(a.re <= bound for a in p.alpha):
        raise DivergentRegion(f"some alpha_j <= -(n-1) = {bound}")
    if p.alpha_sum.re <= 2 * bound:
        raise DivergentRegion(f"alpha_1 + alpha_2 + alpha_3 <= -2(n-1) = {2 * bound}")
    return tuple(float(a.re) for a in p.alpha)  # type: ignore[return-value]


def _chunk_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed & _SEED_MASK, spawn_key=(index,)))


def _pairwise(x, y, z):
    dxy = np.linalg.norm(x - y, axis=1)
    dyz = np.linalg.norm(y - z, axis=1)
    dzx = np.linalg.norm(z - x, axis=1)
    return dxy, dyz, dzx


def _draw_triples(n: int, rng: np.random.Generator, m: int):
    x = sample_sphere(n, rng, m)
    y = sample_sphere(n, rng, m)
    z = sample_sphere(n, rng, m)
    while True:
        bad = np.flatnonzero(np.minimum.reduce(_pairwise(x, y, z)) < MIN_SEPARATION)
        if bad.size == 0:
            return x, y, z
        for arr in (x, y, z):
            arr[bad] = sample_sphere(n, rng, bad.size)


def _kernel(alpha, a: MultiIndex, x, y, z):
    dxy, dyz, dzx = _pairwise(x, y, z)
    a1, a2, a3 = alpha
    return dxy ** (a3 + 2 * a.a3) * dyz ** (a1 + 2 * a.a1) * dzx ** (a2 + 2 * a.a2)


def _poly(a: MultiIndex, x, y, z):
    if a.order == 0:
        return 1.0
    dxy, dyz, dzx = _pairwise(x, y, z)
    return dxy ** (2 * a.a3) * dyz ** (2 * a.a1) * dzx ** (2 * a.a2)


def _chunk_stats(values: np.ndarray):
    # values: (streams, m) -> per-stream (count, mean, M2)
    mean = values.mean(axis=1)
    m2 = ((values - mean[:, None]) ** 2).sum(axis=1)
    return values.shape[1], mean, m2


def _merge(stats):
    count, mean, m2 = stats[0]
    mean, m2 = mean.copy(), m2.copy()
    for cb, meanb, m2b in stats[1:]:
        total = count + cb
        delta = meanb - mean
        mean = mean + delta * (cb / total)
        m2 = m2 + m2b + delta * delta * (count * cb / total)
        count = total
    return count, mean, m2


def _run(n: int, N: int, seed: int, integrand: Callable, workers: int):
    if N < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {N}")
    sizes = [min(CHUNK, N - start) for start in range(0, N, CHUNK)]

    def one(index: int):
        rng = _chunk_rng(seed, index)
        x, y, z = _draw_triples(n, rng, sizes[index])
        return _chunk_stats(np.atleast_2d(integrand(x, y, z)))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(one, range(len(sizes))))
    else:
        stats = [one(i) for i in range(len(sizes))]
    count, mean, m2 = _merge(stats)
    var = m2 / (count - 1)
    return [
        McEstimate(float(mu), float(math.sqrt(max(v, 0.0) / count)), count, seed)
        for mu, v in zip(mean, var)
    ]


def mc_kernel(
    p: ParamPoint,
    a=(0, 0, 0),
    N: int = 1_000_000,
    seed: int = 0,
    *,
    workers: int = 1,
    rotation=None,
) -> McEstimate:
    """Mean of ``kernel * p_a`` over uniform triples on the sphere.

    ``rotation`` (an orthogonal matrix) is applied to every sampled point;
    it exists to test K-invariance against the unrotated stream.
    """
    alpha = check_convergent(p)
    a = MultiIndex.of(a)

    def integrand(x, y, z):
        if rotation is not None:
            x, y, z = (u @ np.asarray(rotation).T for u in (x, y, z))
        return _kernel(alpha, a, x, y, z)

    return _run(p.n, N, seed, integrand, workers)[0]


def mc_invariance(
    p: ParamPoint,
    a=(0, 0, 0),
    t: float = 0.5,
    N: int = 1_000_000,
    seed: int = 0,
    *,
    workers: int = 1,
    weight_lambda: Sequence[float] | None = None,
) -> tuple[McEstimate, McEstimate, float]:
    """Estimate K(f) and K(pi(a_t) f) for ``f = p_a`` on one sample stream.

    Both estimates use the same samples, so the z-score is the paired one:
    the mean of the per-sample difference over its standard error.
    ``weight_lambda`` overrides the spectral parameter used in the
    representation weights (to check that wrong weights are detected).
    """
    alpha = check_convergent(p)
    a = MultiIndex.of(a)
    if weight_lambda is None:
        if not all(v.is_real() for v in p.lam):
            raise DivergentRegion("invariance check needs real lambda")
        weight_lambda = [float(v.re) for v in p.lam]
    rho = float(p.rho)
    expo = [float(v) + rho for v in weight_lambda]

    plain = MultiIndex(0, 0, 0)

    def integrand(x, y, z):
        k = _kernel(alpha, plain, x, y, z)
        lhs = k * _poly(a, x, y, z)
        w = kappa_at(-t, x) ** expo[0] * kappa_at(-t, y) ** expo[1] * kappa_at(-t, z) ** expo[2]
        moved = _poly(a, at_action(-t, x), at_action(-t, y), at_action(-t, z))
        rhs = k * w * moved
        return np.vstack([lhs, rhs, lhs - rhs])

    lhs, rhs, diff = _run(p.n, N, seed, integrand, workers)
    if diff.estimate == 0:
        z = 0.0
    else:
        z = abs(diff.estimate) / diff.stderr if diff.stderr > 0 else math.inf
    return lhs, rhs, z
