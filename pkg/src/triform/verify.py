"""Verification suites run by ``triform verify`` and by the acceptance tests.

Each check returns a :class:`Check` with a pass flag and a few metrics.
Everything random is driven by ``SeedSequence(seed, spawn_key=(tag,))`` so a
suite's JSON report is a pure function of the seed.
"""
from __future__ import annotations

import cmath
import itertools
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import geometry as geo
from .bidiff import build_system, nullspace
from .exact_arith import QComplex, pochhammer_exact
from .params import ParamPoint, classify_pole, from_alpha, in_Zk, in_zero_set, rho_of
from .quadrature import mc_invariance, mc_kernel
from .specfun import log_gamma, pochhammer_f, recip_gamma
from .trilinear import (
    eval_alpha_form,
    eval_lambda_form,
    find_witness,
    multi_indices,
    normalization_gamma,
    unnormalized_br,
    vanishes_up_to,
)

__all__ = ["Check", "SUITES", "run_suite", "zero_set_grid", "DEFAULT_SEED"]

DEFAULT_SEED = 20150215
MC_SAMPLES = 2_000_000


@dataclass
class Check:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "metrics": self.metrics}


def _rng(seed: int, tag: str) -> np.random.Generator:
    key = zlib.crc32(tag.encode())
    return np.random.default_rng(np.random.SeedSequence(seed & ((1 << 64) - 1), spawn_key=(key,)))


def _subseed(seed: int, tag: str) -> int:
    return int(_rng(seed, tag).integers(0, 2**63 - 1))


def _rel(u: complex, v: complex) -> float:
    scale = max(abs(u), abs(v))
    return 0.0 if scale == 0 else abs(u - v) / scale


def _random_rational(rng, lo: int, hi: int, max_den: int = 12) -> Fraction:
    den = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(lo * den, hi * den + 1)), den)


# -- special functions ------------------------------------------------------


def check_gamma_recurrence(seed: int, count: int = 10_000) -> Check:
    rng = _rng(seed, "gamma-recurrence")
    zs = rng.uniform(0.1, 20, count) + 1j * rng.uniform(-10, 10, count)
    worst = max(abs(cmath.exp(log_gamma(z + 1) - log_gamma(z)) - z) / abs(z) for z in zs.tolist())
    return Check("gamma recurrence exp(lnG(z+1)-lnG(z)) = z", worst <= 1e-10, {"max_rel_err": worst})


def check_recip_times_gamma(seed: int, count: int = 10_000) -> Check:
    rng = _rng(seed, "recip-gamma")
    zs = rng.uniform(-20, 20, count) + 1j * rng.uniform(-10, 10, count)
    worst = 0.0
    for z in zs.tolist():
        if abs(z.real - round(z.real)) < 1e-3 and abs(z.imag) < 1e-3:
            continue
        worst = max(worst, abs(recip_gamma(z) * cmath.exp(log_gamma(z)) - 1))
    return Check("recip_gamma(z) * exp(lnG(z)) = 1", worst <= 1e-9, {"max_abs_err": worst})


def check_reflection(seed: int, count: int = 10_000) -> Check:
    rng = _rng(seed, "reflection")
    xs = rng.uniform(0, 1, count)
    xs = xs[(xs > 1e-6) & (xs < 1 - 1e-6)]
    worst = 0.0
    for x in xs.tolist():
        val = cmath.exp(log_gamma(x) + log_gamma(1 - x)) * math.sin(math.pi * x)
        worst = max(worst, abs(val - math.pi))
    return Check("reflection G(z)G(1-z)sin(pi z) = pi", worst <= 1e-9, {"max_abs_err": worst})


def check_recip_zeros() -> Check:
    values = [recip_gamma(float(-j)) for j in range(0, 60)]
    values += [recip_gamma(complex(-j), exact=QComplex(-j)) for j in range(0, 60)]
    ok = all(v == 0 for v in values)
    return Check("recip_gamma vanishes at 0, -1, ..., -59", ok, {"points": len(values)})


def check_pochhammer_agreement(seed: int, count: int = 300) -> Check:
    rng = _rng(seed, "pochhammer")
    worst = 0.0
    zero_mismatch = 0
    for _ in range(count):
        x = QComplex(_random_rational(rng, -15, 15), _random_rational(rng, -3, 3) if rng.random() < 0.3 else 0)
        for m in range(31):
            ex = complex(pochhammer_exact(x, m))
            fl = pochhammer_f(complex(x), m)
            if ex == 0:
                zero_mismatch += fl != 0
                continue
            worst = max(worst, abs(fl - ex) / abs(ex))
    ok = worst <= 1e-12 and zero_mismatch == 0
    return Check(
        "pochhammer_f vs pochhammer_exact, m <= 30",
        ok,
        {"max_rel_err": worst, "zero_mismatches": zero_mismatch},
    )


# -- geometry ---------------------------------------------------------------------


def check_covariance(seed: int, count: int = 100_000, n: int = 4) -> Check:
    rng = _rng(seed, "covariance")
    x = geo.sample_sphere(n, rng, count)
    y = geo.sample_sphere(n, rng, count)
    t = rng.uniform(-2, 2, count)
    lhs = geo.distance(geo.at_action(t, x), geo.at_action(t, y))
    rhs = np.sqrt(geo.kappa_at(t, x) * geo.kappa_at(t, y)) * geo.distance(x, y)
    worst = float(np.max(np.abs(lhs - rhs)))
    return Check("distance covariance |a_t x - a_t y| = k^1/2 k^1/2 |x-y|", worst < 1e-10, {"max_abs_residual": worst})


def check_group_law(seed: int, count: int = 10_000, n: int = 5) -> Check:
    rng = _rng(seed, "group-law")
    worst_act = worst_cocycle = 0.0
    for _ in range(count):
        s, t = rng.uniform(-2, 2, 2)
        x = geo.sample_sphere(n, rng)
        worst_act = max(worst_act, float(np.max(np.abs(geo.at_action(s, geo.at_action(t, x)) - geo.at_action(s + t, x)))))
        lhs = geo.kappa_at(s + t, x)
        rhs = geo.kappa_at(s, geo.at_action(t, x)) * geo.kappa_at(t, x)
        worst_cocycle = max(worst_cocycle, abs(float(lhs - rhs)))
    ok = worst_act < 1e-10 and worst_cocycle < 1e-10
    return Check("group law and conformal-factor cocycle", ok, {"max_action_err": worst_act, "max_cocycle_err": worst_cocycle})


def check_kappa_derivative(seed: int, count: int = 10_000, n: int = 4, h: float = 1e-5) -> Check:
    rng = _rng(seed, "kappa-derivative")
    x = geo.sample_sphere(n, rng, count)
    fd = (geo.kappa_at(h, x) - geo.kappa_at(-h, x)) / (2 * h)
    worst = float(np.max(np.abs(fd + x[:, 0])))
    return Check("d/dt kappa(a_t, x) at t=0 equals -x_1", worst < 1e-6, {"max_abs_err": worst})


# -- zero set ----------------------------------------------------------------------


def _value_set(n: int) -> list[Fraction]:
    ints = [Fraction(j) for j in range(-(n + 7), 10)]
    extra = [Fraction(1, 2), Fraction(-1, 2), Fraction(3, 2), Fraction(-5, 2), Fraction(1, 3), Fraction(-7, 3)]
    return ints + extra


def zero_set_grid(n: int, seed: int, extra_random: int = 500) -> list[ParamPoint]:
    """Exact grid through every pole family (indices <= 4) plus random non-poles."""
    nm1 = n - 1
    V = _value_set(n)
    coarse = V[::2] + V[-6:]
    pts: set[tuple] = set()
    kidx = range(5)
    # type I_j with the two other coordinates free
    for j, k in itertools.product(range(3), kidx):
        for u, v in itertools.product(coarse, coarse):
            a = [u, v]
            a.insert(j, Fraction(-nm1 - 2 * k))
            pts.add(tuple(a))
    # type II with two coordinates free
    for k in kidx:
        total = Fraction(-2 * nm1 - 2 * k)
        for u, v in itertools.product(coarse, coarse):
            pts.add((u, v, total - u - v))
    # first vanishing family, up to permutation
    for k1, k2 in itertools.product(kidx, kidx):
        for w in coarse:
            for i, j in ((0, 1), (1, 2), (0, 2)):
                a = [w, w, w]
                a[i], a[j] = Fraction(-nm1 - 2 * k1), Fraction(-nm1 - 2 * k2)
                pts.add(tuple(a))
    # second vanishing family, up to permutation
    for k, l3 in itertools.product(kidx, kidx):
        total = Fraction(-2 * nm1 - 2 * k)
        for u in coarse:
            for j in range(3):
                a = [None, None, None]
                a[j] = Fraction(2 * l3)
                others = [i for i in range(3) if i != j]
                a[others[0]] = u
                a[others[1]] = total - u - a[j]
                pts.add(tuple(a))
    # double planes: type II together with a pair sum on a Gamma pole
    for k, l in itertools.product(kidx, kidx):
        total = Fraction(-2 * nm1 - 2 * k)
        pair = Fraction(-2 * nm1 - 2 * l)
        for u in V:
            pts.add((u, pair - u, total - pair))
    grid = [from_alpha(n, a) for a in sorted(pts)]
    rng = _rng(seed, f"zero-grid-{n}")
    added = 0
    while added < extra_random:
        a = [_random_rational(rng, -3 * n, 3 * n) for _ in range(3)]
        p = from_alpha(n, a)
        if not classify_pole(p).is_pole:
            grid.append(p)
            added += 1
    return grid


def _non_pole_witness_order(p: ParamPoint) -> int:
    rho = p.rho
    worst = -1
    for i, j in ((0, 1), (1, 2), (2, 0)):
        x = (p.alpha[i] + p.alpha[j]) / 2 + 2 * rho
        if x.im == 0 and x.re.denominator == 1 and x.re <= 0:
            worst = max(worst, -int(x.re))
    # a = (m, m, m) clears every pair once 2m > worst
    return 3 * (worst // 2 + 1)


def check_zero_set_theorem(n: int, seed: int, max_order: int = 12) -> Check:
    grid = zero_set_grid(n, seed)
    in_z = poles = non_poles = deepest = 0
    failures = []
    families: dict[str, int] = {}
    for p in grid:
        pc = classify_pole(p)
        pole = pc.is_pole
        tag = pc.label + (" generic" if pc.generic else "")
        families[tag] = families.get(tag, 0) + 1
        if in_zero_set(p):
            in_z += 1
            if not pole or not vanishes_up_to(p, max_order):
                failures.append([str(v) for v in p.alpha])
        elif pole:
            poles += 1
            if find_witness(p, max_order) is None:
                failures.append([str(v) for v in p.alpha])
        else:
            # Off the poles only the pair Gamma factors can vanish, and only
            # for pair orders up to their offset; search far enough to pass them.
            non_poles += 1
            bound = _non_pole_witness_order(p)
            deepest = max(deepest, bound)
            if find_witness(p, max(max_order, bound)) is None:
                failures.append([str(v) for v in p.alpha])
    return Check(
        f"zero set at truncation, n={n}",
        not failures,
        {
            "points": len(grid),
            "in_Z": in_z,
            "poles_off_Z": poles,
            "non_poles": non_poles,
            "non_pole_search_order": deepest,
            "families": dict(sorted(families.items())),
            "failures": failures[:5],
        },
    )


def check_formula_consistency(seed: int, count: int = 1000, n_choices=(4, 5, 6, 7)) -> Check:
    rng = _rng(seed, "formula-consistency")
    worst_eval = worst_br = worst_norm = 0.0
    skipped = 0
    indices = list(multi_indices(8))
    for _ in range(count):
        n = int(rng.choice(n_choices))
        alpha = [QComplex.from_complex_exact(complex(rng.uniform(-5, 5), rng.uniform(-2, 2))) for _ in range(3)]
        p = from_alpha(n, alpha)
        a = indices[int(rng.integers(len(indices)))]
        va, vl = eval_alpha_form(p, a), eval_lambda_form(p, a)
        if max(abs(va), abs(vl)) < 1e-6:
            skipped += 1
        else:
            worst_eval = max(worst_eval, _rel(va, vl))
        ba, bl = eval_alpha_form(p, (0, 0, 0)), eval_lambda_form(p, (0, 0, 0))
        if max(abs(ba), abs(bl)) >= 1e-6:
            worst_br = max(worst_br, _rel(ba, bl))
            full = unnormalized_br(p)
            worst_norm = max(worst_norm, _rel(full, ba * normalization_gamma(p)))
    ok = max(worst_eval, worst_br, worst_norm) <= 1e-9
    return Check(
        "closed forms agree (alpha vs lambda form; normalized vs unnormalized)",
        ok,
        {"max_rel_eval": worst_eval, "max_rel_br": worst_br, "max_rel_normalization": worst_norm, "skipped_small": skipped},
    )


# -- Monte Carlo ---------------------------------------------------------------------

BR_ALPHAS = (
    (Fraction(-1), Fraction(-1), Fraction(-1)),
    (Fraction(-3, 2), Fraction(-1, 2), Fraction(-1)),
    (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
)


def check_br_constant_ratio(seed: int, samples: int = MC_SAMPLES, n: int = 4, workers: int = 1) -> Check:
    ratios = []
    for i, alpha in enumerate(BR_ALPHAS):
        p = from_alpha(n, alpha)
        est = mc_kernel(p, (0, 0, 0), samples, _subseed(seed, f"br-{i}"), workers=workers)
        ratios.append((unnormalized_br(p).real / est.estimate, est.rel_stderr))
    worst = 0.0
    for (r1, s1), (r2, s2) in itertools.combinations(ratios, 2):
        worst = max(worst, abs(r1 / r2 - 1) / math.hypot(s1, s2))
    return Check(
        "closed form / Monte Carlo ratio is constant in alpha",
        worst <= 3.0,
        {"ratios": [r for r, _ in ratios], "rel_stderr": [s for _, s in ratios], "max_sigma": worst},
    )


def check_conformal_invariance(seed: int, samples: int = MC_SAMPLES, n: int = 4, workers: int = 1) -> Check:
    p = from_alpha(n, (-1, -1, -1))
    wrong = [float(v.re) for v in p.lam]
    wrong[0] += 1.0
    z_true, z_wrong = [], []
    for t in (0.3, 0.7):
        s = _subseed(seed, f"invariance-{t}")
        z_true.append(mc_invariance(p, (0, 0, 0), t, samples, s, workers=workers)[2])
        z_wrong.append(mc_invariance(p, (0, 0, 0), t, samples, s, workers=workers, weight_lambda=wrong)[2])
    ok = max(z_true) < 4 and min(z_wrong) > 10
    return Check(
        "conformal invariance under a_t (and detection of wrong weights)",
        ok,
        {"t": [0.3, 0.7], "zscore": z_true, "zscore_perturbed": z_wrong},
    )


# -- bi-differential operators ----------------------------------------------------------

WORKED_BASES = (
    # (n, k, lambda1, lambda2, {(r, t): c})
    (4, 0, Fraction(0), Fraction(0), {(0, 0): Fraction(1)}),
    (4, 1, Fraction(0), Fraction(0), {(0, 0): Fraction(1), (1, 0): Fraction(-3, 4), (0, 1): Fraction(-3, 4)}),
    (4, 1, Fraction(-1), Fraction(1, 3), {(0, 0): Fraction(0), (1, 0): Fraction(1), (0, 1): Fraction(0)}),
)


def _special_lambda(rng, n: int, k: int) -> Fraction:
    rho = rho_of(n)
    u = rng.random()
    j = int(rng.integers(0, k + 3))
    if u < 0.25:
        return -rho - j
    if u < 0.5:
        return Fraction(-j)
    if u < 0.6:
        return Fraction(int(rng.integers(-2 * k - 4, 2 * k + 5)), 2)
    return _random_rational(rng, -4 * (k + 2), 4 * (k + 2))


def check_multiplicity_one(seed: int, per_case: int = 200) -> Check:
    rng = _rng(seed, "multiplicity-one")
    bad = []
    systems = 0
    for n in (4, 5):
        for k in range(7):
            got = 0
            while got < per_case:
                l1, l2 = _special_lambda(rng, n, k), _special_lambda(rng, n, k)
                if in_Zk(n, k, l1, l2).in_Zk:
                    continue
                got += 1
                systems += 1
                if nullspace(build_system(n, k, l1, l2)).nullity != 1:
                    bad.append([n, k, str(l1), str(l2)])
    worked_ok = True
    for n, k, l1, l2, expect in WORKED_BASES:
        res = nullspace(build_system(n, k, l1, l2))
        worked_ok &= res.nullity == 1 and res.coefficient_map() == {rt: QComplex(c) for rt, c in expect.items()}
    return Check(
        "multiplicity one off Z_k (k <= 6, n in {4,5}) and worked bases",
        not bad and worked_ok,
        {"systems": systems, "failures": bad[:5], "worked_bases_match": worked_ok},
    )


# -- suites ---------------------------------------------------------------------------


def _specfun(seed, samples, workers):
    return [
        check_gamma_recurrence(seed),
        check_recip_times_gamma(seed),
        check_reflection(seed),
        check_recip_zeros(),
        check_pochhammer_agreement(seed),
    ]


def _geometry(seed, samples, workers):
    return [check_covariance(seed), check_group_law(seed), check_kappa_derivative(seed)]


def _zeroset(seed, samples, workers):
    return [check_zero_set_theorem(n, seed) for n in (4, 5, 7)] + [check_formula_consistency(seed)]


def _invariance(seed, samples, workers):
    return [
        check_br_constant_ratio(seed, samples, workers=workers),
        check_conformal_invariance(seed, samples, workers=workers),
    ]


def _bidiff(seed, samples, workers):
    return [check_multiplicity_one(seed)]


SUITES = {
    "specfun": _specfun,
    "geometry": _geometry,
    "zeroset": _zeroset,
    "invariance": _invariance,
    "bidiff": _bidiff,
}


def run_suite(name: str, seed: int = DEFAULT_SEED, samples: int = MC_SAMPLES, workers: int = 1) -> list[Check]:
    if name == "all":
        return [c for suite in SUITES.values() for c in suite(seed, samples, workers)]
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None
    return suite(seed, samples, workers)
