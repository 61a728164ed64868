"""Shared independent oracles (arbitrary precision via mpmath)."""
from __future__ import annotations

import sys
from fractions import Fraction

import mpmath as mp
import pytest

mp.mp.dps = 40


def mpc(q) -> mp.mpc:
    """QComplex or Fraction -> mpmath complex, exactly at working precision."""
    re = getattr(q, "re", q)
    im = getattr(q, "im", 0)
    re, im = Fraction(re), Fraction(im)
    return mp.mpc(mp.mpf(re.numerator) / re.denominator, mp.mpf(im.numerator) / im.denominator)


def oracle_eval(p, a) -> mp.mpc:
    """Normalized trilinear form on p_a, written out independently with mpmath."""
    al = [mpc(x) for x in p.alpha]
    rho = mp.mpf(p.n - 1) / 2
    s = sum(al)
    order = sum(a)
    val = (mp.pi / 2) ** (mp.mpf(3 * (p.n - 1)) / 2) * mp.power(2, s) * mp.power(4, order)
    val *= mp.rf(s / 2 + 2 * rho, order)
    for j in range(3):
        val *= mp.rf(al[j] / 2 + rho, a[j])
    for i, j in ((0, 1), (1, 2), (2, 0)):
        val *= mp.rgamma((al[i] + al[j]) / 2 + 2 * rho + a[i] + a[j])
    return val


def oracle_br(p) -> mp.mpc:
    """Closed form of the unnormalized triple integral against 1."""
    al = [mpc(x) for x in p.alpha]
    rho = mp.mpf(p.n - 1) / 2
    s = sum(al)
    val = (mp.pi / 2) ** (mp.mpf(3 * (p.n - 1)) / 2) * mp.power(2, s)
    val *= mp.gamma(s / 2 + 2 * rho)
    for j in range(3):
        val *= mp.gamma(al[j] / 2 + rho)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        val *= mp.rgamma((al[i] + al[j]) / 2 + 2 * rho)
    return val


def rel_err(value, ref) -> float:
    ref = complex(ref)
    value = complex(value)
    if ref == 0:
        return abs(value)
    return abs(value - ref) / abs(ref)


@pytest.fixture
def oracle():
    return {"eval": oracle_eval, "br": oracle_br, "mpc": mpc, "rel": rel_err}


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
