from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from triform.errors import DimensionTooSmall
from triform.exact_arith import QComplex
from triform.params import (
    classify_pole,
    from_alpha,
    from_floats,
    from_lambda,
    in_Zk,
    in_zero_set,
    is_irreducible,
    zero_set_alpha_form,
    zero_set_lambda_form,
    zk_third_lambda,
)

F = Fraction
dims = st.sampled_from([4, 5, 6, 7, 8])
rats = st.builds(Fraction, st.integers(-72, 72), st.integers(1, 6))
cplx = st.builds(QComplex, rats, st.sampled_from([F(0), F(0), F(1, 2), F(-1)]))


def q(*vals):
    return tuple(QComplex(v) for v in vals)


class TestCoordinates:
    def test_examples(self):
        assert from_lambda(4, [F(3, 2)] * 3).alpha == q(0, 0, 0)
        assert from_lambda(4, [F(3, 2), F(3, 2), F(-3, 2)]).alpha == q(-3, -3, 3)
        assert from_alpha(4, [0, 0, 0]).lam == q(F(3, 2), F(3, 2), F(3, 2))
        assert from_alpha(5, [-4, 0, 0]).lam == q(2, 0, 0)

    def test_dimension(self):
        with pytest.raises(DimensionTooSmall):
            from_lambda(3, [0, 0, 0])
        with pytest.raises(DimensionTooSmall):
            from_alpha(2, [0, 0, 0])

    @given(dims, cplx, cplx, cplx)
    def test_round_trip(self, n, a, b, c):
        p = from_lambda(n, [a, b, c])
        assert from_alpha(n, p.alpha).lam == p.lam
        r = from_alpha(n, [a, b, c])
        assert from_lambda(n, r.lam).alpha == r.alpha

    @given(dims, cplx, cplx, cplx, st.permutations([0, 1, 2]))
    def test_permutation_equivariance(self, n, a, b, c, perm):
        p = from_lambda(n, [a, b, c])
        pp = p.permuted(perm)
        assert pp.alpha == tuple(p.alpha[i] for i in perm)
        assert in_zero_set(pp) == in_zero_set(p)
        assert classify_pole(pp).label == classify_pole(p).label

    def test_from_floats(self):
        p = from_floats(4, [-1.0000000001, 0.5, 1 / 3], 1e-9)
        assert p.alpha == q(-1, F(1, 2), F(1, 3))
        p = from_floats(4, [1.5, 1.5, 1.5], 1e-9, kind="lambda")
        assert p.alpha == q(0, 0, 0)


class TestPoles:
    def test_examples(self):
        pc = classify_pole(from_alpha(4, [-3, 0, 0]))
        assert pc.type_I == ((1, 0),) and pc.type_II is None and pc.generic and pc.label == "I"
        pc = classify_pole(from_alpha(4, [-2, -2, -2]))
        assert pc.type_I == () and pc.type_II == 0 and pc.generic and pc.label == "II"
        pc = classify_pole(from_alpha(4, [-3, 0, -3]))
        assert pc.type_I == ((1, 0), (3, 0)) and pc.type_II == 0 and not pc.generic and pc.label == "I+II"

    def test_indices(self):
        pc = classify_pole(from_alpha(5, [-12, F(1, 3), F(1, 2)]))
        assert pc.type_I == ((1, 4),)
        assert classify_pole(from_alpha(5, [-5, 0, 0])).is_pole is False
        assert classify_pole(from_alpha(4, [QComplex(-3, 1), 0, 0])).is_pole is False


class TestZeroSet:
    def test_examples(self):
        assert in_zero_set(from_alpha(4, [-3, -3, 5]))
        assert not in_zero_set(from_alpha(4, [-3, 0, 0]))
        assert in_zero_set(from_alpha(4, [-4, -2, 0]))

    def test_forms_agree_on_large_grid(self):
        # 10^5-point exact grid, both characterisations evaluated independently
        vals = sorted({F(j, 2) for j in range(-24, 9)} | {F(1, 3), F(-7, 3)})
        count = hits = 0
        for n in (4, 5, 7):
            for trip in itertools.product(vals, repeat=3):
                p = from_alpha(n, trip)
                a, b = zero_set_alpha_form(p), zero_set_lambda_form(p)
                assert a == b, trip
                count += 1
                hits += a
        assert count >= 100_000 and hits > 1000

    @given(dims, rats, rats, rats)
    def test_zero_set_inside_poles(self, n, a, b, c):
        p = from_alpha(n, [a, b, c])
        if in_zero_set(p):
            assert classify_pole(p).is_pole

    def test_random_forms_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(5000):
            n = int(rng.integers(4, 9))
            nm1 = n - 1
            choice = rng.integers(0, 3)
            a = [F(int(rng.integers(-30, 30)), int(rng.integers(1, 3))) for _ in range(3)]
            if choice == 1:
                a[0] = F(-nm1 - 2 * int(rng.integers(0, 6)))
            elif choice == 2:
                a[2] = F(-2 * nm1 - 2 * int(rng.integers(0, 6))) - a[0] - a[1]
            p = from_alpha(n, a)
            assert zero_set_alpha_form(p) == zero_set_lambda_form(p)


class TestZk:
    def test_examples(self):
        assert in_Zk(4, 1, -1, -1).satisfied == ("vi",)
        assert in_Zk(4, 1, -1, F(1, 3)).satisfied == ()
        assert "ii" in in_Zk(4, 1, F(-5, 2), 7).satisfied

    def test_third_lambda(self):
        assert zk_third_lambda(4, 1, 0, 0) == QComplex(F(-7, 2))

    def test_consistency_with_zero_set(self):
        # in_Zk raises if its six conditions disagree with the zero set of the completed triple
        for n in (4, 5, 6, 7):
            rho = F(n - 1, 2)
            vals = sorted({F(j, 2) for j in range(-20, 9)} | {-rho - j for j in range(8)} | {F(1, 3)})
            for k in range(7):
                for l1, l2 in itertools.product(vals, repeat=2):
                    v = in_Zk(n, k, l1, l2)
                    full = from_lambda(n, [l1, l2, zk_third_lambda(n, k, l1, l2)])
                    assert v.in_Zk == in_zero_set(full)


def test_irreducibility():
    assert not is_irreducible(4, F(-3, 2))
    assert not is_irreducible(4, F(5, 2))
    assert is_irreducible(4, 0)
    assert is_irreducible(4, F(1, 2))
