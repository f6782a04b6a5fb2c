import random

import pytest
from hypothesis import given, strategies as st

from strategies import superpolys
from superharm.errors import DegreeCapExceeded, GaussianPowerMismatch, ModeMismatch, NotOrthosymplectic
from superharm.scalars import ONE, rat
from superharm.superpoly import (GaussianWrapped, R2, SuperPolynomial, check_sl2, dim_P, embed, euler,
                                 exp_nilpotent, fvar, is_orthosymplectic, monomial_keys, monomials, nabla2,
                                 osp_apply, random_orthosymplectic, theta2_poly, unwrap, wrap, xvar)


def test_ring_examples():
    x1, f1, f2 = xvar(1, 1, 1), fvar(1, 1, 1), fvar(2, 1, 1)
    assert x1 * f1 == f1 * x1
    assert not f1 * f1
    assert f1 * f2 == -(f2 * f1)
    assert (x1 + f1 * f2) ** 2 == x1 * x1 + (x1 * f1 * f2).scale(2)


def test_laplacian_examples():
    for m, n in [(3, 1), (2, 2), (0, 2), (5, 0)]:
        assert nabla2(R2(m, n)) == SuperPolynomial.const(ONE, m, n).scale(2 * (m - 2 * n))
    assert nabla2(xvar(1, 3, 1) ** 2) == SuperPolynomial.const(ONE, 3, 1).scale(2)
    assert not nabla2(xvar(1, 3, 1) * fvar(1, 3, 1))


def test_euler_and_R2():
    x1, f1, f2 = xvar(1, 1, 1), fvar(1, 1, 1), fvar(2, 1, 1)
    assert R2(1, 1) == x1 * x1 - f1 * f2
    assert euler(x1 * x1 * f1) == (x1 * x1 * f1).scale(3)
    assert not euler(SuperPolynomial.const(ONE, 1, 1))


@pytest.mark.parametrize("m,n,deg", [(2, 1, 6), (0, 2, 4), (3, 0, 4), (1, 1, 5)])
def test_sl2_examples(m, n, deg):
    assert check_sl2(m, n, deg)["pass"]


def test_dim_P():
    for m, n in [(3, 1), (0, 2), (2, 2), (4, 0)]:
        for k in range(6):
            assert dim_P(m, n, k) == len(monomial_keys(m, n, k))
    assert len(monomials(3, 1, 2)) == 1 + 5 + 13


def test_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        monomial_keys(2, 1, 50)
    assert monomial_keys(1, 0, 50, allow_large=True) == [((50,), 0)]


def test_rotation_and_J_invariance():
    # Pythagorean rotation in (x1, x2) together with an Sp(2) element on (x'1, x'2)
    A = [[rat(3, 5), rat(-4, 5), 0, 0, 0],
         [rat(4, 5), rat(3, 5), 0, 0, 0],
         [0, 0, 1, 0, 0],
         [0, 0, 0, 0, 1],
         [0, 0, 0, -1, 0]]
    assert is_orthosymplectic(A, 3, 1)
    assert osp_apply(A, R2(3, 1), validate=True) == R2(3, 1)
    assert osp_apply(A, theta2_poly(3, 1)) == theta2_poly(3, 1)
    bad = [row[:] for row in A]
    bad[0][3] = 1
    with pytest.raises(NotOrthosymplectic):
        osp_apply(bad, R2(3, 1), validate=True)


def test_exp_nilpotent():
    f1, f2 = fvar(1, 0, 1), fvar(2, 0, 1)
    assert exp_nilpotent(f1 * f2) == SuperPolynomial.const(ONE, 0, 1) + f1 * f2


def test_doubled_mode():
    p = xvar(1, 2, 1) * fvar(2, 2, 1)
    ex, ey = embed(p, "x"), embed(p, "y")
    assert ex.doubled and ey.doubled and ex != ey
    with pytest.raises(ModeMismatch):
        p * ex


@given(superpolys(2, 1), superpolys(2, 1), superpolys(2, 1))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@given(superpolys(3, 1, degree=4))
def test_sl2_on_random(p):
    # [nabla^2/2, R^2/2] = E + M/2
    M = 1
    lhs = nabla2(p.mul_R2()) - nabla2(p).mul_R2()
    assert lhs.scale(rat(1, 4)) == euler(p) + p.scale(rat(M, 2))


@given(superpolys(2, 1, degree=4), st.integers(0, 2 ** 16))
def test_osp_covariance(p, seed):
    A = random_orthosymplectic(2, 1, random.Random(seed))
    assert is_orthosymplectic(A, 2, 1)
    q = osp_apply(A, p)
    assert nabla2(q) == osp_apply(A, nabla2(p))
    assert euler(q) == osp_apply(A, euler(p))


@given(superpolys(2, 0, degree=3))
def test_wrapped_laplacian_two_routes(p):
    w = wrap(p)
    direct = w.d_b(1).d_b(1) + w.d_b(2).d_b(2)
    assert w.nabla2() == direct


@given(superpolys(1, 1, degree=3))
def test_wrap_round_trip(p):
    assert unwrap(wrap(p)) == p


def test_gaussian_power_mismatch():
    one = SuperPolynomial.const(ONE, 1, 0)
    with pytest.raises(GaussianPowerMismatch):
        wrap(one) + GaussianWrapped(one, 2)
