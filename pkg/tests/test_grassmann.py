import random

import pytest
from hypothesis import given, strategies as st

from strategies import grassmann
from superharm.errors import IndexOutOfRange, ModeMismatch, NotSymplectic
from superharm.grassmann import (GrassmannElement, berezin, element, euler_f, fderiv, gen, gmul, inner_f,
                                 inner_f_berezin, is_symplectic, monomial_basis, nabla2_f, random_symplectic,
                                 star, symplectic_apply, theta2, tilde, to_doubled, top_bits)
from superharm.scalars import Scalar, factorial, rat

N = 2
x1, x2 = gen(1, N), gen(2, N)


def test_products():
    assert gmul(x1, x2) == element(0b11, N)
    assert gmul(x2, x1) == -gmul(x1, x2)
    assert not gmul(gmul(x1, x2), x1)


def test_derivatives():
    assert fderiv(1, gmul(x1, x2)) == x2
    assert fderiv(2, gmul(x1, x2)) == -x1
    assert not fderiv(1, x2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_berezin(n):
    top = element(top_bits(n), n)
    assert berezin(top) == Scalar.pi(-n)
    assert berezin(GrassmannElement.const(1, n)) == 0
    # theta^{2n} = n! (-1)^n x'_1 ... x'_{2n}
    assert theta2(n) ** n == top.scale(factorial(n) * (-1) ** n)
    # the same functional written through the fermionic Laplacian
    lap = top
    for _ in range(n):
        lap = nabla2_f(lap)
    assert lap.coefficient(0) * Scalar.pi(-n) * rat(1, 4 ** n * factorial(n)) == berezin(top)


def test_laplacian_euler():
    assert nabla2_f(theta2(N)) == GrassmannElement.const(-4 * N, N)
    assert euler_f(gmul(x1, x2)) == gmul(x1, x2).scale(2)
    assert not nabla2_f(x1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_star_examples(n):
    one = GrassmannElement.const(1, n)
    top = element(top_bits(n), n)
    assert star(one) == top.scale(rat(1, 2 ** n))
    assert star(one) == (theta2(n) ** n).scale(rat((-1) ** n, 2 ** n * factorial(n)))
    assert star(top) == GrassmannElement.const(2 ** n, n)


def test_tilde_examples():
    assert tilde(x1) == x2
    assert tilde(x2) == -x1
    assert tilde(gmul(x1, x2)) == -gmul(x1, x2)


def test_inner_examples():
    one = GrassmannElement.const(1, N)
    assert inner_f(one, one) == Scalar.pi(-N) * rat(1, 2 ** N)
    assert inner_f(x1, x1) == Scalar.pi(-N) * rat(2, 2 ** N)
    assert inner_f(x1, x2) == 0


def test_errors():
    with pytest.raises(IndexOutOfRange):
        gen(5, N)
    with pytest.raises(ModeMismatch):
        gmul(x1, to_doubled(x1))
    with pytest.raises(NotSymplectic):
        symplectic_apply([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], x1, validate=True)


@given(grassmann(N), grassmann(N), grassmann(N))
def test_associative_distributive(a, b, c):
    assert gmul(gmul(a, b), c) == gmul(a, gmul(b, c))
    assert gmul(a, b + c) == gmul(a, b) + gmul(a, c)


@given(grassmann(N), grassmann(N), st.integers(1, 2 * N))
def test_graded_leibniz(a, b, j):
    # d_j(ab) = (d_j a) b + (-1)^|a| a d_j b on homogeneous a
    for k in range(2 * N + 1):
        ak = a.homogeneous_part(k)
        assert fderiv(j, gmul(ak, b)) == gmul(fderiv(j, ak), b) + gmul(ak, fderiv(j, b)).scale((-1) ** k)


@given(grassmann(N))
def test_laplacian_theta_commutator(a):
    # [nabla_f^2, theta^2] = 4 E_f - 4n
    t2 = theta2(N)
    lhs = nabla2_f(gmul(t2, a)) - gmul(t2, nabla2_f(a))
    assert lhs == euler_f(a).scale(4) - a.scale(4 * N)


@given(grassmann(N))
def test_star_star_and_tilde_tilde(a):
    for k in range(2 * N + 1):
        ak = a.homogeneous_part(k)
        assert star(star(ak)) == ak.scale((-1) ** k)
        assert tilde(tilde(ak)) == ak.scale((-1) ** k)


@given(grassmann(N), grassmann(N))
def test_inner_routes_agree(a, b):
    assert inner_f(a, b) == inner_f_berezin(a, b)


@given(grassmann(N), st.integers(0, 2 ** 16))
def test_symplectic_invariance(a, seed):
    S = random_symplectic(N, random.Random(seed))
    assert is_symplectic(S)
    assert symplectic_apply(S, theta2(N)) == theta2(N)
    b = symplectic_apply(S, a)
    assert symplectic_apply(S, nabla2_f(a)) == nabla2_f(b)
    assert berezin(b) == berezin(a)


def test_monomial_basis_sizes():
    assert len(monomial_basis(3)) == 64
    assert len(monomial_basis(3, 2)) == 15
    basis = [element(b, 2) for b in monomial_basis(2)]
    assert all(inner_f(u, v) == 0 for u in basis for v in basis if u != v)
