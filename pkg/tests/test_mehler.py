import random

import pytest

import superharm.mehler as mehler
from superharm.errors import BadDimension, DegreeOutOfRange
from superharm.grassmann import GrassmannElement, gmul, random_symplectic
from superharm.mehler import (default_t_order, fermionic_kernel, fermionic_mehler_sides, fourier_point_verify,
                              frac_fourier, frac_fourier_eigencheck, kernel_prefactor, kernel_reproduces,
                              mehler_classical_verify, mehler_fermionic_verify, mehler_super_verify,
                              mehler_symplectic_invariance, pair_over_y, pairing_f, super_kernel,
                              super_kernel_check)
from superharm.scalars import ONE, Scalar, factorial, gamma_half, rat
from superharm.superpoly import SuperPolynomial


@pytest.mark.parametrize("n", [1, 2, 3])
def test_low_kernels(n):
    const = Scalar.pi(n) * rat(1, factorial(n))
    assert fermionic_kernel(n, 0) == GrassmannElement.const(const, n, True)
    assert fermionic_kernel(n, 1) == pairing_f(n).scale(Scalar.pi(n) * rat(2, factorial(n - 1)))
    with pytest.raises(DegreeOutOfRange):
        fermionic_kernel(n, n + 1)


@pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2), (3, 2), (3, 3)])
def test_fermionic_kernel_reproduces(n, k):
    rep = kernel_reproduces(n, k)
    assert rep["equal"], rep["first_diff"]


def test_pairing_over_y_linear():
    n = 2
    F = fermionic_kernel(n, 1)
    a = GrassmannElement({0b0001: ONE, 0b0100: ONE * 3}, n)
    b = GrassmannElement({0b0010: ONE * 2}, n)
    assert pair_over_y(F, a + b) == pair_over_y(F, a) + pair_over_y(F, b)


def test_super_kernel_examples():
    for m, n in [(3, 1), (5, 2), (4, 1)]:
        M = m - 2 * n
        want = gamma_half(rat(M, 2)) / (Scalar.s(M) * 2)
        assert super_kernel(m, n, 0) == SuperPolynomial.const(want, m, n, True)
        assert kernel_prefactor(M) == want
    with pytest.raises(BadDimension):
        super_kernel(2, 1, 1)


@pytest.mark.parametrize("m,n,k", [(3, 1, 1), (3, 1, 2), (5, 2, 0), (4, 1, 2), (3, 0, 3)])
def test_super_kernel_reproduces(m, n, k):
    rep = super_kernel_check(m, n, k)
    assert rep["equal"], rep["first_diff"]


def test_super_kernel_mutation_detected(monkeypatch):
    monkeypatch.setattr(mehler, "kernel_prefactor", lambda M: gamma_half(rat(M, 2)) * Scalar.s(-M))
    assert not super_kernel_check(3, 1, 1)["equal"]


@pytest.mark.parametrize("n", [1, 2])
def test_fermionic_mehler(n):
    rep = mehler_fermionic_verify(n)
    assert rep["equal"] and tuple(rep["dims"]) == (0, n)
    lhs, rhs = fermionic_mehler_sides(n)
    assert lhs == rhs


def test_fermionic_mehler_mutation(monkeypatch):
    real = mehler.kernel_constant
    monkeypatch.setattr(mehler, "kernel_constant", lambda n, k, j: real(n, k, j) * (2 if k == 1 else 1))
    assert not mehler_fermionic_verify(2)["equal"]


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("sign", [1, -1])
def test_fourier_point(n, sign):
    assert fourier_point_verify(n, sign)["equal"]


def test_symplectic_invariance():
    rng = random.Random(11)
    assert mehler_symplectic_invariance(2, [random_symplectic(2, rng) for _ in range(2)])["equal"]


@pytest.mark.parametrize("m,n,D", [(3, 1, 4), (3, 0, 6), (4, 1, 2), (5, 2, 2), (3, 1, 0)])
def test_super_mehler(m, n, D):
    rep = mehler_super_verify(m, n, D)
    assert rep["equal"], rep["first_diff"]
    assert rep["t_order"] == default_t_order(D)


def test_super_mehler_mutation(monkeypatch):
    # a kernel prefactor belonging to another super-dimension breaks the identity
    real = mehler.kernel_prefactor
    monkeypatch.setattr(mehler, "kernel_prefactor", lambda M: real(M + 2))
    assert not mehler_super_verify(3, 1, 2)["equal"]


def test_super_mehler_needs_positive_M():
    with pytest.raises(BadDimension):
        mehler_super_verify(2, 1, 2)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_classical_mehler(m):
    for D in (0, 2, 4):
        assert mehler_classical_verify(m, D)["equal"]


def test_frac_fourier():
    lab = (0, 1, 0, 0, 0)
    assert frac_fourier({(1, 1, lab): ONE}) == {(1, 1, lab): Scalar.t(3)}
    assert frac_fourier({(2, 0, lab): ONE * 5}, Scalar.of(1)) == {(2, 0, lab): ONE * 5}
    t1, t2 = Scalar.t(1), Scalar.t(1) * Scalar.t(1) + 1
    v = {(1, 2, lab): ONE, (0, 0, lab): ONE * 2}
    assert frac_fourier(frac_fourier(v, t1), t2) == frac_fourier(v, t1 * t2)


def test_frac_fourier_eigencheck():
    assert frac_fourier_eigencheck(3, 1, 3)["equal"]


def test_pairing_is_bilinear_form():
    n = 1
    P = pairing_f(n)
    # <x',y'>^2 is a multiple of theta^2 theta_y^2 at n = 1
    sq = gmul(P, P)
    assert sq and len(sq.terms) == 1
