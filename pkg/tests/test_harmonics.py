import pytest
from hypothesis import given, strategies as st

from strategies import superpolys
from superharm.errors import BadDimension, DegreeOutOfRange, NotHomogeneous, ParamOutOfRange
from superharm.grassmann import GrassmannElement, gen, gmul, inner_f, nabla2_f
from superharm.harmonics import (a_kpq, b_kpq, bad_dimension, bosonic_harmonic_basis, c_ijk, c_ijk_fermionic,
                                 dim_H, dim_Hf, f_kpq, fermionic_harmonic_basis, fischer_decompose,
                                 fischer_decompose_all, orthogonal_fermionic_basis, project_h0, ssin2_lhs,
                                 ssin2_rhs, ssin3_lhs, super_harmonic_basis, super_harmonic_blocks)
from superharm.integration import sphere_integral
from superharm.scalars import ONE, Scalar, factorial, gamma_half, rat
from superharm.superpoly import R2, SuperPolynomial, fvar, r2, theta2_poly, xvar


def test_projection_examples():
    x1 = xvar(1, 3, 0)
    assert project_h0(x1 * x1, 2) == x1 * x1 - r2(3, 0).scale(rat(1, 3))
    assert not project_h0(R2(3, 1), 2)
    with pytest.raises(NotHomogeneous):
        project_h0(x1 + x1 * x1)


def test_fischer_examples():
    dec = fischer_decompose(R2(3, 1))
    assert [(j, h) for j, h in dec.components if h] == [(1, SuperPolynomial.const(ONE, 3, 1))]
    x1 = xvar(1, 3, 0)
    dec = fischer_decompose(x1 * x1)
    assert dict(dec.components) == {0: x1 * x1 - r2(3, 0).scale(rat(1, 3)),
                                    1: SuperPolynomial.const(rat(1, 3), 3, 0)}
    with pytest.raises(BadDimension):
        fischer_decompose(theta2_poly(0, 2))


def test_bad_dimension():
    assert [M for M in range(-6, 4) if bad_dimension(M)] == [-6, -4, -2, 0]


def test_fermionic_basis_examples():
    assert fermionic_harmonic_basis(1, 1) == (gen(1, 1), gen(2, 1))
    basis = fermionic_harmonic_basis(2, 2)
    assert len(basis) == dim_Hf(2, 2) == 5
    assert gmul(gen(1, 2), gen(2, 2)) - gmul(gen(3, 2), gen(4, 2)) in basis
    with pytest.raises(DegreeOutOfRange):
        fermionic_harmonic_basis(2, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fermionic_bases(n):
    for k in range(n + 1):
        basis = fermionic_harmonic_basis(n, k)
        assert len(basis) == dim_Hf(n, k) == _binom(2 * n, k) - _binom(2 * n, k - 2)
        assert all(not nabla2_f(h) for h in basis)
        ortho = orthogonal_fermionic_basis(n, k)
        for i, (a, na) in enumerate(ortho):
            for j, (b, _) in enumerate(ortho):
                assert inner_f(a, b) == (na if i == j else 0)


def _binom(a, b):
    return 0 if b < 0 or b > a else factorial(a) / (factorial(b) * factorial(a - b))


def test_bosonic_basis_examples():
    basis = bosonic_harmonic_basis(2, 1)
    assert [h for h, _ in basis] == [xvar(1, 2, 0), xvar(2, 2, 0)]
    assert all(nrm == Scalar.pi(1) for _, nrm in basis)
    assert list(bosonic_harmonic_basis(1, 2)) == []
    basis = bosonic_harmonic_basis(3, 2)
    assert len(basis) == 5
    for i, (a, na) in enumerate(basis):
        for j, (b, _) in enumerate(basis):
            assert sphere_integral(a * b) == (na if i == j else 0)


def test_f_kpq_examples():
    assert f_kpq(0, 2, 1, 3, 1) == SuperPolynomial.const(ONE, 3, 1)
    for m, n in [(3, 1), (4, 2), (1, 2)]:
        f = f_kpq(1, 0, 0, m, n)
        assert f == r2(m, n).scale(n) + theta2_poly(m, n).scale(rat(m, 2))
        assert not f.nabla2()
    with pytest.raises(ParamOutOfRange):
        f_kpq(1, 0, 1, 3, 1)


def test_block_examples():
    got = [b.assemble() for b in super_harmonic_blocks(2, 1, 1)]
    assert got == [xvar(1, 2, 1), xvar(2, 2, 1), fvar(1, 2, 1), fvar(2, 2, 1)]
    assert f_kpq(1, 0, 0, 3, 1) in [b.assemble() for b in super_harmonic_basis(3, 1, 2)]
    assert [b.assemble() for b in super_harmonic_basis(5, 2, 0)] == [SuperPolynomial.const(ONE, 5, 2)]
    with pytest.raises(BadDimension):
        super_harmonic_basis(2, 1, 1)


def test_constants():
    for m, n, p, q in [(3, 1, 0, 0), (5, 1, 2, 1), (4, 1, 1, 0)]:
        M = m - 2 * n
        assert a_kpq(1, p, q, m, n) == rat(M, 2) + p + q
        assert a_kpq(0, p, q, m, n) == 1
    assert b_kpq(0, 0, 0, 3, 1) == gamma_half(rat(3, 2)) / gamma_half(rat(1, 2))


@pytest.mark.parametrize("m,n,kmax", [(3, 1, 4), (5, 2, 3), (4, 1, 3), (1, 0, 3), (3, 0, 4)])
def test_super_basis_spans(m, n, kmax):
    for k in range(kmax + 1):
        basis = super_harmonic_basis(m, n, k)
        assert len(basis) == dim_H(m, n, k)
        for b in basis:
            H = b.assemble()
            assert H.is_homogeneous(k) and not H.nabla2()


def test_laplacian_constants_direct():
    # c_{1,1,0} with M: nabla^2 R^2 = 2M, and the fermionic c_{1,1,0} = -4n
    for M in (1, 3, 5):
        assert c_ijk(1, 1, 0, M) == 2 * M
    for n in (1, 2, 3):
        assert c_ijk_fermionic(1, 1, 0, n) == -4 * n
        assert not nabla2_f(GrassmannElement.const(1, n))


HOMOG = superpolys(3, 1, degree=4, max_terms=5)


@given(HOMOG, st.integers(0, 4))
def test_projection_properties(raw, k):
    parts = raw.homogeneous_parts()
    p = parts.get(k, raw.zero())
    h = project_h0(p, k)
    assert not h.nabla2()
    assert project_h0(h, k) == h
    # R^2 P_{k-2} is the kernel of the projection
    if k >= 2:
        assert not project_h0(parts.get(k - 2, raw.zero()).mul_R2(), k)


@given(superpolys(3, 1, degree=5, max_terms=5))
def test_fischer_reassembles(p):
    for k, dec in fischer_decompose_all(p).items():
        assert all(not h.nabla2() for _, h in dec.components)
    total = p.zero()
    for dec in fischer_decompose_all(p).values():
        total = total + dec.reassemble()
    assert total == p


@given(st.integers(0, 6), st.integers(0, 6), st.sampled_from([rat(1, 2), rat(3, 2), rat(5, 2), rat(9, 2)]))
def test_combinatorial_identities(k, nu, mu):
    if k <= nu:
        assert ssin2_lhs(k, nu, mu) == ssin2_rhs(k, nu, mu)
    assert ssin3_lhs(k, mu) == factorial(k)
