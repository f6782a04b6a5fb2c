import random

import pytest
from hypothesis import given, strategies as st

from strategies import small_rat, superpolys
from superharm.errors import BadDimension, NotStructured
from superharm.grassmann import gen, tilde
from superharm.harmonics import f_kpq, super_harmonic_basis
from superharm.hermite import spherical_hermite
from superharm.integration import pizzetti
from superharm.products import (Structured, T_map, adjoint_check, bijnaorth_allowed, bijnaorth_report,
                                block_coordinates, cartesian_gram, check_chstar, check_eigstar, check_expstar,
                                check_fermionic_adjoints, determinant_one_witness, fermionic_gram, gamma_M, gram,
                                inner1, inner1_berezin, inner2, nogo_witness, osp_covariance_check,
                                spherical_gram_inner2, ss_pairing, ss_pairing_direct, structured_spherical, t_block,
                                theta2_hermitian_witness, to_structured)
from superharm.scalars import ONE, Scalar, rat
from superharm.superpoly import SuperPolynomial, fermionic_gaussian, fvar, random_orthosymplectic, wrap, xvar


def G(m, n):
    return wrap(SuperPolynomial.const(ONE, m, n))


def failure_pair(m, n):
    one = SuperPolynomial.const(ONE, m, n)
    H2 = xvar(1, m, n) * xvar(1, m, n)
    H2 = H2.scale(2) - fvar(1, m, n) * fvar(2, m, n)
    return wrap(H2), spherical_hermite(1, one)


@pytest.mark.parametrize("m,n", [(3, 1), (1, 1), (2, 2)])
def test_inner1_examples(m, n):
    fermionic = inner1(G(0, n), G(0, n))
    assert inner1(G(m, n), G(m, n)) == Scalar.s(m) * fermionic
    assert inner1(wrap(xvar(1, m, n)), G(m, n)) == 0
    a, b = failure_pair(m, n)
    assert inner1(a, b) == inner1(G(m, n), G(m, n)) * -8
    assert inner1(a, b) == inner1_berezin(a, b)


def test_failure_pair_orthogonal_under_inner2():
    a, b = failure_pair(3, 1)
    assert inner2(a, b) == 0
    assert inner2(G(3, 1), G(3, 1)) == Scalar.s(1)
    assert inner2(G(5, 1), G(5, 1)) == Scalar.s(3)


@given(superpolys(2, 1, degree=3), superpolys(2, 1, degree=3))
def test_inner1_routes_agree(p, q):
    assert inner1(wrap(p), wrap(q)) == inner1_berezin(wrap(p), wrap(q))


@given(superpolys(2, 1, degree=3))
def test_inner1_positive(p):
    # M = 0 here, so the value is rational
    v = inner1(wrap(p), wrap(p))
    assert v.rational() > 0 if p else v == 0


def test_t_block_examples():
    blocks = super_harmonic_basis(3, 1, 2)
    b0 = next(b for b in super_harmonic_basis(3, 1, 0))
    assert t_block(b0).assemble() == b0.assemble()
    f = next(b for b in blocks if b.i == 1)
    assert f.assemble() == f_kpq(1, 0, 0, 3, 1)
    assert t_block(f).assemble() == -f.assemble()
    b1 = next(b for b in super_harmonic_basis(3, 1, 1) if b.hf == gen(1, 1))
    assert t_block(b1).hf == gen(2, 1) == tilde(b1.hf)
    with pytest.raises(NotStructured):
        T_map(42)


def _random_structured(draw_coefs, m, n, kmax):
    blocks = [b for k in range(kmax + 1) for b in super_harmonic_basis(m, n, k)]
    acc = None
    for (b, j), c in zip([(b, j) for b in blocks for j in range(2)], draw_coefs):
        if c:
            s = Structured.of_block(b, j, Scalar.of(c))
            acc = s if acc is None else acc + s
    return acc


@given(st.lists(small_rat, min_size=6, max_size=12), st.lists(small_rat, min_size=6, max_size=12))
def test_inner2_direct_vs_factored(a, b):
    f = _random_structured(a, 3, 1, 2)
    g = _random_structured(b, 3, 1, 2)
    if f is None or g is None:
        return
    assert inner2(f, g, "direct") == inner2(f, g, "factored")


@given(st.lists(small_rat, min_size=6, max_size=12))
def test_inner2_hermitian_positive(a):
    f = _random_structured(a, 3, 1, 2)
    if f is None:
        return
    v = inner2(f, f)
    assert (v * Scalar.s(-1)).rational() > 0


def test_ss_pairing_routes():
    blocks = [b for k in range(4) for b in super_harmonic_basis(3, 1, k)]
    for a in blocks:
        for b in blocks:
            assert ss_pairing(a, b) == ss_pairing_direct(a, b)


@given(st.lists(small_rat, min_size=12, max_size=12))
def test_block_coordinates_two_routes(coefs):
    # exact linear solve against supersphere projection onto each block
    blocks = super_harmonic_basis(3, 1, 2)
    h = SuperPolynomial.const(Scalar(), 3, 1)
    want = {}
    for b, c in zip(blocks, coefs):
        if c:
            h = h + b.assemble().scale(c)
            want[b.label] = c
    got = {b.label: c for b, c in block_coordinates(h, 2)}
    assert got == want
    for b in blocks:
        num = pizzetti(h * t_block(b).assemble())
        den = pizzetti(b.assemble() * t_block(b).assemble())
        assert num / den == want.get(b.label, 0)


@given(superpolys(3, 1, degree=4, max_terms=5))
def test_to_structured_round_trip(p):
    assert to_structured(wrap(p)).polynomial() == p


def test_to_structured_errors():
    with pytest.raises(BadDimension):
        to_structured(G(2, 1))
    with pytest.raises(NotStructured):
        to_structured(SuperPolynomial.const(ONE, 3, 1))


def test_structured_spherical_matches_operator_route():
    for b in super_harmonic_basis(3, 1, 1)[:3]:
        for j in range(3):
            assert structured_spherical(j, b).to_wrapped() == spherical_hermite(j, b)


def test_adjoint_examples():
    assert adjoint_check("nabla2", "nabla2", "2", 3, 1, 4).passed
    rep = adjoint_check("R2", "R2", "1", 3, 1, 2, stop_at_first=True)
    assert not rep.passed and rep.witness is not None
    assert adjoint_check("theta2", "-nabla2_f", "f", 0, 2).passed
    with pytest.raises(ValueError):
        adjoint_check("nope", "R2", "1", 3, 1, 2)
    with pytest.raises(BadDimension):
        adjoint_check("R2", "R2", "2", 2, 1, 2)


@pytest.mark.parametrize("n", [1, 2])
def test_fermionic_identities(n):
    assert check_fermionic_adjoints(n)
    assert all(check_eigstar(n).values())
    assert all(check_expstar(n).values())
    assert check_chstar(n)


def test_fermionic_gram():
    g = fermionic_gram(2)
    assert g.off_diagonal_zero and g.diagonal_matches() and g.is_hermitian()
    assert g.to_csv().count("\n") == len(g.labels) + 1


def test_cartesian_gram():
    g = cartesian_gram(2, 1, 3)
    assert g.off_diagonal_zero and g.diagonal_matches()


def test_spherical_gram_inner2():
    g = spherical_gram_inner2(3, 1, 2, 3)
    assert g.off_diagonal_zero and g.diagonal_matches()
    d = g.dense()
    # the first basis element is the Gaussian itself
    assert d.matrix[0][0] == d.diagonal_prediction[0] == inner2(G(3, 1), G(3, 1))
    # 1/2 * 16 * Gamma(7/2)
    assert gamma_M(1, 2, 1) == Scalar.s(1) * 15


def test_dense_gram_inner2_matches_sparse():
    b = super_harmonic_basis(3, 1, 1)[:2] + super_harmonic_basis(3, 1, 0)
    phis = [structured_spherical(j, x) for x in b for j in range(2)]
    g = gram(phis, "2")
    assert g.off_diagonal_zero and g.is_hermitian()


def test_bijnaorth():
    rep = bijnaorth_report(3, 1, 2, 3)
    assert rep["pattern_holds"] and not rep["diagonal"]
    assert bijnaorth_allowed((0, 1, 2, 0, 0, 0), (1, 0, 2, 0, 0, 0))
    assert not bijnaorth_allowed((0, 1, 2, 0, 0, 0), (0, 0, 2, 0, 0, 0))


def test_nogo_examples():
    w = nogo_witness(0, 1)
    assert w["nonpositive"] == (1, -16) and w["certified"]
    assert nogo_witness(2, 1)["nonpositive"] == (1, 0)
    with pytest.raises(BadDimension):
        nogo_witness(3, 1)
    assert theta2_hermitian_witness(2)["certified"]
    assert determinant_one_witness(2)["certified"]


def test_osp_covariance():
    A = random_orthosymplectic(3, 1, random.Random(3))
    rep = osp_covariance_check(A, 3, 1, 2)
    assert all(rep.values())


def test_fermionic_gaussian_norm():
    g = wrap(SuperPolynomial.const(ONE, 0, 2))
    assert inner1(g, g) == inner1_berezin(g, g)
    # exp(-theta^2/2) exp(theta^2/2) = 1
    assert fermionic_gaussian(0, 2) * fermionic_gaussian(0, 2, rat(1, 2)) == SuperPolynomial.const(ONE, 0, 2)
