import json
import random

import pytest
from hypothesis import given, strategies as st

from strategies import small_rat, superpolys
from superharm.dunkl import (RootSystem, all_monomials, commutativity_check, dimension_check, divide_linear,
                             dunkl_T, dunkl_laplacian, fischer_kappa, fischer_orthogonal_basis, monomial,
                             random_kappa, reflect, rosler_gram, rosler_hermite, sl2_check)
from superharm.errors import NotHomogeneous, ZeroRoot
from superharm.scalars import ONE, rat
from superharm.superpoly import SuperPolynomial

kappas = st.builds(rat, st.integers(0, 6), st.integers(1, 4))


def test_reflections():
    assert reflect((1,), monomial((1,))) == -monomial((1,))
    assert reflect((1, -1), monomial((1, 0))) == monomial((0, 1))
    # the scale of the root does not matter
    assert reflect((3, -3), monomial((2, 1))) == monomial((1, 2))
    with pytest.raises(ZeroRoot):
        reflect((0, 0), monomial((1, 0)))


@given(superpolys(3, 0, degree=4), st.sampled_from([(1, -1, 0), (0, 1, 1), (2, 0, 0), (1, 2, 3)]))
def test_reflection_is_involution(p, alpha):
    assert reflect(alpha, reflect(alpha, p)) == p


@given(superpolys(3, 0, degree=4), st.sampled_from([(1, -1, 0), (0, 1, 1), (2, 0, 0), (1, 2, -2)]))
def test_divided_difference_exact(p, alpha):
    lin = SuperPolynomial({(tuple(int(i == j) for i in range(3)), 0): rat(a)
                           for j, a in enumerate(alpha) if a}, 3, 0)
    q = divide_linear(p - reflect(alpha, p), alpha)
    assert lin * q == p - reflect(alpha, p)
    assert divide_linear(lin * p, alpha) == p


def test_divide_linear_remainder():
    with pytest.raises(ArithmeticError):
        divide_linear(monomial((1, 0)), (0, 1))


@given(kappas)
def test_dunkl_on_x1(k):
    rs = RootSystem.z2(1, k)
    assert dunkl_T(1, monomial((1,)), rs) == SuperPolynomial.const(ONE, 1, 0).scale(1 + 2 * k)
    assert fischer_kappa(monomial((1,)), monomial((1,)), rs) == (1 + 2 * k) / 2
    assert fischer_kappa(monomial((0,)), monomial((0,)), rs) == 1


@given(kappas, st.integers(0, 7))
def test_rank_one_closed_form(k, d):
    # T x^d = (d + kappa (1 - (-1)^d)) x^{d-1}
    rs = RootSystem.z2(1, k)
    c = d + k * (1 - (-1) ** d)
    want = monomial((d - 1,)).scale(c) if d else SuperPolynomial({}, 1, 0)
    assert dunkl_T(1, monomial((d,)), rs) == want


def test_rank_one_laplacian_example():
    assert dunkl_laplacian(monomial((3,)), RootSystem.z2(1, rat(1, 2))) == monomial((1,)).scale(8)


@given(superpolys(2, 0, degree=4), st.integers(1, 2))
def test_zero_kappa_is_classical(p, i):
    for rs in (RootSystem.type_b(2), RootSystem.z2(2)):
        assert dunkl_T(i, p, rs) == p.d_b(i)


@pytest.mark.parametrize("rs", [RootSystem.z2(3, [rat(1, 2), 1, rat(1, 3)]), RootSystem.type_a(2, rat(2, 3)),
                                RootSystem.type_b(2, [rat(1, 2), rat(5, 3)]), RootSystem.type_d(3, rat(1, 4))],
                         ids=lambda r: r.name)
def test_laplacian_of_r2(rs):
    r2 = SuperPolynomial.const(ONE, rs.m, 0).mul_r2()
    assert dunkl_laplacian(r2, rs) == SuperPolynomial.const(ONE, rs.m, 0).scale(2 * rs.mu)
    assert rs.mu == rs.m + 2 * rs.gamma
    assert not dunkl_laplacian(SuperPolynomial.const(ONE, rs.m, 0), rs)


def test_orbits():
    assert RootSystem.z2(3).norbits == 3
    assert RootSystem.type_a(2).norbits == 1
    assert RootSystem.type_b(2).norbits == 2
    assert RootSystem.type_d(3).norbits == 1


def test_json_round_trip(tmp_path):
    rs = RootSystem.type_b(2, [rat(1, 2), rat(1, 3)])
    again = RootSystem.from_json(rs.to_json())
    assert again.mu == rs.mu and again.roots == rs.roots
    path = tmp_path / "b2.json"
    path.write_text(json.dumps(rs.to_json()))
    assert RootSystem.from_json(str(path)).kappa == rs.kappa


def test_fischer_examples():
    rs = RootSystem.z2(2, rat(1, 3))
    assert fischer_kappa(monomial((1, 0)), monomial((0, 1)), rs) == 0
    rs1 = RootSystem.z2(1, rat(1, 2))
    basis = fischer_orthogonal_basis(rs1, 2)
    # x^2 is already orthogonal to 1 since the pairing respects degree
    assert [p for p, _ in basis] == [monomial((0,)), monomial((1,)), monomial((2,))]
    assert [p for p, _ in fischer_orthogonal_basis(RootSystem.z2(1), 2)] == [p for p, _ in basis]


@given(superpolys(2, 0, degree=3), superpolys(2, 0, degree=3), kappas, st.integers(1, 2))
def test_fischer_adjoint_and_symmetry(p, q, k, i):
    rs = RootSystem.type_b(2, [k, rat(1, 2)])
    assert fischer_kappa(p, q, rs) == fischer_kappa(q, p, rs)
    xp = p.mul_b(i)
    assert fischer_kappa(xp, q, rs) == fischer_kappa(p, dunkl_T(i, q, rs).scale(rat(1, 2)), rs)


def test_rosler_examples():
    rs = RootSystem.z2(1, rat(1, 2))
    assert rosler_hermite(monomial((0,)), rs) == monomial((0,))
    assert rosler_hermite(monomial((2,)), rs) == monomial((2,)).scale(4) - monomial((0,)).scale(4)
    with pytest.raises(NotHomogeneous):
        rosler_hermite(monomial((2,)) + monomial((0,)), rs)


@pytest.mark.parametrize("name", ["z2", "a2", "b2"])
def test_structure_checks(name):
    base = {"z2": RootSystem.z2(2), "a2": RootSystem.type_a(2), "b2": RootSystem.type_b(2)}[name]
    rs = base.with_kappa(random_kappa(base, random.Random(5)))
    assert commutativity_check(rs, 4) is None
    assert sl2_check(rs, 4) is None
    _, diag, roundtrip = rosler_gram(rs, 3)
    assert diag and roundtrip
    assert all(a == b and ok for _, a, b, ok in dimension_check(rs, 3))


def test_all_monomials_count():
    assert len(all_monomials(2, 3)) == 10


@given(small_rat)
def test_negative_kappa_allowed_in_T(k):
    rs = RootSystem.z2(1, k)
    assert dunkl_T(1, monomial((1,)), rs) == SuperPolynomial.const(ONE, 1, 0).scale(1 + 2 * k)
