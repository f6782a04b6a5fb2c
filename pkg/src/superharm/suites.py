"""Verification suites shared by the command line and the test-suite.

Every suite returns a list of checks ``{"name", "pass", "witness"}``; a suite
passes when every check does.  Randomised inputs come from ``random.Random(seed)``.
"""
from __future__ import annotations

import random

from . import dunkl, mehler
from .errors import BadDimension
from .grassmann import gmul, nabla2_f, random_symplectic, theta2, tilde
from .harmonics import (HarmonicBlock, c_ijk, c_ijk_fermionic, dim_H, fermionic_harmonic_basis,
                        fischer_decompose_all, project_h0, ssin2_lhs, ssin2_rhs,
                        ssin3_lhs, super_harmonic_basis)
from .hermite import (gegenbauer_inner, gegenbauer_norm, hermite_1d, hermite_inner, hermite_norm, laguerre,
                      laguerre_inner, laguerre_norm, spherical_hermite)
from .integration import pizzetti, supersphere_alt
from .products import (adjoint_check, bijnaorth_report, cartesian_gram, check_chstar, check_eigstar,
                       check_expstar, check_fermionic_adjoints, determinant_one_witness, fermionic_gram,
                       inner1, inner1_berezin, nogo_witness, spherical_gram_inner2, theta2_hermitian_witness)
from .scalars import ONE, Scalar, factorial, gamma_half, rat
from .superpoly import SuperPolynomial, check_sl2, monomial_keys, wrap

SL2_GRID = [(3, 0), (0, 2), (2, 1), (3, 1), (4, 2)]
FISCHER_GRID = [(2, 1), (3, 1), (5, 2)]
PIZZETTI_GRID = [(2, 1), (3, 1), (4, 2)]
INNER2_GRID = [(3, 1), (4, 1), (5, 2)]
KERNEL_GRID = [(3, 1), (5, 2)]
MEHLER_SUPER_GRID = [(3, 1, 6), (4, 1, 6), (5, 2, 4)]
NOGO_GRID = [(0, 1), (2, 1), (1, 1)]


def check(name, ok, witness=None):
    return {"name": name, "pass": bool(ok), "witness": None if ok else witness}


def passed(checks) -> bool:
    return all(c["pass"] for c in checks)


def _mono(key, m, n):
    return SuperPolynomial({key: ONE}, m, n)


# -- sl2 ------------------------------------------------------------------------------


def suite_sl2(grid=SL2_GRID, deg=8):
    out = []
    for m, n in grid:
        rep = check_sl2(m, n, deg, allow_large=True)
        out.append(check(f"sl2 ({m},{n}) deg<={deg}", rep["pass"],
                         [str(x) for x in rep["failures"][:1]] or None))
    return out


# -- Fischer decomposition ---------------------------------------------------------------


def fischer_checks(m, n, deg):
    """Decompose/reassemble, harmonic components, dim H_k; BadDimension propagates."""
    reassembled = harmonic = True
    wit = None
    for key in monomial_keys(m, n, deg, exact=False, allow_large=True):
        P = _mono(key, m, n)
        for k, dec in fischer_decompose_all(P).items():
            if dec.reassemble() != P:
                reassembled = False
                wit = wit or str(key)
            if any(h.nabla2() for _, h in dec.components):
                harmonic = False
                wit = wit or str(key)
    dims_ok = True
    dims = []
    for k in range(deg + 1):
        keys = monomial_keys(m, n, k, allow_large=True)
        images = [project_h0(_mono(key, m, n), k) for key in keys]
        # rank_p(images) <= rank(images) <= dim ker nabla^2 <= dim P_k - rank_p(nabla^2),
        # so equal outer bounds pin the dimension exactly
        lower = _rank_mod_p(images)
        upper = len(keys) - _rank_mod_p([_mono(key, m, n).nabla2() for key in keys])
        dims.append((k, lower, upper, dim_H(m, n, k)))
        dims_ok &= lower == upper == dim_H(m, n, k) and all(not h.nabla2() for h in images)
    return [check(f"fischer reassemble ({m},{n}) deg<={deg}", reassembled, wit),
            check(f"fischer components harmonic ({m},{n})", harmonic, wit),
            check(f"dim H_k = dim P_k - dim P_(k-2) ({m},{n})", dims_ok, dims)]


RANK_PRIME = 2**61 - 1


def _rank_mod_p(polys, p=RANK_PRIME):
    """Rank of the coefficient matrix over GF(p); a lower bound for the rank over Q."""
    from sympy import GF
    from sympy.polys.matrices import DomainMatrix
    F = GF(p)
    cols = {}
    for q in polys:
        for key in q.terms:
            cols.setdefault(key, len(cols))
    if not cols:
        return 0
    rows = []
    for q in polys:
        row = [F(0)] * len(cols)
        for key, v in q.terms.items():
            v = v.rational() if isinstance(v, Scalar) else v
            row[cols[key]] = F(int(v.numerator)) / F(int(v.denominator))
        rows.append(row)
    return DomainMatrix(rows, (len(rows), len(cols)), F).rank()


def laplacian_constant_checks(m, n, top=4, kmax=2):
    """nabla^{2i}(R^{2j} H_k) = c_ijk R^{2j-2i} H_k and the fermionic analogue, i <= j <= top."""
    ok = True
    wit = None
    M = m - 2 * n
    for k in range(kmax + 1):
        for blk in super_harmonic_basis(m, n, k)[:2]:
            H = blk.assemble()
            for j in range(top + 1):
                RjH = H
                for _ in range(j):
                    RjH = RjH.mul_R2()
                L = RjH
                for i in range(j + 1):
                    want = H
                    for _ in range(j - i):
                        want = want.mul_R2()
                    if L != want.scale(c_ijk(i, j, k, M)):
                        ok = False
                        wit = wit or (i, j, k)
                    L = L.nabla2()
    fok = True
    t2 = theta2(n)
    for k in range(n + 1):
        for H in fermionic_harmonic_basis(n, k)[:2]:
            for j in range(min(top, n - k) + 1):
                L = gmul(t2 ** j, H)
                for i in range(j + 1):
                    if L != gmul(t2 ** (j - i), H).scale(c_ijk_fermionic(i, j, k, n)):
                        fok = False
                        wit = wit or ("f", i, j, k)
                    L = nabla2_f(L)
    return [check(f"Laplacian on R^2j H_k constants ({m},{n})", ok, wit),
            check(f"fermionic Laplacian on theta^2j H_k constants (n={n})", fok, wit)]


def suite_fischer(grid=FISCHER_GRID, deg=8):
    out = []
    for m, n in grid:
        try:
            out.extend(fischer_checks(m, n, deg))
            out.extend(laplacian_constant_checks(m, n))
        except BadDimension as exc:
            out.append(check(f"fischer ({m},{n})", False, f"BadDimension: {exc}"))
    return out


# -- integration ------------------------------------------------------------------------------


def pizzetti_checks(m, n, deg):
    agree = radial = True
    wit = None
    R2 = SuperPolynomial.const(ONE, m, n).mul_R2()
    for key in monomial_keys(m, n, deg, exact=False, allow_large=True):
        P = _mono(key, m, n)
        if supersphere_alt(P, check=False) != pizzetti(P):
            agree = False
            wit = wit or str(key)
        if sum(key[0]) + bin(key[1]).count("1") <= deg - 2 and pizzetti(R2 * P) != pizzetti(P):
            radial = False
            wit = wit or ("R2", str(key))
    return [check(f"pizzetti = radial form ({m},{n}) deg<={deg}", agree, wit),
            check(f"int_SS R^2 f = int_SS f ({m},{n})", radial, wit)]


def ssin4_constant(blk: HarmonicBlock):
    """(-1)^k k! Gamma(m/2+p+k) / ((M/2+p+q+2k-1) Gamma(M/2+p+q+k-1) (n-q-k)!)."""
    k, p, q, m, n = blk.i, blk.p, blk.q, blk.m, blk.n
    base = rat(m - 2 * n) / 2 + p + q
    num = gamma_half(rat(m) / 2 + p + k) * ((-1) ** k * factorial(k) / factorial(n - q - k))
    if k == 0:
        # (base - 1) Gamma(base - 1) = Gamma(base), finite also at base = 1
        return num / gamma_half(base)
    return num / gamma_half(base + k - 1) * (ONE / (base + 2 * k - 1))


def block_integral_checks(m, n, kmax=4):
    blocks = [b for k in range(kmax + 1) for b in super_harmonic_basis(m, n, k)]
    orth = True
    wit = None
    ssin4 = True
    for a in blocks:
        for b in blocks:
            if a.degree != b.degree or (a.i, a.p, a.q) == (b.i, b.p, b.q):
                continue
            if pizzetti(a.assemble() * b.assemble()):
                orth = False
                wit = wit or (a.label, b.label)
    for a in blocks:
        at = HarmonicBlock(a.i, a.p, a.q, a.hb, tilde(a.hf), a.normsq_b, a.normsq_f, a.m, a.n)
        val = pizzetti(a.assemble() * at.assemble())
        norms = a.normsq_b * a.pairing_norm_f()
        if val != norms * ssin4_constant(a) or val != a.predicted_ss_norm() * (-1) ** a.i:
            ssin4 = False
            wit = wit or ("ssin4", a.label)
    return [check(f"blocks with distinct (i,p,q) orthogonal ({m},{n}) k<={kmax}", orth, wit),
            check(f"block self-pairings = (-1)^k a b x norms ({m},{n})", ssin4, wit)]


def combinatorial_checks(seed=0):
    ok2 = True
    wit = None
    for nu in range(9):
        for mu2 in range(1, 10, 2):
            for k in range(min(nu, 6) + 1):
                if ssin2_lhs(k, nu, rat(mu2, 2)) != ssin2_rhs(k, nu, rat(mu2, 2)):
                    ok2 = False
                    wit = (k, nu, mu2)
    rng = random.Random(seed)
    alphas = [rat(rng.randint(-40, 40), rng.randint(1, 9)) for _ in range(10)]
    ok3 = all(ssin3_lhs(k, a) == factorial(k) for k in range(9) for a in alphas)
    return [check("alternating factorial/Gamma sum identity grid", ok2, wit),
            check("alternating Pochhammer sum = k!", ok3, [str(a) for a in alphas])]


def suite_integration(grid=PIZZETTI_GRID, deg=8, seed=0):
    out = []
    for m, n in grid:
        out.extend(pizzetti_checks(m, n, deg))
        if m - 2 * n > 0:
            out.extend(block_integral_checks(m, n))
    out.extend(combinatorial_checks(seed))
    return out


# -- fermionic inner product -------------------------------------------------------------------


def suite_fermionic(ns=(1, 2, 3)):
    out = []
    for n in ns:
        out.extend(suite_adjoints(grid=(), ns=(n,)))
        for r, v in check_eigstar(n).items():
            out.append(check(f"star rule {r} (n={n})", v))
        for r, v in check_expstar(n).items():
            out.append(check(f"star on theta powers/gaussian {r} (n={n})", v))
        out.append(check(f"star on fermionic Hermite functions (n={n})", check_chstar(n)))
        g = fermionic_gram(n)
        out.append(check(f"fermionic spherical Hermite Gram diagonal (n={n})",
                         g.off_diagonal_zero and g.diagonal_matches(), None))
    return out


# -- super inner products ----------------------------------------------------------------------


def inner1_example_checks(grid=((3, 1), (2, 1), (1, 2))):
    """<H_2 G | phi_1>_1 = -8 <G|G>_1 with G = exp(-R^2/2)."""
    out = []
    for m, n in grid:
        one = SuperPolynomial.const(ONE, m, n)
        G = wrap(one)
        phi1 = spherical_hermite(1, one)
        # H_2 of the first bosonic coordinate: 4 x_1^2 - 2
        x1 = SuperPolynomial({(tuple(int(i == 0) for i in range(m)), 0): ONE}, m, n)
        H2G = wrap((x1 * x1).scale(4) - one.scale(2))
        lhs, lhs_b = inner1(H2G, phi1), inner1_berezin(H2G, phi1)
        out.append(check(f"<H2 G|phi_1>_1 = -8<G|G>_1 ({m},{n})",
                         lhs == inner1(G, G) * -8 and lhs == lhs_b, str(lhs)))
    return out


def suite_inner(grid=INNER2_GRID, jmax=3, kmax=4, bij=((3, 1, 3, 4),)):
    out = list(inner1_example_checks())
    for m, n, jb, kb in bij:
        rep = bijnaorth_report(m, n, jb, kb)
        out.append(check(f"<.|.>_1 Gram follows the (p,q,l,j+i) block pattern ({m},{n})", rep["pattern_holds"],
                         [str(v) for v in rep["violations"][:1]]))
        out.append(check(f"<.|.>_1 Gram is not diagonal ({m},{n})", not rep["diagonal"]
                         and rep["nonzero_off_diagonal_in_pattern"] > 0))
    for m, n in grid:
        g = spherical_gram_inner2(m, n, jmax, kmax)
        out.append(check(f"<.|.>_2 spherical Gram diagonal ({m},{n}) j<={jmax} k<={kmax}", g.off_diagonal_zero))
        out.append(check(f"<.|.>_2 Gram diagonal = gamma^M_jk x norms ({m},{n})", g.diagonal_matches()))
    return out


def suite_adjoints(grid=((3, 1),), deg=6, ns=(1, 2, 3)):
    """Adjoints under the Grassmann product, <.|.>_1 and <.|.>_2."""
    out = []
    for n in ns:
        out.append(check(f"adjoint of d_j is x'_j/2 (n={n})", check_fermionic_adjoints(n)))
        for a, b in (("theta2", "-nabla2_f"), ("nabla2_f", "-theta2"), ("E_f-n", "E_f-n")):
            rep = adjoint_check(a, b, "f", 0, n)
            out.append(check(f"({a})^+ = {b} (n={n})", rep.passed, rep.to_dict()["witness"]))
    for m, n in grid:
        for a, b in (("R2", "r2-nabla2_f"), ("nabla2", "nabla2_b-theta2")):
            rep = adjoint_check(a, b, "1", m, n, min(deg, 4), stop_at_first=True)
            out.append(check(f"<.|.>_1: ({a})^+ = {b} ({m},{n}) deg<={min(deg, 4)}", rep.passed,
                             rep.to_dict()["witness"]))
        if m - 2 * n <= 0:
            continue
        for a, b in (("R2", "R2"), ("nabla2", "nabla2"), ("2E+M", "-(2E+M)")):
            rep = adjoint_check(a, b, "2", m, n, deg, stop_at_first=True)
            out.append(check(f"<.|.>_2: ({a})^+ = {b} ({m},{n}) deg<={deg}", rep.passed,
                             rep.to_dict()["witness"]))
    return out


def suite_cartesian(grid=((1, 1), (2, 1)), total=4):
    out = []
    for m, n in grid:
        g = cartesian_gram(m, n, total)
        out.append(check(f"cartesian Hermite Gram diagonal with predicted norms ({m},{n})",
                         g.off_diagonal_zero and g.diagonal_matches()))
    return out


# -- no-go -------------------------------------------------------------------------------------


def suite_nogo(grid=NOGO_GRID):
    out = []
    for m, n in grid:
        w = nogo_witness(m, n)
        out.append(check(f"nonpositive norm factor for M={m - 2 * n} ({m},{n})", w["certified"], w))
    rep = adjoint_check("R2", "R2", "1", 3, 1, 2, stop_at_first=True)
    out.append(check("(R^2)^+ = R^2 refuted under <.|.>_1", not rep.passed and rep.witness is not None,
                     rep.to_dict()))
    for n in (1, 2, 3):
        rep = adjoint_check("theta2", "theta2", "f", 0, n, stop_at_first=True)
        w = theta2_hermitian_witness(n)
        out.append(check(f"(theta^2)^+ = theta^2 refuted (n={n})", not rep.passed and w["certified"]))
        d = determinant_one_witness(n)
        out.append(check(f"no invariant form on degree one under det-one maps (n={n})", d["certified"], d))
    return out


# -- kernels and Mehler -------------------------------------------------------------------------


def _from_report(rep, name):
    return check(name, rep["equal"], rep["first_diff"])


def suite_kernels(ns=(1, 2, 3), grid=KERNEL_GRID, kmax=3):
    out = []
    for n in ns:
        for k in range(n + 1):
            out.append(_from_report(mehler.kernel_reproduces(n, k), f"fermionic kernel F_{k} (n={n})"))
    for m, n in grid:
        for k in range(kmax + 1):
            out.append(_from_report(mehler.super_kernel_check(m, n, k), f"super kernel F_{k} ({m},{n})"))
    return out


def suite_mehler(ns=(1, 2), slow=False, grid=MEHLER_SUPER_GRID, classical=(3, 4, 5), Dmax=6, seed=0):
    out = []
    for n in (tuple(ns) + ((3,) if slow and 3 not in ns else ())):
        out.append(_from_report(mehler.mehler_fermionic_verify(n), f"fermionic Mehler (n={n})"))
        for s in (1, -1):
            out.append(_from_report(mehler.fourier_point_verify(n, s),
                                    f"fermionic Mehler at t = {'+' if s > 0 else '-'}i (n={n})"))
    rng = random.Random(seed)
    mats = [random_symplectic(2, rng) for _ in range(3)]
    out.append(_from_report(mehler.mehler_symplectic_invariance(2, mats), "fermionic Mehler Sp(4) invariance"))
    for m, n, D in grid:
        out.append(_from_report(mehler.mehler_super_verify(m, n, D), f"super Mehler ({m},{n}) D={D}"))
    for m in classical:
        for D in range(0, Dmax + 1, 2):
            out.append(_from_report(mehler.mehler_classical_verify(m, D), f"O({m}) Mehler D={D}"))
    out.append(_from_report(mehler.frac_fourier_eigencheck(3, 1, 4), "fractional Fourier eigenvalues (3,1)"))
    return out


# -- Dunkl --------------------------------------------------------------------------------------


def dunkl_systems():
    return [dunkl.RootSystem.z2(1), dunkl.RootSystem.z2(2), dunkl.RootSystem.z2(3),
            dunkl.RootSystem.type_a(2), dunkl.RootSystem.type_b(2)]


def kappa_zero_hermite_check(rs, degree=4):
    """With kappa = 0 the generalized Hermite polynomial of x^nu is prod_i H_{nu_i}(x_i)."""
    from .superpoly import bosonic_exponents
    rs0 = rs.with_kappa(0)
    m = rs.m
    for d in range(degree + 1):
        for e in bosonic_exponents(m, d):
            want = SuperPolynomial.const(ONE, m, 0)
            for i, k in enumerate(e):
                x = SuperPolynomial({(tuple(int(a == i) for a in range(m)), 0): ONE}, m, 0)
                want = want * hermite_1d(k).at(x)
            if dunkl.rosler_hermite(dunkl.monomial(e), rs0) != want:
                return e
    return None


def suite_dunkl(seed=0, samples=5, deg=6, gram_deg=4, dim_k=4):
    rng = random.Random(seed)
    out = []
    for base in dunkl_systems():
        for s in range(samples):
            rs = base.with_kappa(dunkl.random_kappa(base, rng))
            tag = f"{base.name} kappa={ {o: str(v) for o, v in rs.kappa.items()} }"
            c = dunkl.commutativity_check(rs, deg)
            out.append(check(f"T_i T_j = T_j T_i {tag}", c is None, c))
            c = dunkl.sl2_check(rs, deg)
            out.append(check(f"sl2 with mu {tag}", c is None, c))
            r2 = SuperPolynomial.const(ONE, rs.m, 0).mul_r2()
            out.append(check(f"Delta_kappa r^2 = 2 mu {tag}", dunkl.dunkl_laplacian(r2, rs) == 2 * rs.mu))
            _, diag, roundtrip = dunkl.rosler_gram(rs, gram_deg)
            out.append(check(f"generalized Hermite Fischer Gram diagonal {tag}", diag and roundtrip))
            dims = dunkl.dimension_check(rs, dim_k)
            out.append(check(f"dim ker Delta_kappa = classical {tag}",
                             all(a == b and ok for _, a, b, ok in dims), dims))
        e = kappa_zero_hermite_check(base)
        out.append(check(f"kappa = 0 gives classical Hermite products {base.name}", e is None, e))
    return out


# -- one-dimensional appendix identities ----------------------------------------------------------


def suite_appendix(top=8):
    out = []
    ok = all(hermite_inner(k, l) == (hermite_norm(k) if k == l else Scalar())
             for k in range(top + 1) for l in range(top + 1))
    out.append(check(f"Hermite orthogonality k,l<={top}", ok))
    for alpha in (0, rat(1, 2), -rat(1, 2), 2, rat(7, 2)):
        ok = all(laguerre_inner(j, k, alpha) == (laguerre_norm(k, alpha) if j == k else Scalar())
                 for j in range(top + 1) for k in range(top + 1))
        out.append(check(f"Laguerre orthogonality alpha={alpha}", ok))
    for alpha in (rat(1, 2), 1, rat(3, 2), 2, rat(5, 2)):
        ok = all(gegenbauer_inner(k, l, alpha) == (gegenbauer_norm(k, alpha) if k == l else Scalar())
                 for k in range(top + 1) for l in range(top + 1))
        out.append(check(f"Gegenbauer orthogonality alpha={alpha}", ok))
    ok = True
    for k in range(5):
        even = laguerre(k, -rat(1, 2)).compose_square().scale((-1) ** k * 4**k * factorial(k))
        odd = laguerre(k, rat(1, 2)).compose_square().scale((-1) ** k * 2 * 4**k * factorial(k))
        odd = type(odd)([0] + list(odd.coefficients))
        ok &= hermite_1d(2 * k) == even and hermite_1d(2 * k + 1) == odd
    out.append(check("Hermite/Laguerre parity identities k<=4", ok))
    return out


SUITES = {
    "sl2": suite_sl2, "fischer": suite_fischer, "pizzetti": suite_integration, "fermionic": suite_fermionic,
    "orthogonality": suite_inner, "adjoints": suite_adjoints, "nogo": suite_nogo, "kernels": suite_kernels,
    "mehler": suite_mehler, "dunkl": suite_dunkl, "appendix": suite_appendix, "cartesian": suite_cartesian,
}
