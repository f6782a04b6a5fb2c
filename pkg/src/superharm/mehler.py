"""Reproducing kernels and Mehler identities.

The fermionic identities are checked exactly in the doubled Grassmann algebra
with coefficients in Q(t)[s].  The super and classical Mehler formulas are
infinite series; both sides are compared t-power by t-power after truncating
the variable degree, which is exact for every retained coefficient.
"""
from __future__ import annotations

import time
from math import comb
from math import factorial as ifact

from .errors import BadDimension, DegreeOutOfRange
from .grassmann import (GrassmannElement, gen, gmul, inner_f, mono_sign, popcount, symplectic_apply,
                        theta2, tilde, to_doubled, ygen)
from .harmonics import orthogonal_fermionic_basis, super_harmonic_basis
from .hermite import gegenbauer, gegenbauer_kernel_coefficients, laguerre, oscillator_check, spherical_hermite
from .integration import pizzetti_x
from .products import t_block
from .scalars import ONE, GaussianRational, Scalar, as_scalar, gamma_half, pochhammer, rat, ratfunc
from .superpoly import R2, SuperPolynomial, embed, fvar, xvar


def _report(identity, dims, degree, equal, first_diff, t0, **extra):
    out = {"identity": identity, "dims": list(dims), "degree": degree, "equal": bool(equal),
           "first_diff": first_diff, "wall_time": round(time.perf_counter() - t0, 3)}
    out.update(extra)
    return out


def _first_diff(a, b):
    """First key (in sorted order) where two term dicts differ, as strings."""
    keys = sorted(set(a.terms) | set(b.terms), key=str)
    for k in keys:
        va, vb = a.terms.get(k, 0), b.terms.get(k, 0)
        if va != vb:
            return {"term": str(k), "lhs": str(va), "rhs": str(vb)}
    return None


# -- fermionic kernel ------------------------------------------------------------


def pairing_f(n: int) -> GrassmannElement:
    """<x', y'> = -1/2 sum_j (x'_{2j-1} y'_{2j} - x'_{2j} y'_{2j-1})."""
    half = -rat(1) / 2
    acc = GrassmannElement.const(0, n, True)
    for j in range(1, n + 1):
        acc = acc + gmul(gen(2 * j - 1, n, True), ygen(2 * j, n)).scale(half)
        acc = acc - gmul(gen(2 * j, n, True), ygen(2 * j - 1, n)).scale(half)
    return acc


def kernel_constant(n: int, k: int, j: int) -> Scalar:
    """c_j^k = 2^{k-2j} pi^n (n+1-k) / ((k-2j)! j! (n+1+j-k)!)."""
    return Scalar.pi(n) * (rat(2 ** (k - 2 * j) * (n + 1 - k), ifact(k - 2 * j) * ifact(j) * ifact(n + 1 + j - k)))


def fermionic_kernel(n: int, k: int) -> GrassmannElement:
    """sum_j c_j^k <x',y'>^{k-2j} theta^{2j} theta_y^{2j} in the doubled algebra."""
    if not 0 <= k <= n:
        raise DegreeOutOfRange(f"H_k^f vanishes for k = {k} outside 0..{n}")
    P = pairing_f(n)
    tx, ty = theta2(n, True, "x"), theta2(n, True, "y")
    acc = GrassmannElement.const(0, n, True)
    for j in range(k // 2 + 1):
        term = gmul(gmul(P ** (k - 2 * j), tx ** j), ty ** j)
        acc = acc + term.scale(kernel_constant(n, k, j))
    return acc


def pair_over_y(F: GrassmannElement, H: GrassmannElement) -> GrassmannElement:
    """<F(x', y') | H(y')>_{y'}, the x-part carried along as a coefficient."""
    n = H.n
    low = (1 << (2 * n)) - 1
    groups = {}
    for b, v in F.terms.items():
        groups.setdefault(b >> (2 * n), {})[b & low] = v
    acc = GrassmannElement.const(0, n)
    for ybits, xterms in groups.items():
        c = inner_f(GrassmannElement({ybits: ONE}, n), H)
        if c:
            acc = acc + GrassmannElement(xterms, n).scale(c)
    return acc


def kernel_reproduces(n: int, k: int) -> dict:
    """Reproducing property, Gegenbauer coefficient match and basis-sum form of F_k."""
    t0 = time.perf_counter()
    F = fermionic_kernel(n, k)
    scale = rat(1, 2 ** (n - k) * ifact(n - k))
    basis = orthogonal_fermionic_basis(n, k)
    failures = []
    for idx, (H, _) in enumerate(basis):
        if pair_over_y(F, H) != tilde(H).scale(scale):
            failures.append(idx)
    # (sqrt(theta^2 theta_y^2))^k C_k(<x',y'>/sqrt(...)) has the coefficient of u^{k-2j}
    # of C_k^{(-n-1)} in front of <x',y'>^{k-2j} (theta^2 theta_y^2)^j
    C = gegenbauer(k, -n - 1)
    pref = Scalar.pi(n) * rat((-1) ** k * (n + 1 - k), ifact(n + 1))
    coef_ok = all(kernel_constant(n, k, j) == pref * C.coefficients[k - 2 * j] for j in range(k // 2 + 1))
    basis_sum = GrassmannElement.const(0, n, True)
    for H, _ in basis:
        norm = inner_f(H, H)
        basis_sum = basis_sum + gmul(to_doubled(tilde(H), "x"), to_doubled(H, "y")).scale(
            ONE / (norm * (2 ** (n - k) * ifact(n - k))) * ONE)
    sum_ok = basis_sum == F
    ok = not failures and coef_ok and sum_ok
    return _report("fermionic reproducing kernel", (0, n), k, ok, None if ok else
                   {"reproduce_failures": failures, "coefficients": coef_ok, "basis_sum": sum_ok}, t0,
                   basis_size=len(basis))


# -- super kernel -----------------------------------------------------------------


def pairing_super(m: int, n: int) -> SuperPolynomial:
    """<x, y> = sum x_i y_i + <x', y'> on the doubled superspace."""
    acc = SuperPolynomial.const(0, m, n, True)
    for i in range(1, m + 1):
        acc = acc + xvar(i, m, n, "x", True) * xvar(i, m, n, "y", True)
    half = rat(1) / 2
    for j in range(1, n + 1):
        acc = acc - (fvar(2 * j - 1, m, n, "x", True) * fvar(2 * j, m, n, "y", True)).scale(half)
        acc = acc + (fvar(2 * j, m, n, "x", True) * fvar(2 * j - 1, m, n, "y", True)).scale(half)
    return acc


def kernel_prefactor(M: int) -> Scalar:
    """Gamma(M/2) / (2 pi^{M/2})."""
    return gamma_half(rat(M) / 2) * Scalar.s(-M, rat(1, 2))


def _homogenized(k: int, M: int, A, B, C, mul):
    """prefactor * sum_i g_{k-2i} C^{k-2i} (A B)^i with g the coefficients of
    (k + alpha)/alpha C_k^{(alpha)}, alpha = (M-2)/2."""
    g = gegenbauer_kernel_coefficients(k, rat(M - 2) / 2)
    AB = mul(A, B)
    acc = None
    Cp = [C.one()]
    for _ in range(k):
        Cp.append(mul(Cp[-1], C))
    ABp = C.one()
    for i in range(k // 2 + 1):
        term = mul(Cp[k - 2 * i], ABp).scale(g.coefficients[k - 2 * i])
        acc = term if acc is None else acc + term
        ABp = mul(ABp, AB)
    return acc.scale(kernel_prefactor(M))


def super_kernel(m: int, n: int, k: int) -> SuperPolynomial:
    """Homogenised zonal kernel of H_k on the doubled superspace.

    Gegenbauer parity leaves only whole powers of R^2 R_y^2, so no square roots
    appear.  M = 2 is handled through the finite limit of (k+alpha)/alpha C_k^alpha.
    """
    M = m - 2 * n
    if M < 1 or m < 1:
        raise BadDimension(f"the super kernel needs M >= 1, got M = {M}")
    return _homogenized(k, M, R2(m, n, "x", True), R2(m, n, "y", True), pairing_super(m, n),
                        lambda a, b: a * b)


def reduce_mod_sphere_y(p: SuperPolynomial) -> SuperPolynomial:
    """Normal form modulo R_y^2 - 1 by rewriting y_1^2 -> 1 - y_2^2 - ... - theta_y^2."""
    m, n = p.m, p.n
    iy = m
    rest = SuperPolynomial.const(ONE, m, n, True) - R2(m, n, "y", True) + \
        xvar(1, m, n, "y", True) * xvar(1, m, n, "y", True)
    done = {}
    todo = dict(p.terms)
    while todo:
        (e, b), v = todo.popitem()
        if e[iy] < 2:
            w = done.get((e, b))
            done[(e, b)] = v if w is None else w + v
            continue
        e2 = list(e)
        e2[iy] -= 2
        mono = SuperPolynomial({(tuple(e2), b): v}, m, n, True)
        for key, c in (rest * mono).terms.items():
            # rest is even, so multiplying on the left matches the term order
            w = todo.get(key)
            todo[key] = c if w is None else w + c
            if not todo[key]:
                del todo[key]
    return SuperPolynomial({k: v for k, v in done.items() if v}, m, n, True)


def super_kernel_check(m: int, n: int, k: int) -> dict:
    """Pizzetti-in-x pairing against harmonics of degree <= k+2, and the basis sum."""
    t0 = time.perf_counter()
    F = super_kernel(m, n, k)
    failures = []
    for l in range(k + 3):
        for blk in super_harmonic_basis(m, n, l):
            H = blk.assemble()
            got = reduce_mod_sphere_y(pizzetti_x(embed(H, "x") * F))
            want = reduce_mod_sphere_y(embed(H, "y")) if l == k else F.zero()
            if got != want:
                failures.append(list(blk.label) + [l])
    basis_sum = F.zero()
    for blk in super_harmonic_basis(m, n, k):
        TH = embed(t_block(blk).assemble(), "x")
        basis_sum = basis_sum + (TH * embed(blk.assemble(), "y")).scale(ONE / blk.predicted_ss_norm())
    sum_ok = basis_sum == F
    ok = not failures and sum_ok
    return _report("super reproducing kernel", (m, n), k, ok,
                   None if ok else {"reproduce_failures": failures[:5], "basis_sum": sum_ok}, t0)


# -- fermionic Mehler ---------------------------------------------------------------


def _one_minus_t2(power: int) -> Scalar:
    base = Scalar.of(ratfunc((1, 0, -1)))
    return base ** power if power >= 0 else Scalar.of(ratfunc((1,), (1, 0, -1))) ** (-power)


def _lag_at(L, x: GrassmannElement) -> GrassmannElement:
    acc = GrassmannElement.const(0, x.n, x.doubled)
    for c in reversed(L.coefficients):
        acc = gmul(acc, x) + GrassmannElement.const(c, x.n, x.doubled)
    return acc


def _gexp(N: GrassmannElement, coef=lambda p: ONE) -> GrassmannElement:
    """sum_p coef(p) N^p / p! for a nilpotent even N."""
    acc = GrassmannElement.const(0, N.n, N.doubled)
    P = GrassmannElement.const(ONE, N.n, N.doubled)
    p = 0
    while P:
        acc = acc + P.scale(coef(p) * rat(1, ifact(p)))
        P = gmul(P, N)
        p += 1
    return acc


def fermionic_mehler_sides(n: int):
    """(LHS, RHS) of the fermionic Mehler formula in Lambda_{4n} over Q(t)[s]."""
    tx, ty = theta2(n, True, "x"), theta2(n, True, "y")
    lhs = GrassmannElement.const(0, n, True)
    for k in range(n + 1):
        F = fermionic_kernel(n, k)
        for j in range(n - k + 1):
            L = laguerre(j, k - n - 1)
            c = Scalar.t(2 * j + k) * rat((-1) ** j * ifact(j) * ifact(n - k - j))
            lhs = lhs + gmul(gmul(_lag_at(L, tx), _lag_at(L, ty)), F).scale(c)
    N = pairing_f(n).scale(Scalar.t(1) * 2) - (tx + ty).scale(Scalar.t(2))
    rhs = _gexp(N, lambda p: _one_minus_t2(n - p)).scale(Scalar.pi(n))
    return lhs, rhs


def mehler_fermionic_verify(n: int) -> dict:
    t0 = time.perf_counter()
    lhs, rhs = fermionic_mehler_sides(n)
    eq = lhs == rhs
    return _report("fermionic Mehler", (0, n), None, eq, None if eq else _first_diff(lhs, rhs), t0,
                   monomials=len(lhs.terms))


def fourier_point_verify(n: int, sign: int = 1) -> dict:
    """t = +-i: sum j!(n-k-j)! L_j L_j (+-i)^k F_k exp(-(theta^2+theta_y^2)/2) = (2 pi)^n exp(+-i <x',y'>).

    Both sides carry pi^n, which is divided out; the rest lives over Q(i).
    """
    t0 = time.perf_counter()

    def gauss(a: GrassmannElement) -> GrassmannElement:
        return a.map_coefficients(lambda v: GaussianRational(as_scalar(v).rational()))

    tx, ty = theta2(n, True, "x"), theta2(n, True, "y")
    unit = GaussianRational(0, sign)
    lhs = GrassmannElement.const(GaussianRational(0), n, True)
    for k in range(n + 1):
        F = gauss(fermionic_kernel(n, k).scale(Scalar.pi(-n)))
        ik = GaussianRational(1)
        for _ in range(k):
            ik = ik * unit
        for j in range(n - k + 1):
            L = laguerre(j, k - n - 1)
            c = ik * rat(ifact(j) * ifact(n - k - j))
            lhs = lhs + gmul(gmul(gauss(_lag_at(L, tx)), gauss(_lag_at(L, ty))), F).scale(c)
    damp = gauss(_gexp((tx + ty).scale(-rat(1) / 2)))
    lhs = gmul(lhs, damp)
    rhs = _gexp(gauss(pairing_f(n)).scale(unit))
    rhs = rhs.scale(GaussianRational(2 ** n))
    eq = lhs == rhs
    return _report(f"fermionic Mehler at t = {'+' if sign > 0 else '-'}i", (0, n), None, eq,
                   None if eq else _first_diff(lhs, rhs), t0, sign=sign)


def mehler_symplectic_invariance(n: int, matrices) -> dict:
    """Both sides of the fermionic Mehler formula are fixed by S acting on x' and y' together."""
    t0 = time.perf_counter()
    lhs, rhs = fermionic_mehler_sides(n)
    bad = []
    for idx, S in enumerate(matrices):
        if symplectic_apply(S, lhs, part="both") != lhs or symplectic_apply(S, rhs, part="both") != rhs:
            bad.append(idx)
    return _report("fermionic Mehler symplectic invariance", (0, n), None, not bad,
                   {"matrices": bad} if bad else None, t0, samples=len(matrices))


# -- truncated super and classical Mehler ----------------------------------------------


def _tmul_factory(weight, D):
    """Product of SuperPolynomials dropping every term of weight > D."""

    def mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
        out = {}
        bt = [(eb, bb, vb, weight(eb, bb)) for (eb, bb), vb in b.terms.items()]
        for (ea, ba), va in a.terms.items():
            wa = weight(ea, ba)
            for eb, bb, vb, wb in bt:
                if wa + wb > D:
                    continue
                s = mono_sign(ba, bb)
                if not s:
                    continue
                key = (tuple(x + y for x, y in zip(ea, eb)), ba | bb)
                p = va * vb
                w = out.get(key)
                p = p if s > 0 else -p
                out[key] = p if w is None else w + p
        return a._like({k: v for k, v in out.items() if v})

    return mul


def _series_sides(A, B, C, M: int, D: int, T: int, mul):
    """Per t-power coefficients of both sides of the Mehler series.

    LHS: sum 2 j! t^{2j+k} / Gamma(j + M/2 + k) L_j(A) L_j(B) F_k(A, B, C).
    RHS: (pi (1 - t^2))^{-M/2} exp((2 t C - t^2 (A + B)) / (1 - t^2)).
    Elements are truncated by ``mul``; A, B, C all have weight 2 and D is the
    weight bound, so only finitely many (j, k) and exponential orders survive.
    """
    one = C.one()
    lhs = {tau: C.zero() for tau in range(T + 1)}
    kernels = {}
    for k in range(min(T, D // 2) + 1):
        kernels[k] = _homogenized(k, M, A, B, C, mul)
        for j in range((T - k) // 2 + 1):
            L = laguerre(j, rat(M) / 2 + k - 1)
            LA = L.at(A, mul)
            LB = L.at(B, mul)
            c = gamma_half(rat(M) / 2 + j + k).inverse() * (2 * ifact(j))
            lhs[2 * j + k] = lhs[2 * j + k] + mul(mul(LA, LB), kernels[k]).scale(c)
    rhs = {tau: C.zero() for tau in range(T + 1)}
    S = A + B
    Cq = [one]
    Sr = [one]
    for _ in range(D // 2):
        Cq.append(mul(Cq[-1], C))
        Sr.append(mul(Sr[-1], S))
    halfM = rat(M) / 2
    pref = Scalar.s(-M)
    for p in range(D // 2 + 1):
        for q in range(p + 1):
            base = 2 * p - q
            if base > T:
                continue
            prod = mul(Cq[q], Sr[p - q])
            if not prod:
                continue
            c0 = rat(comb(p, q) * 2 ** q * (-1) ** (p - q), ifact(p))
            for i in range((T - base) // 2 + 1):
                c = c0 * pochhammer(p + halfM, i) / ifact(i)
                rhs[base + 2 * i] = rhs[base + 2 * i] + prod.scale(pref * c)
    return lhs, rhs


def _compare_series(lhs, rhs):
    for tau in sorted(lhs):
        if lhs[tau] != rhs[tau]:
            d = _first_diff(lhs[tau], rhs[tau])
            d["t_power"] = tau
            return d
    return None


def default_t_order(D: int) -> int:
    return 2 * (D // 2) + 2


def mehler_super_verify(m: int, n: int, D: int, T: int | None = None) -> dict:
    """Coefficient-wise comparison of the super Mehler formula up to degree D and t-order T."""
    t0 = time.perf_counter()
    M = m - 2 * n
    if M < 1 or m < 1:
        raise BadDimension(f"the super Mehler formula needs M >= 1, got M = {M}")
    T = default_t_order(D) if T is None else T
    mul = _tmul_factory(lambda e, b: sum(e) + popcount(b), D)
    A, B = R2(m, n, "x", True), R2(m, n, "y", True)
    C = pairing_super(m, n)
    lhs, rhs = _series_sides(A, B, C, M, D, T, mul)
    d = _compare_series(lhs, rhs)
    return _report("super Mehler (truncated)", (m, n), D, d is None, d, t0, t_order=T)


def mehler_classical_verify(m: int, D: int, T: int | None = None) -> dict:
    """The O(m) form with a^2, b^2 and c as free symbols of weight 2."""
    t0 = time.perf_counter()
    if m < 1:
        raise BadDimension("m >= 1 required")
    T = default_t_order(D) if T is None else T
    mul = _tmul_factory(lambda e, b: 2 * sum(e), D)
    A, B, C = (xvar(i, 3, 0) for i in (1, 2, 3))
    lhs, rhs = _series_sides(A, B, C, m, D, T, mul)
    d = _compare_series(lhs, rhs)
    return _report("classical Mehler (truncated)", (m, 0), D, d is None, d, t0, t_order=T)


# -- fractional Fourier transform on the spherical Hermite basis -------------------------


def frac_fourier(coeffs: dict, t: Scalar | None = None) -> dict:
    """F^alpha on {(j, k, label): c}: multiply by t^{2j+k}, t standing for e^{i alpha}."""
    out = {}
    for (j, k, label), c in coeffs.items():
        f = Scalar.t(2 * j + k) if t is None else t ** (2 * j + k)
        out[(j, k, label)] = as_scalar(c) * f
    return out


def frac_fourier_eigencheck(m: int, n: int, degree: int) -> dict:
    """Energies of the spherical Hermite basis give the exponents 2j+k; the
    diagonal rule composes additively in alpha."""
    t0 = time.perf_counter()
    M = m - 2 * n
    bad = []
    count = 0
    keys = []
    for k in range(degree + 1):
        for blk in super_harmonic_basis(m, n, k):
            for j in range((degree - k) // 2 + 1):
                lam = oscillator_check(spherical_hermite(j, blk))
                count += 1
                keys.append((j, k, tuple(blk.label)))
                if lam != Scalar.of(rat(M) / 2 + 2 * j + k):
                    bad.append([j, k] + list(blk.label))
    # a generic vector over the basis, transformed at sampled values of t
    vec = {key: Scalar.of(i + 1) for i, key in enumerate(keys)}
    ident_ok = frac_fourier(vec, Scalar.of(1)) == vec
    compose_ok = True
    for q1, q2 in ((rat(2), rat(3)), (rat(1, 2), rat(-5))):
        twice = frac_fourier(frac_fourier(vec, Scalar.of(q1)), Scalar.of(q2))
        compose_ok &= twice == frac_fourier(vec, Scalar.of(q1 * q2))
    symbolic = frac_fourier(vec)
    compose_ok &= all(symbolic[key] == vec[key] * Scalar.t(2 * key[0] + key[1]) for key in keys)
    ok = not bad and compose_ok and ident_ok
    return _report("fractional Fourier eigenvalues", (m, n), degree, ok,
                   None if ok else {"energy": bad[:5], "compose": compose_ok, "identity": ident_ok}, t0,
                   functions=count)


__all__ = [
    "default_t_order", "fermionic_kernel", "fermionic_mehler_sides", "fourier_point_verify", "frac_fourier",
    "frac_fourier_eigencheck", "kernel_constant", "kernel_prefactor", "kernel_reproduces",
    "mehler_classical_verify", "mehler_fermionic_verify", "mehler_super_verify",
    "mehler_symplectic_invariance", "pair_over_y", "pairing_f", "pairing_super", "reduce_mod_sphere_y",
    "super_kernel", "super_kernel_check",
]
