"""Spherical harmonics on R^{m|2n}: projection, Fischer decomposition, bases.

Bases are orthogonal but never normalised; the exact squared norms are carried
alongside (there are no square roots in the coefficient field).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .errors import BadDimension, DegreeOutOfRange, NotHomogeneous, ParamOutOfRange
from .grassmann import GrassmannElement, gmul
from .integration import sphere_moment
from .scalars import ONE, ZERO, Scalar, factorial, gamma_half, pochhammer, rat
from .superpoly import (SuperPolynomial, bosonic_exponents, dim_P, from_grassmann, r2,
                        theta2_poly)


def bad_dimension(M: int) -> bool:
    """True when M is even and non-positive, where the Fischer decomposition fails."""
    return M <= 0 and M % 2 == 0


# -- projection and Fischer decomposition ----------------------------------------


def _laplacian_powers(P: SuperPolynomial, upto: int):
    out = [P]
    for _ in range(upto):
        nxt = out[-1].nabla2()
        out.append(nxt)
        if not nxt:
            break
    while len(out) <= upto:
        out.append(P.zero())
    return out


def _projection_coefficients(k: int, M: int, L):
    """kappa_j = (-1)^j / (4^j j! (k + M/2 - j - 1)_j) for every j with L[j] != 0."""
    coeffs = []
    for j in range(len(L)):
        if not L[j]:
            coeffs.append(ZERO)
            continue
        poch = pochhammer(rat(2 * k + M - 2 * j - 2) / 2, j)
        if not poch:
            raise BadDimension(f"Pochhammer factor vanishes for k={k}, M={M}, j={j}")
        coeffs.append((-1) ** j / (4**j * factorial(j) * poch))
    return coeffs


def _horner_R2(coeffs, L):
    """sum_j coeffs[j] R^{2j} L[j]."""
    acc = None
    for j in range(len(L) - 1, -1, -1):
        term = L[j].scale(coeffs[j]) if coeffs[j] else L[j].zero()
        acc = term if acc is None else acc.mul_R2() + term
    return acc


def _degree_of(P, k):
    if k is None:
        degs = P.homogeneous_parts()
        if len(degs) > 1:
            raise NotHomogeneous("input must be homogeneous")
        k = next(iter(degs)) if degs else 0
    elif not P.is_homogeneous(k):
        raise NotHomogeneous(f"input is not homogeneous of degree {k}")
    return k


def project_h0(P: SuperPolynomial, k: int | None = None) -> SuperPolynomial:
    """Harmonic component of a homogeneous polynomial of degree k."""
    k = _degree_of(P, k)
    L = _laplacian_powers(P, k // 2)
    return _horner_R2(_projection_coefficients(k, P.M, L), L)


def c_ijk(i: int, j: int, k: int, M: int):
    """nabla^{2i}(R^{2j} H_k) = c_ijk R^{2j-2i} H_k; Gamma ratio as a Pochhammer."""
    if i > j:
        return ZERO
    return 4**i * factorial(j) / factorial(j - i) * pochhammer(rat(2 * k + M) / 2 + j - i, i)


def c_ijk_fermionic(i: int, j: int, k: int, n: int):
    """nabla_f^{2i}(theta^{2j} H_k) = c theta^{2j-2i} H_k for H_k in H_k^f."""
    if i > j:
        return ZERO
    return ((-1) ** i * 4**i * factorial(j) / factorial(j - i)
            * factorial(n + i - j - k) / factorial(n - j - k))


@dataclass
class FischerDecomposition:
    degree: int
    components: list  # (j, harmonic of degree k - 2j)

    def reassemble(self) -> SuperPolynomial:
        acc = None
        by_j = dict(self.components)
        top = max(by_j) if by_j else 0
        for j in range(top, -1, -1):
            h = by_j.get(j)
            if acc is None:
                acc = h
            else:
                acc = acc.mul_R2()
                if h is not None:
                    acc = acc + h
        return acc

    def harmonic(self, j: int) -> SuperPolynomial:
        return dict(self.components)[j]


def fischer_decompose(P: SuperPolynomial, k: int | None = None) -> FischerDecomposition:
    """P = sum_j R^{2j} h_{k-2j}, with h_{k-2j} = P0(nabla^{2j} P) / c_{j,j,k-2j}."""
    M = P.M
    if bad_dimension(M):
        raise BadDimension(f"no Fischer decomposition for M = {M}")
    k = _degree_of(P, k)
    L = _laplacian_powers(P, k // 2)
    comps = []
    for j in range(k // 2 + 1):
        kk = k - 2 * j
        sub = L[j:]
        coeffs = _projection_coefficients(kk, M, sub)
        h = _horner_R2(coeffs, sub)
        comps.append((j, h.scale(ONE / c_ijk(j, j, kk, M))))
    return FischerDecomposition(k, comps)


def fischer_decompose_all(P: SuperPolynomial):
    """Decompose every homogeneous component; returns {degree: FischerDecomposition}."""
    return {k: fischer_decompose(part, k) for k, part in P.homogeneous_parts().items()}


# -- fermionic harmonics -------------------------------------------------------------


def _pair_element(n, pair, coef=ONE):
    """x'_{2p+1} x'_{2p+2} for the 0-based pair index p."""
    return GrassmannElement({0b11 << (2 * pair): coef}, n)


def _fermionic_recursive(n, pairs, k):
    if k == 0:
        return [GrassmannElement.const(ONE, n)]
    if k > len(pairs):
        return []
    if k == 1:
        return [GrassmannElement({1 << b: ONE}, n) for p in pairs for b in (2 * p, 2 * p + 1)]
    first, rest = pairs[0], pairs[1:]
    nn = len(pairs)
    out = list(_fermionic_recursive(n, rest, k))
    singles = [GrassmannElement({1 << b: ONE}, n) for b in (2 * first, 2 * first + 1)]
    for h in _fermionic_recursive(n, rest, k - 1):
        for g in singles:
            out.append(gmul(g, h))
    bracket = _pair_element(n, first)
    c = ONE / (k - nn - 1)
    for p in rest:
        bracket = bracket + _pair_element(n, p, c)
    for h in _fermionic_recursive(n, rest, k - 2):
        out.append(gmul(bracket, h))
    return out


@lru_cache(maxsize=None)
def fermionic_harmonic_basis(n: int, k: int):
    """Basis of the degree-k fermionic harmonics, built pair by pair."""
    if k < 0 or k > n:
        raise DegreeOutOfRange(f"H_k^f vanishes for k={k} > n={n}")
    return tuple(_fermionic_recursive(n, tuple(range(n)), k))


def dim_Hf(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0)


def _gram_schmidt(vectors, inner):
    """Orthogonalise; drops exactly dependent vectors.  Returns [(v, <v|v>)]."""
    out = []
    for v in vectors:
        w = v
        for u, nu in out:
            c = inner(w, u)
            if c:
                w = w - u.scale(c / nu)
        if w:
            out.append((w, inner(w, w)))
    return out


@lru_cache(maxsize=None)
def orthogonal_fermionic_basis(n: int, k: int):
    """Fermionic harmonics orthogonal under the Grassmann inner product, with
    norms <H|H>.  The recursive basis is fed to Gram-Schmidt in order."""
    basis = fermionic_harmonic_basis(n, k)

    def inner(a, b):
        # the common (2 pi)^{-n} 2^k factor is restored below
        acc = ZERO
        for key, v in a.terms.items():
            w = b.terms.get(key)
            if w is not None:
                acc += v * w
        return acc

    factor = Scalar.s(-2 * n, rat(2) ** k / 2**n)
    return tuple((v, factor * nv) for v, nv in _gram_schmidt(basis, inner))


# -- bosonic harmonics ---------------------------------------------------------------


def _sphere_gram(m):
    """Rational sphere moments of degree-2p monomials divided by pi^{floor(m/2)}."""
    unit = Scalar.s(2 * (m // 2))
    cache = {}

    def moment(e):
        if e not in cache:
            mo = sphere_moment(m, e)
            cache[e] = (mo / unit).rational() if mo else ZERO
        return cache[e]
    return moment, unit


@lru_cache(maxsize=None)
def bosonic_harmonic_basis(m: int, p: int):
    """Sphere-orthogonal basis of degree-p harmonics in m variables, with the
    exact squared norms over S^{m-1}."""
    if m < 1:
        raise BadDimension("bosonic harmonics need m >= 1")
    moment, unit = _sphere_gram(m)
    monos = bosonic_exponents(m, p)
    projected = []
    for e in monos:
        P = SuperPolynomial({(e, 0): ONE}, m, 0)
        h = project_h0(P, p)
        if h:
            projected.append(h)

    def inner(a, b):
        acc = ZERO
        for (ea, _), va in a.terms.items():
            for (eb, _), vb in b.terms.items():
                mo = moment(tuple(x + y for x, y in zip(ea, eb)))
                if mo:
                    acc += va * vb * mo
        return acc

    return tuple((h, unit * nh) for h, nh in _gram_schmidt(projected, inner))


def dim_Hb(m: int, p: int) -> int:
    if m == 0:
        return 1 if p == 0 else 0
    return dim_P(m, 0, p) - dim_P(m, 0, p - 2)


# -- the radial polynomials f_{k,p,q} and block constants ----------------------------


def f_coefficients(k, p, q, m, n):
    if not (0 <= q <= n and 0 <= k <= n - q):
        raise ParamOutOfRange(f"f_(k,p,q) needs 0 <= q <= n and 0 <= k <= n - q, got {(k, p, q)}")
    out = []
    for s in range(k + 1):
        a = (comb(k, s) * factorial(n - q - s) / factorial(n - q - k)
             * pochhammer(rat(m) / 2 + p + k - s, s))
        out.append(a)
    return out


def f_kpq(k: int, p: int, q: int, m: int, n: int) -> SuperPolynomial:
    """sum_s a_s r^{2k-2s} theta^{2s}."""
    coeffs = f_coefficients(k, p, q, m, n)
    rr = r2(m, n)
    tt = theta2_poly(m, n)
    out = SuperPolynomial.const(ZERO, m, n)
    for s, a in enumerate(coeffs):
        if a:
            out = out + ((rr ** (k - s)) * (tt ** s)).scale(a)
    return out


def a_kpq(k: int, p: int, q: int, m: int, n: int) -> Scalar:
    """Gamma(base + 2k - 1)/Gamma(base + k - 1) with base = M/2 + p + q, as (base + k - 1)_k."""
    M = m - 2 * n
    base = rat(M) / 2 + p + q
    return Scalar.of(pochhammer(base + k - 1, k))


def b_kpq(k: int, p: int, q: int, m: int, n: int) -> Scalar:
    M = m - 2 * n
    return (factorial(k) * gamma_half(rat(m) / 2 + p + k)
            / gamma_half(rat(M) / 2 + p + q + 2 * k)) * (ONE / factorial(n - q - k))


@dataclass
class HarmonicBlock:
    """f_{i,p,q} * hb * hf with exact squared norms of the two factors."""

    i: int
    p: int
    q: int
    hb: SuperPolynomial
    hf: GrassmannElement
    normsq_b: Scalar
    normsq_f: Scalar
    m: int
    n: int
    label: tuple = ()
    _assembled: SuperPolynomial | None = field(default=None, repr=False, compare=False)

    def assemble(self) -> SuperPolynomial:
        if self._assembled is None:
            f = f_kpq(self.i, self.p, self.q, self.m, self.n)
            hb = SuperPolynomial({(e, 0): v for (e, _), v in self.hb.terms.items()}, self.m, self.n)
            self._assembled = f * hb * from_grassmann(self.hf, self.m)
        return self._assembled

    @property
    def degree(self):
        return 2 * self.i + self.p + self.q

    def a(self) -> Scalar:
        return a_kpq(self.i, self.p, self.q, self.m, self.n)

    def b(self) -> Scalar:
        return b_kpq(self.i, self.p, self.q, self.m, self.n)

    def pairing_norm_f(self) -> Scalar:
        """normsq_f rescaled to the 1/(2^{n-q}(n-q)!) convention for fermionic bases."""
        return self.normsq_f * (2 ** (self.n - self.q) * factorial(self.n - self.q))

    def predicted_ss_norm(self) -> Scalar:
        """Supersphere pairing of the block with its own T-image."""
        return self.a() * self.b() * self.normsq_b * self.pairing_norm_f()


def _bosonic_factor(m, n, p):
    if m == 0:
        return [(SuperPolynomial.const(ONE, 0, 0), Scalar.of(1))] if p == 0 else []
    return list(bosonic_harmonic_basis(m, p))


def super_harmonic_blocks(m: int, n: int, k: int):
    """All blocks f_{i,p,q} H_p^b H_q^f of total degree k (no dimension check)."""
    out = []
    for q in range(0, min(n, k) + 1):
        fbasis = orthogonal_fermionic_basis(n, q)
        for i in range(0, min(n - q, (k - q) // 2) + 1):
            p = k - 2 * i - q
            if not any(f_coefficients(i, p, q, m, n)) or (m == 0 and i > 0):
                continue
            for lb, (hb, nb) in enumerate(_bosonic_factor(m, n, p)):
                for lf, (hf, nf) in enumerate(fbasis):
                    out.append(HarmonicBlock(i, p, q, hb, hf, nb, nf, m, n, (i, p, q, lb, lf)))
    return out


def super_harmonic_basis(m: int, n: int, k: int):
    """Blocks spanning H_k; requires a Fischer decomposition (M not in -2N)."""
    if bad_dimension(m - 2 * n):
        raise BadDimension(f"M = {m - 2 * n} admits no Fischer decomposition")
    return super_harmonic_blocks(m, n, k)


def dim_H(m: int, n: int, k: int) -> int:
    return dim_P(m, n, k) - dim_P(m, n, k - 2)


# -- combinatorial identities used for the block constants ----------------------------


def ssin2_lhs(k, nu, mu):
    acc = Scalar()
    for s in range(k + 1):
        acc = acc + gamma_half(rat(mu) + k - s).inverse() * ((-1) ** (k - s) * comb(k, s) * factorial(nu - s))
    return acc


def ssin2_rhs(k, nu, mu):
    mu = rat(mu)
    return (gamma_half(mu - nu + 2 * k - 1) / gamma_half(mu - nu + k - 1)
            / gamma_half(mu + k)) * factorial(nu - k)


def ssin3_lhs(k, alpha):
    acc = ZERO
    for s in range(k + 1):
        acc += (-1) ** s * comb(k, s) * pochhammer(rat(alpha) - s, k)
    return acc


__all__ = [
    "FischerDecomposition", "HarmonicBlock", "a_kpq", "b_kpq", "bad_dimension",
    "bosonic_harmonic_basis", "c_ijk", "c_ijk_fermionic", "dim_H", "dim_Hb", "dim_Hf",
    "f_kpq", "fermionic_harmonic_basis", "fischer_decompose", "fischer_decompose_all",
    "orthogonal_fermionic_basis", "project_h0", "super_harmonic_basis", "super_harmonic_blocks",
]
