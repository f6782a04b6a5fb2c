"""Classical orthogonal polynomials and the Hermite bases of P exp(-R^2/2).

Laguerre and Gegenbauer coefficients are written with Pochhammer symbols so
negative integer parameters work without Gamma poles.
"""
from __future__ import annotations

from math import factorial as ifact

from .errors import BadOccupation, HarmonicityViolated, NotEigenfunction, RouteMismatch
from .harmonics import HarmonicBlock, bad_dimension
from .scalars import ONE, ZERO, Scalar, as_scalar, factorial, gamma_half, pochhammer, rat
from .superpoly import GaussianWrapped, SuperPolynomial, wrap


class OrthoPoly:
    """Univariate polynomial, ascending coefficients."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients):
        c = list(coefficients)
        while c and not c[-1]:
            c.pop()
        self.coefficients = tuple(c)

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __eq__(self, other):
        if not isinstance(other, OrthoPoly):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __add__(self, other):
        a, b = self.coefficients, other.coefficients
        n = max(len(a), len(b))
        return OrthoPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, OrthoPoly):
            return self.scale(other)
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return OrthoPoly([])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return OrthoPoly(out)

    def scale(self, c):
        return OrthoPoly([x * c for x in self.coefficients])

    def compose_square(self):
        """p(t^2)."""
        out = [ZERO] * (2 * len(self.coefficients))
        for i, c in enumerate(self.coefficients):
            out[2 * i] = c
        return OrthoPoly(out)

    def __call__(self, x):
        acc = ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def at(self, arg: SuperPolynomial, mul=None) -> SuperPolynomial:
        """Evaluate with a polynomial argument (Horner); ``mul`` may truncate."""
        acc = arg.zero()
        for c in reversed(self.coefficients):
            acc = (acc * arg if mul is None else mul(acc, arg)) + c
        return acc

    def __repr__(self):
        return f"OrthoPoly({[str(c) for c in self.coefficients]})"


def hermite_1d(k: int) -> OrthoPoly:
    """H_k(t) = sum_j (-1)^j 2^{k-2j} k! / ((k-2j)! j!) t^{k-2j}."""
    c = [ZERO] * (k + 1)
    for j in range(k // 2 + 1):
        c[k - 2 * j] = rat((-1) ** j * 2 ** (k - 2 * j) * ifact(k) // (ifact(k - 2 * j) * ifact(j)))
    return OrthoPoly(c)


def laguerre(j: int, alpha) -> OrthoPoly:
    """L_j^{(alpha)}(t) = sum_i (-1)^i (i+alpha+1)_{j-i} / (i! (j-i)!) t^i."""
    alpha = rat(alpha)
    return OrthoPoly([(-1) ** i * pochhammer(i + alpha + 1, j - i) / (ifact(i) * ifact(j - i))
                      for i in range(j + 1)])


def gegenbauer(k: int, alpha) -> OrthoPoly:
    """C_k^{(alpha)}(t) = sum_j (-1)^j (alpha)_{k-j} / (j! (k-2j)!) (2t)^{k-2j}."""
    alpha = rat(alpha)
    c = [ZERO] * (k + 1)
    for j in range(k // 2 + 1):
        c[k - 2 * j] = (-1) ** j * pochhammer(alpha, k - j) * 2 ** (k - 2 * j) / (ifact(j) * ifact(k - 2 * j))
    return OrthoPoly(c)


def gegenbauer_kernel_coefficients(k: int, alpha) -> OrthoPoly:
    """(k + alpha)/alpha * C_k^{(alpha)}, finite at alpha = 0.

    Uses (alpha)_{k-j}/alpha = (alpha+1)_{k-j-1}; the k = 0 polynomial is 1.
    """
    alpha = rat(alpha)
    if k == 0:
        return OrthoPoly([ONE])
    c = [ZERO] * (k + 1)
    for j in range(k // 2 + 1):
        c[k - 2 * j] = ((k + alpha) * (-1) ** j * pochhammer(alpha + 1, k - j - 1)
                        * 2 ** (k - 2 * j) / (ifact(j) * ifact(k - 2 * j)))
    return OrthoPoly(c)


# -- one-dimensional orthogonality integrals ---------------------------------------


def hermite_inner(k: int, l: int) -> Scalar:
    """Integral of H_k H_l exp(-t^2) over the real line."""
    p = hermite_1d(k) * hermite_1d(l)
    acc = Scalar()
    for a, c in enumerate(p.coefficients):
        if c and a % 2 == 0:
            acc = acc + gamma_half(rat(a + 1) / 2) * c
    return acc


def laguerre_inner(j: int, k: int, alpha) -> Scalar:
    """Integral of t^alpha L_j L_k exp(-t) over (0, inf)."""
    alpha = rat(alpha)
    p = laguerre(j, alpha) * laguerre(k, alpha)
    acc = Scalar()
    for a, c in enumerate(p.coefficients):
        if c:
            acc = acc + gamma_half(alpha + a + 1) * c
    return acc


def gegenbauer_inner(k: int, l: int, alpha) -> Scalar:
    """Integral of C_k C_l (1-t^2)^{alpha-1/2} over [-1, 1] via Beta moments."""
    alpha = rat(alpha)
    p = gegenbauer(k, alpha) * gegenbauer(l, alpha)
    acc = Scalar()
    for a, c in enumerate(p.coefficients):
        if c and a % 2 == 0:
            beta = gamma_half(rat(a + 1) / 2) * gamma_half(alpha + rat(1) / 2) / gamma_half(rat(a) / 2 + alpha + 1)
            acc = acc + beta * c
    return acc


def hermite_norm(k: int) -> Scalar:
    return Scalar.s(1, factorial(k) * 2**k)


def laguerre_norm(k: int, alpha) -> Scalar:
    return gamma_half(rat(alpha) + k + 1) * (ONE / factorial(k))


def gegenbauer_norm(k: int, alpha) -> Scalar:
    """pi 2^{1-2 alpha} Gamma(k + 2 alpha) / (k! (k + alpha) Gamma(alpha)^2), 2 alpha integral."""
    alpha = rat(alpha)
    e = 1 - 2 * alpha
    if e.denominator != 1:
        raise ValueError("gegenbauer_norm needs 2*alpha to be an integer")
    g = gamma_half(alpha)
    num = Scalar.pi(1) * (rat(2) ** int(e)) * gamma_half(k + 2 * alpha)
    return num / (g * g) * (ONE / (factorial(k) * (k + alpha)))


# -- cartesian Hermite functions ---------------------------------------------------


def _bplus(w: GaussianWrapped, j: int) -> GaussianWrapped:
    """b+_{2i} = (x'_{2i} + 2 d_{2i-1})/2, b+_{2i-1} = (x'_{2i-1} - 2 d_{2i})/2."""
    half = rat(1) / 2
    if j % 2 == 0:
        return (w.mul_f(j) + w.d_f(j - 1).scale(2)).scale(half)
    return (w.mul_f(j) - w.d_f(j + 1).scale(2)).scale(half)


def cartesian_basis(m: int, n: int, occupation):
    """(a_1^+)^{k_1}...(b_{2n}^+)^{l_{2n}} exp(-R^2/2), unnormalised.

    Bosonic creation operators are applied as (x - d) without the sqrt(2)/2.
    Returns (psi, normsq) with normsq = 2^{|k|} k_1!...k_m! pi^{M/2}, the
    squared norm that makes the rescaled psi a unit vector.
    """
    ks, ls = occupation
    ks, ls = tuple(ks), tuple(ls)
    if len(ks) != m or len(ls) != 2 * n or any(k < 0 for k in ks) or any(l not in (0, 1) for l in ls):
        raise BadOccupation(f"bad occupation {occupation} for (m, n) = {(m, n)}")
    psi = wrap(SuperPolynomial.const(ONE, m, n))
    for j in range(2 * n, 0, -1):
        if ls[j - 1]:
            psi = _bplus(psi, j)
    for i in range(m, 0, -1):
        for _ in range(ks[i - 1]):
            psi = psi.mul_b(i) - psi.d_b(i)
    normsq = rat(2) ** sum(ks)
    for k in ks:
        normsq *= ifact(k)
    return psi, Scalar.s(m - 2 * n, normsq)


# -- spherical Hermite functions -------------------------------------------------


def _harmonic_of(H):
    if isinstance(H, HarmonicBlock):
        return H.assemble()
    return H


def raising(w: GaussianWrapped) -> GaussianWrapped:
    """(-nabla^2 - R^2 + 2E + M) on a wrapped function."""
    M = w.M
    return (-w.nabla2()) - w.mul_R2() + w.euler().scale(2) + w.scale(M)


def lowering(w: GaussianWrapped) -> GaussianWrapped:
    """(nabla^2 + R^2 + 2E + M) on a wrapped function."""
    M = w.M
    return w.nabla2() + w.mul_R2() + w.euler().scale(2) + w.scale(M)


def laguerre_route(j: int, H: SuperPolynomial, k: int) -> GaussianWrapped:
    """2^{2j} j! L_j^{M/2+k-1}(R^2) H exp(-R^2/2)."""
    M = H.M
    L = laguerre(j, rat(M) / 2 + k - 1)
    acc = H.zero()
    for c in reversed(L.coefficients):
        acc = acc.mul_R2() + H.scale(c)
    return wrap(acc.scale(4**j * factorial(j)))


def spherical_hermite(j: int, H, check_routes: bool = True) -> GaussianWrapped:
    """phi_j = (-nabla^2 - R^2 + 2E + M)^j H exp(-R^2/2) for a harmonic H."""
    H = _harmonic_of(H)
    if H.nabla2():
        raise HarmonicityViolated("input is not annihilated by the Laplacian")
    parts = H.homogeneous_parts()
    k = next(iter(parts)) if parts else 0
    phi = wrap(H)
    for _ in range(j):
        phi = raising(phi)
    if check_routes and (not bad_dimension(H.M) or H.m == 0):
        if laguerre_route(j, H, k) != phi:
            raise RouteMismatch(f"operator and Laguerre forms differ at j={j}, k={k}")
    return phi


def hamiltonian(w: GaussianWrapped) -> GaussianWrapped:
    """(-nabla^2 + R^2)/2."""
    return ((-w.nabla2()) + w.mul_R2()).scale(rat(1) / 2)


def oscillator_check(phi: GaussianWrapped) -> Scalar:
    """Eigenvalue of (-nabla^2 + R^2)/2 on phi; NotEigenfunction otherwise."""
    if not phi:
        raise NotEigenfunction("zero function")
    Hphi = hamiltonian(phi)
    key, v = next(iter(phi.poly.terms.items()))
    lam = as_scalar(Hphi.poly.terms.get(key, ZERO)) / as_scalar(v)
    if Hphi != phi.scale(lam):
        raise NotEigenfunction("not an eigenfunction of the oscillator")
    return lam


def lowering_factor(j: int, k: int, M: int) -> int:
    """-8 j (2j + M + 2k - 2)."""
    return -8 * j * (2 * j + M + 2 * k - 2)


__all__ = [
    "OrthoPoly", "cartesian_basis", "gegenbauer", "gegenbauer_inner", "gegenbauer_kernel_coefficients",
    "gegenbauer_norm", "hamiltonian", "hermite_1d", "hermite_inner", "hermite_norm", "laguerre",
    "laguerre_inner", "laguerre_norm", "laguerre_route", "lowering", "lowering_factor",
    "oscillator_check", "raising", "spherical_hermite",
]
