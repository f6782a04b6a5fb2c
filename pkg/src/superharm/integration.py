"""Exact integrals: sphere and Gaussian moments, Berezin, supersphere.

Two independent routes to the supersphere integral are provided: the
iterated-Laplacian (Pizzetti) sum and the radial-derivative form that combines
an ordinary sphere integral with a Berezin integral.  Gaussian integrals over
the whole superspace likewise have a Pizzetti-based route and a direct route.
"""
from __future__ import annotations

from functools import lru_cache

from .errors import BadDimension, MismatchAgainstPizzetti
from .grassmann import GrassmannElement, berezin, gmul, theta2
from .scalars import ONE, Scalar, falling, factorial, gamma_half, rat, rgamma_half
from .superpoly import SuperPolynomial, fermionic_gaussian


@lru_cache(maxsize=None)
def sphere_moment(m: int, exps: tuple) -> Scalar:
    """Integral of x^alpha over the unit sphere S^{m-1}."""
    if m < 1:
        raise BadDimension("the sphere S^{m-1} needs m >= 1")
    exps = tuple(exps)
    if any(a % 2 for a in exps):
        return Scalar()
    num = Scalar.of(2)
    for a in exps:
        num = num * gamma_half(rat(a + 1) / 2)
    for _ in range(m - len(exps)):
        num = num * gamma_half(rat(1) / 2)
    return num / gamma_half(rat(sum(exps) + m) / 2)


@lru_cache(maxsize=None)
def gaussian_moment_b(m: int, exps: tuple) -> Scalar:
    """Integral of x^alpha exp(-r^2) over R^m."""
    exps = tuple(exps) + (0,) * (m - len(exps))
    if any(a % 2 for a in exps):
        return Scalar()
    out = Scalar.of(1)
    for a in exps:
        out = out * gamma_half(rat(a + 1) / 2)
    return out


def sphere_integral(p: SuperPolynomial) -> Scalar:
    """Sphere integral of a purely bosonic polynomial."""
    acc = Scalar()
    for (e, b), v in p.terms.items():
        if b:
            raise ValueError("sphere_integral expects a bosonic polynomial")
        mo = sphere_moment(p.m, e)
        if mo:
            acc = acc + mo * v
    return acc


def bosonic_gaussian_integral(p: SuperPolynomial) -> Scalar:
    """Integral of p exp(-r^2) for a purely bosonic polynomial."""
    acc = Scalar()
    for (e, b), v in p.terms.items():
        if b:
            raise ValueError("expected a bosonic polynomial")
        mo = gaussian_moment_b(p.m, e)
        if mo:
            acc = acc + mo * v
    return acc


def pizzetti_coefficient(M: int, k: int) -> Scalar:
    """2 pi^{M/2} / (4^k k! Gamma(k + M/2)); zero where 1/Gamma vanishes."""
    return Scalar.s(M, 2) * rgamma_half(rat(M) / 2 + k) * (ONE / (4**k * factorial(k)))


def pizzetti(f: SuperPolynomial) -> Scalar:
    """Supersphere integral as sum_k c_k (nabla^{2k} f)(0)."""
    if f.doubled:
        raise ValueError("use pizzetti_x for doubled polynomials")
    M = f.M
    acc = Scalar()
    L = f
    k = 0
    while L:
        c0 = L.constant_term()
        if c0:
            acc = acc + pizzetti_coefficient(M, k) * c0
        L = L.nabla2()
        k += 1
    return acc


def pizzetti_x(f: SuperPolynomial) -> SuperPolynomial:
    """Supersphere integral over the x-copy of a doubled polynomial; the result
    is a polynomial in the y-copy."""
    M = f.M
    acc = f.zero()
    L = f
    k = 0
    while L:
        z = L.eval_zero("x")
        if z:
            acc = acc + z.scale(pizzetti_coefficient(M, k))
        L = L.nabla2("x")
        k += 1
    return acc


@lru_cache(maxsize=None)
def _theta_powers(n):
    out = [GrassmannElement.const(ONE, n)]
    t2 = theta2(n)
    for _ in range(n):
        out.append(gmul(out[-1], t2))
    return out


def supersphere_alt(f: SuperPolynomial, check: bool = True) -> Scalar:
    """sum_j int_{S^{m-1}} dsigma int_B ((-1)^j theta^{2j}/j!) [(d/dr^2)^j r^{m-2} f]_{r=1}.

    Each bosonic monomial x^alpha is read as r^{|alpha|} xi^alpha on the sphere.
    """
    m, n = f.m, f.n
    if m < 1:
        raise BadDimension("the radial form of the supersphere integral needs m >= 1")
    groups = {}
    for (e, b), v in f.terms.items():
        groups.setdefault(e, {})[b] = v
    powers = _theta_powers(n)
    acc = Scalar()
    for e, fterms in groups.items():
        mo = sphere_moment(m, e)
        if not mo:
            continue
        c_alpha = GrassmannElement(fterms, n)
        a = rat(sum(e) + m - 2) / 2
        for j in range(n + 1):
            fall = falling(a, j)
            if not fall:
                continue
            bz = berezin(gmul(powers[j], c_alpha))
            if not bz:
                continue
            sign = -1 if j % 2 else 1
            acc = acc + mo * bz * (fall * sign / factorial(j))
    if check:
        pz = pizzetti(f)
        if pz != acc:
            raise MismatchAgainstPizzetti(f"radial form {acc} != Pizzetti form {pz}")
    return acc


def gaussian_super(f: SuperPolynomial) -> Scalar:
    """Integral of f exp(-R^2) over R^{m|2n} through 1/2 Gamma((k+M)/2) int_SS f_k."""
    M = f.M
    acc = Scalar()
    for k, part in f.homogeneous_parts().items():
        # odd components have vanishing Pizzetti value and never reach Gamma
        pz = pizzetti(part)
        if not pz:
            continue
        acc = acc + gamma_half(rat(k + M) / 2) * pz * (ONE / 2)
    return acc


def gaussian_super_direct(f: SuperPolynomial) -> Scalar:
    """Integral of f exp(-R^2): expand exp(-theta^2), Berezin, then bosonic moments."""
    g = f * fermionic_gaussian(f.m, f.n, -ONE)
    return bosonic_gaussian_integral(g.berezin_f())
