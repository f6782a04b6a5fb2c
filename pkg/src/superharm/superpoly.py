"""Polynomials on R^{m|2n}: R[x_1..x_m] tensored with the Grassmann algebra.

A term is keyed by ``(exps, bits)``: a tuple of bosonic exponents and a
fermionic bit set as in :mod:`superharm.grassmann`.  Bosonic variables commute
with everything, so products only pick up the fermionic merge sign.

Doubled mode carries a second copy (y, y') for kernels: bosonic exponents are
``(x_1..x_m, y_1..y_m)`` and fermionic bits follow the doubled Grassmann order.
Operators take ``part="x"`` or ``part="y"`` to choose the copy they act on.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations_with_replacement

from .errors import DegreeCapExceeded, ModeMismatch, NotOrthosymplectic
from .grassmann import (GrassmannElement, bits_of, deriv_sign, mono_sign, popcount,
                        symplectic_form, top_bits)
from .scalars import ONE, ZERO, Scalar, as_scalar, conj, join_signed, rat

DEGREE_CAP = 12


def _clean(terms):
    return {k: v for k, v in terms.items() if v}


def _acc(out, key, val):
    w = out.get(key)
    out[key] = val if w is None else w + val


class SuperPolynomial:
    __slots__ = ("terms", "m", "n", "doubled")

    def __init__(self, terms, m: int, n: int, doubled: bool = False):
        self.terms = terms
        self.m = m
        self.n = n
        self.doubled = doubled

    # -- construction ------------------------------------------------------

    @property
    def nb(self) -> int:
        return 2 * self.m if self.doubled else self.m

    @property
    def nf(self) -> int:
        return 4 * self.n if self.doubled else 2 * self.n

    @property
    def dims(self):
        return (self.m, self.n)

    @property
    def M(self) -> int:
        return self.m - 2 * self.n

    def _like(self, terms):
        return SuperPolynomial(terms, self.m, self.n, self.doubled)

    def zero(self):
        return self._like({})

    def one(self):
        return self._like({(self._zexp(), 0): ONE})

    def _zexp(self):
        return (0,) * self.nb

    def _check(self, other):
        if (other.m, other.n, other.doubled) != (self.m, self.n, self.doubled):
            raise ModeMismatch("polynomials live on different superspaces")

    @staticmethod
    def const(c, m, n, doubled=False):
        nb = 2 * m if doubled else m
        return SuperPolynomial({((0,) * nb, 0): c} if c else {}, m, n, doubled)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(other, self.m, self.n, self.doubled)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return self._like(_clean(out))

    __radd__ = __add__

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if not c:
            return self.zero()
        return self._like(_clean({k: v * c for k, v in self.terms.items()}))

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(other)
        return smul(self, other)

    def __rmul__(self, other):
        if not other:
            return self.zero()
        return self._like(_clean({k: other * v for k, v in self.terms.items()}))

    def __truediv__(self, c):
        return self.scale(1 / (c if not isinstance(c, int) else rat(c)))

    def __pow__(self, k: int):
        out = self.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SuperPolynomial):
            other = SuperPolynomial.const(other, self.m, self.n, self.doubled)
        if (other.m, other.n, other.doubled) != (self.m, self.n, self.doubled):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"SuperPolynomial({format_poly(self)})"

    def __str__(self):
        return format_poly(self)

    # -- structure -----------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) + popcount(b) for e, b in self.terms), default=-1)

    def homogeneous_parts(self):
        out = {}
        for (e, b), v in self.terms.items():
            d = sum(e) + popcount(b)
            out.setdefault(d, {})[(e, b)] = v
        return {d: self._like(t) for d, t in sorted(out.items())}

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(e) + popcount(b) for e, b in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def truncate(self, D: int):
        return self._like({(e, b): v for (e, b), v in self.terms.items() if sum(e) + popcount(b) <= D})

    def map_coefficients(self, fn):
        return self._like(_clean({k: fn(v) for k, v in self.terms.items()}))

    def constant_term(self):
        return self.terms.get((self._zexp(), 0), ZERO)

    def fermionic_part(self) -> GrassmannElement:
        """The Grassmann element of a polynomial with no bosonic content."""
        z = self._zexp()
        if any(e != z for e, _ in self.terms):
            raise ValueError("polynomial has bosonic content")
        return GrassmannElement({b: v for (_, b), v in self.terms.items()}, self.n, self.doubled)

    # -- operators -----------------------------------------------------------

    def _boff(self, part):
        return 0 if part == "x" else self.m

    def _foff(self, part):
        return 0 if part == "x" else 2 * self.n

    def d_b(self, i: int, part: str = "x"):
        """d/dx_i (1-based)."""
        idx = i - 1 + self._boff(part)
        out = {}
        for (e, b), v in self.terms.items():
            a = e[idx]
            if a:
                e2 = e[:idx] + (a - 1,) + e[idx + 1:]
                _acc(out, (e2, b), v * a)
        return self._like(_clean(out))

    def mul_b(self, i: int, part: str = "x", power: int = 1):
        idx = i - 1 + self._boff(part)
        out = {}
        for (e, b), v in self.terms.items():
            e2 = e[:idx] + (e[idx] + power,) + e[idx + 1:]
            out[(e2, b)] = v
        return self._like(out)

    def d_f(self, j: int, part: str = "x"):
        """Left derivative d/dx'_j (1-based)."""
        bit = j - 1 + self._foff(part)
        mask = 1 << bit
        out = {}
        for (e, b), v in self.terms.items():
            s = deriv_sign(b, bit)
            if s:
                out[(e, b ^ mask)] = v if s > 0 else -v
        return self._like(out)

    def mul_f(self, j: int, part: str = "x"):
        """Left multiplication by x'_j."""
        mask = 1 << (j - 1 + self._foff(part))
        out = {}
        for (e, b), v in self.terms.items():
            s = mono_sign(mask, b)
            if s:
                out[(e, b | mask)] = v if s > 0 else -v
        return self._like(out)

    def nabla2_b(self, part: str = "x"):
        off = self._boff(part)
        out = {}
        for (e, b), v in self.terms.items():
            for idx in range(off, off + self.m):
                a = e[idx]
                if a >= 2:
                    e2 = e[:idx] + (a - 2,) + e[idx + 1:]
                    _acc(out, (e2, b), v * (a * (a - 1)))
        return self._like(_clean(out))

    def nabla2_f(self, part: str = "x"):
        table = _lap_f_table(self.n, self._foff(part))
        out = {}
        for (e, b), v in self.terms.items():
            for b2, c in table(b):
                _acc(out, (e, b2), v * c)
        return self._like(_clean(out))

    def nabla2(self, part: str = "x"):
        """Super Laplacian sum d^2/dx_i^2 - 4 sum d/dx'_{2j-1} d/dx'_{2j}."""
        off = self._boff(part)
        table = _lap_f_table(self.n, self._foff(part))
        out = {}
        for (e, b), v in self.terms.items():
            for idx in range(off, off + self.m):
                a = e[idx]
                if a >= 2:
                    e2 = e[:idx] + (a - 2,) + e[idx + 1:]
                    _acc(out, (e2, b), v * (a * (a - 1)))
            for b2, c in table(b):
                _acc(out, (e, b2), v * c)
        return self._like(_clean(out))

    def mul_r2(self, part: str = "x"):
        off = self._boff(part)
        out = {}
        for (e, b), v in self.terms.items():
            for idx in range(off, off + self.m):
                e2 = e[:idx] + (e[idx] + 2,) + e[idx + 1:]
                _acc(out, (e2, b), v)
        return self._like(_clean(out))

    def mul_theta2(self, part: str = "x"):
        table = _theta_table(self.n, self._foff(part))
        out = {}
        for (e, b), v in self.terms.items():
            for b2, c in table(b):
                _acc(out, (e, b2), v * c)
        return self._like(_clean(out))

    def mul_R2(self, part: str = "x"):
        """Multiplication by R^2 = r^2 + theta^2."""
        off = self._boff(part)
        table = _theta_table(self.n, self._foff(part))
        out = {}
        for (e, b), v in self.terms.items():
            for idx in range(off, off + self.m):
                e2 = e[:idx] + (e[idx] + 2,) + e[idx + 1:]
                _acc(out, (e2, b), v)
            for b2, c in table(b):
                _acc(out, (e, b2), v * c)
        return self._like(_clean(out))

    def euler_b(self, part: str = "x"):
        off = self._boff(part)
        return self._like(_clean({(e, b): v * sum(e[off:off + self.m]) for (e, b), v in self.terms.items()}))

    def euler_f(self, part: str = "x"):
        mask = ((1 << (2 * self.n)) - 1) << self._foff(part)
        return self._like(_clean({(e, b): v * popcount(b & mask) for (e, b), v in self.terms.items()}))

    def euler(self, part: str = "x"):
        off = self._boff(part)
        mask = ((1 << (2 * self.n)) - 1) << self._foff(part)
        return self._like(_clean({(e, b): v * (sum(e[off:off + self.m]) + popcount(b & mask))
                                  for (e, b), v in self.terms.items()}))

    def star_f(self):
        """Star map on the fermionic factor of every term (single mode)."""
        if self.doubled:
            raise ModeMismatch("star is defined on the single algebra")
        n = self.n
        top = top_bits(n)
        out = {}
        for (e, b), v in self.terms.items():
            c = top ^ b
            f = rat(2) ** (popcount(b) - n) * mono_sign(b, c)
            out[(e, c)] = v * f
        return self._like(out)

    def tilde_f(self, part: str = "x"):
        from .grassmann import _tilde_bits
        off = self._foff(part)
        mask = ((1 << (2 * self.n)) - 1) << off
        out = {}
        for (e, b), v in self.terms.items():
            tb, s = _tilde_bits(b & mask, off)
            out[(e, tb | (b & ~mask))] = v * s
        return self._like(out)

    def berezin_f(self):
        """Top fermionic coefficient as a purely bosonic polynomial, times pi^{-n}."""
        top = top_bits(self.n)
        out = {}
        for (e, b), v in self.terms.items():
            if b == top:
                out[(e, 0)] = v
        return self._like(out).scale(Scalar.s(-2 * self.n)) if out else self.zero()

    def conj(self):
        return self.map_coefficients(conj)

    def eval_zero(self, part: str = "x"):
        """Set every variable of the chosen copy to zero."""
        if not self.doubled:
            return self.constant_term()
        boff, foff = self._boff(part), self._foff(part)
        fmask = ((1 << (2 * self.n)) - 1) << foff
        out = {}
        for (e, b), v in self.terms.items():
            if any(e[boff:boff + self.m]) or b & fmask:
                continue
            out[(e, b)] = v
        return self._like(out)


@lru_cache(maxsize=None)
def _lap_f_table(n, off):
    @lru_cache(maxsize=None)
    def table(b):
        res = []
        for j in range(n):
            b1 = 2 * j + off
            pair = 0b11 << b1
            if b & pair != pair:
                continue
            s = deriv_sign(b, b1 + 1)
            k2 = b ^ (1 << (b1 + 1))
            s *= deriv_sign(k2, b1)
            res.append((k2 ^ (1 << b1), -4 * s))
        return tuple(res)
    return table


@lru_cache(maxsize=None)
def _theta_table(n, off):
    @lru_cache(maxsize=None)
    def table(b):
        res = []
        for j in range(n):
            pair = 0b11 << (2 * j + off)
            if b & pair:
                continue
            res.append((b | pair, -mono_sign(pair, b)))
        return tuple(res)
    return table


def smul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    a._check(b)
    out = {}
    for (ea, ba), va in a.terms.items():
        for (eb, bb), vb in b.terms.items():
            s = mono_sign(ba, bb)
            if not s:
                continue
            key = (tuple(x + y for x, y in zip(ea, eb)), ba | bb)
            p = va * vb
            _acc(out, key, p if s > 0 else -p)
    return a._like(_clean(out))


def sadd(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a + b


# -- named elements -----------------------------------------------------------


def xvar(i, m, n, part="x", doubled=None, coef=ONE):
    doubled = part == "y" if doubled is None else doubled
    nb = 2 * m if doubled else m
    idx = i - 1 + (m if part == "y" else 0)
    e = tuple(1 if k == idx else 0 for k in range(nb))
    return SuperPolynomial({(e, 0): coef}, m, n, doubled)


def fvar(j, m, n, part="x", doubled=None, coef=ONE):
    doubled = part == "y" if doubled is None else doubled
    nb = 2 * m if doubled else m
    bit = j - 1 + (2 * n if part == "y" else 0)
    return SuperPolynomial({((0,) * nb, 1 << bit): coef}, m, n, doubled)


def r2(m, n, part="x", doubled=None):
    doubled = part == "y" if doubled is None else doubled
    return SuperPolynomial.const(ONE, m, n, doubled).mul_r2(part)


def theta2_poly(m, n, part="x", doubled=None):
    doubled = part == "y" if doubled is None else doubled
    return SuperPolynomial.const(ONE, m, n, doubled).mul_theta2(part)


def R2(m, n, part="x", doubled=None):
    """R^2 = r^2 + theta^2."""
    doubled = part == "y" if doubled is None else doubled
    return SuperPolynomial.const(ONE, m, n, doubled).mul_R2(part)


def nabla2(a: SuperPolynomial, part="x"):
    return a.nabla2(part)


def euler(a: SuperPolynomial, part="x"):
    return a.euler(part)


def from_grassmann(g: GrassmannElement, m: int) -> SuperPolynomial:
    nb = 2 * m if g.doubled else m
    return SuperPolynomial({((0,) * nb, b): v for b, v in g.terms.items()}, m, g.n, g.doubled)


def embed(p: SuperPolynomial, part="x") -> SuperPolynomial:
    """Copy a single-mode polynomial into the x or y half of the doubled space."""
    if p.doubled:
        raise ModeMismatch("already doubled")
    m, n = p.m, p.n
    out = {}
    for (e, b), v in p.terms.items():
        if part == "x":
            out[(e + (0,) * m, b)] = v
        else:
            out[((0,) * m + e, b << (2 * n))] = v
    return SuperPolynomial(out, m, n, True)


def exp_nilpotent(a: SuperPolynomial, order: int | None = None) -> SuperPolynomial:
    """exp(a) for an even element whose powers eventually vanish, or truncated
    at total degree ``order`` when given (a must then have no constant term)."""
    out = a.one()
    term = a.one()
    k = 0
    while True:
        k += 1
        term = (term * a).scale(rat(1) / k)
        if order is not None:
            term = term.truncate(order)
        if not term:
            return out
        out = out + term


# -- enumeration -------------------------------------------------------------


def check_cap(max_degree, allow_large=False):
    if max_degree > DEGREE_CAP and not allow_large:
        raise DegreeCapExceeded(f"degree {max_degree} exceeds cap {DEGREE_CAP}")


def bosonic_exponents(m: int, degree: int):
    """Exponent tuples of total degree ``degree`` in graded-lex order."""
    out = []
    for combo in combinations_with_replacement(range(m), degree):
        e = [0] * m
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomial_keys(m, n, degree, exact=True, allow_large=False):
    """Keys (exps, bits) of monomials of degree ``degree`` (or <= when not exact)."""
    check_cap(degree, allow_large)
    degs = [degree] if exact else range(degree + 1)
    out = []
    fb = {}
    for b in range(1 << (2 * n)):
        fb.setdefault(popcount(b), []).append(b)
    for d in degs:
        for fd in range(0, min(d, 2 * n) + 1):
            if m == 0 and fd != d:
                continue
            for e in bosonic_exponents(m, d - fd) if m else [()]:
                for b in fb.get(fd, []):
                    out.append((e, b))
    return out


def monomials(m, n, degree, exact=False, allow_large=False):
    return [SuperPolynomial({k: ONE}, m, n) for k in monomial_keys(m, n, degree, exact, allow_large)]


def dim_P(m, n, k):
    """dim of homogeneous degree-k polynomials on R^{m|2n}."""
    if k < 0:
        return 0
    from math import comb
    total = 0
    for fd in range(0, min(k, 2 * n) + 1):
        bd = k - fd
        nb = comb(bd + m - 1, m - 1) if m else (1 if bd == 0 else 0)
        total += comb(2 * n, fd) * nb
    return total


# -- sl2 check -----------------------------------------------------------------


def check_sl2(m: int, n: int, max_degree: int, allow_large=False):
    """Verify [H,E] = 2E, [H,F] = -2F, [E,F] = H on all monomials."""
    M = m - 2 * n
    half = rat(1) / 2

    def E(p):
        return p.mul_R2().scale(half)

    def F(p):
        return p.nabla2().scale(-half)

    def H(p):
        return p.euler() + p.scale(rat(M) / 2)

    failures = []
    count = 0
    for key in monomial_keys(m, n, max_degree, exact=False, allow_large=allow_large):
        p = SuperPolynomial({key: ONE}, m, n)
        count += 1
        if H(E(p)) - E(H(p)) != E(p).scale(2):
            failures.append(("[H,E]=2E", key))
        if H(F(p)) - F(H(p)) != F(p).scale(-2):
            failures.append(("[H,F]=-2F", key))
        if E(F(p)) - F(E(p)) != H(p):
            failures.append(("[E,F]=H", key))
    return {"monomials": count, "failures": failures, "pass": not failures}


# -- orthosymplectic action ----------------------------------------------------


def metric_G(m: int, n: int):
    G = [[0] * (m + 2 * n) for _ in range(m + 2 * n)]
    for i in range(m):
        G[i][i] = 1
    J = symplectic_form(n)
    for i in range(2 * n):
        for j in range(2 * n):
            G[m + i][m + j] = J[i][j]
    return G


def is_orthosymplectic(A, m, n) -> bool:
    from .grassmann import matmul, transpose
    N = m + 2 * n
    if len(A) != N or any(len(r) != N for r in A):
        return False
    for i in range(N):
        for j in range(N):
            if (i < m) != (j < m) and A[i][j]:
                return False
    return matmul(matmul(transpose(A), metric_G(m, n)), A) == metric_G(m, n)


def random_orthogonal(m: int, rng, bound: int = 3):
    """Rational orthogonal matrix (I - K)(I + K)^{-1} from a random skew K."""
    from sympy import QQ
    from sympy.polys.matrices import DomainMatrix
    K = [[QQ(0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            c = QQ(rng.randint(-bound, bound), rng.randint(1, bound))
            K[i][j], K[j][i] = c, -c
    I = DomainMatrix.eye(m, QQ)
    Km = DomainMatrix(K, (m, m), QQ)
    Q = ((I - Km) * (I + Km).inv()).to_list()
    return [[rat(x) for x in row] for row in Q]


def random_orthosymplectic(m: int, n: int, rng):
    """Block diagonal element of O(m) x Sp(2n) with rational entries."""
    from .grassmann import random_symplectic
    N = m + 2 * n
    A = [[rat(0)] * N for _ in range(N)]
    if m:
        O = random_orthogonal(m, rng)
        for i in range(m):
            for j in range(m):
                A[i][j] = O[i][j]
    if n:
        S = random_symplectic(n, rng)
        for i in range(2 * n):
            for j in range(2 * n):
                A[m + i][m + j] = rat(S[i][j])
    return A


def osp_apply(A, a: SuperPolynomial, validate: bool = False) -> SuperPolynomial:
    """(A f)(x) = f(A^T x) for A in O(m) x Sp(2n) given as a block matrix."""
    m, n = a.m, a.n
    if a.doubled:
        raise ModeMismatch("osp_apply acts on single-mode polynomials")
    if validate and not is_orthosymplectic(A, m, n):
        raise NotOrthosymplectic("A^T G A != G or blocks mix bosons and fermions")
    N = m + 2 * n
    images = []
    for i in range(N):
        terms = {}
        for j in range(N):
            c = A[j][i]
            if not c:
                continue
            if j < m:
                e = tuple(1 if k == j else 0 for k in range(m))
                terms[(e, 0)] = rat(c) if not isinstance(c, Scalar) else c
            else:
                terms[((0,) * m, 1 << (j - m))] = rat(c) if not isinstance(c, Scalar) else c
        images.append(SuperPolynomial(terms, m, n))
    cache = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = images[i] ** k
        return cache[key]

    out = a.zero()
    for (e, b), v in a.terms.items():
        prod = a.one()
        for i, k in enumerate(e):
            if k:
                prod = prod * power(i, k)
        for j in bits_of(b):
            prod = prod * images[m + j]
        out = out + prod.scale(v)
    return out


# -- Gaussian-wrapped values -----------------------------------------------------


class GaussianWrapped:
    """poly * exp(-tag * r^2 / 2); any fermionic Gaussian is already inside poly."""

    __slots__ = ("poly", "tag")

    def __init__(self, poly: SuperPolynomial, tag: int = 1):
        self.poly = poly
        self.tag = tag

    @property
    def m(self):
        return self.poly.m

    @property
    def n(self):
        return self.poly.n

    @property
    def M(self):
        return self.poly.M

    def _check(self, other):
        from .errors import GaussianPowerMismatch
        if self.tag != other.tag:
            raise GaussianPowerMismatch("wrapped values carry different Gaussian powers")

    def __add__(self, other):
        self._check(other)
        return GaussianWrapped(self.poly + other.poly, self.tag)

    def __sub__(self, other):
        self._check(other)
        return GaussianWrapped(self.poly - other.poly, self.tag)

    def __neg__(self):
        return GaussianWrapped(-self.poly, self.tag)

    def scale(self, c):
        return GaussianWrapped(self.poly.scale(c), self.tag)

    def __mul__(self, other):
        if isinstance(other, GaussianWrapped):
            return GaussianWrapped(self.poly * other.poly, self.tag + other.tag)
        if isinstance(other, SuperPolynomial):
            return GaussianWrapped(self.poly * other, self.tag)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, SuperPolynomial):
            return GaussianWrapped(other * self.poly, self.tag)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, GaussianWrapped) and self.tag == other.tag and self.poly == other.poly

    def __bool__(self):
        return bool(self.poly)

    def __repr__(self):
        g = "r^2/2" if self.tag == 1 else f"{self.tag}*r^2/2"
        return f"GaussianWrapped(({self.poly}) * exp(-{g}))"

    # operators act on the full function, Gaussian included
    def d_b(self, i):
        g = self.tag
        return GaussianWrapped(self.poly.d_b(i) - self.poly.mul_b(i).scale(g), g)

    def mul_b(self, i):
        return GaussianWrapped(self.poly.mul_b(i), self.tag)

    def d_f(self, j):
        return GaussianWrapped(self.poly.d_f(j), self.tag)

    def mul_f(self, j):
        return GaussianWrapped(self.poly.mul_f(j), self.tag)

    def nabla2(self):
        P, g, m = self.poly, self.tag, self.poly.m
        out = P.nabla2() - P.euler_b().scale(2 * g) - P.scale(g * m) + P.mul_r2().scale(g * g)
        return GaussianWrapped(out, g)

    def euler(self):
        P, g = self.poly, self.tag
        return GaussianWrapped(P.euler() - P.mul_r2().scale(g), g)

    def mul_R2(self):
        return GaussianWrapped(self.poly.mul_R2(), self.tag)


def fermionic_gaussian(m, n, c=-rat(1) / 2) -> SuperPolynomial:
    """exp(c * theta^2), expanded."""
    return exp_nilpotent(theta2_poly(m, n, doubled=False).scale(c))


def wrap(P: SuperPolynomial) -> GaussianWrapped:
    """P * exp(-R^2/2)."""
    return GaussianWrapped(P * fermionic_gaussian(P.m, P.n), 1)


def unwrap(w: GaussianWrapped) -> SuperPolynomial:
    """Inverse of :func:`wrap` for tag 1."""
    if w.tag != 1:
        from .errors import GaussianPowerMismatch
        raise GaussianPowerMismatch("expected exp(-R^2/2)")
    return w.poly * fermionic_gaussian(w.m, w.n, rat(1) / 2)


# -- formatting ------------------------------------------------------------------


def _mono_name(p: SuperPolynomial, e, b):
    names = []
    m, n = p.m, p.n
    for idx, a in enumerate(e):
        if not a:
            continue
        v = f"x{idx + 1}" if idx < m else f"y{idx - m + 1}"
        names.append(v if a == 1 else f"{v}^{a}")
    for i in bits_of(b):
        names.append(f"x'{i + 1}" if i < 2 * n else f"y'{i - 2 * n + 1}")
    return "*".join(names)


def format_poly(p: SuperPolynomial) -> str:
    if not p.terms:
        return "0"
    keys = sorted(p.terms, key=lambda k: (-(sum(k[0]) + popcount(k[1])), tuple(-x for x in k[0]), bits_of(k[1])))
    parts = []
    for e, b in keys:
        mono = _mono_name(p, e, b)
        c = str(p.terms[(e, b)])
        if not mono:
            parts.append(c)
        elif c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"({c})*{mono}" if " " in c else f"{c}*{mono}")
    return join_signed(parts)


def poly_to_json(p: SuperPolynomial):
    out = []
    for (e, b), v in sorted(p.terms.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        out.append({"exps": list(e), "fermions": [i + 1 for i in bits_of(b)],
                    "coef": as_scalar(v).to_json()})
    return {"m": p.m, "n": p.n, "doubled": p.doubled, "terms": out}
