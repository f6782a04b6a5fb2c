"""Dunkl operators for finite reflection groups, in exact rational arithmetic.

Roots are stored at whatever rational scale is convenient.  Both the
reflection r_a and the divided-difference term a_i (f - f r_a)/<a, x> are
unchanged under a -> c a, so the usual normalisation <a, a> = 2 (irrational for
the coordinate roots) is never needed.
"""
from __future__ import annotations

import json
from itertools import combinations

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import NotHomogeneous, ZeroRoot
from .scalars import ONE, ZERO, factorial, rat
from .superpoly import SuperPolynomial, bosonic_exponents


def _poly(terms, m):
    return SuperPolynomial({k: v for k, v in terms.items() if v}, m, 0)


def monomial(e) -> SuperPolynomial:
    return SuperPolynomial({(tuple(e), 0): ONE}, len(e), 0)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _parallel(a, b):
    """True when b is a nonzero rational multiple of a."""
    i = next(k for k, x in enumerate(a) if x)
    if not b[i]:
        return False
    c = rat(b[i]) / a[i]
    return all(rat(y) == c * x for x, y in zip(a, b))


def reflection_matrix(alpha):
    """r_a = I - 2 a a^T / <a, a>."""
    alpha = [rat(x) for x in alpha]
    nn = _dot(alpha, alpha)
    if not nn:
        raise ZeroRoot("the zero vector defines no reflection")
    m = len(alpha)
    return [[int(i == j) - 2 * alpha[i] * alpha[j] / nn for j in range(m)] for i in range(m)]


def reflect_vector(alpha, v):
    alpha = [rat(x) for x in alpha]
    nn = _dot(alpha, alpha)
    if not nn:
        raise ZeroRoot("the zero vector defines no reflection")
    c = 2 * _dot(alpha, v) / nn
    return [rat(x) - c * a for x, a in zip(v, alpha)]


def reflect(alpha, p: SuperPolynomial) -> SuperPolynomial:
    """p(r_a x): each x_j becomes x_j - 2 a_j <a, x>/<a, a>."""
    m = p.m
    R = reflection_matrix(alpha)
    images = [_poly({(tuple(int(k == j) for k in range(m)), 0): R[i][j] for j in range(m)}, m) for i in range(m)]
    out = p.zero()
    cache = {}
    for (e, _), v in p.terms.items():
        prod = p.one()
        for i, k in enumerate(e):
            if k:
                if (i, k) not in cache:
                    cache[(i, k)] = images[i] ** k
                prod = prod * cache[(i, k)]
        out = out + prod.scale(v)
    return out


def divide_linear(f: SuperPolynomial, alpha) -> SuperPolynomial:
    """Exact quotient f / <a, x>; raises ArithmeticError on a nonzero remainder."""
    m = f.m
    alpha = [rat(x) for x in alpha]
    piv = next(i for i, x in enumerate(alpha) if x)
    # lex order with the pivot variable first: the leading term always carries x_piv
    order = lambda key: (key[0][piv],) + key[0]  # noqa: E731
    rem = dict(f.terms)
    quot = {}
    while rem:
        key = max(rem, key=order)
        c = rem.pop(key)
        e = key[0]
        if not e[piv]:
            raise ArithmeticError("polynomial is not divisible by the linear form")
        qe = list(e)
        qe[piv] -= 1
        qc = c / alpha[piv]
        quot[(tuple(qe), 0)] = quot.get((tuple(qe), 0), ZERO) + qc
        for j, a in enumerate(alpha):
            if not a or j == piv:
                continue
            te = list(qe)
            te[j] += 1
            tk = (tuple(te), 0)
            w = rem.get(tk, ZERO) - qc * a
            if w:
                rem[tk] = w
            else:
                rem.pop(tk, None)
    return _poly(quot, m)


class RootSystem:
    """Positive roots, their orbits under the reflection group, and a multiplicity
    constant on orbits."""

    def __init__(self, positive_roots, kappa, name: str = ""):
        self.roots = [tuple(rat(x) for x in a) for a in positive_roots]
        if not self.roots:
            raise ValueError("empty root system")
        self.m = len(self.roots[0])
        for a in self.roots:
            if not any(a):
                raise ZeroRoot("zero root")
        self.name = name
        self.orbit_of = self._orbits()
        norbits = max(self.orbit_of) + 1
        if isinstance(kappa, dict):
            k = {int(o): rat(v) for o, v in kappa.items()}
        elif isinstance(kappa, (list, tuple)):
            k = {o: rat(v) for o, v in enumerate(kappa)}
        else:
            k = {o: rat(kappa) for o in range(norbits)}
        missing = set(range(norbits)) - set(k)
        if missing:
            raise ValueError(f"no multiplicity given for orbits {sorted(missing)}")
        self.kappa = k
        self._cache = {}

    def _find(self, v):
        for idx, a in enumerate(self.roots):
            if _parallel(a, v):
                return idx
        return None

    def _orbits(self):
        parent = list(range(len(self.roots)))

        def root(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for beta in self.roots:
            for i, a in enumerate(self.roots):
                j = self._find(reflect_vector(beta, a))
                if j is None:
                    raise ValueError("the roots are not closed under their reflections")
                parent[root(i)] = root(j)
        labels, out = {}, []
        for i in range(len(self.roots)):
            r = root(i)
            labels.setdefault(r, len(labels))
            out.append(labels[r])
        return out

    @property
    def norbits(self) -> int:
        return max(self.orbit_of) + 1

    def kappa_of(self, idx: int):
        return self.kappa[self.orbit_of[idx]]

    @property
    def gamma(self):
        return sum((self.kappa_of(i) for i in range(len(self.roots))), ZERO)

    @property
    def mu(self):
        """Dunkl dimension m + 2 gamma."""
        return self.m + 2 * self.gamma

    def with_kappa(self, kappa) -> "RootSystem":
        return RootSystem(self.roots, kappa, self.name)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def z2(m: int, kappa=0):
        return RootSystem([tuple(int(i == j) for j in range(m)) for i in range(m)], kappa, f"Z2^{m}")

    @staticmethod
    def type_a(r: int, kappa=0):
        """A_r acting on Q^{r+1}."""
        m = r + 1
        roots = [tuple(int(k == i) - int(k == j) for k in range(m)) for i, j in combinations(range(m), 2)]
        return RootSystem(roots, kappa, f"A{r}")

    @staticmethod
    def type_b(m: int, kappa=0):
        roots = []
        for i, j in combinations(range(m), 2):
            roots.append(tuple(int(k == i) - int(k == j) for k in range(m)))
            roots.append(tuple(int(k == i) + int(k == j) for k in range(m)))
        roots += [tuple(int(k == i) for k in range(m)) for i in range(m)]
        return RootSystem(roots, kappa, f"B{m}")

    @staticmethod
    def type_d(m: int, kappa=0):
        roots = []
        for i, j in combinations(range(m), 2):
            roots.append(tuple(int(k == i) - int(k == j) for k in range(m)))
            roots.append(tuple(int(k == i) + int(k == j) for k in range(m)))
        return RootSystem(roots, kappa, f"D{m}")

    @staticmethod
    def from_json(source):
        """{"roots": [[rat, ...]], "kappa": {orbit: rat}}; rationals may be strings like "1/2"."""
        if isinstance(source, (str, bytes)) and not str(source).lstrip().startswith("{"):
            with open(source) as fh:
                data = json.load(fh)
        elif isinstance(source, dict):
            data = source
        else:
            data = json.loads(source)
        roots = [[rat(x) for x in r] for r in data["roots"]]
        return RootSystem(roots, data.get("kappa", 0), data.get("name", ""))

    def to_json(self) -> dict:
        return {"name": self.name, "roots": [[str(x) for x in a] for a in self.roots],
                "kappa": {str(o): str(v) for o, v in sorted(self.kappa.items())}}

    # -- operators on monomials ---------------------------------------------

    def _T_monomial(self, i: int, e: tuple) -> dict:
        key = (i, e)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f = monomial(e)
        out = f.d_b(i + 1)
        for idx, a in enumerate(self.roots):
            k = self.kappa_of(idx)
            if not k or not a[i]:
                continue
            diff = f - reflect(a, f)
            if diff:
                out = out + divide_linear(diff, a).scale(k * a[i])
        self._cache[key] = out.terms
        return out.terms


def dunkl_T(i: int, p: SuperPolynomial, rs: RootSystem) -> SuperPolynomial:
    """T_i p = d_i p + sum_a kappa_a a_i (p - p r_a)/<a, x>, with 1-based i."""
    acc = {}
    for (e, _), v in p.terms.items():
        for key, c in rs._T_monomial(i - 1, e).items():
            acc[key] = acc.get(key, ZERO) + c * v
    return _poly(acc, p.m)


def dunkl_laplacian(p: SuperPolynomial, rs: RootSystem) -> SuperPolynomial:
    acc = p.zero()
    for i in range(1, rs.m + 1):
        acc = acc + dunkl_T(i, dunkl_T(i, p, rs), rs)
    return acc


def exp_laplacian(p: SuperPolynomial, rs: RootSystem, c) -> SuperPolynomial:
    """exp(c Delta_kappa) p, a finite sum."""
    c = rat(c)
    acc = p.zero()
    term = p
    j = 0
    while term:
        acc = acc + term.scale(c**j / factorial(j))
        term = dunkl_laplacian(term, rs)
        j += 1
    return acc


def fischer_kappa(p: SuperPolynomial, q: SuperPolynomial, rs: RootSystem):
    """[p, q]_kappa = (p(T/2) q)(0)."""
    acc = ZERO
    for (e, _), v in p.terms.items():
        if sum(e) > q.degree():
            continue
        r = q
        for i, k in enumerate(e):
            for _ in range(k):
                r = dunkl_T(i + 1, r, rs)
        c = r.constant_term()
        if c:
            acc += v * c / 2 ** sum(e)
    return acc


def rosler_hermite(p: SuperPolynomial, rs: RootSystem) -> SuperPolynomial:
    """2^{deg p} exp(-Delta_kappa/4) p for homogeneous p."""
    if not p.is_homogeneous():
        raise NotHomogeneous("the generalized Hermite polynomial needs a homogeneous input")
    d = max(p.degree(), 0)
    return exp_laplacian(p, rs, -rat(1) / 4).scale(rat(2) ** d)


def fischer_orthogonal_basis(rs: RootSystem, degree: int):
    """Gram-Schmidt of monomials under the Fischer pairing, degree by degree.

    Different degrees are orthogonal automatically; returns (p, [p, p]_kappa).
    """
    out = []
    for d in range(degree + 1):
        level = []
        for e in bosonic_exponents(rs.m, d):
            v = monomial(e)
            for u, nu in level:
                c = fischer_kappa(v, u, rs)
                if c:
                    v = v - u.scale(c / nu)
            nv = fischer_kappa(v, v, rs)
            if not nv:
                raise ArithmeticError("degenerate Fischer pairing; kappa is singular")
            level.append((v, nv))
        out.extend(level)
    return out


# -- checks ------------------------------------------------------------------------------


def all_monomials(m: int, degree: int):
    return [monomial(e) for d in range(degree + 1) for e in bosonic_exponents(m, d)]


def commutativity_check(rs: RootSystem, degree: int):
    """First (i, j, monomial) with T_i T_j != T_j T_i, or None."""
    for p in all_monomials(rs.m, degree):
        for i in range(1, rs.m + 1):
            for j in range(i + 1, rs.m + 1):
                if dunkl_T(i, dunkl_T(j, p, rs), rs) != dunkl_T(j, dunkl_T(i, p, rs), rs):
                    return (i, j, str(p))
    return None


def sl2_check(rs: RootSystem, degree: int):
    """E = r^2/2, F = -Delta_kappa/2, H = Euler + mu/2 on monomials; first failure or None."""
    half = rat(1) / 2
    mu = rs.mu

    def E(p):
        return p.mul_r2().scale(half)

    def F(p):
        return dunkl_laplacian(p, rs).scale(-half)

    def H(p):
        return p.euler() + p.scale(mu * half)

    for p in all_monomials(rs.m, degree):
        if H(E(p)) - E(H(p)) != E(p).scale(2):
            return ("[H,E]", str(p))
        if H(F(p)) - F(H(p)) != F(p).scale(-2):
            return ("[H,F]", str(p))
        if E(F(p)) - F(E(p)) != H(p):
            return ("[E,F]", str(p))
    return None


def _matrix_of(images, m: int, target_degree: int):
    cols = {e: c for c, e in enumerate(bosonic_exponents(m, target_degree))}
    rows = []
    for img in images:
        row = [QQ(0)] * len(cols)
        for (e, _), v in img.terms.items():
            row[cols[e]] = QQ(int(v.numerator), int(v.denominator))
        rows.append(row)
    return rows, len(cols)


def dunkl_harmonics(rs: RootSystem, k: int):
    """A basis of ker Delta_kappa in degree k."""
    mons = [monomial(e) for e in bosonic_exponents(rs.m, k)]
    if k < 2:
        return mons
    rows, ncols = _matrix_of([dunkl_laplacian(p, rs) for p in mons], rs.m, k - 2)
    # rows index the monomials; the left nullspace gives kernel combinations
    A = DomainMatrix(rows, (len(mons), ncols), QQ).transpose()
    null = A.nullspace().to_Matrix()
    out = []
    for r in range(null.rows):
        v = SuperPolynomial.const(ZERO, rs.m, 0)
        for c, p in enumerate(mons):
            x = null[r, c]
            if x:
                v = v + p.scale(rat(int(x.p), int(x.q)))
        out.append(v)
    return out


def classical_harmonic_dim(m: int, k: int) -> int:
    from math import comb
    top = comb(k + m - 1, m - 1)
    return top - (comb(k + m - 3, m - 1) if k >= 2 else 0)


def dimension_check(rs: RootSystem, kmax: int):
    """[(k, dim ker Delta_kappa, classical dim, all annihilated)]."""
    out = []
    for k in range(kmax + 1):
        H = dunkl_harmonics(rs, k)
        annihilated = all(not dunkl_laplacian(h, rs) for h in H)
        out.append((k, len(H), classical_harmonic_dim(rs.m, k), annihilated))
    return out


def rosler_gram(rs: RootSystem, degree: int):
    """Fischer Gram of exp(Delta/4) H_nu over the orthogonal basis; (matrix, diagonal ok, roundtrip ok)."""
    basis = fischer_orthogonal_basis(rs, degree)
    imgs = []
    roundtrip = True
    for p, _ in basis:
        H = rosler_hermite(p, rs)
        back = exp_laplacian(H, rs, rat(1) / 4)
        roundtrip &= back == p.scale(rat(2) ** max(p.degree(), 0))
        imgs.append(back)
    G = [[fischer_kappa(a, b, rs) for b in imgs] for a in imgs]
    N = len(G)
    diag = all(not G[i][j] for i in range(N) for j in range(N) if i != j) and all(G[i][i] for i in range(N))
    return G, diag, roundtrip


def random_kappa(rs: RootSystem, rng, bound: int = 3):
    """Nonnegative rational multiplicities, one per orbit."""
    return {o: rat(rng.randint(0, 4 * bound), rng.randint(1, 4)) for o in range(rs.norbits)}


__all__ = [
    "RootSystem", "all_monomials", "classical_harmonic_dim", "commutativity_check", "dimension_check",
    "divide_linear", "dunkl_T", "dunkl_harmonics", "dunkl_laplacian", "exp_laplacian", "fischer_kappa",
    "fischer_orthogonal_basis", "monomial", "random_kappa", "reflect", "reflect_vector", "reflection_matrix",
    "rosler_gram", "rosler_hermite", "sl2_check",
]
