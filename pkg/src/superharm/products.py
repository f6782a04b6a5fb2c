"""Inner products on P exp(-R^2/2), the T isomorphism, adjoints and Gram matrices.

<.|.>_1 pairs f with the star image of g and integrates over R^{m|2n}.
<.|.>_2 is defined blockwise through the Fischer decomposition and T, so its
inputs are carried in a structured form: sums of c * R^{2j} * block.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import BadDimension, GaussianPowerMismatch, HarmonicityViolated, NotStructured
from .grassmann import (GrassmannElement, berezin, fderiv, gmul, inner_f, left_mul_gen,
                        monomial_basis, nabla2_f, popcount, star, theta2, tilde)
from .harmonics import (HarmonicBlock, bad_dimension, fischer_decompose_all, orthogonal_fermionic_basis,
                        super_harmonic_basis)
from .hermite import laguerre, spherical_hermite
from .integration import _theta_powers, gaussian_moment_b, gaussian_super, pizzetti, sphere_moment
from .scalars import ONE, ZERO, Scalar, as_scalar, conj, factorial, falling, gamma_half, rat
from .superpoly import GaussianWrapped, SuperPolynomial, monomial_keys, unwrap, wrap

# -- <.|.>_1 -------------------------------------------------------------------------


def _check_pair(f: GaussianWrapped, g: GaussianWrapped):
    if (f.m, f.n) != (g.m, g.n):
        raise ValueError("dimension mismatch")
    if f.tag + g.tag != 2:
        raise GaussianPowerMismatch("the two factors must combine to exp(-r^2)")


def _by_fermion(p: SuperPolynomial):
    out = {}
    for (e, b), v in p.terms.items():
        out.setdefault(b, []).append((e, v))
    return out


def inner1(f: GaussianWrapped, g: GaussianWrapped) -> Scalar:
    """int f (* conj g); star pairs x'_A with x'_A only, weight 2^{|A|-n} pi^{-n}."""
    _check_pair(f, g)
    m, n = f.m, f.n
    G = _by_fermion(g.poly)
    acc = ZERO
    for b, fterms in _by_fermion(f.poly).items():
        gterms = G.get(b)
        if not gterms:
            continue
        part = ZERO
        for e1, v1 in fterms:
            for e2, v2 in gterms:
                mo = gaussian_moment_b(m, tuple(x + y for x, y in zip(e1, e2)))
                if mo:
                    part = part + mo * v1 * conj(v2)
        if part:
            acc = acc + part * rat(2) ** popcount(b)
    return as_scalar(acc) * Scalar.s(-2 * n, rat(2) ** -n)


def inner1_berezin(f: GaussianWrapped, g: GaussianWrapped) -> Scalar:
    """Same pairing by expanding f * (star conj g), Berezin, then bosonic moments."""
    _check_pair(f, g)
    from .integration import bosonic_gaussian_integral
    prod = f.poly * g.poly.conj().star_f()
    return bosonic_gaussian_integral(prod.berezin_f())


# -- T and structured elements -----------------------------------------------------------


def t_block(b: HarmonicBlock) -> HarmonicBlock:
    """(-1)^i f_{i,p,q} hb tilde(hf)."""
    hf = tilde(b.hf)
    if b.i % 2:
        hf = -hf
    return HarmonicBlock(b.i, b.p, b.q, b.hb, hf, b.normsq_b, b.normsq_f, b.m, b.n, ("T",) + tuple(b.label))


class Structured:
    """sum over (j, label) of coef * R^{2j} * block(label) * exp(-R^2/2)."""

    __slots__ = ("terms", "blocks", "m", "n")

    def __init__(self, terms, blocks, m, n):
        self.terms = {k: v for k, v in terms.items() if v}
        self.blocks = blocks
        self.m, self.n = m, n

    @property
    def M(self):
        return self.m - 2 * self.n

    @staticmethod
    def of_block(b: HarmonicBlock, j: int = 0, coef=ONE):
        return Structured({(j, b.label): coef}, {b.label: b}, b.m, b.n)

    def __add__(self, other):
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, ZERO) + v
        return Structured(terms, {**self.blocks, **other.blocks}, self.m, self.n)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Structured({k: v * c for k, v in self.terms.items()}, self.blocks, self.m, self.n)

    def __eq__(self, other):
        return isinstance(other, Structured) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def polynomial(self) -> SuperPolynomial:
        acc = SuperPolynomial.const(ZERO, self.m, self.n)
        for (j, lab), c in self.terms.items():
            p = self.blocks[lab].assemble()
            for _ in range(j):
                p = p.mul_R2()
            acc = acc + p.scale(c)
        return acc

    def to_wrapped(self) -> GaussianWrapped:
        return wrap(self.polynomial())

    def __repr__(self):
        return f"Structured({len(self.terms)} terms, (m, n) = {(self.m, self.n)})"


def T_map(x):
    """T on a block or a structured element; radial factors are untouched."""
    if isinstance(x, HarmonicBlock):
        return t_block(x)
    if isinstance(x, Structured):
        blocks = {}
        terms = {}
        for (j, lab), c in x.terms.items():
            tb = t_block(x.blocks[lab])
            blocks[tb.label] = tb
            terms[(j, tb.label)] = c
        return Structured(terms, blocks, x.m, x.n)
    raise NotStructured("T is defined on blocks and structured elements only")


def structured_spherical(j: int, b: HarmonicBlock) -> Structured:
    """2^{2j} j! L_j^{M/2+k-1}(R^2) * block, as a structured element."""
    M, k = b.m - 2 * b.n, b.degree
    L = laguerre(j, rat(M) / 2 + k - 1)
    pref = 4**j * factorial(j)
    return Structured({(u, b.label): c * pref for u, c in enumerate(L.coefficients)}, {b.label: b}, b.m, b.n)


# -- conversion of raw functions into structured form ---------------------------------------


@lru_cache(maxsize=None)
def _block_solver(m, n, k):
    """Blocks of degree k, the pivot monomials and the inverse of the pivot matrix."""
    blocks = super_harmonic_basis(m, n, k)
    polys = [b.assemble() for b in blocks]
    keys = sorted({key for p in polys for key in p.terms})
    index = {key: r for r, key in enumerate(keys)}
    rows = [[QQ(0)] * len(keys) for _ in blocks]
    for c, p in enumerate(polys):
        for key, v in p.terms.items():
            rows[c][index[key]] = QQ(v)
    At = DomainMatrix(rows, (len(blocks), len(keys)), QQ)
    _, pivots = At.rref()
    if len(pivots) != len(blocks):
        raise HarmonicityViolated(f"blocks of degree {k} are not independent")
    sub = DomainMatrix([[rows[c][pv] for c in range(len(blocks))] for pv in pivots],
                       (len(pivots), len(blocks)), QQ)
    inv = sub.inv().to_list()
    return blocks, polys, [keys[pv] for pv in pivots], inv


def block_coordinates(h: SuperPolynomial, k: int, verify: bool = True):
    """Coefficients of a degree-k harmonic in the block basis (exact linear solve)."""
    blocks, polys, pivot_keys, inv = _block_solver(h.m, h.n, k)
    rhs = [h.terms.get(key, ZERO) for key in pivot_keys]
    coords = []
    for row in inv:
        acc = ZERO
        for a, r in zip(row, rhs):
            if a and r:
                acc = acc + r * a
        coords.append(acc)
    if verify:
        back = h.zero()
        for c, p in zip(coords, polys):
            if c:
                back = back + p.scale(c)
        if back != h:
            raise HarmonicityViolated("input is not in the span of the harmonic blocks")
    return [(b, c) for b, c in zip(blocks, coords) if c]


def to_structured(w) -> Structured:
    """Fischer-decompose the polynomial factor and expand each harmonic in blocks."""
    if isinstance(w, Structured):
        return w
    if not isinstance(w, GaussianWrapped):
        raise NotStructured("expected a Gaussian-wrapped function")
    if bad_dimension(w.M):
        raise BadDimension(f"no Fischer decomposition for M = {w.M}")
    P = unwrap(w)
    terms, blocks = {}, {}
    for k, fd in fischer_decompose_all(P).items():
        for j, h in fd.components:
            if not h:
                continue
            for b, c in block_coordinates(h, k - 2 * j):
                blocks[b.label] = b
                key = (j, b.label)
                terms[key] = terms.get(key, ZERO) + c
    return Structured(terms, blocks, w.m, w.n)


# -- supersphere pairings of blocks ---------------------------------------------------------


def ss_pairing_direct(a: HarmonicBlock, b: HarmonicBlock) -> Scalar:
    """int_SS A * T(B) by the Pizzetti formula on the assembled product."""
    return pizzetti(a.assemble() * t_block(b).assemble().conj())


class _Factored:
    """int_SS A * T(B) through the radial form: sphere integrals of the bosonic
    factors times Berezin integrals of theta^{2w} hf_a tilde(hf_b)."""

    def __init__(self, m, n):
        if m < 1:
            raise BadDimension("the radial form needs m >= 1")
        self.m, self.n = m, n
        self._sphere = {}
        self._berezin = {}
        self._pairs = {}

    def sphere(self, a, b):
        key = (a.p, a.label[3], b.p, b.label[3])
        if key not in self._sphere:
            acc = Scalar()
            for (ea, _), va in a.hb.terms.items():
                for (eb, _), vb in b.hb.terms.items():
                    mo = sphere_moment(self.m, tuple(x + y for x, y in zip(ea, eb)))
                    if mo:
                        acc = acc + mo * (va * vb)
            self._sphere[key] = acc
        return self._sphere[key]

    def berezin(self, a, b, w):
        key = (a.q, a.label[4], b.q, b.label[4], w)
        if key not in self._berezin:
            if w > self.n:
                val = Scalar()
            else:
                val = berezin(gmul(_theta_powers(self.n)[w], gmul(a.hf, tilde(b.hf))))
            self._berezin[key] = val
        return self._berezin[key]

    def pairing(self, a: HarmonicBlock, b: HarmonicBlock) -> Scalar:
        key = (a.label, b.label)
        if key in self._pairs:
            return self._pairs[key]
        S = self.sphere(a, b)
        acc = Scalar()
        if S:
            from .harmonics import f_coefficients
            m, n = self.m, self.n
            fa = f_coefficients(a.i, a.p, a.q, m, n)
            fb = f_coefficients(b.i, b.p, b.q, m, n)
            for s, al in enumerate(fa):
                for t, be in enumerate(fb):
                    if not (al and be):
                        continue
                    u = a.i + b.i - s - t
                    rad = rat(2 * u + a.p + b.p + m - 2) / 2
                    for j in range(n - s - t + 1):
                        fall = falling(rad, j)
                        if not fall:
                            continue
                        Z = self.berezin(a, b, j + s + t)
                        if Z:
                            acc = acc + Z * (al * be * fall * (-1) ** j / factorial(j))
            acc = acc * S
            if b.i % 2:
                acc = -acc
        self._pairs[key] = acc
        return acc


@lru_cache(maxsize=None)
def _factored(m, n):
    return _Factored(m, n)


def ss_pairing(a: HarmonicBlock, b: HarmonicBlock, method: str = "factored") -> Scalar:
    if method == "direct" or a.m == 0:
        return ss_pairing_direct(a, b)
    return _factored(a.m, a.n).pairing(a, b)


# -- <.|.>_2 --------------------------------------------------------------------------------


def _radial_factor(J, K, M):
    """1/2 Gamma(J + (K + M)/2): int R^{2J} g exp(-R^2) for g of degree K, per unit int_SS g."""
    return gamma_half(J + rat(K + M) / 2) * (ONE / 2)


def inner2(f, g, method: str = "factored") -> Scalar:
    """<f|g>_2 = sum c_a conj(c_b) int R^{2(i+j)} A conj(T(B)) exp(-R^2).

    method="direct" integrates every product with gaussian_super; "factored"
    uses 1/2 Gamma((deg+M)/2) times the supersphere block pairing, which rests on
    int_SS R^2 g = int_SS g (checked separately).
    """
    f, g = to_structured(f), to_structured(g)
    if (f.m, f.n) != (g.m, g.n):
        raise ValueError("dimension mismatch")
    M = f.M
    if M <= 0:
        raise BadDimension("<.|.>_2 needs M > 0")
    acc = Scalar()
    for (ja, la), ca in f.terms.items():
        A = f.blocks[la]
        for (jb, lb), cb in g.terms.items():
            B = g.blocks[lb]
            if method == "direct":
                prod = A.assemble() * t_block(B).assemble().conj()
                for _ in range(ja + jb):
                    prod = prod.mul_R2()
                val = gaussian_super(prod)
            else:
                P = ss_pairing(A, B)
                if not P:
                    continue
                val = _radial_factor(ja + jb, A.degree + B.degree, M) * P
            if val:
                acc = acc + val * (as_scalar(ca) * conj(cb))
    return acc


# -- operators on wrapped functions -----------------------------------------------------------


def _nabla2_b(w: GaussianWrapped) -> GaussianWrapped:
    P, g, m = w.poly, w.tag, w.m
    return GaussianWrapped(P.nabla2_b() - P.euler_b().scale(2 * g) - P.scale(g * m) + P.mul_r2().scale(g * g), g)


WRAPPED_OPS = {
    "R2": lambda w: w.mul_R2(),
    "nabla2": lambda w: w.nabla2(),
    "r2": lambda w: GaussianWrapped(w.poly.mul_r2(), w.tag),
    "theta2": lambda w: GaussianWrapped(w.poly.mul_theta2(), w.tag),
    "nabla2_b": _nabla2_b,
    "nabla2_f": lambda w: GaussianWrapped(w.poly.nabla2_f(), w.tag),
    "2E+M": lambda w: w.euler().scale(2) + w.scale(w.M),
    "-(2E+M)": lambda w: -(w.euler().scale(2) + w.scale(w.M)),
    "r2-nabla2_f": lambda w: GaussianWrapped(w.poly.mul_r2() - w.poly.nabla2_f(), w.tag),
    "nabla2_b-theta2": lambda w: _nabla2_b(w) - GaussianWrapped(w.poly.mul_theta2(), w.tag),
    "H": lambda w: ((-w.nabla2()) + w.mul_R2()).scale(rat(1) / 2),
}

GRASSMANN_OPS = {
    "theta2": lambda a: gmul(theta2(a.n), a),
    "-theta2": lambda a: -gmul(theta2(a.n), a),
    "nabla2_f": nabla2_f,
    "-nabla2_f": lambda a: -nabla2_f(a),
    "E_f-n": lambda a: _euler_minus_n(a),
}


def _grassmann_monomials(n):
    return [GrassmannElement({b: ONE}, n) for b in monomial_basis(n)]


def _euler_minus_n(a: GrassmannElement) -> GrassmannElement:
    out = {}
    for b, v in a.terms.items():
        c = popcount(b) - a.n
        if c:
            out[b] = v * c
    return GrassmannElement(out, a.n)


def _resolve(op, table):
    if callable(op):
        return op
    try:
        return table[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}; known: {sorted(table)}") from None


@dataclass
class AdjointReport:
    opA: str
    opB: str
    inner: str
    dims: tuple
    degree: int
    checked: int = 0
    failures: int = 0
    witness: tuple | None = None

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        return {"opA": self.opA, "opB": self.opB, "inner": self.inner, "dims": list(self.dims),
                "degree": self.degree, "checked": self.checked, "failures": self.failures,
                "pass": self.passed, "witness": None if self.witness is None else [str(x) for x in self.witness]}


def adjoint_check(opA, opB, inner: str, m: int, n: int, degree: int | None = None,
                  stop_at_first: bool = False) -> AdjointReport:
    """Check <A f|g> = <f|B g> for all pairs of monomials (wrapped for inner 1 and 2)
    of degree at most `degree`.  The first failure in enumeration order is the
    witness; enumeration runs by increasing degree."""
    inner = str(inner)
    rep = AdjointReport(str(opA), str(opB), inner, (m, n), -1 if degree is None else degree)
    if inner == "f":
        A, B = _resolve(opA, GRASSMANN_OPS), _resolve(opB, GRASSMANN_OPS)
        span = _grassmann_monomials(n)
        pair = inner_f
        images = [(A(x), B(x)) for x in span]
    elif inner in ("1", "2"):
        A, B = _resolve(opA, WRAPPED_OPS), _resolve(opB, WRAPPED_OPS)
        if degree is None:
            raise ValueError("a degree bound is required for inner products 1 and 2")
        keys = monomial_keys(m, n, degree, exact=False)
        span = [wrap(SuperPolynomial({key: ONE}, m, n)) for key in keys]
        images = [(A(x), B(x)) for x in span]
        if inner == "1":
            pair = inner1
        else:
            if m - 2 * n <= 0:
                raise BadDimension("<.|.>_2 needs M > 0")
            span = [to_structured(x) for x in span]
            images = [(to_structured(a), to_structured(b)) for a, b in images]
            pair = inner2
    else:
        raise ValueError("inner must be 1, 2 or f")
    for i, f in enumerate(span):
        Af = images[i][0]
        for j, g in enumerate(span):
            Bg = images[j][1]
            lhs, rhs = pair(Af, g), pair(f, Bg)
            rep.checked += 1
            if lhs != rhs:
                rep.failures += 1
                if rep.witness is None:
                    rep.witness = (_describe(f), _describe(g), lhs, rhs)
                if stop_at_first:
                    return rep
    return rep


def _describe(x):
    if isinstance(x, Structured):
        x = x.polynomial()
    elif isinstance(x, GaussianWrapped):
        x = unwrap(x)
    return x


def osp_covariance_check(A, m: int, n: int, degree: int):
    """<Af|g>_2 = <f|A^T g>_2 and <AGf|GAg>_2 = <f|g>_2 on wrapped monomials."""
    from .grassmann import matmul, transpose
    from .superpoly import metric_G, osp_apply
    G = metric_G(m, n)
    AG, GA, At = matmul(A, G), matmul(G, A), transpose(A)
    polys = [SuperPolynomial({key: ONE}, m, n) for key in monomial_keys(m, n, degree, exact=False)]
    base = [wrap(p) for p in polys]
    img = {name: [wrap(osp_apply(X, p)) for p in polys] for name, X in (("A", A), ("At", At), ("AG", AG), ("GA", GA))}
    adj = cov = True
    for i, f in enumerate(base):
        for j, g in enumerate(base):
            ref = inner2(f, g)
            if inner2(img["A"][i], g) != inner2(f, img["At"][j]):
                adj = False
            if inner2(img["AG"][i], img["GA"][j]) != ref:
                cov = False
    return {"adjoint_is_transpose": adj, "invariant": cov}


def symplectic_covariance_check_f(S, n: int):
    """<Sf|g> = <f|S^T g> and <SJf|JSg> = <f|g> on Grassmann monomials."""
    from .grassmann import matmul, symplectic_apply, symplectic_form, transpose
    J = symplectic_form(n)
    mons = _grassmann_monomials(n)
    St, SJ, JS = transpose(S), matmul(S, J), matmul(J, S)
    adj = all(inner_f(symplectic_apply(S, f), g) == inner_f(f, symplectic_apply(St, g)) for f in mons for g in mons)
    cov = all(inner_f(symplectic_apply(SJ, f), symplectic_apply(JS, g)) == inner_f(f, g) for f in mons for g in mons)
    return {"adjoint_is_transpose": adj, "invariant": cov}


# -- Gram matrices --------------------------------------------------------------------------


@dataclass
class GramReport:
    labels: list
    matrix: list
    diagonal_prediction: list | None = None
    off_diagonal_zero: bool = field(init=False)

    def __post_init__(self):
        N = len(self.labels)
        self.off_diagonal_zero = all(not self.matrix[i][j] for i in range(N) for j in range(N) if i != j)

    def is_hermitian(self) -> bool:
        N = len(self.labels)
        return all(as_scalar(self.matrix[i][j]) == conj(as_scalar(self.matrix[j][i]))
                   for i in range(N) for j in range(i, N))

    def diagonal_matches(self) -> bool:
        if self.diagonal_prediction is None:
            return False
        return all(as_scalar(self.matrix[i][i]) == as_scalar(p) for i, p in enumerate(self.diagonal_prediction))

    def nonzero_pattern(self):
        N = len(self.labels)
        return {(i, j) for i in range(N) for j in range(N) if self.matrix[i][j]}

    def to_dict(self):
        return {"labels": [list(map(str, l)) if isinstance(l, tuple) else str(l) for l in self.labels],
                "matrix": [[str(x) for x in row] for row in self.matrix],
                "diagonal_prediction": None if self.diagonal_prediction is None
                else [str(x) for x in self.diagonal_prediction],
                "off_diagonal_zero": self.off_diagonal_zero,
                "diagonal_matches": self.diagonal_matches() if self.diagonal_prediction is not None else None}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow([""] + [str(l) for l in self.labels])
        for l, row in zip(self.labels, self.matrix):
            w.writerow([str(l)] + [str(x) for x in row])
        return buf.getvalue()


_PAIRINGS = {"1": inner1, "2": inner2, "f": inner_f}


def gram(basis, inner, labels=None, prediction=None) -> GramReport:
    """Full pairwise matrix of `basis` under inner (callable or one of 1, 2, f)."""
    pair = inner if callable(inner) else _PAIRINGS[str(inner)]
    if str(inner) == "2":
        basis = [to_structured(x) for x in basis]
    N = len(basis)
    mat = [[pair(basis[i], basis[j]) for j in range(N)] for i in range(N)]
    return GramReport(list(labels) if labels is not None else list(range(N)), mat, prediction)


# -- basis families with predicted norms ------------------------------------------------------


def fermionic_spherical_set(n: int):
    """phi^f_{j,k,l} with predictions 4^{2j} j!/(n-k-j)! * <H|H> 2^{n-k}(n-k)!."""
    out = []
    for k in range(n + 1):
        for l, (H, nh) in enumerate(orthogonal_fermionic_basis(n, k)):
            Hp = SuperPolynomial({((), b): v for b, v in H.terms.items()}, 0, n)
            for j in range(n - k + 1):
                phi = spherical_hermite(j, Hp)
                pred = nh * (rat(16) ** j * factorial(j) / factorial(n - k - j)
                             * 2 ** (n - k) * factorial(n - k))
                out.append(((j, k, l), phi, pred))
    return out


def fermionic_gram(n: int) -> GramReport:
    items = fermionic_spherical_set(n)
    return gram([x[1] for x in items], "1", [x[0] for x in items], [x[2] for x in items])


def cartesian_occupations(m: int, n: int, total: int):
    from itertools import product
    for ls in product((0, 1), repeat=2 * n):
        rest = total - sum(ls)
        if rest < 0:
            continue
        for ks in product(range(rest + 1), repeat=m):
            if sum(ks) <= rest:
                yield ks, ls


def cartesian_gram(m: int, n: int, total: int = 4) -> GramReport:
    from .hermite import cartesian_basis
    occ = list(cartesian_occupations(m, n, total))
    items = [cartesian_basis(m, n, o) for o in occ]
    return gram([x[0] for x in items], "1", occ, [x[1] for x in items])


def gamma_M(j: int, k: int, M: int) -> Scalar:
    """1/2 4^{2j} j! Gamma(j + k + M/2)."""
    return gamma_half(rat(M) / 2 + j + k) * (rat(16) ** j * factorial(j) / 2)


def spherical_blocks(m: int, n: int, kmax: int):
    out = []
    for k in range(kmax + 1):
        out.extend(super_harmonic_basis(m, n, k))
    return out


@dataclass
class SparseGram:
    """Gram matrix stored by its nonzero entries only."""
    labels: list
    entries: dict
    diagonal_prediction: list

    @property
    def size(self):
        return len(self.labels)

    @property
    def off_diagonal_zero(self):
        return all(i == j for i, j in self.entries)

    def diagonal_matches(self):
        return all(self.entries.get((i, i), Scalar()) == p for i, p in enumerate(self.diagonal_prediction))

    def dense(self) -> GramReport:
        N = self.size
        mat = [[self.entries.get((i, j), Scalar()) for j in range(N)] for i in range(N)]
        return GramReport(self.labels, mat, self.diagonal_prediction)


def spherical_gram_inner2(m: int, n: int, jmax: int, kmax: int, method: str = "factored") -> SparseGram:
    """Gram of 2^{2j} j! L_j(R^2) H exp(-R^2/2) over every block H of degree <= kmax.

    Each entry is sum_{u,v} c_u c'_v 1/2 Gamma(u+v+(k+k'+M)/2) * int_SS H T(H'),
    so the block pairing is computed once per pair of blocks.
    """
    M = m - 2 * n
    if M <= 0:
        raise BadDimension("<.|.>_2 needs M > 0")
    blocks = spherical_blocks(m, n, kmax)
    lag = {}

    def coeffs(j, k):
        if (j, k) not in lag:
            lag[(j, k)] = [c * 4**j * factorial(j) for c in laguerre(j, rat(M) / 2 + k - 1).coefficients]
        return lag[(j, k)]

    radial = {}

    def rad(j1, k1, j2, k2):
        key = (j1, k1, j2, k2)
        if key not in radial:
            acc = Scalar()
            for u, cu in enumerate(coeffs(j1, k1)):
                for v, cv in enumerate(coeffs(j2, k2)):
                    acc = acc + _radial_factor(u + v, k1 + k2, M) * (cu * cv)
            radial[key] = acc
        return radial[key]

    labels, preds = [], []
    index = {}
    for b in blocks:
        for j in range(jmax + 1):
            index[(j, b.label)] = len(labels)
            labels.append((j, b.degree) + tuple(b.label))
            preds.append(gamma_M(j, b.degree, M) * b.predicted_ss_norm())
    entries = {}
    for a in blocks:
        for b in blocks:
            P = ss_pairing(a, b, method)
            if not P:
                continue
            for j1 in range(jmax + 1):
                for j2 in range(jmax + 1):
                    v = rad(j1, a.degree, j2, b.degree) * P
                    if v:
                        entries[(index[(j1, a.label)], index[(j2, b.label)])] = v
    return SparseGram(labels, entries, preds)


def bijnaorth_set(m: int, n: int, jmax: int, kmax: int):
    """L_j^{M/2+2i+p+q-1}(R^2) f_{i,p,q} hb hf exp(-R^2/2), labelled (j, i, p, q, lb, lf)."""
    M = m - 2 * n
    out = []
    for b in spherical_blocks(m, n, kmax):
        L = laguerre(0, 0)
        for j in range(jmax + 1):
            L = laguerre(j, rat(M) / 2 + b.degree - 1)
            poly = b.assemble().zero()
            for c in reversed(L.coefficients):
                poly = poly.mul_R2() + b.assemble().scale(c)
            out.append(((j, b.i, b.p, b.q, b.label[3], b.label[4]), wrap(poly)))
    return out


def bijnaorth_allowed(la, lb) -> bool:
    """Nonzero entries may occur only for equal (p, q, lb, lf) and j + i = s + u."""
    j, i, p, q, l, t = la
    s, u, p2, q2, l2, t2 = lb
    return p == p2 and q == q2 and l == l2 and t == t2 and j + i == s + u


def bijnaorth_report(m: int, n: int, jmax: int, kmax: int):
    items = bijnaorth_set(m, n, jmax, kmax)
    rep = gram([x[1] for x in items], "1", [x[0] for x in items])
    outside = []
    inside_off = 0
    for i, la in enumerate(rep.labels):
        for j, lb in enumerate(rep.labels):
            v = rep.matrix[i][j]
            if not bijnaorth_allowed(la, lb):
                if v:
                    outside.append((la, lb))
            elif i != j and v:
                inside_off += 1
    return {"gram": rep, "violations": outside, "nonzero_off_diagonal_in_pattern": inside_off,
            "pattern_holds": not outside, "diagonal": rep.off_diagonal_zero}


# -- fermionic star identities ----------------------------------------------------------------


def _exp_theta(n, c):
    t2 = theta2(n)
    acc = GrassmannElement.const(ONE, n)
    term = GrassmannElement.const(ONE, n)
    for i in range(1, n + 1):
        term = gmul(term, t2).scale(rat(c) / i)
        acc = acc + term
    return acc


def check_fermionic_adjoints(n: int):
    """<d_j f|g> = <f|x'_j g / 2> on all monomials."""
    basis = _grassmann_monomials(n)
    half = rat(1) / 2
    for j in range(1, 2 * n + 1):
        for f in basis:
            df = fderiv(j, f)
            for g in basis:
                if inner_f(df, g) != inner_f(f, left_mul_gen(j, g).scale(half)):
                    return False
    return True


def check_eigstar(n: int):
    """Rules (i)-(vi) for star against x'_j, d_j, nabla_f^2, theta^2, E_f - n, 1."""
    basis = _grassmann_monomials(n)
    t2 = theta2(n)
    results = {}
    ok = [True] * 6
    for f in basis:
        k = popcount(next(iter(f.terms)))
        sk = -1 if k % 2 else 1
        sf = star(f)
        for j in range(1, 2 * n + 1):
            if star(left_mul_gen(j, f)) != fderiv(j, sf).scale(2 * sk):
                ok[0] = False
            if star(fderiv(j, f)) != left_mul_gen(j, sf).scale(-sk * rat(1) / 2):
                ok[1] = False
        if star(nabla2_f(f)) != -gmul(t2, sf):
            ok[2] = False
        if star(gmul(t2, f)) != -nabla2_f(sf):
            ok[3] = False
        if star(_euler_minus_n(f)) != -_euler_minus_n(sf):
            ok[4] = False
    one = GrassmannElement.const(ONE, n)
    top = GrassmannElement({(1 << (2 * n)) - 1: rat(2) ** -n}, n)
    tpow = _theta_powers(n)[n].scale(rat(-1) ** n / (2**n * factorial(n)))
    ok[5] = star(one) == top == tpow
    for r, v in zip(("i", "ii", "iii", "iv", "v", "vi"), ok):
        results[r] = v
    return results


def check_expstar(n: int):
    """(i) star(theta^{2i} H) and (ii) star(H exp(-theta^2/2)) = tilde(H) exp(-theta^2/2)."""
    ok_i = ok_ii = True
    g = _exp_theta(n, -rat(1) / 2)
    tp = _theta_powers(n)
    for k in range(n + 1):
        for H, _ in orthogonal_fermionic_basis(n, k):
            Ht = tilde(H)
            for i in range(n - k + 1):
                lhs = star(gmul(tp[i], H))
                c = (rat(-1) ** (n - k) * 2**i * factorial(i)
                     / (rat(2) ** (n - k - i) * factorial(n - k - i)))
                if lhs != gmul(tp[n - k - i], Ht).scale(c):
                    ok_i = False
            if star(gmul(H, g)) != gmul(Ht, g):
                ok_ii = False
    return {"i": ok_i, "ii": ok_ii}


def check_chstar(n: int):
    """star(L_j^{-n+k-1}(theta^2) H e^{-theta^2/2}) = (-1)^j L_j(theta^2) tilde(H) e^{-theta^2/2}."""
    g = _exp_theta(n, -rat(1) / 2)
    tp = _theta_powers(n)
    for k in range(n + 1):
        for H, _ in orthogonal_fermionic_basis(n, k):
            Ht = tilde(H)
            for j in range(n - k + 1):
                L = laguerre(j, -n + k - 1)
                Lt = GrassmannElement({}, n)
                for i, c in enumerate(L.coefficients):
                    if i <= n and c:
                        Lt = Lt + tp[i].scale(c)
                lhs = star(gmul(gmul(Lt, H), g))
                rhs = gmul(gmul(Lt, Ht), g).scale((-1) ** j)
                if lhs != rhs:
                    return False
    return True


# -- no-go witnesses ----------------------------------------------------------------------------


def nogo_witness(m: int, n: int):
    """Factor chain <phi_j> = 8j(2j+M+2k-2) <phi_{j-1}> at k = 0 for a hypothetical
    inner product with (R^2)^+ = R^2 and (nabla^2)^+ = nabla^2; M <= 0 forces a
    factor <= 0, so some phi_{j,0} has non-positive norm."""
    M = m - 2 * n
    if M > 0:
        raise BadDimension(f"no obstruction for M = {M} > 0")
    top = -(-(2 - M) // 2)
    chain = [(j, 8 * j * (2 * j + M - 2)) for j in range(1, max(top, 1) + 1)]
    bad = next((j, c) for j, c in chain if c <= 0)
    return {"dims": (m, n), "M": M, "k": 0, "chain": chain, "nonpositive": bad,
            "certified": bad[1] <= 0}


def theta2_hermitian_witness(n: int):
    """If theta^2 were self-adjoint, <theta^{2n}|theta^{2n}> = <theta^{2n-2}|theta^{2n+2}> = 0,
    yet theta^{2n} != 0."""
    t2n = _theta_powers(n)[n]
    above = gmul(t2n, theta2(n))
    return {"n": n, "theta^{2n}": t2n, "theta^{2n+2}_is_zero": not above, "theta^{2n}_nonzero": bool(t2n),
            "certified": (not above) and bool(t2n)}


def determinant_one_witness(n: int):
    """Dimension of the symmetric forms Q with R^T Q R = Q for a generating set of
    det-one substitutions of the 2n generators; zero certifies that no invariant
    positive definite pairing on degree-one elements exists."""
    N = 2 * n
    gens = []
    for i in range(N):
        for j in range(N):
            if i != j:
                E = [[int(a == b) for b in range(N)] for a in range(N)]
                E[i][j] = 1
                gens.append(E)
    if N >= 2:
        D = [[QQ(0)] * N for _ in range(N)]
        D[0][0], D[1][1] = QQ(2), QQ(1, 2)
        for a in range(2, N):
            D[a][a] = QQ(1)
        gens.append(D)
    unknowns = [(a, b) for a in range(N) for b in range(a, N)]
    col = {u: c for c, u in enumerate(unknowns)}

    def qidx(a, b):
        return col[(min(a, b), max(a, b))]
    rows = []
    for R in gens:
        for a in range(N):
            for b in range(a, N):
                row = [QQ(0)] * len(unknowns)
                for c in range(N):
                    for d in range(N):
                        w = QQ(R[c][a]) * QQ(R[d][b])
                        if w:
                            row[qidx(c, d)] += w
                row[qidx(a, b)] -= 1
                rows.append(row)
    A = DomainMatrix(rows, (len(rows), len(unknowns)), QQ)
    dim = len(unknowns) - A.rank()
    return {"n": n, "invariant_symmetric_forms": dim, "certified": dim == 0}


__all__ = [
    "AdjointReport", "GRASSMANN_OPS", "GramReport", "SparseGram", "Structured", "T_map", "WRAPPED_OPS",
    "adjoint_check", "bijnaorth_allowed", "bijnaorth_report", "bijnaorth_set", "block_coordinates",
    "cartesian_gram", "cartesian_occupations", "check_chstar", "check_eigstar", "check_expstar",
    "check_fermionic_adjoints", "determinant_one_witness", "fermionic_gram", "fermionic_spherical_set",
    "gamma_M", "gram", "inner1", "inner1_berezin", "inner2", "nogo_witness", "osp_covariance_check",
    "spherical_blocks",
    "spherical_gram_inner2", "ss_pairing", "ss_pairing_direct", "structured_spherical", "t_block",
    "symplectic_covariance_check_f", "theta2_hermitian_witness", "to_structured",
]
