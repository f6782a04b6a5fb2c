"""The Grassmann algebra on 2n generators and its doubled version on 4n.

Monomials are bit sets: bit i-1 stands for x'_i.  In doubled mode the
generators are ordered x'_1 < ... < x'_{2n} < y'_1 < ... < y'_{2n}, so y'_j is
bit 2n + j - 1.  Coefficients can be any exact ring element (``mpq``,
:class:`~superharm.scalars.Scalar`, ...).
"""
from __future__ import annotations

from .errors import IndexOutOfRange, ModeMismatch, NotSymplectic
from .scalars import ONE, Scalar, as_scalar, conj, join_signed, rat


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(x: int):
    """Indices (0-based) of the set bits of x, ascending."""
    out = []
    i = 0
    while x:
        if x & 1:
            out.append(i)
        x >>= 1
        i += 1
    return out


def mono_sign(a: int, b: int) -> int:
    """Sign of x_A x_B relative to the sorted monomial, 0 if they overlap."""
    if a & b:
        return 0
    swaps = 0
    while b:
        low = b & -b
        swaps += popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


def deriv_sign(a: int, bit: int) -> int:
    """Sign of the left derivative d/dx_j on x_A (bit = j - 1); 0 if j not in A."""
    mask = 1 << bit
    if not a & mask:
        return 0
    return -1 if popcount(a & (mask - 1)) & 1 else 1


def _clean(terms):
    return {k: v for k, v in terms.items() if v}


class GrassmannElement:
    """Finite sum of coefficient * monomial."""

    __slots__ = ("terms", "n", "doubled")

    def __init__(self, terms, n: int, doubled: bool = False):
        self.terms = terms
        self.n = n
        self.doubled = doubled

    @property
    def ngen(self) -> int:
        return 4 * self.n if self.doubled else 2 * self.n

    def _like(self, terms):
        return GrassmannElement(terms, self.n, self.doubled)

    def _check(self, other):
        if other.n != self.n or other.doubled != self.doubled:
            raise ModeMismatch("Grassmann elements live in different algebras")

    @staticmethod
    def const(c, n: int, doubled: bool = False):
        return GrassmannElement({0: c} if c else {}, n, doubled)

    @staticmethod
    def monomial(indices, n: int, doubled: bool = False, coef=ONE):
        """coef * x'_{i1} x'_{i2} ... for 1-based indices in the given order."""
        ngen = 4 * n if doubled else 2 * n
        bits, sign = 0, 1
        for i in indices:
            if not 1 <= i <= ngen:
                raise IndexOutOfRange(f"generator {i} outside 1..{ngen}")
            s = mono_sign(bits, 1 << (i - 1))
            if not s:
                return GrassmannElement({}, n, doubled)
            sign *= s
            bits |= 1 << (i - 1)
        return GrassmannElement({bits: coef * sign}, n, doubled)

    def __add__(self, other):
        if not isinstance(other, GrassmannElement):
            other = GrassmannElement.const(other, self.n, self.doubled)
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
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
            return self._like({})
        return self._like(_clean({k: v * c for k, v in self.terms.items()}))

    def __mul__(self, other):
        if not isinstance(other, GrassmannElement):
            return self.scale(other)
        return gmul(self, other)

    def __rmul__(self, other):
        if not other:
            return self._like({})
        return self._like(_clean({k: other * v for k, v in self.terms.items()}))

    def __pow__(self, k: int):
        out = GrassmannElement.const(ONE, self.n, self.doubled)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, GrassmannElement):
            if other == 0:
                return not self.terms
            other = GrassmannElement.const(other, self.n, self.doubled)
        if other.n != self.n or other.doubled != self.doubled:
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def coefficient(self, bits: int):
        return self.terms.get(bits, 0)

    def degrees(self):
        return sorted({popcount(b) for b in self.terms})

    def homogeneous_part(self, k: int):
        return self._like({b: v for b, v in self.terms.items() if popcount(b) == k})

    def map_coefficients(self, fn):
        return self._like(_clean({b: fn(v) for b, v in self.terms.items()}))

    def __repr__(self):
        return f"GrassmannElement({format_element(self)})"

    def __str__(self):
        return format_element(self)


def format_element(a: GrassmannElement) -> str:
    if not a.terms:
        return "0"
    half = 2 * a.n
    parts = []
    for b in sorted(a.terms, key=lambda b: (popcount(b), bits_of(b))):
        names = []
        for i in bits_of(b):
            if a.doubled and i >= half:
                names.append(f"y'{i - half + 1}")
            else:
                names.append(f"x'{i + 1}")
        mono = "*".join(names)
        c = str(a.terms[b])
        parts.append(c if not mono else (mono if c == "1" else f"({c})*{mono}"))
    return join_signed(parts)


def gen(i: int, n: int, doubled: bool = False, coef=ONE) -> GrassmannElement:
    """The generator x'_i (1-based)."""
    return GrassmannElement.monomial([i], n, doubled, coef)


def ygen(j: int, n: int, coef=ONE) -> GrassmannElement:
    """The generator y'_j of the doubled algebra."""
    return GrassmannElement.monomial([2 * n + j], n, True, coef)


def gmul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    a._check(b)
    out = {}
    for ka, va in a.terms.items():
        for kb, vb in b.terms.items():
            s = mono_sign(ka, kb)
            if not s:
                continue
            k = ka | kb
            p = va * vb if s > 0 else -(va * vb)
            w = out.get(k)
            out[k] = p if w is None else w + p
    return a._like(_clean(out))


def fderiv(j: int, a: GrassmannElement) -> GrassmannElement:
    """Left derivative with respect to generator j (1-based)."""
    if not 1 <= j <= a.ngen:
        raise IndexOutOfRange(f"generator {j} outside 1..{a.ngen}")
    bit = j - 1
    mask = 1 << bit
    out = {}
    for k, v in a.terms.items():
        s = deriv_sign(k, bit)
        if s:
            out[k ^ mask] = v if s > 0 else -v
    return a._like(out)


def left_mul_gen(j: int, a: GrassmannElement) -> GrassmannElement:
    """x'_j * a."""
    mask = 1 << (j - 1)
    out = {}
    for k, v in a.terms.items():
        s = mono_sign(mask, k)
        if s:
            out[k | mask] = v if s > 0 else -v
    return a._like(out)


def _single(a):
    if a.doubled:
        raise ModeMismatch("operation defined on the single algebra only")


def top_bits(n: int) -> int:
    return (1 << (2 * n)) - 1


def berezin(a: GrassmannElement) -> Scalar:
    """pi^{-n} times the coefficient of x'_1 ... x'_{2n}."""
    _single(a)
    c = a.terms.get(top_bits(a.n), 0)
    return as_scalar(c) * Scalar.s(-2 * a.n)


def _offset(n, part):
    if part == "x":
        return 0
    if part == "y":
        return 2 * n
    raise ValueError(f"unknown part {part!r}")


def theta2(n: int, doubled: bool = False, part: str = "x") -> GrassmannElement:
    """theta^2 = -sum_j x'_{2j-1} x'_{2j}."""
    off = _offset(n, part)
    terms = {}
    for j in range(n):
        terms[(0b11 << (2 * j)) << off] = -ONE
    return GrassmannElement(terms, n, doubled or part == "y")


def nabla2_f(a: GrassmannElement, part: str = "x") -> GrassmannElement:
    """-4 sum_j d/dx'_{2j-1} d/dx'_{2j}."""
    off = _offset(a.n, part)
    out = {}
    for k, v in a.terms.items():
        for j in range(a.n):
            pair = (0b11 << (2 * j)) << off
            if k & pair != pair:
                continue
            b1 = 2 * j + off
            # d_{2j} first, then d_{2j-1}
            s = deriv_sign(k, b1 + 1)
            k2 = k ^ (1 << (b1 + 1))
            s *= deriv_sign(k2, b1)
            k3 = k2 ^ (1 << b1)
            c = v * (-4 * s)
            w = out.get(k3)
            out[k3] = c if w is None else w + c
    return a._like(_clean(out))


def euler_f(a: GrassmannElement, part: str = "x") -> GrassmannElement:
    off = _offset(a.n, part)
    mask = ((1 << (2 * a.n)) - 1) << off
    return a._like(_clean({k: v * popcount(k & mask) for k, v in a.terms.items()}))


def star(a: GrassmannElement) -> GrassmannElement:
    """Star map, fixed by x'_A (*x'_A) = 2^{k-n} x'_1...x'_{2n}."""
    _single(a)
    n = a.n
    top = top_bits(n)
    out = {}
    for k, v in a.terms.items():
        c = top ^ k
        sign = mono_sign(k, c)
        e = popcount(k) - n
        f = rat(2) ** e
        out[c] = v * (f * sign)
    return a._like(out)


def _tilde_bits(k: int, off: int):
    """tilde of a single monomial restricted to generators at offset off."""
    idx = bits_of(k)
    bits, sign = 0, 1
    for i in idx:
        r = i - off
        if r % 2 == 0:
            target, s = r + 1, 1
        else:
            target, s = r - 1, -1
        mask = 1 << (target + off)
        t = mono_sign(bits, mask)
        sign *= s * t
        bits |= mask
    kk = len(idx)
    if (kk * (kk - 1) // 2) % 2:
        sign = -sign
    return bits, sign


def tilde(a: GrassmannElement, part: str = "x") -> GrassmannElement:
    """x'_{2i-1} -> x'_{2i}, x'_{2i} -> -x'_{2i-1}, with product order reversed.

    In the doubled algebra the map acts on the chosen half only; for ``part="x"``
    the x-factor of each monomial is tilded in place and the y-factor is left
    on its right.
    """
    off = _offset(a.n, part)
    mask = ((1 << (2 * a.n)) - 1) << off
    out = {}
    for k, v in a.terms.items():
        inner = k & mask
        rest = k & ~mask
        tb, s = _tilde_bits(inner, off)
        # all x-generators precede all y-generators, so the untouched half
        # stays in canonical position
        out[tb | rest] = v * s
    return a._like(_clean(out))


def conj_element(a: GrassmannElement) -> GrassmannElement:
    return a.map_coefficients(conj)


def inner_f(f: GrassmannElement, g: GrassmannElement) -> Scalar:
    """<f|g> = (2 pi)^{-n} sum_A 2^{|A|} f_A conj(g_A)."""
    _single(f)
    f._check(g)
    acc = 0
    for k, v in f.terms.items():
        w = g.terms.get(k)
        if w is not None:
            acc = acc + v * conj(w) * (1 << popcount(k))
    n = f.n
    return as_scalar(acc) * Scalar.s(-2 * n, rat(1) / 2**n)


def inner_f_berezin(f: GrassmannElement, g: GrassmannElement) -> Scalar:
    """The defining form of the inner product: Berezin integral of f (*conj g)."""
    return berezin(gmul(f, star(conj_element(g))))


def symplectic_form(n: int):
    """J = diag([[0, 1], [-1, 0]], ...)."""
    J = [[0] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        J[2 * j][2 * j + 1] = 1
        J[2 * j + 1][2 * j] = -1
    return J


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), 0) for j in range(len(B[0]))]
            for i in range(len(A))]


def transpose(A):
    return [list(r) for r in zip(*A)]


def is_symplectic(A) -> bool:
    n2 = len(A)
    J = symplectic_form(n2 // 2)
    return matmul(matmul(transpose(A), J), A) == J


def transvection(v, c):
    """x -> x + c (v^T J x) v, a symplectic map for any rational v and c."""
    N = len(v)
    J = symplectic_form(N // 2)
    Jx = [sum(v[a] * J[a][b] for a in range(N)) for b in range(N)]
    return [[int(i == j) + c * v[i] * Jx[j] for j in range(N)] for i in range(N)]


def random_symplectic(n: int, rng, steps: int = 4, bound: int = 3):
    """Product of transvections with small random rational entries."""
    A = [[int(i == j) for j in range(2 * n)] for i in range(2 * n)]
    for _ in range(steps):
        v = [rat(rng.randint(-bound, bound)) for _ in range(2 * n)]
        c = rat(rng.randint(-bound, bound), rng.randint(1, bound))
        A = matmul(transvection(v, c), A)
    return A


def _substitute(a: GrassmannElement, images, mask: int):
    """Replace each generator in ``mask`` by its image (dict bit -> element)."""
    out = GrassmannElement({}, a.n, a.doubled)
    one = GrassmannElement.const(ONE, a.n, a.doubled)
    for k, v in a.terms.items():
        prod = one
        for i in bits_of(k):
            if mask >> i & 1:
                prod = gmul(prod, images[i])
            else:
                prod = gmul(prod, GrassmannElement({1 << i: ONE}, a.n, a.doubled))
            if not prod:
                break
        out = out + prod.scale(v)
    return out


def symplectic_apply(A, a: GrassmannElement, validate: bool = False, part: str = "x") -> GrassmannElement:
    """(A f)(x') = f(A^T x'): generator i becomes sum_j A[j][i] x'_j.

    ``part`` selects x, y or both halves of a doubled element.
    """
    n = a.n
    if len(A) != 2 * n or any(len(r) != 2 * n for r in A):
        raise ValueError("matrix must be 2n x 2n")
    if validate and not is_symplectic(A):
        raise NotSymplectic("A^T J A != J")
    parts = ("x", "y") if part == "both" else (part,)
    images = {}
    mask = 0
    for p in parts:
        off = _offset(n, p)
        for i in range(2 * n):
            terms = {}
            for j in range(2 * n):
                c = A[j][i]
                if c:
                    terms[1 << (j + off)] = c
            images[i + off] = GrassmannElement(terms, n, a.doubled)
            mask |= 1 << (i + off)
    return _substitute(a, images, mask)


def monomial_basis(n: int, degree: int | None = None):
    """All monomial bit sets of the single algebra, optionally of one degree."""
    out = []
    for b in range(1 << (2 * n)):
        if degree is None or popcount(b) == degree:
            out.append(b)
    return out


def element(bits: int, n: int, doubled: bool = False, coef=ONE) -> GrassmannElement:
    return GrassmannElement({bits: coef}, n, doubled)


def to_doubled(a: GrassmannElement, part: str = "x") -> GrassmannElement:
    """Embed a single-algebra element into the x or y half of the doubled algebra."""
    _single(a)
    off = _offset(a.n, part)
    return GrassmannElement({k << off: v for k, v in a.terms.items()}, a.n, True)
