"""Exact coefficients in Q(t)[s, 1/s].

``t`` stands for e^{i alpha} and ``s`` for pi^{1/2}; both stay formal.  A
:class:`Scalar` maps each power of ``s`` to a rational function of ``t``.
Coefficients that do not depend on ``t`` are kept as ``gmpy2.mpq`` values,
everything else as a reduced :class:`RatFunc`.

Polynomial code elsewhere in the package stores plain ``mpq`` coefficients
whenever it can and only promotes to :class:`Scalar` when a power of ``s`` or a
``t`` appears, so every function here accepts ``int``/``mpq``/``Fraction``
operands as well.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from gmpy2 import mpq, mpz

from .errors import DivisionByZero, GammaPole, PoleAtPoint

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)


def rat(x, den=None) -> mpq:
    """Coerce an int, Fraction, string or mpq to mpq; rat(p, q) is p/q."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, HalfInteger):
        return x.value
    return mpq(x)


# ---------------------------------------------------------------------------
# univariate polynomials in t, coefficient tuples in ascending order


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pscale(a, c):
    return _trim(tuple(x * c for x in a))


def _pdivmod(a, b):
    """Division over Q; b nonzero."""
    a = [mpq(x) for x in a]
    db = len(b) - 1
    lead = mpq(b[-1])
    if len(a) <= db:
        return (), _trim(a)
    q = [ZERO] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] / lead
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
    return _trim(q), _trim(a[:db])


def _pgcd(a, b):
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    return a


def _peval(a, x):
    acc = ZERO
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _integerize(num, den):
    """Scale num/den by a common rational so both have coprime integer
    coefficients and den has positive leading coefficient."""
    lcm = 1
    for c in num + den:
        c = mpq(c)
        d = int(c.denominator)
        lcm = lcm * d // math.gcd(lcm, d)
    num = [int(mpq(c) * lcm) for c in num]
    den = [int(mpq(c) * lcm) for c in den]
    g = reduce(math.gcd, num + den)
    if den[-1] < 0:
        g = -g
    return tuple(c // g for c in num), tuple(c // g for c in den)


class RatFunc:
    """A reduced ratio of integer polynomials in t, never constant.

    Construct with :func:`ratfunc`, which returns a plain ``mpq`` when the
    quotient does not depend on t.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    def __add__(self, other):
        if isinstance(other, RatFunc):
            return _make(_padd(_pmul(self.num, other.den), _pmul(other.num, self.den)),
                         _pmul(self.den, other.den))
        other = rat(other)
        if not other:
            return self
        return _make(_padd(self.num, _pscale(self.den, other)), self.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(_pneg(self.num), self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return _make(_pmul(self.num, other.num), _pmul(self.den, other.den))
        other = rat(other)
        if not other:
            return ZERO
        num, den = _integerize(_pscale(self.num, other), self.den)
        return RatFunc(num, den)

    __rmul__ = __mul__

    def inverse(self):
        return _make(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, RatFunc):
            return self * other.inverse()
        other = rat(other)
        if not other:
            raise DivisionByZero("division by zero")
        return self * (1 / other)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        return False

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return True

    def evaluate(self, x):
        d = _peval(self.den, x)
        if not d:
            raise PoleAtPoint(f"denominator vanishes at t = {x}")
        return _peval(self.num, x) / d

    def conj(self):
        # f(1/t) = t^(deg den - deg num) * rev(num) / rev(den)
        shift = (len(self.den) - 1) - (len(self.num) - 1)
        num = tuple(reversed(self.num))
        den = tuple(reversed(self.den))
        if shift > 0:
            num = (0,) * shift + num
        elif shift < 0:
            den = (0,) * (-shift) + den
        return _make(num, den)

    def is_polynomial(self):
        return len(self.den) == 1

    def __repr__(self):
        n = _pstr(self.num)
        if self.den == (1,):
            return n
        return f"({n})/({_pstr(self.den)})"


def _make(num, den):
    num = _trim(num)
    den = _trim(den)
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return ZERO
    if len(den) > 1 and len(num) > 1:
        g = _pgcd(den, num)
        if len(g) > 1:
            num, _ = _pdivmod(num, g)
            den, _ = _pdivmod(den, g)
    if len(num) == 1 and len(den) == 1:
        return mpq(num[0]) / mpq(den[0])
    num, den = _integerize(num, den)
    return RatFunc(num, den)


def ratfunc(num, den=(1,)):
    """Reduced num/den from ascending coefficient sequences."""
    return _make(tuple(rat(c) for c in num), tuple(rat(c) for c in den))


def _pstr(p):
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------


def join_signed(parts) -> str:
    """Join summands with " + ", folding a leading minus into " - "."""
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


class Scalar:
    """Element of Q(t)[s, 1/s]; immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    @staticmethod
    def of(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, RatFunc):
            return Scalar({0: x})
        x = rat(x)
        return Scalar({0: x}) if x else Scalar()

    @staticmethod
    def s(k: int = 1, coef=1) -> "Scalar":
        coef = rat(coef) if not isinstance(coef, RatFunc) else coef
        return Scalar({k: coef}) if coef else Scalar()

    @staticmethod
    def pi(k=1) -> "Scalar":
        """pi**k for integer or half-integer k."""
        twice = HalfInteger.of(k).twice_value
        return Scalar({twice: ONE})

    @staticmethod
    def t(k: int = 1) -> "Scalar":
        if k == 0:
            return Scalar({0: ONE})
        if k > 0:
            return Scalar({0: RatFunc((0,) * k + (1,), (1,))})
        return Scalar({0: RatFunc((1,), (0,) * (-k) + (1,))})

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for e, v in other.terms.items():
            w = out.get(e)
            if w is None:
                out[e] = v
            else:
                w = w + v
                if w == 0 and not isinstance(w, RatFunc):
                    del out[e]
                else:
                    out[e] = w
        return Scalar(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar({e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, type(ZERO), Fraction)) and not isinstance(other, bool):
            c = rat(other)
            if not c:
                return Scalar()
            return Scalar({e: v * c for e, v in self.terms.items()})
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = e1 + e2
                p = v1 * v2
                w = out.get(e)
                out[e] = p if w is None else w + p
        return Scalar({e: v for e, v in out.items() if isinstance(v, RatFunc) or v != 0})

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.terms:
            raise DivisionByZero("division by zero scalar")
        if len(self.terms) != 1:
            raise ValueError("only single s-power scalars are invertible in Q(t)[s, 1/s]")
        (e, v), = self.terms.items()
        return Scalar({-e: 1 / v})

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if not self.terms:
            return hash(0)
        if len(self.terms) == 1 and 0 in self.terms:
            return hash(self.terms[0])
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- queries -----------------------------------------------------------

    def is_rational(self) -> bool:
        return not self.terms or (list(self.terms) == [0] and not isinstance(self.terms[0], RatFunc))

    def rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.terms.get(0, ZERO)

    def s_exponents(self):
        return sorted(self.terms)

    def single_term(self):
        """(s_exp, coefficient) for a one-term scalar, else None."""
        if len(self.terms) != 1:
            return None
        return next(iter(self.terms.items()))

    def conj(self) -> "Scalar":
        return Scalar({e: (v.conj() if isinstance(v, RatFunc) else v) for e, v in self.terms.items()})

    def specialize_t(self, q) -> "Scalar":
        q = rat(q)
        out = {}
        for e, v in self.terms.items():
            w = v.evaluate(q) if isinstance(v, RatFunc) else v
            if w:
                out[e] = w
        return Scalar(out)

    def truncate_t(self, order: int) -> "Scalar":
        """Drop powers t^i with i > order; coefficients must be polynomial in t."""
        out = {}
        for e, v in self.terms.items():
            if isinstance(v, RatFunc):
                if len(v.den) != 1:
                    raise ValueError("truncate_t needs polynomial coefficients")
                v = _make(v.num[: order + 1], v.den)
            if isinstance(v, RatFunc) or v:
                out[e] = v
        return Scalar(out)

    # -- io ----------------------------------------------------------------

    def to_json(self):
        out = []
        for e in sorted(self.terms):
            v = self.terms[e]
            if isinstance(v, RatFunc):
                num, den = [int(c) for c in v.num], [int(c) for c in v.den]
            else:
                num, den = [int(v.numerator)], [int(v.denominator)]
            out.append({"s_exp": e, "num": num, "den": den})
        return out

    @staticmethod
    def from_json(data) -> "Scalar":
        out = {}
        for item in data:
            v = ratfunc(item["num"], item["den"])
            if isinstance(v, RatFunc) or v:
                out[int(item["s_exp"])] = v
        return Scalar(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            v = self.terms[e]
            if isinstance(v, RatFunc):
                c = repr(v)
                c = c if c.startswith("(") else f"({c})"
            else:
                c = str(v)
            pw = ("pi" if e == 2 else f"pi^{e // 2}") if e % 2 == 0 else f"pi^({e}/2)"
            if e == 0:
                parts.append(c)
            elif c == "1":
                parts.append(pw)
            elif c == "-1":
                parts.append("-" + pw)
            else:
                parts.append(f"{c}*{pw}")
        return join_signed(parts)

    def __repr__(self):
        return f"Scalar({self})"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, type(ZERO), Fraction, RatFunc, HalfInteger)):
        return Scalar.of(x)
    if isinstance(x, type(mpz(0))):
        return Scalar.of(mpq(x))
    return None


def as_scalar(x) -> Scalar:
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot interpret {x!r} as a Scalar")
    return s


def is_zero(x) -> bool:
    return not x


def conj(x):
    """Complex conjugation: t -> 1/t, s and rationals fixed."""
    if isinstance(x, Scalar):
        return x.conj()
    if isinstance(x, RatFunc):
        return x.conj()
    return x


def specialize_t(a, q) -> Scalar:
    return as_scalar(a).specialize_t(q)


# ---------------------------------------------------------------------------


class HalfInteger:
    """Exact k/2, stored as the integer k."""

    __slots__ = ("twice_value",)

    def __init__(self, twice_value: int):
        self.twice_value = int(twice_value)

    @staticmethod
    def of(x) -> "HalfInteger":
        if isinstance(x, HalfInteger):
            return x
        q = rat(x) * 2
        if q.denominator != 1:
            raise ValueError(f"{x} is not a half-integer")
        return HalfInteger(int(q))

    @property
    def value(self) -> mpq:
        return mpq(self.twice_value, 2)

    def is_integer(self):
        return self.twice_value % 2 == 0

    def __add__(self, other):
        return HalfInteger(self.twice_value + HalfInteger.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInteger(self.twice_value - HalfInteger.of(other).twice_value)

    def __eq__(self, other):
        try:
            return self.twice_value == HalfInteger.of(other).twice_value
        except (ValueError, TypeError):
            return False

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        if self.twice_value % 2 == 0:
            return f"HalfInteger({self.twice_value // 2})"
        return f"HalfInteger({self.twice_value}/2)"


def gamma_half(x) -> Scalar:
    """Gamma at an integer or half-integer argument."""
    twice = HalfInteger.of(x).twice_value
    if twice % 2 == 0:
        k = twice // 2
        if k <= 0:
            raise GammaPole(f"Gamma has a pole at {k}")
        return Scalar({0: mpq(math.factorial(k - 1))})
    # x = k + 1/2
    k = (twice - 1) // 2
    if k >= 0:
        return Scalar({1: mpq(math.factorial(2 * k), 4**k * math.factorial(k))})
    val = ONE
    # Gamma(x) = Gamma(x + 1) / x, climbing up to 1/2
    for j in range(k, 0):
        val /= mpq(2 * j + 1, 2)
    return Scalar({1: val})


def rgamma_half(x) -> Scalar:
    """1/Gamma(x); zero at the poles, as the reciprocal gamma is entire."""
    try:
        return gamma_half(x).inverse()
    except GammaPole:
        return Scalar()


def pochhammer(a, j: int):
    """Rising factorial (a)_j for rational a."""
    a = rat(a)
    out = ONE
    for i in range(j):
        out *= a + i
    return out


def falling(a, j: int):
    """Falling factorial a(a-1)...(a-j+1)."""
    a = rat(a)
    out = ONE
    for i in range(j):
        out *= a - i
    return out


def factorial(k: int) -> mpq:
    return mpq(math.factorial(k))


def binom(a, k: int) -> mpq:
    """Generalised binomial coefficient C(a, k) for rational a."""
    if k < 0:
        return ZERO
    return falling(a, k) / math.factorial(k)


class GaussianRational:
    """a + b i with rational a, b; used where t is pinned to +-i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = rat(re)
        self.im = rat(im)

    @staticmethod
    def _c(x):
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x, 0)

    def __add__(self, other):
        o = self._c(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return self._c(other) - self

    def __mul__(self, other):
        o = self._c(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._c(other)
        d = o.re * o.re + o.im * o.im
        if not d:
            raise DivisionByZero("division by zero")
        return self * GaussianRational(o.re / d, -o.im / d)

    def __eq__(self, other):
        try:
            o = self._c(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"({self.re} + {self.im}i)"
