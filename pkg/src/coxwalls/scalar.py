"""Exact arithmetic in real cyclotomic fields.

Elements of Q(c) with c = 2cos(2*pi/N) are stored as integer numerators over
the power basis 1, c, ..., c^(d-1) together with one positive denominator.
Signs are decided by a float evaluation with an explicit error bound, falling
back to mpmath at increasing precision when the bound is inconclusive.  Since
the power basis is a basis, an element with nonzero coordinates is nonzero, so
the refinement always terminates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath
from sympy import Poly, cyclotomic_poly, symbols

Number = Union[int, Fraction, "Scalar"]

_FLOAT_EPS = 2.0**-50


def _lucas(k: int) -> list[int]:
    """Coefficients (low to high) of V_k with 2cos(k t) = V_k(2cos t)."""
    prev, cur = [2], [0, 1]
    if k == 0:
        return prev
    for _ in range(k - 1):
        nxt = [0] + cur
        for i, a in enumerate(prev):
            nxt[i] -= a
        prev, cur = cur, nxt
    return cur


def _minpoly(n: int) -> list[int]:
    """Monic integer minimal polynomial of 2cos(2*pi/n), low to high."""
    if n == 1:
        return [-2, 1]
    if n == 2:
        return [2, 1]
    z = symbols("z")
    coeffs = [int(a) for a in reversed(Poly(cyclotomic_poly(n, z), z).all_coeffs())]
    d = (len(coeffs) - 1) // 2
    out = [0] * (d + 1)
    out[0] += coeffs[d]
    for j in range(1, d + 1):
        for i, a in enumerate(_lucas(j)):
            out[i] += coeffs[d + j] * a
    return out


class NumberField:
    """The real cyclotomic field Q(2cos(2*pi/N))."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.minpoly = _minpoly(n)
        self.degree = len(self.minpoly) - 1
        self._top = [-a for a in self.minpoly[: self.degree]]
        self.gen_float = 2.0 * math.cos(2.0 * math.pi / n)
        self._powers_float = [self.gen_float**i for i in range(self.degree)]
        self._powers_mp: dict[int, list] = {}

    def __repr__(self) -> str:
        return f"NumberField({self.n})"

    def powers_mp(self, prec: int) -> list:
        p = self._powers_mp.get(prec)
        if p is None:
            with mpmath.workprec(prec + 20):
                g = 2 * mpmath.cos(2 * mpmath.pi / self.n)
                p = [g**i for i in range(self.degree)]
            self._powers_mp[prec] = p
        return p

    # construction helpers -------------------------------------------------
    def zero(self) -> "Scalar":
        return Scalar(self, (0,) * self.degree, 1)

    def one(self) -> "Scalar":
        return self.rational(1)

    def rational(self, q: int | Fraction) -> "Scalar":
        q = Fraction(q)
        return Scalar(self, (q.numerator,) + (0,) * (self.degree - 1), q.denominator)

    def two_cos(self, k: int) -> "Scalar":
        """2cos(2*pi*k/N) as a field element."""
        return self.from_poly([Fraction(a) for a in _lucas(k % self.n)])

    def from_poly(self, coeffs: list[Fraction]) -> "Scalar":
        """Element given by a rational polynomial in the generator."""
        den = 1
        for a in coeffs:
            den = den * Fraction(a).denominator // math.gcd(den, Fraction(a).denominator)
        ints = [int(Fraction(a) * den) for a in coeffs]
        return Scalar(self, tuple(self._reduce_ints(ints)), den)

    def _reduce_ints(self, p: list[int]) -> list[int]:
        """Remainder of an integer polynomial modulo the minimal polynomial."""
        d = self.degree
        if len(p) <= d:
            return list(p) + [0] * (d - len(p))
        p = list(p)
        top = self._top
        for k in range(len(p) - 1, d - 1, -1):
            a = p[k]
            if a:
                base = k - d
                for i in range(d):
                    t = top[i]
                    if t:
                        p[base + i] += a * t
        return p[:d]


@lru_cache(maxsize=None)
def field(n: int) -> NumberField:
    """Cached field instance for conductor ``n``."""
    return NumberField(n)


def common_field(a: NumberField, b: NumberField) -> NumberField:
    if a is b:
        return a
    if a.degree == 1 and b.degree == 1:
        return a if a.n <= b.n else b
    if a.degree == 1:
        return b
    if b.degree == 1:
        return a
    return field(a.n * b.n // math.gcd(a.n, b.n))


class Scalar:
    """Exact element of a real cyclotomic field."""

    __slots__ = ("field", "num", "den", "_approx")

    def __init__(self, fld: NumberField, num: tuple[int, ...], den: int = 1) -> None:
        if den < 0:
            num = tuple(-a for a in num)
            den = -den
        g = den
        for a in num:
            if g == 1:
                break
            g = math.gcd(g, a)
        if g > 1:
            num = tuple(a // g for a in num)
            den //= g
        self.field = fld
        self.num = num
        self.den = den
        self._approx = None

    # coercion --------------------------------------------------------------
    def lift(self, target: NumberField) -> "Scalar":
        """The same number expressed in a field containing this one."""
        src = self.field
        if target is src:
            return self
        if self.is_rational():
            return target.rational(Fraction(self.num[0], self.den))
        if target.n % src.n:
            raise ValueError(f"{src} is not a subfield of {target}")
        image = [Fraction(a) for a in _lucas(target.n // src.n)]
        gen = target.from_poly(image)
        acc = target.zero()
        for a in reversed(self.num):
            acc = acc * gen + target.rational(a)
        return acc / self.den

    def _coerce(self, other: Number) -> tuple["Scalar", "Scalar"]:
        if isinstance(other, Scalar):
            if other.field is self.field:
                return self, other
            f = common_field(self.field, other.field)
            return self.lift(f), other.lift(f)
        if isinstance(other, (int, Fraction)):
            return self, self.field.rational(other)
        return NotImplemented  # type: ignore[return-value]

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return Fraction(self.num[0], self.den)

    # arithmetic ------------------------------------------------------------
    def __add__(self, other: Number) -> "Scalar":
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        if a.den == b.den:
            return Scalar(a.field, tuple(x + y for x, y in zip(a.num, b.num)), a.den)
        return Scalar(
            a.field,
            tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num)),
            a.den * b.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(self.field, tuple(-x for x in self.num), self.den)

    def __sub__(self, other: Number) -> "Scalar":
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other: Number) -> "Scalar":
        return (-self) + other

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, int):
            return Scalar(self.field, tuple(x * other for x in self.num), self.den)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        d = a.field.degree
        if d == 1:
            return Scalar(a.field, (a.num[0] * b.num[0],), a.den * b.den)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        prod[i + j] += x * y
        return Scalar(a.field, tuple(a.field._reduce_ints(prod)), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        fld = self.field
        d = fld.degree
        if d == 1:
            return Scalar(fld, (self.den,), self.num[0])
        # columns of the multiplication-by-self matrix
        cols = []
        for j in range(d):
            basis = [0] * d
            basis[j] = 1
            e = Scalar(fld, tuple(basis), 1) * self
            cols.append([Fraction(x, e.den) for x in e.num])
        mat = [[cols[j][i] for j in range(d)] + [Fraction(int(i == 0))] for i in range(d)]
        for c in range(d):
            piv = next(r for r in range(c, d) if mat[r][c] != 0)
            mat[c], mat[piv] = mat[piv], mat[c]
            pv = mat[c][c]
            mat[c] = [x / pv for x in mat[c]]
            for r in range(d):
                if r != c and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [x - f * y for x, y in zip(mat[r], mat[c])]
        return fld.from_poly([mat[i][d] for i in range(d)])

    def __truediv__(self, other: Number) -> "Scalar":
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Scalar(self.field, self.num, self.den * other)
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return self.inverse() * other

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    # sign and order --------------------------------------------------------
    def sign(self) -> int:
        """Certified sign: -1, 0 or 1."""
        num = self.num
        if not any(num):
            return 0
        if len(num) == 1:
            return 1 if num[0] > 0 else -1
        pw = self.field._powers_float
        try:
            terms = [a * p for a, p in zip(num, pw)]
            val = math.fsum(terms)
            bound = sum(abs(t) for t in terms) * _FLOAT_EPS * (len(num) + 2)
            if abs(val) > bound:
                return 1 if val > 0 else -1
        except OverflowError:
            pass
        prec = 120
        while True:
            pw_mp = self.field.powers_mp(prec)
            with mpmath.workprec(prec):
                terms = [mpmath.mpf(a) * p for a, p in zip(num, pw_mp)]
                val = mpmath.fsum(terms)
                bound = mpmath.fsum(abs(t) for t in terms) * mpmath.mpf(2) ** (10 - prec)
            if abs(val) > bound:
                return 1 if val > 0 else -1
            prec *= 2

    def _cmp(self, other: Number) -> int:
        pair = self._coerce(other)
        if pair is NotImplemented:
            return NotImplemented  # type: ignore[return-value]
        a, b = pair
        if a.num == b.num and a.den == b.den:
            return 0
        return (a - b).sign()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Scalar, int, Fraction)):
            pair = self._coerce(other)
            a, b = pair
            return a.num == b.num and a.den == b.den
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.n, self.num, self.den))

    # NotImplemented lets Python try the reflected method (e.g. on QuadScalar)
    def __lt__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c < 0

    def __le__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c <= 0

    def __gt__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c > 0

    def __ge__(self, other: Number) -> bool:
        c = self._cmp(other)
        return NotImplemented if c is NotImplemented else c >= 0

    def __abs__(self) -> "Scalar":
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return any(self.num)

    # rendering -------------------------------------------------------------
    def __float__(self) -> float:
        if self._approx is None:
            self._approx = float(self.to_mpf(64))
        return self._approx

    def to_mpf(self, prec: int = 64):
        pw = self.field.powers_mp(prec)
        with mpmath.workprec(prec + 10):
            return mpmath.fsum(mpmath.mpf(a) * p for a, p in zip(self.num, pw)) / self.den

    def decimal(self, digits: int = 20) -> str:
        """Decimal string with ``digits`` significant digits."""
        prec = int(digits * 3.33) + 30
        return mpmath.nstr(self.to_mpf(prec), digits, strip_zeros=False)

    def exact(self) -> list[str]:
        """Rational coordinates over the power basis of the generator."""
        return [str(Fraction(a, self.den)) for a in self.num]

    def to_json(self, digits: int = 20) -> dict:
        return {"approx": self.decimal(digits), "exact": self.exact(), "field": self.field.n}

    def __repr__(self) -> str:
        if self.is_rational():
            return f"Scalar({Fraction(self.num[0], self.den)})"
        return f"Scalar({self.decimal(12)} in Q(2cos(2pi/{self.field.n})))"

    __str__ = __repr__


def to_scalar(x: Number, fld: NumberField | None = None) -> Scalar:
    if isinstance(x, Scalar):
        return x if fld is None else x.lift(common_field(fld, x.field))
    return (fld or field(1)).rational(Fraction(x))


def cos_pi_over(m: int) -> Scalar:
    """cos(pi/m) in the smallest cyclotomic field holding it."""
    n = conductor_for(2 * m)
    if n == 1:
        return field(1).rational({1: Fraction(-1), 2: Fraction(0), 3: Fraction(1, 2)}[m])
    return field(n).two_cos(1) / 2


def conductor_for(n: int) -> int:
    """Conductor of the field holding 2cos(2*pi/n); 1 when the value is rational."""
    return 1 if n in (1, 2, 3, 4, 6) else n


class QuadScalar:
    """Exact number p + q*sqrt(D) with p, q, D in one cyclotomic field, D >= 0."""

    __slots__ = ("p", "q", "d")

    def __init__(self, p: Scalar, q: Scalar, d: Scalar) -> None:
        if d.sign() < 0:
            raise ValueError("negative radicand")
        f = common_field(common_field(p.field, q.field), d.field)
        self.p, self.q, self.d = p.lift(f), q.lift(f), d.lift(f)

    @classmethod
    def of(cls, x: Number) -> "QuadScalar":
        s = to_scalar(x)
        return cls(s, s.field.zero(), s.field.zero())

    def _as_quad(self, other: "Number | QuadScalar") -> "QuadScalar":
        if isinstance(other, QuadScalar):
            return other
        return QuadScalar(to_scalar(other, self.p.field), self.p.field.zero(), self.d)

    def _compatible(self, other: "QuadScalar") -> Scalar:
        if other.q.is_zero():
            return self.d
        if self.q.is_zero():
            return other.d
        if self.d != other.d:
            raise ValueError("radicands differ")
        return self.d

    def __add__(self, other: "Number | QuadScalar") -> "QuadScalar":
        o = self._as_quad(other)
        return QuadScalar(self.p + o.p, self.q + o.q, self._compatible(o))

    __radd__ = __add__

    def __neg__(self) -> "QuadScalar":
        return QuadScalar(-self.p, -self.q, self.d)

    def __sub__(self, other: "Number | QuadScalar") -> "QuadScalar":
        return self + (-self._as_quad(other))

    def __rsub__(self, other: Number) -> "QuadScalar":
        return (-self) + other

    def __mul__(self, other: "Number | QuadScalar") -> "QuadScalar":
        o = self._as_quad(other)
        d = self._compatible(o)
        return QuadScalar(self.p * o.p + self.q * o.q * d, self.p * o.q + self.q * o.p, d)

    __rmul__ = __mul__

    def __truediv__(self, other: "Number | QuadScalar") -> "QuadScalar":
        o = self._as_quad(other)
        d = self._compatible(o)
        norm = o.p * o.p - o.q * o.q * d
        if norm.is_zero():
            raise ZeroDivisionError("division by zero")
        conj = QuadScalar(o.p, -o.q, d)
        num = self * conj
        return QuadScalar(num.p / norm, num.q / norm, d)

    def sign(self) -> int:
        sp, sq = self.p.sign(), self.q.sign()
        if sq == 0 or self.d.is_zero():
            return sp
        if sp == 0 or sp == sq:
            return sq
        c = (self.p * self.p - self.q * self.q * self.d).sign()
        return sp if c > 0 else (0 if c == 0 else sq)

    def _cmp(self, other: "Number | QuadScalar") -> int:
        if isinstance(other, QuadScalar) and not other.q.is_zero() and not self.q.is_zero() \
                and self.d != other.d:
            return _sign_two_radicals(self, other)
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (QuadScalar, Scalar, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.q, self.d))

    def to_mpf(self, prec: int = 64):
        with mpmath.workprec(prec + 10):
            return self.p.to_mpf(prec) + self.q.to_mpf(prec) * mpmath.sqrt(self.d.to_mpf(prec))

    def __float__(self) -> float:
        return float(self.to_mpf(64))

    def decimal(self, digits: int = 20) -> str:
        prec = int(digits * 3.33) + 30
        return mpmath.nstr(self.to_mpf(prec), digits, strip_zeros=False)

    def to_json(self, digits: int = 20) -> dict:
        return {
            "approx": self.decimal(digits),
            "exact": {"p": self.p.exact(), "q": self.q.exact(), "radicand": self.d.exact()},
            "field": self.p.field.n,
        }

    def __repr__(self) -> str:
        return f"QuadScalar({self.decimal(12)})"


def _sign_two_radicals(a: QuadScalar, b: QuadScalar) -> int:
    # sign of (a.p - b.p) + a.q sqrt(a.d) - b.q sqrt(b.d)
    x = a.p - b.p
    u = QuadScalar(x, a.q, a.d)
    v = QuadScalar(b.p.field.zero(), b.q, b.d)
    su, sv = u.sign(), v.sign()
    if su != sv:
        return su if su != 0 else -sv
    if su == 0:
        return 0
    # same sign: compare squares u^2 and v^2 = b.q^2 b.d
    diff = u * u - b.q * b.q * b.d
    return su * diff.sign()


def sqrt(x: Number) -> "Scalar | QuadScalar":
    """Exact square root; rational perfect squares collapse to a Scalar."""
    s = to_scalar(x)
    if s.sign() < 0:
        raise ValueError("square root of a negative number")
    if s.is_rational():
        q = s.as_fraction()
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return s.field.rational(Fraction(rn, rd))
    return QuadScalar(s.field.zero(), s.field.one(), s)
