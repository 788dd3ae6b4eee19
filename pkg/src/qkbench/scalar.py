"""Exact arithmetic in the field Q(i)(sqrt 2).

An element is ``(a + b*sqrt2) + i*(c + d*sqrt2)`` with rational ``a, b, c, d``.
Internally the four components share one positive denominator and the
five integers are kept coprime, so two equal values always have identical
representations and equality is a tuple comparison.

Rationals are :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "ExtScalar"]

LT, EQ, GT = -1, 0, 1


class ScalarError(ValueError):
    """Raised on domain errors (complex argument to an ordering, bad syntax)."""


def _normalize(a: int, b: int, c: int, d: int, den: int) -> tuple[int, int, int, int, int]:
    if den < 0:
        a, b, c, d, den = -a, -b, -c, -d, -den
    if not (a or b or c or d):
        return 0, 0, 0, 0, 1
    g = math.gcd(a, b, c, d, den)
    if g != 1:
        a, b, c, d, den = a // g, b // g, c // g, d // g, den // g
    return a, b, c, d, den


def _sign_sqrt2(u: int, v: int) -> int:
    """Sign of ``u + v*sqrt2`` for integers, decided by squaring."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0:
        return (v > 0) - (v < 0)
    if (u > 0) == (v > 0):
        return 1 if u > 0 else -1
    # opposite signs: compare u^2 against 2 v^2
    diff = u * u - 2 * v * v
    s = (diff > 0) - (diff < 0)
    return s if u > 0 else -s


class ExtScalar:
    __slots__ = ("_a", "_b", "_c", "_d", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        fa, fb, fc, fd = (Fraction(v) for v in (a, b, c, d))
        den = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
        self._set(
            *_normalize(
                fa.numerator * (den // fa.denominator),
                fb.numerator * (den // fb.denominator),
                fc.numerator * (den // fc.denominator),
                fd.numerator * (den // fd.denominator),
                den,
            )
        )

    def _set(self, a, b, c, d, den):
        self._a, self._b, self._c, self._d, self._den = a, b, c, d, den
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, c: int, d: int, den: int) -> ExtScalar:
        obj = cls.__new__(cls)
        obj._set(*_normalize(a, b, c, d, den))
        return obj

    @classmethod
    def coerce(cls, x: Number) -> ExtScalar:
        if isinstance(x, ExtScalar):
            return x
        if isinstance(x, (int, Fraction)):
            f = Fraction(x)
            return cls._raw(f.numerator, 0, 0, 0, f.denominator)
        raise TypeError(f"cannot coerce {type(x).__name__} to ExtScalar")

    # components -------------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._a, self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._b, self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._c, self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._d, self._den)

    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.d

    def is_zero(self) -> bool:
        return not (self._a or self._b or self._c or self._d)

    def is_real(self) -> bool:
        return not (self._c or self._d)

    def is_rational(self) -> bool:
        return not (self._b or self._c or self._d)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExtScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = ExtScalar.coerce(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        p, q = self._den, other._den
        return ExtScalar._raw(
            self._a * q + other._a * p,
            self._b * q + other._b * p,
            self._c * q + other._c * p,
            self._d * q + other._d * p,
            p * q,
        )

    __radd__ = __add__

    def __neg__(self):
        obj = ExtScalar.__new__(ExtScalar)
        obj._set(-self._a, -self._b, -self._c, -self._d, self._den)
        return obj

    def __sub__(self, other):
        if not isinstance(other, ExtScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExtScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = ExtScalar.coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        a, b, c, d = self._a, self._b, self._c, self._d
        e, f, g, h = other._a, other._b, other._c, other._d
        return ExtScalar._raw(
            a * e + 2 * b * f - c * g - 2 * d * h,
            a * f + b * e - c * h - d * g,
            a * g + 2 * b * h + c * e + 2 * d * f,
            a * h + b * g + c * f + d * e,
            self._den * other._den,
        )

    __rmul__ = __mul__

    def conj(self) -> ExtScalar:
        """Complex conjugate (``i -> -i``); sqrt2 is fixed."""
        obj = ExtScalar.__new__(ExtScalar)
        obj._set(self._a, self._b, -self._c, -self._d, self._den)
        return obj

    def inverse(self) -> ExtScalar:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i)(sqrt2)")
        a, b, c, d = self._a, self._b, self._c, self._d
        # x = (A + iB)/D, |x|^2 D^2 = A^2 + B^2 = n0 + n1*sqrt2
        n0 = a * a + 2 * b * b + c * c + 2 * d * d
        n1 = 2 * a * b + 2 * c * d
        norm = n0 * n0 - 2 * n1 * n1  # nonzero: n0 + n1 sqrt2 > 0 and sqrt2 irrational
        # (A - iB)(n0 - n1 sqrt2) * D / norm
        ra = a * n0 - 2 * b * n1
        rb = b * n0 - a * n1
        rc = -(c * n0 - 2 * d * n1)
        rd = -(d * n0 - c * n1)
        D = self._den
        return ExtScalar._raw(ra * D, rb * D, rc * D, rd * D, norm)

    def __truediv__(self, other):
        if not isinstance(other, ExtScalar):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = ExtScalar.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExtScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> ExtScalar:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def abs2(self) -> ExtScalar:
        """``x * conj(x)``, always real and nonnegative."""
        return self * self.conj()

    # comparison -------------------------------------------------------
    def _key(self):
        return (self._a, self._b, self._c, self._d, self._den)

    def __eq__(self, other):
        if isinstance(other, ExtScalar):
            return self._key() == other._key()
        if isinstance(other, (int, Fraction)):
            return self._key() == ExtScalar.coerce(other)._key()
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._a, self._den))
            else:
                self._hash = hash(self._key())
        return self._hash

    def sign(self) -> int:
        """Sign of a real element: -1, 0 or 1."""
        if not self.is_real():
            raise ScalarError(f"sign of non-real value {self}")
        return _sign_sqrt2(self._a, self._b)

    def cmp(self, q) -> int:
        """Three-way comparison of a real element with a rational or real element."""
        return (self - q).sign()

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __bool__(self):
        return not self.is_zero()

    # rendering --------------------------------------------------------
    def __complex__(self):
        r2 = math.sqrt(2)
        return complex(float(self.a) + float(self.b) * r2, float(self.c) + float(self.d) * r2)

    def __float__(self):
        if not self.is_real():
            raise ScalarError(f"float() of non-real value {self}")
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"ExtScalar({format_scalar(self)!r})"


ZERO = ExtScalar()
ONE = ExtScalar(1)
I = ExtScalar(0, 0, 1, 0)
SQRT2 = ExtScalar(0, 1)
INV_SQRT2 = ExtScalar(0, Fraction(1, 2))


def ext_arith(x: Number, y: Number | None, op: str) -> ExtScalar:
    """Apply ``op`` in {add, sub, mul, div, conj, neg}; unary ops ignore ``y``."""
    x = ExtScalar.coerce(x)
    if op == "conj":
        return x.conj()
    if op == "neg":
        return -x
    y = ExtScalar.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def cmp_to_rational(x: Number, q) -> int:
    """Exact sign of ``x - q`` for real ``x``; returns LT, EQ or GT."""
    x = ExtScalar.coerce(x)
    if not x.is_real():
        raise ScalarError(f"cannot order non-real value {x}")
    q = Fraction(q)
    # (a - q) + b sqrt2 over the common denominator den * q.den
    u = x._a * q.denominator - q.numerator * x._den
    v = x._b * q.denominator
    return _sign_sqrt2(u, v)


# text syntax -----------------------------------------------------------

_TERM = re.compile(r"(?P<coef>\d+(?:/\d+)?)?(?P<fac>(?:\*?(?:r2|i))*)")
_FACTOR = re.compile(r"r2|i")


def parse_scalar(text: str) -> ExtScalar:
    """Parse ``a/b + c/d*r2 + e/f*i + g/h*i*r2`` (any subset, any order).

    Whitespace is ignored. ``r2`` stands for sqrt 2.
    """
    s = "".join(text.split())
    if not s:
        raise ScalarError("empty scalar")
    parts = re.split(r"(?=[+-])", s)
    if parts and parts[0] == "":
        parts = parts[1:]
    comps = [Fraction(0)] * 4
    for part in parts:
        sign = 1
        body = part
        if body[:1] in "+-":
            sign = -1 if body[0] == "-" else 1
            body = body[1:]
        m = _TERM.fullmatch(body)
        if not body or m is None:
            raise ScalarError(f"malformed scalar term {part!r} in {text!r}")
        coef, fac = m.group("coef"), m.group("fac")
        if coef is None and (not fac or fac.startswith("*")):
            raise ScalarError(f"malformed scalar term {part!r} in {text!r}")
        if coef is not None and fac and not fac.startswith("*"):
            raise ScalarError(f"missing '*' in term {part!r} of {text!r}")
        factors = _FACTOR.findall(fac)
        if factors.count("i") > 1 or factors.count("r2") > 1:
            raise ScalarError(f"repeated factor in term {part!r} of {text!r}")
        try:
            value = Fraction(coef) if coef is not None else Fraction(1)
        except ZeroDivisionError:
            raise ScalarError(f"zero denominator in {text!r}") from None
        slot = (2 if "i" in factors else 0) + (1 if "r2" in factors else 0)
        comps[slot] += sign * value
    return ExtScalar(*comps)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: ExtScalar) -> str:
    """Canonical text form, inverse of :func:`parse_scalar`."""
    out = []
    for q, suffix in zip(x.components(), ("", "*r2", "*i", "*i*r2")):
        if q == 0:
            continue
        mag = abs(q)
        if suffix and mag == 1:
            body = suffix[1:]
        else:
            body = _fmt_q(mag) + suffix
        if not out:
            out.append(("-" if q < 0 else "") + body)
        else:
            out.append(("- " if q < 0 else "+ ") + body)
    return " ".join(out) if out else "0"


def format_rational(q) -> str:
    """``p/q`` form, always with an explicit denominator."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction("".join(text.split()))
    except (ValueError, ZeroDivisionError):
        raise ScalarError(f"malformed rational {text!r}") from None
