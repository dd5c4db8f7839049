"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt d).

Rationals are plain :class:`fractions.Fraction` objects.  Elements
``a + b*sqrt(d)`` are :class:`QuadScalar`.  The two mix freely in arithmetic;
two quadratic scalars with different radicands never do.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Union

from .errors import DomainMismatch, ParseError

Scalar = Union[Fraction, "QuadScalar"]


def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class QuadScalar:
    """The number ``a + b*sqrt(d)`` with rational ``a``, ``b``.

    ``d`` must be a square-free integer >= 2.  Instances are immutable.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d: int = 2):
        if not _is_square_free(d):
            raise ValueError(f"radicand must be square-free and >= 2, got {d}")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadScalar is immutable")

    def __reduce__(self):
        return (QuadScalar, (self.a, self.b, self.d))

    # -- coercion ------------------------------------------------------
    def _coerce(self, other) -> Optional["QuadScalar"]:
        if isinstance(other, QuadScalar):
            if other.d != self.d:
                raise DomainMismatch(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Rational)):
            return QuadScalar(other, 0, self.d)
        return None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadScalar(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            # norm vanishes only at zero because d is not a square
            raise ZeroDivisionError("QuadScalar division by zero")
        return QuadScalar(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadScalar(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order ---------------------------------------------------------
    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt(d)``."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        return sa * _sign(self.a * self.a - self.b * self.b * self.d)

    def _cmp(self, other) -> Optional[int]:
        if isinstance(other, float) and math.isinf(other):
            return -1 if other > 0 else 1
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __eq__(self, other):
        if isinstance(other, QuadScalar) and other.d != self.d:
            return False
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def sqrt(d: int) -> QuadScalar:
    """Return ``sqrt(d)`` as an exact quadratic scalar."""
    return QuadScalar(0, 1, d)


def as_scalar(x) -> Scalar:
    """Coerce ints, Fractions and QuadScalars to an exact scalar."""
    if isinstance(x, QuadScalar):
        return x if x.b != 0 else x.a
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def sign(x) -> int:
    if isinstance(x, QuadScalar):
        return x.sign()
    return _sign(x)


def radicand_of(x) -> Optional[int]:
    if isinstance(x, QuadScalar) and x.b != 0:
        return x.d
    return None


# -- domains -----------------------------------------------------------------


class Domain:
    """Scalar domain descriptor: ``Q`` or ``Q(sqrt d)``."""

    __slots__ = ("d",)

    def __init__(self, d: Optional[int] = None):
        if d is not None and not _is_square_free(d):
            raise ParseError(f"radicand must be square-free and >= 2, got {d}")
        self.d = d

    def __eq__(self, other):
        return isinstance(other, Domain) and other.d == self.d

    def __hash__(self):
        return hash(("Domain", self.d))

    def __repr__(self):
        return f"Domain({self.d})"

    def __str__(self):
        return "Q" if self.d is None else f"Q(sqrt {self.d})"

    def join(self, other: "Domain") -> "Domain":
        if self.d is None:
            return other
        if other.d is None or other.d == self.d:
            return self
        raise DomainMismatch(f"cannot mix sqrt({self.d}) and sqrt({other.d})")

    @classmethod
    def of(cls, values: Iterable) -> "Domain":
        dom = cls()
        for v in values:
            r = radicand_of(v)
            if r is not None:
                dom = dom.join(cls(r))
        return dom

    def parse(self, text: str) -> Scalar:
        x = parse_scalar(text)
        r = radicand_of(x)
        if r is not None and r != self.d:
            raise DomainMismatch(f"scalar {text!r} does not belong to {self}")
        return x


_DOMAIN_RE = re.compile(r"Q(?:\(\s*sqrt\s*\(?\s*(\d+)\s*\)?\s*\))?")


def parse_domain(text: str) -> Domain:
    m = _DOMAIN_RE.fullmatch(text.strip())
    if not m:
        raise ParseError(f"bad domain line: {text!r}")
    return Domain(int(m.group(1)) if m.group(1) else None)


# -- text syntax -------------------------------------------------------------

_RAT = r"\d+(?:/\d+)?"
_RAT_RE = re.compile(r"[+-]?" + _RAT)
_SURD_RE = re.compile(r"(.*?)([+-]?)(" + _RAT + r"\*)?sqrt\((\d+)\)")


def _parse_rational(text: str) -> Fraction:
    if not _RAT_RE.fullmatch(text):
        raise ParseError(f"bad rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}") from None


def parse_scalar(text: str) -> Scalar:
    """Parse ``p``, ``p/q`` or ``p/q+r/s*sqrt(d)`` (signs optional)."""
    s = "".join(text.split())
    if not s:
        raise ParseError("empty scalar")
    if "sqrt" not in s:
        return _parse_rational(s)
    m = _SURD_RE.fullmatch(s)
    if not m:
        raise ParseError(f"bad scalar: {text!r}")
    head, sgn, coef, d = m.groups()
    if head and not sgn:
        raise ParseError(f"bad scalar: {text!r}")
    a = _parse_rational(head) if head else Fraction(0)
    b = _parse_rational(coef[:-1]) if coef else Fraction(1)
    if sgn == "-":
        b = -b
    try:
        q = QuadScalar(a, b, int(d))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return q if q.b != 0 else q.a


def _format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_scalar(x) -> str:
    """Canonical whitespace-free text for an exact scalar."""
    if isinstance(x, QuadScalar):
        if x.b == 0:
            return _format_rational(x.a)
        surd = f"{_format_rational(abs(x.b))}*sqrt({x.d})"
        if x.a == 0:
            return ("-" if x.b < 0 else "") + surd
        return _format_rational(x.a) + ("-" if x.b < 0 else "+") + surd
    if isinstance(x, (int, Rational)):
        return _format_rational(Fraction(x))
    raise TypeError(f"not an exact scalar: {x!r}")
