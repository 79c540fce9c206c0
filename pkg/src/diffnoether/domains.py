"""Coefficient domains.

Three domains are supported:

``QQ``
    exact rationals, stored as ``int`` when integral and ``Fraction``
    otherwise (the two compare and hash identically);
``QQt``
    rational functions in the time symbol ``t`` with ``t' = 1``;
``CC``
    double precision complex numbers with an absolute zero tolerance.

Domains never mix.  Promotion goes through :meth:`Domain.convert` and only
in the directions QQ -> QQt and QQ -> CC.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import DomainMismatch

DEFAULT_TOLERANCE = 1e-9


def qq(x):
    """Canonical exact rational: int when integral, Fraction otherwise."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return qq(Fraction(x.numerator, x.denominator))
    if isinstance(x, str):
        return qq(Fraction(x))
    raise DomainMismatch(f"not an exact rational: {x!r}")


# -- dense univariate polynomials over QQ (tuples, lowest degree first) -----

def up_strip(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(qq(c) for c in a)


def up_add(a, b):
    n = max(len(a), len(b))
    return up_strip((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                    for i in range(n))


def up_neg(a):
    return tuple(-c for c in a)


def up_sub(a, b):
    return up_add(a, up_neg(b))


def up_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return up_strip(out)


def up_scale(a, c):
    return up_strip(x * c for x in a)


def up_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / lead
        q[k] = c
        for i, y in enumerate(b):
            a[i + k] -= c * y
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return up_strip(q), up_strip(a)


def up_monic(a):
    if not a:
        return a
    return up_scale(a, 1 / Fraction(a[-1]))


def up_gcd(a, b):
    a, b = up_strip(a), up_strip(b)
    while b:
        a, b = b, up_divmod(a, b)[1]
    return up_monic(a)


def up_deriv(a):
    return up_strip(i * a[i] for i in range(1, len(a)))


def up_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def up_degree(a):
    return len(a) - 1


def up_format(a, var="t"):
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            power = var if k == 1 else f"{var}^{k}"
            body = power if mag == 1 else f"{mag}*{power}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class RatFunc:
    """Reduced quotient ``num/den`` of polynomials in t; ``den`` is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=(), den=(1,)):
        num, den = up_strip(num), up_strip(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = (1,)
        elif len(den) > 1:
            g = up_gcd(num, den)
            if len(g) > 1:
                num = up_divmod(num, g)[0]
                den = up_divmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = up_scale(num, Fraction(1) / lead)
            den = up_scale(den, Fraction(1) / lead)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, c):
        return cls((qq(c),))

    @classmethod
    def t(cls):
        return cls((0, 1))

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(up_add(self.num, other.num), self.den)
        return RatFunc(up_add(up_mul(self.num, other.den), up_mul(other.num, self.den)),
                       up_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(up_neg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(up_mul(self.num, other.num), up_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(up_mul(self.num, other.den), up_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e):
        if e < 0:
            return RatFunc.const(1) / (self ** -e)
        out = RatFunc.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.den == (1,) and len(self.num) <= 1:
                self._hash = hash(self.num[0] if self.num else 0)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def derivative(self):
        # (n/d)' = (n'd - nd') / d^2
        n, d = self.num, self.den
        return RatFunc(up_sub(up_mul(up_deriv(n), d), up_mul(n, up_deriv(d))), up_mul(d, d))

    def __call__(self, x):
        return up_eval(self.num, x) / up_eval(self.den, x)

    @property
    def is_polynomial(self):
        return self.den == (1,)

    @property
    def is_constant(self):
        return self.den == (1,) and len(self.num) <= 1

    def constant_value(self):
        return self.num[0] if self.num else 0

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)})"


def format_ratfunc(r):
    """Text that the parser reads back as the same element."""
    num = up_format(r.num)
    if r.den == (1,):
        return num
    return f"({num})/({up_format(r.den)})"


class Domain:
    name = "?"
    time_mode = False

    zero = 0
    one = 1

    def convert(self, x):
        raise NotImplementedError

    def is_zero(self, x):
        return x == 0

    def derive(self, x):
        return self.zero

    def div(self, a, b):
        return self.normalize(a / b)

    def normalize(self, x):
        return x

    def __repr__(self):
        return self.name


class RationalField(Domain):
    name = "QQ"

    def convert(self, x):
        if isinstance(x, RatFunc):
            if x.is_constant:
                return x.constant_value()
            raise DomainMismatch("rational function is not a constant")
        if isinstance(x, (complex, float)):
            raise DomainMismatch("float values cannot be demoted to exact rationals")
        return qq(x)

    def normalize(self, x):
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def div(self, a, b):
        return qq(Fraction(a) / b)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class RationalFunctionField(Domain):
    name = "QQ(t)"
    time_mode = True

    zero = RatFunc()
    one = RatFunc((1,))

    def convert(self, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (complex, float)):
            raise DomainMismatch("float values cannot be demoted to exact rationals")
        return RatFunc.const(x)

    def is_zero(self, x):
        return not x

    def derive(self, x):
        return x.derivative()

    def div(self, a, b):
        return a / b

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField)

    def __hash__(self):
        return hash("QQ(t)")


class ComplexField(Domain):
    name = "CC"

    zero = 0j
    one = 1 + 0j

    def __init__(self, tol=DEFAULT_TOLERANCE):
        self.tol = tol

    def convert(self, x):
        if isinstance(x, RatFunc):
            if x.is_constant:
                x = x.constant_value()
            else:
                raise DomainMismatch("rational function is not a constant")
        return complex(x)

    def is_zero(self, x):
        return abs(x) <= self.tol

    def div(self, a, b):
        return a / b

    def __eq__(self, other):
        return isinstance(other, ComplexField)

    def __hash__(self):
        return hash("CC")

    def __repr__(self):
        return f"CC(tol={self.tol:g})"


QQ = RationalField()
QQt = RationalFunctionField()
CC = ComplexField()


def format_scalar(c):
    """Bit-exact text for a scalar: ``num/den`` for rationals."""
    if isinstance(c, RatFunc):
        return format_ratfunc(c)
    if isinstance(c, complex):
        return repr(c)
    c = qq(c)
    return str(c)


def parse_scalar(text, domain=QQ):
    text = text.strip()
    if isinstance(domain, ComplexField):
        return complex(text.replace(" ", ""))
    return domain.convert(Fraction(text))
