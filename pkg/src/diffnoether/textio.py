"""Text form of differential polynomials.

Grammar (whitespace is ignored)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' exponent)*
    atom    := NUMBER | NAME deriv? | '(' expr ')'
    deriv   := "'" {1,3} | '^(' INTEGER ')'

``x^(k)`` directly after a name is the k-th derivative; any other ``^`` is
a power with a non-negative integer exponent.  Division is only allowed by
nonzero constants.  In time mode the name ``t`` denotes the coefficient
symbol with ``t' = 1``.
"""

from __future__ import annotations

from .diffpoly import DiffPoly
from .domains import QQ, QQt, RatFunc, format_ratfunc, up_format
from .errors import NegativeDerivativeOrder, PolySyntaxError

MAX_PRIMES = 3


def default_name(index):
    return f"y{index}" if index > 0 else f"_a{-index}"


def _var_text(v, names):
    if names is not None and 0 < v.index <= len(names):
        name = names[v.index - 1]
    else:
        name = default_name(v.index)
    if v.order == 0:
        return name
    if v.order <= MAX_PRIMES:
        return name + "'" * v.order
    return f"{name}^({v.order})"


def _mono_text(m, names):
    parts = []
    for v, e in m:
        s = _var_text(v, names)
        parts.append(s if e == 1 else f"{s}^{e}")
    # highest variable first reads more naturally
    return "*".join(reversed(parts))


def _is_simple(c):
    return not isinstance(c, RatFunc) or c.is_constant


def format_diffpoly(p: DiffPoly, names=None) -> str:
    """Deterministic text; ``parse_diffpoly(format_diffpoly(p)) == p``."""
    if p.is_zero():
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        mono = _mono_text(m, names)
        if isinstance(c, complex):
            body = f"({c!r})" + (f"*{mono}" if mono else "")
            out.append(body if k == 0 else f" + {body}")
            continue
        if isinstance(c, RatFunc) and c.den == (1,) and sum(1 for x in c.num if x) == 1:
            k_t = len(c.num) - 1
            lead = c.num[-1]
            neg = lead < 0
            body = up_format((0,) * k_t + (-lead if neg else lead,))
            if mono:
                body = mono if body == "1" else f"{body}*{mono}"
            out.append((("-" if neg else "") + body) if k == 0 else ((" - " if neg else " + ") + body))
            continue
        if not _is_simple(c):
            coeff = (f"({up_format(c.num)})" if c.den == (1,) else
                     f"({up_format(c.num)})/({up_format(c.den)})")
            body = coeff + (f"*{mono}" if mono else "")
            out.append(body if k == 0 else f" + {body}")
            continue
        if isinstance(c, RatFunc):
            c = c.constant_value()
        neg = c < 0
        mag = -c if neg else c
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class _Parser:
    def __init__(self, text, names, time):
        self.text = text
        self.pos = 0
        self.names = {n: i + 1 for i, n in enumerate(names)}
        self.time = time
        self.domain = QQt if time else QQ
        if time and "t" in self.names:
            raise PolySyntaxError("'t' is reserved for the time symbol in time mode")

    # -- lexing helpers -------------------------------------------------------

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _error(self, msg, pos=None):
        return PolySyntaxError(msg, self.pos if pos is None else pos, self.text)

    def _expect(self, ch):
        if self._peek() != ch:
            raise self._error(f"expected {ch!r}")
        self.pos += 1

    def _integer(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self._error("expected an integer")
        return int(self.text[start:self.pos])

    # -- grammar --------------------------------------------------------------

    def parse(self):
        if not self.text.strip():
            raise self._error("empty expression", 0)
        p = self.expr()
        if self._peek():
            raise self._error(f"unexpected character {self._peek()!r}")
        return p

    def expr(self):
        p = self.term()
        while self._peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self._peek() in ("*", "/"):
            op = self.text[self.pos]
            where = self.pos
            self.pos += 1
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise self._error("division only by nonzero constants", where)
                p = p / q
        return p

    def unary(self):
        ch = self._peek()
        if ch == "-":
            self.pos += 1
            return -self.unary()
        if ch == "+":
            self.pos += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        while self._peek() == "^":
            self.pos += 1
            if self._peek() == "(":
                self.pos += 1
                if self._peek() == "-":
                    raise self._error("negative exponent")
                e = self._integer()
                self._expect(")")
            else:
                if self._peek() == "-":
                    raise self._error("negative exponent")
                e = self._integer()
            base = base ** e
        return base

    def atom(self):
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            p = self.expr()
            self._expect(")")
            return p
        if ch.isdigit():
            return DiffPoly.const(self._integer(), self.domain)
        if ch.isalpha() or ch == "_":
            return self.name()
        if not ch:
            raise self._error("unexpected end of input")
        raise self._error(f"unexpected character {ch!r}")

    def name(self):
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        ident = self.text[start:self.pos]
        if self.time and ident == "t":
            return DiffPoly.const(RatFunc.t(), QQt)
        if ident not in self.names:
            raise self._error(f"unknown indeterminate {ident!r}", start)
        order = 0
        if self.pos < len(self.text) and self.text[self.pos] == "'":
            while self.pos < len(self.text) and self.text[self.pos] == "'":
                order += 1
                self.pos += 1
            if order > MAX_PRIMES:
                raise self._error(f"at most {MAX_PRIMES} primes; use {ident}^({order})", start)
        elif self.text.startswith("^(", self.pos):
            self.pos += 2
            self._skip()
            if self._peek() == "-":
                raise NegativeDerivativeOrder("negative derivative order", self.pos, self.text)
            order = self._integer()
            self._expect(")")
        return DiffPoly.var(self.names[ident], order, self.domain)


def parse_diffpoly(text: str, names=None, time: bool = False) -> DiffPoly:
    """Parse ``text`` over the indeterminates ``names`` (default ``y1, y2, ...``)."""
    if names is None:
        names = _guess_default_names(text)
    return _Parser(text, list(names), time).parse()


def _guess_default_names(text):
    import re

    idx = [int(m) for m in re.findall(r"\by(\d+)", text)]
    return [f"y{i}" for i in range(1, max(idx, default=0) + 1)]


def format_coefficient(c):
    if isinstance(c, RatFunc):
        return format_ratfunc(c)
    return str(c)
