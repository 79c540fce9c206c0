"""Sparse differential polynomials with exact coefficients.

A :class:`DiffPoly` is a finite map from monomials to nonzero scalars of a
single :mod:`~diffnoether.domains` domain.  Monomials are tuples of
``(DerivVar, exponent)`` pairs sorted by variable, so the empty tuple is the
unit monomial and structural equality is mathematical equality.

Indeterminates are numbered from 1.  Non-positive indices are reserved for
auxiliary algebraic variables used internally (elimination placeholders and
the like); they never receive derivatives.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import NamedTuple

from .domains import QQ, Domain
from .errors import (
    DomainMismatch,
    MissingImage,
    UnassignedVariable,
    UndefinedSeparant,
)

NEG_INF = float("-inf")


class DerivVar(NamedTuple):
    """The derivative ``y_index^(order)``."""

    index: int
    order: int = 0

    def prime(self, k=1):
        return DerivVar(self.index, self.order + k)


# -- monomials ---------------------------------------------------------------

def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m):
    return sum(e for _, e in m)


def mono_weight(m):
    return sum(v.order * e for v, e in m)


def mono_divides(small, big):
    """Quotient ``big / small`` or None when ``small`` does not divide ``big``."""
    d = dict(big)
    for v, e in small:
        have = d.get(v, 0)
        if have < e:
            return None
        if have == e:
            del d[v]
        else:
            d[v] = have - e
    return tuple(sorted(d.items()))


def display_key(m):
    """Monomial order used for output: weight, then degree, then variables."""
    return (mono_weight(m), mono_degree(m), m)


def _deglex_key(m):
    # graded lex with larger variables more significant; multiplicative
    return (mono_degree(m), tuple(reversed(m)))


class DiffPoly:
    """Immutable sparse differential polynomial."""

    __slots__ = ("_terms", "domain", "_hash", "_vars")

    def __init__(self, terms=None, domain: Domain = QQ):
        clean = {}
        if terms:
            for m, c in terms.items():
                m = tuple(sorted((DerivVar(*v), int(e)) for v, e in m if e))
                if any(e < 0 for _, e in m):
                    raise ValueError("negative exponent in monomial")
                c = domain.convert(c)
                if m in clean:
                    c = c + clean[m]
                if domain.is_zero(c):
                    clean.pop(m, None)
                else:
                    clean[m] = domain.normalize(c)
        self._terms = clean
        self.domain = domain
        self._hash = None
        self._vars = None

    @classmethod
    def _new(cls, terms, domain):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.domain = domain
        obj._hash = None
        obj._vars = None
        return obj

    @classmethod
    def const(cls, c, domain: Domain = QQ):
        c = domain.convert(c)
        return cls._new({} if domain.is_zero(c) else {(): domain.normalize(c)}, domain)

    @classmethod
    def var(cls, index, order=0, domain: Domain = QQ):
        return cls._new({((DerivVar(index, order), 1),): domain.one}, domain)

    @classmethod
    def zero(cls, domain: Domain = QQ):
        return cls._new({}, domain)

    @classmethod
    def one(cls, domain: Domain = QQ):
        return cls._new({(): domain.one}, domain)

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_coeff(self):
        return self._terms.get((), self.domain.zero)

    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(v for m in self._terms for v, _ in m)
        return self._vars

    def indices(self) -> set:
        return {v.index for v in self.variables()}

    def total_degree(self):
        return max((mono_degree(m) for m in self._terms), default=NEG_INF)

    def max_order(self):
        return max((v.order for v in self.variables()), default=NEG_INF)

    def degree_in(self, v):
        if not self._terms:
            return NEG_INF
        best = 0
        for m in self._terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def coeffs_in(self, v) -> dict:
        """View as univariate in ``v``: ``{degree: coefficient}``."""
        parts = {}
        for m, c in self._terms.items():
            k = 0
            rest = m
            for w, e in m:
                if w == v:
                    k = e
                    rest = tuple(p for p in m if p[0] != v)
                    break
            parts.setdefault(k, {})[rest] = c
        return {k: DiffPoly._new(t, self.domain) for k, t in parts.items()}

    @classmethod
    def from_coeffs(cls, coeffs, v, domain):
        out = cls.zero(domain)
        x = cls.var(v.index, v.order, domain)
        for k, c in coeffs.items():
            out = out + c * x ** k
        return out

    def leading_term(self):
        m = max(self._terms, key=_deglex_key)
        return m, self._terms[m]

    def sorted_terms(self, reverse=True):
        return sorted(self._terms.items(), key=lambda mc: display_key(mc[0]), reverse=reverse)

    def convert(self, domain: Domain):
        if domain == self.domain:
            return self
        return DiffPoly({m: domain.convert(c) for m, c in self._terms.items()}, domain)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DiffPoly):
            if other.domain != self.domain:
                raise DomainMismatch(f"cannot combine {self.domain!r} and {other.domain!r}")
            return other
        return DiffPoly.const(other, self.domain)

    def __add__(self, other):
        other = self._coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        dom = self.domain
        t = dict(self._terms)
        for m, c in other._terms.items():
            s = t.get(m)
            if s is None:
                t[m] = c
            else:
                s = s + c
                if dom.is_zero(s):
                    del t[m]
                else:
                    t[m] = dom.normalize(s)
        return DiffPoly._new(t, dom)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._new({m: -c for m, c in self._terms.items()}, self.domain)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        dom = self.domain
        c = dom.convert(c)
        if dom.is_zero(c):
            return DiffPoly.zero(dom)
        return DiffPoly._new({m: dom.normalize(x * c) for m, x in self._terms.items()}, dom)

    def __mul__(self, other):
        if not isinstance(other, DiffPoly):
            return self.scale(other)
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return DiffPoly.zero(self.domain)
        if len(other._terms) == 1 and () in other._terms:
            return self.scale(other._terms[()])
        if len(self._terms) == 1 and () in self._terms:
            return other.scale(self._terms[()])
        dom = self.domain
        out = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                prev = get(m)
                out[m] = c1 * c2 if prev is None else prev + c1 * c2
        t = {m: dom.normalize(c) for m, c in out.items() if not dom.is_zero(c)}
        return DiffPoly._new(t, dom)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = DiffPoly.one(self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero scalar or by a constant polynomial."""
        if isinstance(other, DiffPoly):
            if not other.is_constant() or other.is_zero():
                raise ZeroDivisionError("can only divide by a nonzero constant")
            other = other.constant_coeff()
        c = self.domain.convert(other)
        if self.domain.is_zero(c):
            raise ZeroDivisionError("division by zero")
        return DiffPoly._new({m: self.domain.div(x, c) for m, x in self._terms.items()},
                             self.domain)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.const(other, self.domain)
            except (DomainMismatch, TypeError, ValueError):
                return NotImplemented
        return self.domain == other.domain and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"DiffPoly({self})"

    def __str__(self):
        from .textio import format_diffpoly

        return format_diffpoly(self)


def as_poly(x, domain: Domain = QQ) -> DiffPoly:
    return x if isinstance(x, DiffPoly) else DiffPoly.const(x, domain)


def var(index, order=0, domain: Domain = QQ) -> DiffPoly:
    return DiffPoly.var(index, order, domain)


# -- differential structure ---------------------------------------------------

def derive(p: DiffPoly) -> DiffPoly:
    """Formal derivative.  In time mode the coefficients obey ``t' = 1``."""
    dom = p.domain
    out = {}
    for m, c in p.items():
        if dom.time_mode:
            dc = dom.derive(c)
            if not dom.is_zero(dc):
                out[m] = out[m] + dc if m in out else dc
        for v, e in m:
            if v.index <= 0:
                continue
            d = dict(m)
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            w = DerivVar(v.index, v.order + 1)
            d[w] = d.get(w, 0) + 1
            nm = tuple(sorted(d.items()))
            inc = c * e
            out[nm] = out[nm] + inc if nm in out else inc
    t = {m: dom.normalize(c) for m, c in out.items() if not dom.is_zero(c)}
    return DiffPoly._new(t, dom)


def derive_n(p: DiffPoly, n: int) -> DiffPoly:
    for _ in range(n):
        p = derive(p)
    return p


def order_wrt(p: DiffPoly, i: int):
    """Largest ``j`` with ``y_i^(j)`` in ``p``; ``-inf`` when ``y_i`` is absent."""
    return max((v.order for v in p.variables() if v.index == i), default=NEG_INF)


def separant_initial(p: DiffPoly, i: int):
    """Return ``(separant, initial, h, D)`` of ``p`` with respect to ``y_i``."""
    h = order_wrt(p, i)
    if h == NEG_INF:
        raise UndefinedSeparant(f"polynomial does not depend on indeterminate {i}")
    v = DerivVar(i, h)
    coeffs = p.coeffs_in(v)
    D = max(coeffs)
    initial = coeffs[D]
    x = DiffPoly.var(i, h, p.domain)
    sep = DiffPoly.zero(p.domain)
    for k, c in coeffs.items():
        if k:
            sep = sep + c * (x ** (k - 1)) * k
    return sep, initial, h, D


def separant(p: DiffPoly, i: int) -> DiffPoly:
    return separant_initial(p, i)[0]


def initial(p: DiffPoly, i: int) -> DiffPoly:
    return separant_initial(p, i)[1]


def ranking_key(v: DerivVar, distinguished: int):
    """Elimination ranking: distinguished indeterminate first, then order, then index."""
    return (v.index == distinguished, v.order, v.index)


def leader(p: DiffPoly, distinguished: int):
    vs = [v for v in p.variables() if v.index > 0]
    if not vs:
        return None
    return max(vs, key=lambda v: ranking_key(v, distinguished))


# -- substitution and evaluation ---------------------------------------------

def _accumulate(acc, poly, coeff):
    for m, c in poly.items():
        inc = c * coeff
        prev = acc.get(m)
        acc[m] = inc if prev is None else prev + inc


def compose_vars(p: DiffPoly, mapping: Mapping, partial=False) -> DiffPoly:
    """Algebraic (non-differential) substitution ``DerivVar -> DiffPoly``.

    With ``partial=True`` variables missing from ``mapping`` are kept.
    """
    dom = p.domain
    powers = {}

    def power(v, e):
        key = (v, e)
        r = powers.get(key)
        if r is None:
            if v in mapping:
                base = as_poly(mapping[v], dom)
            elif partial:
                base = DiffPoly.var(v.index, v.order, dom)
            else:
                raise MissingImage(f"no image for {v}")
            r = base if e == 1 else (power(v, e - 1) * base)
            powers[key] = r
        return r

    acc = {}
    for m, c in p.items():
        term = None
        for v, e in m:
            f = power(v, e)
            term = f if term is None else term * f
        if term is None:
            prev = acc.get(())
            acc[()] = c if prev is None else prev + c
        else:
            _accumulate(acc, term, c)
    t = {m: dom.normalize(c) for m, c in acc.items() if not dom.is_zero(c)}
    return DiffPoly._new(t, dom)


def substitute(p: DiffPoly, images: Mapping) -> DiffPoly:
    """Differential substitution ``y_i -> images[i]``, extended by ``y_i^(j) -> D^j images[i]``."""
    needed = p.indices()
    missing = sorted(i for i in needed if i not in images)
    if missing:
        raise MissingImage(f"no image for indeterminate(s) {missing}")
    chains = {}
    var_images = {}
    for v in sorted(p.variables()):
        chain = chains.setdefault(v.index, [as_poly(images[v.index], p.domain)])
        if v.index <= 0 and v.order:
            raise MissingImage("auxiliary variables have no derivatives")
        while len(chain) <= v.order:
            chain.append(derive(chain[-1]))
        var_images[v] = chain[v.order]
    return compose_vars(p, var_images)


class DerivTable:
    """Point assignment ``y_i^(j) -> scalar``, contiguous in ``j`` per indeterminate."""

    def __init__(self, domain: Domain = QQ, values=None):
        self.domain = domain
        self._values = {}
        for i, vals in (values or {}).items():
            self._values[i] = [domain.convert(x) for x in vals]

    def set_values(self, i, values):
        self._values[i] = [self.domain.convert(x) for x in values]

    def assign(self, v: DerivVar, value):
        vals = self._values.setdefault(v.index, [])
        if v.order < len(vals):
            vals[v.order] = self.domain.convert(value)
        elif v.order == len(vals):
            vals.append(self.domain.convert(value))
        else:
            raise ValueError(f"assignment to {v} would leave a gap")

    def truncate(self, i, length):
        if i in self._values:
            del self._values[i][length:]

    def max_order(self, i):
        return len(self._values.get(i, ())) - 1

    def values(self, i):
        return list(self._values.get(i, ()))

    def indices(self):
        return sorted(self._values)

    def __contains__(self, v):
        v = DerivVar(*v)
        return 0 <= v.order < len(self._values.get(v.index, ()))

    def __getitem__(self, v):
        v = DerivVar(*v)
        vals = self._values.get(v.index)
        if vals is None or v.order >= len(vals):
            raise UnassignedVariable(f"no value for y{v.index}^({v.order})")
        return vals[v.order]

    def copy(self):
        out = DerivTable(self.domain)
        out._values = {i: list(v) for i, v in self._values.items()}
        return out

    def __repr__(self):
        return f"DerivTable({self.domain!r}, {self._values!r})"


def evaluate(p: DiffPoly, g):
    """Value of ``p`` under the point assignment ``g`` (a DerivTable or mapping)."""
    dom = p.domain
    if isinstance(g, DerivTable) and g.domain != dom:
        raise DomainMismatch(f"table over {g.domain!r}, polynomial over {dom!r}")
    cache = {}
    total = dom.zero
    for m, c in p.items():
        val = c
        for v, e in m:
            x = cache.get(v)
            if x is None:
                try:
                    x = g[v]
                except KeyError:
                    raise UnassignedVariable(f"no value for y{v.index}^({v.order})") from None
                cache[v] = x
            val = val * (x ** e if e > 1 else x)
        total = total + val
    return dom.normalize(total)


# -- commutative division -----------------------------------------------------

def poly_divmod(a: DiffPoly, b: DiffPoly):
    """Multivariate division of ``a`` by ``b`` (all DerivVars commutative).

    Returns ``(q, r)`` with ``a = q*b + r`` and no term of ``r`` divisible by
    the graded-lex leading monomial of ``b``.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    dom = a.domain
    lm_b, lc_b = b.leading_term()
    rest_b = [(m, c) for m, c in b.items() if m != lm_b]
    p = dict(a.items())
    q = {}
    r = {}
    while p:
        m = max(p, key=_deglex_key)
        c = p.pop(m)
        quot = mono_divides(lm_b, m)
        if quot is None:
            r[m] = c
            continue
        f = dom.div(c, lc_b)
        q[quot] = f
        for mb, cb in rest_b:
            mm = mono_mul(quot, mb)
            s = p.get(mm, dom.zero) - f * cb
            if dom.is_zero(s):
                p.pop(mm, None)
            else:
                p[mm] = dom.normalize(s)
    return DiffPoly._new(q, dom), DiffPoly._new(r, dom)


def exact_div(a: DiffPoly, b: DiffPoly) -> DiffPoly:
    q, r = poly_divmod(a, b)
    if r:
        raise ArithmeticError("division is not exact")
    return q


def divides(b: DiffPoly, a: DiffPoly) -> bool:
    return not poly_divmod(a, b)[1]


def prem(a: DiffPoly, b: DiffPoly, v: DerivVar):
    """Pseudo-remainder in ``v``: ``lc(b)^k * a = q*b + r`` with ``deg_v r < deg_v b``.

    Returns ``(r, k)``.
    """
    db = b.degree_in(v)
    bc = b.coeffs_in(v)
    lc = bc[db]
    x = DiffPoly.var(v.index, v.order, a.domain)
    r = a
    k = 0
    while r and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lr = r.coeffs_in(v)[dr]
        r = r * lc - lr * (x ** (dr - db)) * b
        k += 1
    return r, k

