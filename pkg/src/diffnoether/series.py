"""Truncated power series and extension of partial solutions.

A point of the differential algebra is a table ``y_i^(j) -> value``; its
Taylor series is ``sum_j value_j / j! * t^j``.  :func:`extend_solution`
builds such a table for the distinguished indeterminate from the inputs,
using the initial equation ``P = 0`` once and then the linear recursion
obtained from the derivatives of ``P``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .diffpoly import (
    NEG_INF,
    DerivTable,
    DerivVar,
    DiffPoly,
    derive,
    evaluate,
    order_wrt,
    separant_initial,
)
from .domains import CC, QQ, ComplexField, Domain, qq
from .errors import (
    DomainMismatch,
    GuardUnsatisfiable,
    NoRationalRoot,
    PreconditionError,
    PreconditionOrder,
    ResidualNonzero,
)


class TruncSeries:
    """``c_0 + c_1 t + ... + c_M t^M  (mod t^(M+1))`` over one domain.

    ``M = -1`` is the series about which nothing is known.
    """

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs, M: int | None = None, domain: Domain = QQ):
        coeffs = [domain.convert(c) for c in coeffs]
        if M is None:
            M = len(coeffs) - 1
        if M < -1:
            raise ValueError("truncation order must be >= -1")
        coeffs = coeffs[:M + 1] + [domain.zero] * (M + 1 - len(coeffs))
        self.coeffs = tuple(domain.normalize(c) for c in coeffs)
        self.domain = domain

    @property
    def M(self):
        return len(self.coeffs) - 1

    @classmethod
    def const(cls, c, M, domain: Domain = QQ):
        return cls([c], M, domain)

    @classmethod
    def t(cls, M, domain: Domain = QQ):
        return cls([0, 1], M, domain)

    @classmethod
    def parse(cls, text, M=None, domain: Domain = QQ):
        """Comma separated coefficients, lowest degree first."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if isinstance(domain, ComplexField):
            vals = [complex(p.replace(" ", "")) for p in parts]
        else:
            vals = [qq(Fraction(p)) for p in parts]
        return cls(vals, M, domain)

    def convert(self, domain: Domain):
        return self if domain == self.domain else TruncSeries(self.coeffs, self.M, domain)

    def truncate(self, M):
        return TruncSeries(self.coeffs, min(M, self.M), self.domain)

    def _check(self, other):
        if not isinstance(other, TruncSeries):
            return TruncSeries.const(other, self.M, self.domain)
        if other.domain != self.domain:
            raise DomainMismatch(f"series over {self.domain!r} and {other.domain!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        M = min(self.M, other.M)
        return TruncSeries([a + b for a, b in zip(self.coeffs[:M + 1], other.coeffs)], M, self.domain)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.M, self.domain)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        M = min(self.M, other.M)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(M + 1):
            acc = self.domain.zero
            for j in range(k + 1):
                if a[j] and b[k - j]:
                    acc = acc + a[j] * b[k - j]
            out.append(acc)
        return TruncSeries(out, M, self.domain)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = TruncSeries.const(1, self.M, self.domain)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c):
        return TruncSeries([c * x for x in self.coeffs], self.M, self.domain)

    def derive(self):
        return TruncSeries([j * self.coeffs[j] for j in range(1, self.M + 1)], max(self.M - 1, -1), self.domain)

    def inverse(self):
        """Multiplicative inverse; requires a unit constant term."""
        c0 = self.coeffs[0] if self.coeffs else self.domain.zero
        if self.domain.is_zero(c0):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = self.domain.div(self.domain.one, c0)
        out = [inv0]
        for k in range(1, self.M + 1):
            acc = self.domain.zero
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * out[k - j]
            out.append(self.domain.normalize(-acc * inv0))
        return TruncSeries(out, self.M, self.domain)

    def value_at_zero(self):
        return self.coeffs[0] if self.coeffs else None

    def is_zero(self):
        return all(self.domain.is_zero(c) for c in self.coeffs)

    def leading_zero_depth(self):
        """Largest ``r`` with ``c_0 .. c_r`` all zero (``-1`` if ``c_0 != 0``)."""
        r = -1
        for c in self.coeffs:
            if not self.domain.is_zero(c):
                break
            r += 1
        return r

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.domain == other.domain and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"TruncSeries({list(self.coeffs)!r}, M={self.M})"


def series_add(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a + b


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def series_derive(a: TruncSeries) -> TruncSeries:
    return a.derive()


def taylor_series(values, domain: Domain = QQ) -> TruncSeries:
    """``sum_j v_j / j! t^j``."""
    return TruncSeries([domain.div(domain.convert(v), factorial(j)) for j, v in enumerate(values)],
                       len(values) - 1, domain)


def derivative_values_from_series(s: TruncSeries):
    """Inverse of :func:`taylor_series`: ``v_j = j! c_j``."""
    return [s.domain.normalize(c * factorial(j)) for j, c in enumerate(s.coeffs)]


def evaluate_on_series(P: DiffPoly, series) -> TruncSeries:
    """``P`` evaluated by truncated series arithmetic; ``series`` maps index -> TruncSeries."""
    if P.domain.time_mode:
        raise DomainMismatch("series evaluation needs constant coefficients")
    chains = {}
    for i in sorted(P.indices()):
        if i not in series:
            raise PreconditionError(f"no series for indeterminate {i}")
        chains[i] = [series[i]]
    pool = [series[i] for i in chains] or list(series.values())
    dom = pool[0].domain if pool else P.domain
    M = None if chains else min((s.M for s in pool), default=0)
    for v in P.variables():
        chain = chains[v.index]
        while len(chain) <= v.order:
            chain.append(chain[-1].derive())
    if M is None:
        M = min(chains[v.index][v.order].M for v in P.variables())
    if dom != P.domain:
        raise DomainMismatch(f"series over {dom!r}, polynomial over {P.domain!r}")
    total = TruncSeries([], M, dom)
    for m, c in P.items():
        term = TruncSeries.const(c, M, dom)
        for v, e in m:
            term = term * (chains[v.index][v.order].truncate(M) ** e)
        total = total + term
    return total


# -- solution extension -----------------------------------------------------------

@dataclass
class ExtensionReport:
    series: TruncSeries
    initial_values: tuple
    backend: str
    residual_depth: int
    index: int = 0
    inputs: dict = field(default_factory=dict)
    guard_value: object = None
    roots: tuple = ()

    @property
    def solution(self):
        out = dict(self.inputs)
        out[self.index] = self.series
        return out


def _shells(h):
    """Integer h-tuples by growing max-norm, values ordered 0, 1, -1, 2, -2, ..."""
    if h == 0:
        yield ()
        return
    r = 0
    while True:
        vals = [0]
        for k in range(1, r + 1):
            vals += [k, -k]
        for tup in itertools.product(vals, repeat=h):
            if max((abs(x) for x in tup), default=0) == r:
                yield tup
        r += 1


def _candidates(h, sweep, trials, seed):
    yield from itertools.islice(_shells(h), sweep)
    rng = random.Random(seed)
    for _ in range(trials):
        yield tuple(rng.randint(-10, 10) for _ in range(h))


def rational_roots(coeffs):
    """Distinct rational roots of a univariate polynomial (coefficients lowest first)."""
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [qq(Fraction(-coeffs[0]) / coeffs[1])]
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c
                       for c in reversed(coeffs)], x, domain="QQ")
    roots = []
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            roots.append(qq(Fraction(int(r.p), int(r.q))))
    return roots


def complex_roots(coeffs, tol):
    import numpy as np

    coeffs = list(coeffs)
    while coeffs and abs(coeffs[-1]) <= tol:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    if len(coeffs) == 2:
        return [complex(-coeffs[0] / coeffs[1])]
    return [complex(r) for r in np.roots(np.array(list(reversed(coeffs)), dtype=complex))]


def _root_key(r, tol=0.0):
    if isinstance(r, complex):
        re = 0.0 if abs(r.real) <= tol else r.real
        im = 0.0 if abs(r.imag) <= tol else r.imag
        sign = 0 if re > 0 or (re == 0 and im >= 0) else 1
        return (round(abs(r), 12), sign, re, im)
    return (abs(r), 0 if r >= 0 else 1)


def _as_series_inputs(inputs):
    if isinstance(inputs, dict):
        return dict(inputs)
    return {i: s for i, s in enumerate(inputs, start=1)}


def extend_solution(P: DiffPoly, guard: DiffPoly, inputs, M: int, seed: int = 0, backend: str = "exact",
                    initial_values=None, index: int | None = None, sweep: int = 64,
                    random_trials: int = 32, tol: float | None = None) -> ExtensionReport:
    """Extend input series ``f_1 .. f_d`` by a series ``f_{d+1}`` with ``P = 0``.

    The free values ``g(y^(0..h-1))`` are swept until the guard is nonzero
    and ``P`` (now univariate in ``g(y^(h))``) has an admissible root where
    the separant does not vanish.  Higher values follow from
    ``P^(k) = S_P * y^(h+k) + T_k``.
    """
    if backend not in ("exact", "float"):
        raise ValueError(f"unknown backend {backend!r}")
    inputs = _as_series_inputs(inputs)
    if index is None:
        index = next(i for i in itertools.count(1) if i not in inputs)
    dom = QQ if backend == "exact" else (CC if tol is None else ComplexField(tol))
    P = P.convert(dom)
    guard = DiffPoly.one(dom) if guard is None else DiffPoly.convert(guard, dom)
    inputs = {i: s.convert(dom) for i, s in inputs.items()}
    h = order_wrt(P, index)
    if h == NEG_INF:
        raise PreconditionOrder(f"P does not involve y{index}")
    if not order_wrt(guard, index) < h:
        raise PreconditionOrder("the guard must have lower order than P in the distinguished indeterminate")
    for i in (P.indices() | guard.indices()) - {index}:
        if i not in inputs:
            raise PreconditionError(f"no input series for y{i}")
        if inputs[i].M < M:
            raise PreconditionError(f"input series for y{i} is truncated below M = {M}")
    inputs = {i: s.truncate(M) for i, s in inputs.items()}
    need = max((v.order for v in P.variables() if v.index != index), default=0) + max(M - h, 0)
    if need > M and any(v.index != index for v in P.variables()):
        raise PreconditionOrder(f"input derivatives up to order {need} are needed but only {M} are known")

    base = DerivTable(dom)
    for i, s in inputs.items():
        base.set_values(i, derivative_values_from_series(s))

    sep = separant_initial(P, index)[0]
    lead = DerivVar(index, h)
    pcoeffs = P.coeffs_in(lead)
    top = max(pcoeffs)

    if initial_values is not None:
        if len(initial_values) != h:
            raise PreconditionError(f"expected {h} initial values, got {len(initial_values)}")
        candidates = [tuple(initial_values)]
    else:
        candidates = _candidates(h, sweep, random_trials, seed)

    failures = []
    chosen = None
    for cand in candidates:
        g = base.copy()
        g.set_values(index, cand)
        gval = evaluate(guard, g)
        if dom.is_zero(gval):
            failures.append(("guard", cand))
            continue
        uni = [evaluate(pcoeffs.get(e, DiffPoly.zero(dom)), g) for e in range(top + 1)]
        nonzero = [e for e, c in enumerate(uni) if not dom.is_zero(c)]
        if not nonzero:
            failures.append(("degenerate", cand))
            continue
        if nonzero == [0]:
            failures.append(("residual", uni[0]))
            continue
        roots = rational_roots(uni) if backend == "exact" else complex_roots(uni, dom.tol)
        if not roots:
            failures.append(("noroot", cand))
            continue
        ok = []
        for r in roots:
            g.assign(lead, r)
            if not dom.is_zero(evaluate(sep, g)):
                ok.append(r)
        if not ok:
            failures.append(("separant", cand))
            continue
        ok.sort(key=lambda r: _root_key(r, getattr(dom, "tol", 0.0)))
        g.assign(lead, ok[0])
        chosen = (cand, g, gval, tuple(ok))
        break

    if chosen is None:
        kinds = {k for k, _ in failures}
        if "noroot" in kinds:
            raise NoRationalRoot("no rational root of the initial equation for any tried initial values")
        if "residual" in kinds:
            value = next(v for k, v in failures if k == "residual")
            raise ResidualNonzero(f"order-0 residual {value} cannot vanish", 0, value)
        raise GuardUnsatisfiable("guard or separant vanishes for every tried choice of initial values")

    cand, g, gval, roots = chosen
    s_val = evaluate(sep, g)
    assert not dom.is_zero(s_val)
    deriv = P
    for k in range(1, M - h + 1):
        deriv = derive(deriv)
        nxt = DerivVar(index, h + k)
        g.assign(nxt, dom.zero)
        t_val = evaluate(deriv, g)
        g.assign(nxt, dom.div(-t_val, s_val))
    values = g.values(index)[:M + 1]
    out = taylor_series(values, dom)
    if out.M < M:
        out = TruncSeries(out.coeffs, M, dom)
    sol = dict(inputs)
    sol[index] = out
    residual = evaluate_on_series(P, sol)
    depth = residual.leading_zero_depth()
    return ExtensionReport(out, tuple(cand) + (roots[0],), backend, depth, index, inputs, gval, roots)
