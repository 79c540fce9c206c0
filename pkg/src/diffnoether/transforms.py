"""Invertible coordinate changes and the searches that produce them."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import perm

from .diffpoly import (
    NEG_INF,
    DerivVar,
    DiffPoly,
    compose_vars,
    evaluate,
    mono_degree,
    order_wrt,
    substitute,
)
from .domains import QQt, RatFunc, qq, up_strip
from .errors import ExhaustedTrials, PreconditionError, PreconditionOrder


@dataclass(frozen=True)
class Automorphism:
    """Differential substitution ``y_i -> forward[i]`` with stored inverse.

    Indeterminates absent from both maps are fixed.
    """

    forward: dict = field(default_factory=dict)
    inverse: dict = field(default_factory=dict)
    tag: str = "id"

    @classmethod
    def identity(cls):
        return cls({}, {}, "id")

    @property
    def support(self):
        return sorted(set(self.forward) | set(self.inverse))

    def _images(self, table, p: DiffPoly):
        return {i: (table[i].convert(p.domain) if i in table else DiffPoly.var(i, 0, p.domain))
                for i in p.indices() if i > 0}

    def apply(self, p: DiffPoly) -> DiffPoly:
        return _substitute_keep_aux(p, self._images(self.forward, p))

    def apply_inverse(self, p: DiffPoly) -> DiffPoly:
        return _substitute_keep_aux(p, self._images(self.inverse, p))

    __call__ = apply

    def forward_image(self, i, domain=None):
        img = self.forward.get(i)
        if img is None:
            return DiffPoly.var(i) if domain is None else DiffPoly.var(i, 0, domain)
        return img if domain is None else img.convert(domain)

    def inverse_image(self, i, domain=None):
        img = self.inverse.get(i)
        if img is None:
            return DiffPoly.var(i) if domain is None else DiffPoly.var(i, 0, domain)
        return img if domain is None else img.convert(domain)

    def is_identity(self) -> bool:
        return all(self.forward_image(i) == DiffPoly.var(i) and self.inverse_image(i) == DiffPoly.var(i)
                   for i in self.support)

    def check_roundtrip(self, indices=None) -> bool:
        """Exact check that forward and inverse undo each other on generators."""
        idx = set(self.support) | set(indices or ())
        for i in idx:
            y = DiffPoly.var(i, 0, self._domain())
            if self.apply(self.inverse_image(i, y.domain)) != y:
                return False
            if self.apply_inverse(self.forward_image(i, y.domain)) != y:
                return False
        return True

    def _domain(self):
        for img in list(self.forward.values()) + list(self.inverse.values()):
            return img.domain
        return DiffPoly.zero().domain

    def __str__(self):
        return self.tag


def _substitute_keep_aux(p, images):
    # auxiliary (non-positive) variables are algebraic and stay fixed
    images = dict(images)
    for i in p.indices():
        if i <= 0:
            images[i] = DiffPoly.var(i, 0, p.domain)
    return substitute(p, images)


def compose(a: Automorphism, b: Automorphism) -> Automorphism:
    """``a o b``: first ``b``, then ``a``, so ``compose(a, b)(P) = a(b(P))``."""
    idx = set(a.support) | set(b.support)
    fwd, inv = {}, {}
    for j in sorted(idx):
        fwd[j] = a.apply(b.forward_image(j, a._domain()))
        inv[j] = b.apply_inverse(a.inverse_image(j, b._domain()))
    return _trim(Automorphism(fwd, inv, f"{a.tag} o {b.tag}"))


def invert(a: Automorphism) -> Automorphism:
    return Automorphism(dict(a.inverse), dict(a.forward), f"inv({a.tag})")


def _trim(a: Automorphism) -> Automorphism:
    fwd = {i: p for i, p in a.forward.items() if p != DiffPoly.var(i, 0, p.domain)}
    inv = {i: p for i, p in a.inverse.items() if p != DiffPoly.var(i, 0, p.domain)}
    return Automorphism(fwd, inv, a.tag)


@dataclass(frozen=True)
class ShiftSearchParams:
    """Bounds and seed for the randomized searches.

    ``degree_bound=None`` lets each search derive its own bound.
    """

    degree_bound: int | None = None
    trials: int = 200
    seed: int = 0
    height: int = 5

    def __post_init__(self):
        if self.degree_bound is not None and self.degree_bound <= 0:
            raise ValueError("degree_bound must be positive")
        if self.trials <= 0 or self.height <= 0:
            raise ValueError("trials and height must be positive")

    def rng(self):
        return random.Random(self.seed)


# -- polynomial shifts ----------------------------------------------------------

class _ShiftValues:
    """Lookup ``x_i^(m) -> s_i^(m)(t)`` for :func:`evaluate`."""

    def __init__(self, shifts):
        self._chains = [[RatFunc(up_strip(s))] for s in shifts]

    def __getitem__(self, v):
        if not 1 <= v.index <= len(self._chains):
            raise KeyError(v)
        chain = self._chains[v.index - 1]
        while len(chain) <= v.order:
            chain.append(chain[-1].derivative())
        return chain[v.order]


def evaluate_on_shift(P: DiffPoly, shifts) -> RatFunc:
    """``P(s_1(t), ..., s_l(t))`` with derivatives taken in ``t``."""
    return evaluate(P.convert(QQt), _ShiftValues(shifts))


def find_poly_shift(P: DiffPoly, h: int, params: ShiftSearchParams | None = None, nvars: int | None = None):
    """Univariate polynomials ``s_i(t)`` of degree ``<= h`` with ``P(s(t)) != 0``.

    Returns one coefficient tuple (lowest degree first) per indeterminate
    ``x_1 .. x_l``.  Random candidates are tried first; if none works the
    generic substitution is specialised one unknown at a time, which always
    terminates.
    """
    if P.is_zero():
        raise PreconditionError("the zero polynomial vanishes everywhere")
    l = max([i for i in P.indices() if i > 0], default=0)
    if nvars is not None:
        l = max(l, nvars)
    top = max((order_wrt(P, i) for i in range(1, l + 1)), default=NEG_INF)
    if top != NEG_INF and h < top:
        raise PreconditionOrder(f"h = {h} is below the order {top} of P")
    params = params or ShiftSearchParams()
    rng = params.rng()
    for _ in range(params.trials):
        cand = [tuple(rng.randint(-params.height, params.height) for _ in range(h + 1)) for _ in range(l)]
        if evaluate_on_shift(P, cand):
            return [up_strip(c) for c in cand]
    return _generic_shift(P, h, l)


def _placeholder(i, k, h):
    return DerivVar(-((i - 1) * (h + 1) + k + 1), 0)


def _sweep_values():
    yield 0
    n = 1
    while True:
        yield n
        yield -n
        n += 1


def _generic_shift(P, h, l):
    # x_i^(m) -> sum_{k>=m} a_{i,k} * k!/(k-m)! * t^(k-m) with unknown a_{i,k}
    Pt = P.convert(QQt)
    mapping = {}
    for v in Pt.variables():
        if v.index <= 0:
            raise PreconditionError("auxiliary variables are not allowed here")
        img = DiffPoly.zero(QQt)
        for k in range(v.order, h + 1):
            coeff = RatFunc((0,) * (k - v.order) + (perm(k, v.order),))
            a = _placeholder(v.index, k, h)
            img = img + DiffPoly.var(a.index, 0, QQt).scale(coeff)
        mapping[v] = img
    G = compose_vars(Pt, mapping)
    if G.is_zero():
        raise AssertionError("generic substitution vanished")
    chosen = {}
    for i in range(1, l + 1):
        for k in range(h + 1):
            a = _placeholder(i, k, h)
            for val in _sweep_values():
                trial = compose_vars(G, {a: DiffPoly.const(val, QQt)}, partial=True)
                if not trial.is_zero():
                    G = trial
                    chosen[(i, k)] = val
                    break
    return [up_strip(tuple(qq(chosen[(i, k)]) for k in range(h + 1))) for i in range(1, l + 1)]


# -- manageability ----------------------------------------------------------------

def _split(m, i):
    own = tuple((v, e) for v, e in m if v.index == i)
    rest = tuple((v, e) for v, e in m if v.index != i)
    return own, rest


def is_manageable(Q: DiffPoly, i: int, base=()) -> bool:
    """True iff, as a polynomial in the derivatives of ``y_i``, ``Q`` has a
    coefficient that is a nonzero element of the base field.

    Indeterminates listed in ``base`` (such as an adjoined time variable)
    count as part of the base field.
    """
    base = set(base)
    groups = {}
    for m, c in Q.items():
        own, rest = _split(m, i)
        groups.setdefault(own, []).append(rest)
    for rests in groups.values():
        if base:
            if all(all(v.index in base for v, _ in r) for r in rests):
                return True
        elif len(rests) == 1 and rests[0] == ():
            return True
    return False


def make_high_order(P: DiffPoly, S: DiffPoly, d: int) -> Automorphism:
    """Swap ``y_1`` and ``y_{d+1}`` while pushing ``y_{d+1}`` to order ``N``.

    ``f(y_{d+1}) = y_1 + y_{d+1}^(N)``, ``f(y_1) = y_{d+1}``, with
    ``N = max(ord P, ord S) + 1``.  Afterwards ``y_{d+1}`` has strictly the
    highest order in ``f(P)`` among all indeterminates and exceeds its order in
    ``f(S)``.
    """
    if d < 1:
        raise PreconditionError("d must be at least 1")
    top = d + 1
    if not order_wrt(P, top) > order_wrt(S, top):
        raise PreconditionOrder(f"ord_y{top} P must exceed ord_y{top} S")
    N = max(P.max_order(), S.max_order() if not S.is_constant() else NEG_INF) + 1
    dom = P.domain
    y1, yt = DiffPoly.var(1, 0, dom), DiffPoly.var(top, 0, dom)
    fwd = {top: y1 + DiffPoly.var(top, N, dom), 1: yt}
    inv = {top: y1, 1: yt - DiffPoly.var(1, N, dom)}
    f = Automorphism(fwd, inv, f"f1(N={N})")
    fP, fS = f.apply(P), f.apply(S)
    high = order_wrt(fP, top)
    assert high > order_wrt(fS, top)
    for j in range(1, top):
        assert high > max(order_wrt(fP, j), order_wrt(fS, j))
    return f


def _degrees(Q, i):
    d_own = d_rest = 0
    for m in Q.terms:
        own, rest = _split(m, i)
        d_own = max(d_own, mono_degree(own))
        d_rest = max(d_rest, mono_degree(rest))
    return d_own, d_rest


def _shift_automorphism(shifts, i, dom, tag):
    yi = DiffPoly.var(i, 0, dom)
    fwd, inv = {}, {}
    for j, coeffs in shifts.items():
        p = DiffPoly.zero(dom)
        for e, c in enumerate(coeffs):
            if c:
                p = p + (yi ** e).scale(c)
        fwd[j] = DiffPoly.var(j, 0, dom) + p
        inv[j] = DiffPoly.var(j, 0, dom) - p
    return Automorphism(fwd, inv, tag)


def make_manageable(Q: DiffPoly, i: int, params: ShiftSearchParams | None = None,
                    shift_indices=None, base=()) -> Automorphism:
    """Shift ``y_j -> y_j + p_j(y_i)`` (``j != i``) until ``Q`` becomes ``y_i``-manageable.

    Candidates are tried in a fixed order: monomial shifts ``y_i^e`` for all
    ``j`` at once, then random monomial shifts with small integer
    coefficients, then ``y_i^N`` times random polynomials of degree
    ``<= ord Q``.  Every candidate is verified exactly.
    """
    if Q.is_zero():
        raise PreconditionError("cannot make the zero polynomial manageable")
    if is_manageable(Q, i, base):
        return Automorphism.identity()
    params = params or ShiftSearchParams()
    if shift_indices is None:
        shift_indices = sorted(j for j in Q.indices() if j > 0 and j != i)
    shift_indices = [j for j in shift_indices if j != i and j not in base]
    if not shift_indices:
        raise ExhaustedTrials("no indeterminate available to shift")
    dom = Q.domain
    d_own, d_rest = _degrees(Q, i)
    ordq = max(Q.max_order(), 0)
    N = d_own + d_rest * ordq + 1
    emax = params.degree_bound if params.degree_bound is not None else N + ordq

    def attempt(shifts, tag):
        f = _shift_automorphism(shifts, i, dom, tag)
        return f if is_manageable(f.apply(Q), i, base) else None

    for e in range(emax + 1):
        shifts = {j: (0,) * e + (1,) for j in shift_indices}
        f = attempt(shifts, f"f2(e={e})")
        if f:
            return f
    rng = params.rng()
    h = params.height
    for _ in range(params.trials):
        shifts = {}
        for j in shift_indices:
            e = rng.randint(0, emax)
            c = rng.choice([x for x in range(-h, h + 1) if x])
            shifts[j] = (0,) * e + (c,)
        f = attempt(shifts, "f2")
        if f:
            return f
    for _ in range(params.trials):
        shifts = {}
        for j in shift_indices:
            body = [rng.randint(-h, h) for _ in range(min(ordq, max(emax - N, 0)) + 1)]
            if not any(body):
                body[0] = 1
            shifts[j] = up_strip((0,) * min(N, emax) + tuple(body))
        f = attempt(shifts, "f2")
        if f:
            return f
    raise ExhaustedTrials(f"no manageable shift found within degree {emax} and {params.trials} trials")


def shift_polynomials(f: Automorphism, i: int):
    """Recover ``p_j`` as coefficient tuples from a shift automorphism."""
    out = {}
    for j, img in f.forward.items():
        rest = img - DiffPoly.var(j, 0, img.domain)
        coeffs = {}
        for m, c in rest.items():
            e = sum(e for _, e in m)
            coeffs[e] = c
        out[j] = up_strip(tuple(coeffs.get(e, 0) for e in range(max(coeffs, default=-1) + 1)))
    return out


__all__ = [
    "Automorphism",
    "ShiftSearchParams",
    "compose",
    "evaluate_on_shift",
    "find_poly_shift",
    "invert",
    "is_manageable",
    "make_high_order",
    "make_manageable",
    "shift_polynomials",
]
