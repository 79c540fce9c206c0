"""Partial reduction, resultants and membership in ``[P] : S^oo``."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .diffpoly import (
    NEG_INF,
    DerivVar,
    DiffPoly,
    derive,
    divides,
    exact_div,
    order_wrt,
    separant_initial,
)
from .errors import BothConstantInV, QInIdeal, ReducibleInput

DEBUG = bool(os.environ.get("DIFFNOETHER_DEBUG"))


@dataclass(frozen=True)
class ReductionCertificate:
    """Witness of ``S^N * Q = sum_j C_j * P^(j) + remainder``."""

    remainder: DiffPoly
    power: int
    cofactors: dict = field(default_factory=dict)
    separant: DiffPoly | None = None
    index: int = 0

    def combination(self, P: DiffPoly) -> DiffPoly:
        total = DiffPoly.zero(P.domain)
        deriv = P
        for j in range(max(self.cofactors, default=-1) + 1):
            if j:
                deriv = derive(deriv)
            if j in self.cofactors:
                total = total + self.cofactors[j] * deriv
        return total

    def verify(self, Q: DiffPoly, P: DiffPoly) -> bool:
        S = self.separant if self.separant is not None else separant_initial(P, self.index)[0]
        lhs = S ** self.power * Q
        if lhs != self.combination(P) + self.remainder:
            return False
        return order_wrt(self.remainder, self.index) <= order_wrt(P, self.index)


def partial_reduce(Q: DiffPoly, P: DiffPoly, i: int, check: bool | None = None) -> ReductionCertificate:
    """Lower the order of ``Q`` in ``y_i`` to at most ``ord_{y_i} P``.

    Each step multiplies by the separant ``S`` of ``P`` and cancels the top
    degree of the leading derivative against a derivative of ``P``:
    ``Q_{s+1} = S*Q_s - C0 * v^(D-1) * P^(H-h)``.  A constant separant is
    divided out instead, so linear cases report ``N = 0``.
    """
    S, _, h, _ = separant_initial(P, i)
    unit = None
    if S.is_constant():
        unit = S.domain.div(S.domain.one, S.constant_coeff())
    derivs = [P]
    steps = []
    q = Q
    while True:
        H = order_wrt(q, i)
        if H == NEG_INF or H <= h:
            break
        v = DerivVar(i, H)
        coeffs = q.coeffs_in(v)
        D = max(coeffs)
        mult = coeffs[D] * DiffPoly.var(i, H, q.domain) ** (D - 1)
        k = H - h
        while len(derivs) <= k:
            derivs.append(derive(derivs[-1]))
        if unit is not None:
            mult = mult.scale(unit)
            q = q - mult * derivs[k]
        else:
            q = S * q - mult * derivs[k]
        steps.append((k, mult))
    N = 0 if unit is not None else len(steps)
    cofactors = {}
    if unit is not None:
        for k, mult in steps:
            cofactors[k] = cofactors[k] + mult if k in cofactors else mult
    elif steps:
        spow = [DiffPoly.one(Q.domain)]
        for _ in range(N - 1):
            spow.append(spow[-1] * S)
        for s, (k, mult) in enumerate(steps):
            term = mult * spow[N - 1 - s]
            cofactors[k] = cofactors[k] + term if k in cofactors else term
    cert = ReductionCertificate(q, N, cofactors, S, i)
    if (DEBUG if check is None else check) and not cert.verify(Q, P):
        raise AssertionError("reduction certificate identity failed")
    return cert


@dataclass(frozen=True)
class ResultantCertificate:
    """``resultant = a*P + b*G`` with ``resultant`` free of ``var``."""

    resultant: DiffPoly
    a: DiffPoly
    b: DiffPoly
    var: DerivVar

    def verify(self, P: DiffPoly, G: DiffPoly) -> bool:
        if self.var in self.resultant.variables():
            return False
        return self.resultant == self.a * P + self.b * G


# placeholders standing for P and G in the last Sylvester column
_E1 = DerivVar(-1001, 0)
_E2 = DerivVar(-1002, 0)


def bareiss_det(rows):
    """Fraction-free determinant of a square matrix of DiffPolys."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    dom = M[0][0].domain
    sign = 1
    prev = DiffPoly.one(dom)
    for k in range(n - 1):
        if M[k][k].is_zero():
            for r in range(k + 1, n):
                if not M[r][k].is_zero():
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return DiffPoly.zero(dom)
        pivot = M[k][k]
        for a in range(k + 1, n):
            mik = M[a][k]
            row_a, row_k = M[a], M[k]
            for b in range(k + 1, n):
                num = row_a[b] * pivot - mik * row_k[b]
                row_a[b] = num if prev.is_constant() and prev == 1 else exact_div(num, prev)
            row_a[k] = DiffPoly.zero(dom)
        prev = pivot
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def sylvester_matrix(P: DiffPoly, G: DiffPoly, v: DerivVar):
    """Sylvester matrix with the rows of ``P`` first."""
    n, m = P.degree_in(v), G.degree_in(v)
    pc, gc = P.coeffs_in(v), G.coeffs_in(v)
    zero = DiffPoly.zero(P.domain)
    size = n + m
    rows = []
    for r in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[r + n - k] = pc.get(k, zero)
        rows.append(row)
    for r in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[r + m - k] = gc.get(k, zero)
        rows.append(row)
    return rows


def resultant_with_cofactors(P: DiffPoly, G: DiffPoly, v: DerivVar) -> ResultantCertificate:
    """Resultant of ``P`` and ``G`` in ``v`` together with Bezout cofactors.

    Sign convention: determinant of the Sylvester matrix with the rows of
    ``P`` first.  The cofactors come from expanding the determinant along a
    last column replaced by ``(v^(m-1) P, ..., P, v^(n-1) G, ..., G)``.
    """
    v = DerivVar(*v)
    dom = P.domain
    zero = DiffPoly.zero(dom)
    n = P.degree_in(v) if P else NEG_INF
    m = G.degree_in(v) if G else NEG_INF
    if max(n, m) <= 0:
        raise BothConstantInV(f"neither polynomial involves {v}")
    if P.is_zero() or G.is_zero():
        return ResultantCertificate(zero, zero, zero, v)
    if m == 0:
        return ResultantCertificate(G ** n, zero, G ** (n - 1), v)
    if n == 0:
        return ResultantCertificate(P ** m, P ** (m - 1), zero, v)
    rows = sylvester_matrix(P, G, v)
    x = DiffPoly.var(v.index, v.order, dom)
    e1 = DiffPoly.var(_E1.index, 0, dom)
    e2 = DiffPoly.var(_E2.index, 0, dom)
    for r in range(m):
        rows[r][-1] = x ** (m - 1 - r) * e1
    for r in range(n):
        rows[m + r][-1] = x ** (n - 1 - r) * e2
    det = bareiss_det(rows)
    a = det.coeffs_in(_E1).get(1, zero)
    b = det.coeffs_in(_E2).get(1, zero)
    a = a.coeffs_in(_E2).get(0, zero)
    b = b.coeffs_in(_E1).get(0, zero)
    R = a * P + b * G
    if v in R.variables():
        raise AssertionError("resultant still depends on the eliminated variable")
    return ResultantCertificate(R, a, b, v)


def resultant(P: DiffPoly, G: DiffPoly, v: DerivVar) -> DiffPoly:
    return resultant_with_cofactors(P, G, v).resultant


def saturation_membership(Q: DiffPoly, P: DiffPoly, i: int) -> bool:
    """Decide ``Q in [P] : S^oo`` for irreducible ``P`` (caller's assertion).

    ``Q`` belongs iff its partial remainder is divisible by ``P`` as an
    ordinary polynomial.
    """
    rem = partial_reduce(Q, P, i).remainder
    return rem.is_zero() or divides(P, rem)


def two_polynomials(P_I: DiffPoly, Q: DiffPoly, i: int):
    """Replace ``V(I) minus V(Q)`` by ``V(P) minus V(S)`` with ``ord P > ord S`` in ``y_i``.

    ``S`` is the resultant of ``P_I`` and ``S_P * Q~`` in the leader, where
    ``Q~`` is the partial remainder of ``Q``.
    """
    if saturation_membership(Q, P_I, i):
        raise QInIdeal("the inequation lies in the ideal [P]:S^oo")
    sep, _, h, _ = separant_initial(P_I, i)
    q_rem = partial_reduce(Q, P_I, i).remainder
    R = resultant_with_cofactors(P_I, sep * q_rem, DerivVar(i, h)).resultant
    if R.is_zero():
        raise ReducibleInput("zero resultant: P shares a factor with S_P * Q~, so P is reducible")
    return P_I, R
