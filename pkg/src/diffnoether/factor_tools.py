"""Bridge to sympy for commutative factorization over QQ."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .diffpoly import DerivVar, DiffPoly
from .domains import QQ, qq
from .errors import DomainMismatch


def _symbol(v: DerivVar):
    if v.index > 0:
        return sympy.Symbol(f"y{v.index}_{v.order}")
    return sympy.Symbol(f"aux{-v.index}_{v.order}")


def to_sympy(p: DiffPoly):
    """Return ``(sympy.Poly, generators)``; the generators are DerivVars."""
    if p.domain != QQ:
        raise DomainMismatch("factorization is only available over QQ")
    gens = sorted(p.variables())
    syms = [_symbol(v) for v in gens] or [sympy.Symbol("_unit")]
    terms = {}
    pos = {v: k for k, v in enumerate(gens)}
    for m, c in p.items():
        exps = [0] * len(syms)
        for v, e in m:
            exps[pos[v]] = e
        c = Fraction(c)
        terms[tuple(exps)] = sympy.Rational(c.numerator, c.denominator)
    return sympy.Poly.from_dict(terms, *syms, domain="QQ"), gens


def from_sympy(poly: sympy.Poly, gens) -> DiffPoly:
    terms = {}
    for exps, c in poly.terms():
        m = tuple((gens[k], e) for k, e in enumerate(exps) if e and k < len(gens))
        terms[m] = qq(Fraction(int(c.p), int(c.q)))
    return DiffPoly(terms, QQ)


def factor_list(p: DiffPoly):
    """Irreducible factors over QQ as ``(constant, [(factor, multiplicity), ...])``."""
    if p.is_constant():
        return p.constant_coeff(), []
    poly, gens = to_sympy(p)
    c, facs = poly.factor_list()
    return qq(Fraction(int(c.p), int(c.q))), [(from_sympy(f, gens), k) for f, k in facs]


def reducibility_witness(p: DiffPoly):
    """A reason why ``p`` is reducible over QQ, or ``None`` if no factorization exists."""
    _, facs = factor_list(p)
    if len(facs) > 1:
        return f"{len(facs)} distinct irreducible factors"
    if facs and facs[0][1] > 1:
        return f"a repeated factor of multiplicity {facs[0][1]}"
    return None


def primitive_part(p: DiffPoly) -> DiffPoly:
    """``p`` divided by its rational content, with positive leading coefficient."""
    if p.is_zero():
        return p
    coeffs = [Fraction(c) for c in p.terms.values()]
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in coeffs))
    nums = [int(c * den) for c in coeffs]
    g = 0
    for x in nums:
        g = gcd(g, x)
    lead = p.leading_term()[1]
    scale = Fraction(den, g) * (1 if lead > 0 else -1)
    return p.scale(qq(scale))
