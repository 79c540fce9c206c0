import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffnoether.diffpoly import DerivVar, DiffPoly, derive_n, order_wrt, separant
from diffnoether.errors import BothConstantInV, QInIdeal, ReducibleInput
from diffnoether.reduction import (
    bareiss_det,
    partial_reduce,
    resultant,
    resultant_with_cofactors,
    saturation_membership,
    two_polynomials,
)
from diffnoether.textio import parse_diffpoly
from helpers import random_poly, random_poly_involving
from oracles import symbolic


def P(text, names=("x", "y")):
    return parse_diffpoly(text, list(names))


Y = ["y1", "y2"]


# -- partial reduction ---------------------------------------------------------

def test_already_reduced():
    cert = partial_reduce(P("x"), P("x' - x"), 1)
    assert cert.remainder == P("x") and cert.power == 0 and not cert.cofactors


def test_linear_reduction():
    Q, Pp = P("x''"), P("x' - x")
    cert = partial_reduce(Q, Pp, 1)
    assert cert.remainder == P("x'") and cert.power == 0
    assert Q - cert.remainder == cert.combination(Pp) == derive_n(Pp, 1)


def test_reduction_with_separant():
    Q, Pp = P("y''"), P("y'^2 - 4*y")
    cert = partial_reduce(Q, Pp, 2)
    assert cert.remainder == P("4*y'") and cert.power == 1
    assert cert.separant == P("2*y'")
    assert P("2*y'*y'' - 4*y'") == derive_n(Pp, 1)
    assert cert.verify(Q, Pp)


def test_reduction_of_higher_derivatives():
    Pp = P("y'^2 - 4*y")
    for k in range(1, 6):
        cert = partial_reduce(derive_n(P("y"), k + 1), Pp, 2)
        assert cert.verify(derive_n(P("y"), k + 1), Pp)
        assert order_wrt(cert.remainder, 2) <= 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_reduction_certificate_property(seed):
    rng = random.Random(seed)
    i = rng.randint(1, 3)
    Pp = random_poly_involving(rng, i, max_order=2)
    Q = random_poly_involving(rng, i, min_order=0)
    cert = partial_reduce(Q, Pp, i)
    S = cert.separant
    lhs = S ** cert.power * Q
    assert lhs == cert.combination(Pp) + cert.remainder
    assert order_wrt(cert.remainder, i) <= order_wrt(Pp, i)


# -- resultants ----------------------------------------------------------------

def test_resultant_linear_pair():
    names = ["y1", "y2", "y3"]
    cert = resultant_with_cofactors(P("y1 - y2", names), P("y1 - y3", names), DerivVar(1, 0))
    assert cert.resultant == P("y2 - y3", names)
    assert cert.a == P("-1", names) and cert.b == P("1", names)


def test_resultant_with_separant():
    Pp = P("y'^2 - 4*y")
    cert = resultant_with_cofactors(Pp, P("2*y'"), DerivVar(2, 1))
    assert cert.resultant == P("-16*y")
    assert cert.a == P("4") and cert.b == P("-2*y'")
    assert cert.verify(Pp, P("2*y'"))


def test_resultant_with_unit_and_zero():
    Pp = P("y'^2 - 4*y")
    assert resultant(Pp, P("1"), DerivVar(2, 1)) == P("1")
    assert resultant(Pp, P("0"), DerivVar(2, 1)).is_zero()


def test_resultant_both_constant():
    with pytest.raises(BothConstantInV):
        resultant_with_cofactors(P("x"), P("x + 1"), DerivVar(2, 1))


def test_resultant_multiplicative():
    Pp = P("y'^2 - 4*y")
    v = DerivVar(2, 1)
    assert resultant(Pp, P("2*y'^2"), v) == resultant(Pp, P("2*y'"), v) * resultant(Pp, P("y'"), v)
    assert resultant(Pp, P("2*y'^2"), v) == P("64*y^2")


def test_bareiss_matches_cofactor_expansion():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(1, 4)
        rows = [[DiffPoly.const(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]
        import sympy
        M = sympy.Matrix([[int(c.constant_coeff()) if not c.is_zero() else 0 for c in r] for r in rows])
        assert bareiss_det(rows) == DiffPoly.const(int(M.det()))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_resultant_property(seed):
    rng = random.Random(seed)
    i = rng.randint(1, 3)
    Pp = random_poly_involving(rng, i)
    v = DerivVar(i, order_wrt(Pp, i))
    G = random_poly(rng) + DiffPoly.var(v.index, v.order) ** rng.randint(1, 2)
    cert = resultant_with_cofactors(Pp, G, v)
    assert cert.a * Pp + cert.b * G == cert.resultant
    assert v not in cert.resultant.variables()
    assert symbolic.to_symbol_poly(cert.resultant) - symbolic.sylvester_resultant(Pp, G, v) == 0


# -- membership and the two-polynomial step ------------------------------------

def test_membership_examples():
    Pp = P("y'^2 - 4*y")
    for k in range(6):
        assert saturation_membership(derive_n(Pp, k), Pp, 2)
    assert not saturation_membership(separant(Pp, 2), Pp, 2)
    assert saturation_membership(P("y'' - 2"), Pp, 2)
    assert not saturation_membership(P("y''"), Pp, 2)


def test_two_polynomials_examples():
    assert two_polynomials(P("y2' - y1", Y), P("y2", Y), 2) == (P("y2' - y1", Y), P("y2", Y))
    assert two_polynomials(P("y2' - y1", Y), P("1", Y), 2) == (P("y2' - y1", Y), P("1", Y))
    PI = P("y2'^2 - 4*y2", Y)
    assert two_polynomials(PI, P("y2'", Y), 2) == (PI, P("64*y2^2", Y))


def test_two_polynomials_rejects_members():
    PI = P("y2'^2 - 4*y2", Y)
    with pytest.raises(QInIdeal):
        two_polynomials(PI, P("y2'' - 2", Y), 2)


def test_two_polynomials_reducible():
    with pytest.raises(ReducibleInput):
        two_polynomials(P("y2'^2 - y1^2", Y), P("y2' - y1", Y), 2)
