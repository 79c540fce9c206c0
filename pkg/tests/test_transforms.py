import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffnoether.diffpoly import DiffPoly, order_wrt
from diffnoether.domains import RatFunc
from diffnoether.errors import PreconditionError, PreconditionOrder
from diffnoether.transforms import (
    Automorphism,
    ShiftSearchParams,
    compose,
    evaluate_on_shift,
    find_poly_shift,
    invert,
    is_manageable,
    make_high_order,
    make_manageable,
    shift_polynomials,
)
from diffnoether.transforms import _generic_shift
from diffnoether.textio import parse_diffpoly
from helpers import random_poly
from oracles import symbolic

Y = ["y1", "y2"]
Y3 = ["y1", "y2", "y3"]


def P(text, names=Y):
    return parse_diffpoly(text, names)


# -- find_poly_shift -----------------------------------------------------------

@pytest.mark.parametrize("text, h, witness", [
    ("y1'", 1, [(0, 1)]),
    ("y1' - 1", 1, [(0, 2)]),
    ("y1*y1''", 2, [(1, 0, 1)]),
])
def test_find_poly_shift_examples(text, h, witness):
    p = P(text)
    # the documented shifts are valid witnesses
    assert evaluate_on_shift(p, witness)
    shifts = find_poly_shift(p, h)
    assert all(len(s) <= h + 1 for s in shifts)
    assert evaluate_on_shift(p, shifts)


def test_witness_value():
    assert evaluate_on_shift(P("y1*y1''"), [(1, 0, 1)]) == RatFunc((2, 0, 2))


def test_find_poly_shift_fallback_is_deterministic():
    p = P("y1' - 1")
    params = ShiftSearchParams(trials=1, seed=0)
    assert find_poly_shift(p, 1, params) == find_poly_shift(p, 1, params)


@pytest.mark.parametrize("text, h", [("y1' - 1", 1), ("y1' - y2", 1), ("y1*y1'' - y1'^2", 2), ("y1 + y2 - 1", 0)])
def test_generic_shift(text, h):
    p = P(text)
    shifts = _generic_shift(p, h, 2)
    assert len(shifts) == 2 and all(len(s) <= h + 1 for s in shifts)
    assert evaluate_on_shift(p, shifts)


def test_find_poly_shift_errors():
    with pytest.raises(PreconditionOrder):
        find_poly_shift(P("y1''"), 1)
    with pytest.raises(PreconditionError):
        find_poly_shift(P("0"), 2)


# -- manageability --------------------------------------------------------------

def test_manageability_examples():
    assert is_manageable(P("2*y2*y2'' - y2*y1 + y1'^2"), 2)
    assert not is_manageable(P("2*y2*y2'' + y2*y2''*y1 + y1'^2"), 2)
    assert not is_manageable(P("y1"), 2)
    assert is_manageable(P("3"), 2)
    assert not is_manageable(P("0"), 2)


def test_manageability_over_time_base():
    names = ["y1", "y2", "t"]
    Q = parse_diffpoly("t^3*y2 + y1", names)
    assert not is_manageable(Q, 2)
    assert is_manageable(Q, 2, base=(3,))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_manageability_matches_sympy(seed):
    rng = random.Random(seed)
    Q = random_poly(rng, nvars=2, max_order=2, max_terms=5)
    assert is_manageable(Q, 2) == symbolic.manageable_reference(Q, 2)


def test_make_manageable_examples():
    f = make_manageable(P("y1"), 2)
    assert f.forward == {1: P("y1 + y2")}
    assert f.apply(P("y1")) == P("y1 + y2")
    f = make_manageable(P("y1*y2"), 2)
    assert f.apply(P("y1*y2")) == P("y1*y2 + y2^2")
    f = make_manageable(P("2*y2*y2'' - y2*y1 + y1'^2"), 2)
    assert f.is_identity()


def test_make_manageable_fixes_distinguished():
    rng = random.Random(11)
    for k in range(20):
        Q = random_poly(rng, nvars=3, max_order=2)
        f = make_manageable(Q, 3, ShiftSearchParams(seed=k))
        assert 3 not in f.forward
        assert is_manageable(f.apply(Q), 3)
        for j, coeffs in shift_polynomials(f, 3).items():
            assert j != 3


# -- make_high_order --------------------------------------------------------------

@pytest.mark.parametrize("Pt, St, N, image, ord_top, ord_S", [
    ("y2' - y1", "y2", 2, "y1' + y2''' - y2", 3, 2),
    ("y2 - y1^2", "y1", 1, "y1 + y2' - y2^2", 1, 0),
    ("y2'' - y1", "y2'", 3, None, 5, 4),
])
def test_make_high_order_examples(Pt, St, N, image, ord_top, ord_S):
    f = make_high_order(P(Pt), P(St), 1)
    assert f.tag == f"f1(N={N})"
    fP, fS = f.apply(P(Pt)), f.apply(P(St))
    if image:
        assert fP == P(image)
    assert order_wrt(fP, 2) == ord_top
    assert order_wrt(fS, 2) == ord_S
    assert order_wrt(fP, 1) < ord_top


def test_make_high_order_precondition():
    with pytest.raises(PreconditionOrder):
        make_high_order(P("y2 - y1"), P("y2'"), 1)


def test_make_high_order_middle_indices_fixed():
    f = make_high_order(P("y3' - y1*y2", Y3), P("y2", Y3), 2)
    assert 2 not in f.forward
    assert f.check_roundtrip([1, 2, 3])


# -- composition -----------------------------------------------------------------

def _shift(j, p):
    return Automorphism({j: DiffPoly.var(j) + p}, {j: DiffPoly.var(j) - p}, "s")


def test_compose_and_invert():
    f = make_high_order(P("y2' - y1"), P("y2"), 1)
    g = make_manageable(P("y1*y2"), 2)
    assert compose(f, invert(f)).is_identity()
    assert compose(invert(f), f).is_identity()
    assert compose(Automorphism.identity(), g).forward == g.forward
    Q = P("y2'*y1 + y1^2")
    # compose(a, b)(Q) == a(b(Q))
    assert compose(g, f).apply(Q) == g.apply(f.apply(Q))
    assert compose(g, f).apply_inverse(compose(g, f).apply(Q)) == Q


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    a = _shift(1, DiffPoly.var(2) ** rng.randint(1, 3))
    b = make_high_order(P("y2' - y1"), P("1"), 1)
    c = compose(a, b)
    assert c.check_roundtrip([1, 2])
    Q = random_poly(rng, nvars=2, max_order=2)
    assert c.apply_inverse(c.apply(Q)) == Q
    assert c.apply(c.apply_inverse(Q)) == Q


def test_shift_params_validation():
    with pytest.raises(ValueError):
        ShiftSearchParams(trials=0)
    with pytest.raises(ValueError):
        ShiftSearchParams(degree_bound=0)
