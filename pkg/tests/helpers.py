"""Seeded random generators and hypothesis strategies shared by the tests."""

from fractions import Fraction

from hypothesis import strategies as st

from diffnoether.diffpoly import DerivVar, DiffPoly


def random_monomial(rng, nvars, max_order, max_degree):
    deg = rng.randint(0, max_degree)
    m = {}
    for _ in range(deg):
        v = DerivVar(rng.randint(1, nvars), rng.randint(0, max_order))
        m[v] = m.get(v, 0) + 1
    return tuple(sorted(m.items()))


def random_coeff(rng, height=5, fractions=False):
    c = 0
    while c == 0:
        c = rng.randint(-height, height)
    if fractions and rng.random() < 0.3:
        return Fraction(c, rng.randint(1, 4))
    return c


def random_poly(rng, nvars=3, max_order=3, max_degree=3, max_terms=4, fractions=False):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = random_monomial(rng, nvars, max_order, max_degree)
        terms[m] = random_coeff(rng, fractions=fractions)
    return DiffPoly(terms)


def random_poly_involving(rng, index, nvars=3, max_order=3, max_degree=3, max_terms=4, min_order=0):
    """Random polynomial guaranteed to contain a derivative of ``y_index``."""
    while True:
        p = random_poly(rng, nvars, max_order, max_degree, max_terms)
        lead = DerivVar(index, rng.randint(min_order, max_order))
        p = p + DiffPoly({((lead, rng.randint(1, max_degree)),): random_coeff(rng)})
        if index in p.indices():
            return p


# -- hypothesis strategies ----------------------------------------------------

_vars = st.builds(DerivVar, st.integers(1, 3), st.integers(0, 3))
_monomials = st.dictionaries(_vars, st.integers(1, 3), max_size=3).map(lambda d: tuple(sorted(d.items())))
_coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=6).filter(lambda c: c != 0)


def polys(max_terms=4):
    return st.dictionaries(_monomials, _coeffs, max_size=max_terms).map(DiffPoly)


def nonzero_polys(max_terms=4):
    return st.dictionaries(_monomials, _coeffs, min_size=1, max_size=max_terms).map(DiffPoly)
