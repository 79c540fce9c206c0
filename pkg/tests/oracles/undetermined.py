"""Power-series solutions by undetermined coefficients.

The equation is given as sympy text in symbols ``y{i}_{j}`` (the j-th
derivative of y_i).  Series are plain lists of Fractions; all arithmetic
here is deliberately naive and shares no code with the package.
"""

from fractions import Fraction

import sympy


def parse_terms(text):
    expr = sympy.expand(sympy.sympify(text))
    syms = sorted(expr.free_symbols, key=lambda s: s.name)
    poly = sympy.Poly(expr, *syms)
    keys = []
    for s in syms:
        name, order = s.name[1:].split("_")
        keys.append((int(name), int(order)))
    terms = []
    for exps, c in poly.terms():
        factors = [(keys[k][0], keys[k][1], e) for k, e in enumerate(exps) if e]
        terms.append((Fraction(int(c.p), int(c.q)), factors))
    return terms


def _mul(a, b, n):
    out = [Fraction(0)] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[:n - i]):
                out[i + j] += x * y
    return out


def _deriv(a, k):
    for _ in range(k):
        a = [j * a[j] for j in range(1, len(a))]
    return a


def residual(terms, series, n):
    """First ``n`` coefficients of the equation evaluated on ``series``."""
    total = [Fraction(0)] * n
    for c, factors in terms:
        acc = [Fraction(0)] * n
        acc[0] = c
        for i, j, e in factors:
            d = _deriv(series[i], j) + [Fraction(0)] * n
            for _ in range(e):
                acc = _mul(acc, d, n)
        total = [x + y for x, y in zip(total, acc)]
    return total


def solve(text, inputs, index, initial, M, h):
    """Coefficients ``c_0..c_M`` of y_index given ``c_0..c_h`` in ``initial``."""
    terms = parse_terms(text)
    coeffs = [Fraction(x) for x in initial] + [Fraction(0)] * (M + 1 - len(initial))
    series = {i: [Fraction(x) for x in s] + [Fraction(0)] * (2 * M + 2 - len(s)) for i, s in inputs.items()}
    for k in range(1, M - h + 1):
        pos = k + h
        series[index] = coeffs + [Fraction(0)] * (M + 1)
        r0 = residual(terms, series, k + 1)[k]
        trial = list(coeffs)
        trial[pos] = Fraction(1)
        series[index] = trial + [Fraction(0)] * (M + 1)
        r1 = residual(terms, series, k + 1)[k]
        assert r1 != r0, "coefficient does not enter linearly"
        coeffs[pos] = -r0 / (r1 - r0)
    return coeffs
