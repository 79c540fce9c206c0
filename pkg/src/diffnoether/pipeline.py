"""End-to-end normalization of a prime differential ideal.

The output is a :class:`ChangeOfVariables`: an ordered list of invertible
substitutions that turns the defining polynomial into ``P*`` together with a
guard polynomial ``guard*`` such that every choice of series for
``y_1 .. y_d`` extends to a zero of ``P*`` (see :mod:`.series`).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .diffpoly import (
    NEG_INF,
    DerivVar,
    DiffPoly,
    compose_vars,
    derive,
    exact_div,
    order_wrt,
    separant_initial,
)
from .domains import CC, QQ, QQt, RatFunc, qq, up_strip
from .errors import (
    BoundExceeded,
    DomainMismatch,
    ExtensionError,
    NotDependent,
    PreconditionError,
    ReducibleInput,
    TimeComponentNotAffine,
)
from .factor_tools import factor_list, primitive_part, reducibility_witness
from .reduction import resultant, saturation_membership, two_polynomials
from .series import TruncSeries, evaluate_on_series, extend_solution
from .transforms import (
    Automorphism,
    ShiftSearchParams,
    compose,
    is_manageable,
    make_high_order,
    make_manageable,
)


@dataclass
class PrimitiveElementResult:
    """``b = y_{d+1} + sum_k p_k(y_1) y_k`` and ``y_k = T_k / Q`` modulo ``[P_I] : S^oo``.

    ``table`` and ``Q`` live in ``y_1 .. y_{d+1}`` where ``y_{d+1}`` stands
    for ``b``.
    """

    renaming: Automorphism
    P_I: DiffPoly
    Q: DiffPoly
    table: dict
    shifts: dict
    d: int
    n: int

    def numerator_images(self):
        """Numerators over ``Q`` of every dependent generator in ``y_1 .. y_{d+1}``."""
        top = self.d + 1
        images = dict(self.table)
        lin = self.renaming.inverse_image(top) - DiffPoly.var(top)
        images[top] = DiffPoly.var(top) * self.Q
        if lin:
            images[top] = images[top] - _rational_numerator(lin, self.table, self.Q)
        return images

    def pull_back(self, r: DiffPoly) -> DiffPoly:
        """Numerator of a relation in the original generators, rewritten in ``y_1 .. y_{d+1}``."""
        return _rational_numerator(r, self.numerator_images(), self.Q)

    def recover(self, series):
        """Series for all ``n`` generators from series for ``y_1 .. y_{d+1}``."""
        out = {i: series[i] for i in range(1, self.d + 2)}
        if not self.table:
            return out
        qinv = evaluate_on_series(self.Q, out).inverse()
        for k, T in self.table.items():
            out[k] = evaluate_on_series(T, out) * qinv
        b = out[self.d + 1]
        M = min(s.M for s in out.values())
        out = {i: s.truncate(M) for i, s in out.items()}
        # a_{d+1} = b - sum_k p_k(a_1) a_k
        out[self.d + 1] = evaluate_on_series(self.renaming.forward_image(self.d + 1, b.domain), out)
        return out


@dataclass
class ChangeOfVariables:
    """Automorphisms applied left to right to ``source`` give ``P_star``.

    In triangular mode ``primitive`` records the renaming and the rational
    expressions that recover the remaining generators.
    """

    automorphisms: list
    n: int
    d: int
    P_star: DiffPoly
    guard_star: DiffPoly
    source: DiffPoly
    ineq: DiffPoly
    mode: str = "constant"
    time_index: int | None = None
    primitive: PrimitiveElementResult | None = None
    names: list | None = None
    pre_guard: DiffPoly | None = None
    relations: list | None = None

    def __post_init__(self):
        if self.relations is None:
            self.relations = [self.source]

    @property
    def distinguished(self):
        return self.d + 1

    def composite(self) -> Automorphism:
        total = Automorphism.identity()
        for a in self.automorphisms:
            total = compose(a, total)
        return total

    def apply(self, p: DiffPoly) -> DiffPoly:
        for a in self.automorphisms:
            p = a.apply(p)
        return p

    def apply_inverse(self, p: DiffPoly) -> DiffPoly:
        for a in reversed(self.automorphisms):
            p = a.apply_inverse(p)
        return p

    def check_invariants(self):
        i = self.distinguished
        assert order_wrt(self.P_star, i) > order_wrt(self.guard_star, i), "order inequality"
        base = () if self.time_index is None else (self.time_index,)
        assert is_manageable(self.guard_star, i, base), "guard is not manageable"
        idx = range(1, self.n + 1)
        for a in self.automorphisms:
            assert a.check_roundtrip(idx), f"{a.tag} is not invertible"
        assert self.composite().apply(self.source) == self.P_star, "composite disagrees with P*"
        assert self.apply(self.source) == self.P_star
        assert self.apply_inverse(self.P_star) == self.source
        if self.time_index is not None:
            for a in self.automorphisms:
                assert self.time_index not in a.support, "time must stay fixed"

    def original_solution(self, series):
        """Map a zero of ``P*`` (index -> series) back to the input coordinates."""
        total = self.composite()
        dom = next(iter(series.values())).domain
        out = dict(series)
        for j in range(1, self.d + 2):
            out[j] = evaluate_on_series(total.forward_image(j, dom), series)
        M = min(s.M for s in out.values())
        out = {i: s.truncate(M) for i, s in out.items()}
        if self.primitive is not None:
            out = self.primitive.recover(out)
        return out


def _one(domain=QQ):
    return DiffPoly.one(domain)


def normalize_hypersurface(P_I: DiffPoly, Q_ineq: DiffPoly | None = None, d: int = 1,
                           params: ShiftSearchParams | None = None, check_reducible: bool = True,
                           extra_indices=()) -> ChangeOfVariables:
    """Steps two and three of the normalization for a single polynomial in ``y_1 .. y_{d+1}``.

    Irreducibility of ``P_I`` is the caller's assertion; factorizations over
    QQ are rejected when ``check_reducible`` is set.
    """
    top = d + 1
    if order_wrt(P_I, top) == NEG_INF:
        raise NotDependent(f"the polynomial does not involve y{top}")
    allowed = set(range(1, top + 1)) | set(extra_indices)
    if not P_I.indices() <= allowed:
        raise PreconditionError(f"unexpected indeterminates {sorted(P_I.indices() - allowed)}")
    if check_reducible:
        why = reducibility_witness(P_I)
        if why:
            raise ReducibleInput(f"input polynomial is reducible over QQ: {why}")
    Q_ineq = _one(P_I.domain) if Q_ineq is None else Q_ineq
    params = params or ShiftSearchParams()
    P, S = two_polynomials(P_I, Q_ineq, top)
    f1 = make_high_order(P, S, d)
    fP, fS = f1.apply(P), f1.apply(S)
    sep, init, h, _ = separant_initial(fP, top)
    R = resultant(fP, sep, DerivVar(top, h))
    pre_guard = init * R * fS
    f2 = make_manageable(pre_guard, top, params, shift_indices=range(1, d + 1), base=extra_indices)
    autos = [f1] if f2.is_identity() else [f1, f2]
    P_star = f2.apply(fP)
    guard_star = f2.apply(pre_guard)
    cv = ChangeOfVariables(autos, top + len(extra_indices), d, P_star, guard_star, P_I, Q_ineq,
                           pre_guard=pre_guard)
    if extra_indices:
        cv.mode, cv.time_index = "time", extra_indices[0]
    cv.check_invariants()
    return cv


# -- step one: primitive element --------------------------------------------------

def _prolong(polys, bound):
    out = []
    for p in polys:
        q = p
        for _ in range(bound + 1):
            out.append(q)
            q = derive(q)
    return out


def eliminate(polys, targets):
    """Project away ``targets`` by successive resultants; returns the target-free survivors."""
    polys = _dedupe(primitive_part(p) for p in polys if p)
    for v in targets:
        having = [p for p in polys if v in p.variables()]
        if not having:
            continue
        pivot = min(having, key=lambda p: (p.degree_in(v), len(p), p.total_degree()))
        rest = [p for p in polys if v not in p.variables()]
        for q in having:
            if q is pivot:
                continue
            r = resultant(pivot, q, v)
            if r:
                rest.append(primitive_part(r))
        polys = _dedupe(rest)
    return polys


def _dedupe(polys):
    seen, out = set(), []
    for p in polys:
        if p.is_constant():
            continue
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _targets(polys, keep):
    vs = {v for p in polys for v in p.variables() if v.index in keep}
    return sorted(vs, key=lambda v: (-v.order, -v.index))


def _rational_numerator(r, images, Q):
    """Numerator of ``r`` after ``y_k -> images[k] / Q`` for the listed ``k``."""
    chains = {}

    def image(v):
        if v.index not in images:
            return DiffPoly.var(v.index, v.order, r.domain), 0
        chain = chains.setdefault(v.index, [(images[v.index], 1)])
        dQ = derive(Q)
        while len(chain) <= v.order:
            N, m = chain[-1]
            chain.append((derive(N) * Q - dQ.scale(m) * N, m + 1))
        return chain[v.order]

    parts = []
    for m, c in r.items():
        num = DiffPoly.const(c, r.domain)
        power = 0
        for v, e in m:
            N, k = image(v)
            num = num * N ** e
            power += k * e
        parts.append((num, power))
    top = max((p for _, p in parts), default=0)
    total = DiffPoly.zero(r.domain)
    for num, power in parts:
        total = total + num * Q ** (top - power)
    return total


def _candidate_shifts(dependents, degree_bound, limit):
    """Coefficient vectors by growing max-norm, values ordered 0, 1, -1, 2, -2."""
    slots = len(dependents) * (degree_bound + 1)
    count = 0
    for r in range(3):
        vals = [0] + [x for k in range(1, r + 1) for x in (k, -k)]
        for combo in itertools.product(vals, repeat=slots):
            if max(map(abs, combo)) != r:
                continue
            yield {k: up_strip(combo[j * (degree_bound + 1):(j + 1) * (degree_bound + 1)])
                   for j, k in enumerate(dependents)}
            count += 1
            if count >= limit:
                return


def primitive_element_search(relations, d: int, n: int | None = None, degree_bound: int = 1,
                             prolong_bound: int = 2, max_candidates: int = 25) -> PrimitiveElementResult:
    """Best-effort search for ``b = y_{d+1} + sum_{k>d+1} p_k(y_1) y_k``.

    ``relations`` is a triangular presentation over the basis ``y_1 .. y_d``.
    For each candidate the minimal relation of ``b`` and the expressions
    ``y_k = T_k / Q`` are found by resultant elimination over prolongations up
    to ``prolong_bound`` and then verified by membership tests.
    """
    relations = [r for r in relations if r]
    if n is None:
        n = max(max(r.indices()) for r in relations)
    if d < 1 or n <= d:
        raise PreconditionError("need 1 <= d < n")
    top = d + 1
    if n == top:
        if len(relations) != 1:
            raise PreconditionError("a hypersurface needs exactly one relation")
        return PrimitiveElementResult(Automorphism.identity(), relations[0], _one(), {}, {}, d, n)
    dependents = list(range(top + 1, n + 1))
    z = n + 1
    prolonged = _prolong(relations, prolong_bound)
    y1 = DiffPoly.var(1)
    for shifts in _candidate_shifts(dependents, degree_bound, max_candidates):
        lin = DiffPoly.zero()
        for k, coeffs in shifts.items():
            pk = sum((y1 ** e * c for e, c in enumerate(coeffs)), DiffPoly.zero())
            lin = lin + pk * DiffPoly.var(k)
        link = DiffPoly.var(z) - DiffPoly.var(top) - lin
        system = prolonged + _prolong([link], prolong_bound)
        result = _try_candidate(system, relations, shifts, lin, d, n, z)
        if result is not None:
            return result
    raise BoundExceeded("no primitive element verified within the search bounds")


def _rename(p, src, dst):
    return compose_vars(p, {v: DiffPoly.var(dst, v.order) for v in p.variables() if v.index == src},
                        partial=True)


def _try_candidate(system, relations, shifts, lin, d, n, z):
    top = d + 1
    dependents = list(range(top, n + 1))
    survivors = eliminate(system, _targets(system, set(dependents)))
    candidates = []
    for s in survivors:
        if z not in s.indices():
            continue
        for fac, _ in factor_list(s)[1]:
            if z in fac.indices():
                candidates.append(primitive_part(fac))
    candidates = sorted(_dedupe(candidates),
                        key=lambda p: (order_wrt(p, z), p.degree_in(DerivVar(z, max(order_wrt(p, z), 0))),
                                       len(p)))
    if not candidates:
        return None
    # T_k / Q for every dependent beyond top
    rows = {}
    for k in dependents[1:]:
        keep = DerivVar(k, 0)
        targets = [v for v in _targets(system, set(dependents)) if v != keep]
        found = None
        for s in eliminate(system, targets):
            if keep in s.variables() and s.degree_in(keep) == 1 and order_wrt(s, k) == 0:
                c = s.coeffs_in(keep)
                found = (c[1], -c.get(0, DiffPoly.zero()))
                if found[0].is_constant():
                    break
        if found is None:
            return None
        if found[0].is_constant():
            c = found[0].constant_coeff()
            found = (_one(), found[1].scale(Fraction(1) / c))
        rows[k] = found
    for P_z in candidates:
        P_I = _rename(P_z, z, top)
        res = _assemble(P_I, rows, shifts, lin, relations, d, n, z)
        if res is not None:
            return res
    return None


def _assemble(P_I, rows, shifts, lin, relations, d, n, z):
    top = d + 1
    qs = []
    for Qk, _ in rows.values():
        Qk = _rename(Qk, z, top)
        if Qk not in qs:
            qs.append(Qk)
    Q = _one()
    for q in qs:
        Q = Q * q
    if not Q.is_constant() and saturation_membership(Q, P_I, top):
        return None
    table = {}
    for k, (Qk, Tk) in rows.items():
        Qk, Tk = _rename(Qk, z, top), _rename(Tk, z, top)
        table[k] = Tk * exact_div(Q, Qk)
    fwd = {top: DiffPoly.var(top) - lin} if lin else {}
    inv = {top: DiffPoly.var(top) + lin} if lin else {}
    res = PrimitiveElementResult(Automorphism(fwd, inv, "rename"), P_I, Q, table, shifts, d, n)
    for r in relations:
        num = res.pull_back(r)
        if num and not saturation_membership(num, P_I, top):
            return None
    return res


def normalize(relations, d: int, ineq: DiffPoly | None = None, params: ShiftSearchParams | None = None,
              n: int | None = None, degree_bound: int = 1, prolong_bound: int = 2,
              check_reducible: bool = True) -> ChangeOfVariables:
    """Normalize a hypersurface or a triangular system over the basis ``y_1 .. y_d``."""
    if isinstance(relations, DiffPoly):
        relations = [relations]
    relations = list(relations)
    if n is None:
        n = max(max(r.indices(), default=0) for r in relations)
    n = max(n, d + 1)
    if n == d + 1 and len(relations) == 1:
        return normalize_hypersurface(relations[0], ineq, d, params, check_reducible)
    prim = primitive_element_search(relations, d, n, degree_bound, prolong_bound)
    guard = prim.Q
    if ineq is not None and not ineq.is_constant():
        guard = guard * prim.pull_back(ineq)
    cv = normalize_hypersurface(prim.P_I, guard, d, params, check_reducible)
    cv.n = n
    cv.primitive = prim
    cv.relations = relations
    cv.ineq = ineq if ineq is not None else _one()
    return cv


# -- time mode --------------------------------------------------------------------

def _time_to_indeterminate(p: DiffPoly, tindex: int, clear=True) -> DiffPoly:
    if p.domain != QQt:
        return p
    den = (1,)
    from .domains import up_divmod, up_gcd, up_mul

    for c in p.terms.values():
        g = up_gcd(den, c.den)
        den = up_divmod(up_mul(den, c.den), g)[0]
    tvar = DiffPoly.var(tindex)
    out = DiffPoly.zero()
    for m, c in p.items():
        num = (c * RatFunc(den)) if clear else c
        if not num.is_polynomial:
            raise DomainMismatch("coefficient is not polynomial in t")
        coeff = sum((tvar ** k * x for k, x in enumerate(num.num) if x), DiffPoly.zero())
        out = out + coeff * DiffPoly({m: 1})
    return out


def normalize_time(P: DiffPoly, ineq: DiffPoly | None = None, d: int = 1,
                   params: ShiftSearchParams | None = None, check_reducible: bool = True) -> ChangeOfVariables:
    """Normalize a polynomial with coefficients in QQ(t).

    Denominators in ``t`` are cleared and ``t`` becomes the indeterminate
    ``y_{d+2}`` with ``t' = 1``; no automorphism touches it.
    """
    tindex = d + 2
    if any(i >= tindex for i in P.indices()):
        raise PreconditionError(f"time mode expects indeterminates y1..y{d + 1}")
    Pq = _time_to_indeterminate(P, tindex)
    Iq = None if ineq is None else _time_to_indeterminate(ineq, tindex)
    return normalize_hypersurface(Pq, Iq, d, params, check_reducible, extra_indices=(tindex,))


def _lambda_sweep():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def extend_solution_time(cv: ChangeOfVariables, inputs, M: int, seed: int = 0, backend: str = "exact",
                         max_lambda: int = 21):
    """Extend ``inputs`` (series in ``s = t - lambda``) for a time-mode change of variables.

    Returns ``(lambda, report)``; the report's solution includes the
    ``t``-component, which is checked to be ``lambda + s``.
    """
    if cv.time_index is None:
        raise PreconditionError("not a time-mode change of variables")
    T = cv.time_index
    tdom = QQ if backend == "exact" else CC
    inputs = dict(inputs) if isinstance(inputs, dict) else {i: s for i, s in enumerate(inputs, start=1)}
    time_eq = DiffPoly.var(T, 1) - 1
    last = None
    for lam in itertools.islice(_lambda_sweep(), max_lambda):
        t_rep = extend_solution(time_eq, None, {}, M, backend=backend, initial_values=[lam], index=T)
        ts = t_rep.series
        expected = TruncSeries([lam, 1], M, tdom)
        if ts != expected:
            raise TimeComponentNotAffine(f"time component {ts!r} is not {lam} + s")
        try:
            rep = extend_solution(cv.P_star, cv.guard_star, {**inputs, T: ts}, M, seed=seed,
                                  backend=backend, index=cv.distinguished)
        except ExtensionError as exc:
            last = exc
            continue
        return qq(lam) if backend == "exact" else complex(lam), rep
    raise last


# -- sampling ---------------------------------------------------------------------

@dataclass
class SamplingReport:
    trials: int
    successes: int = 0
    depths: list = field(default_factory=list)
    backends: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)

    @property
    def all_succeeded(self):
        return self.successes == self.trials


def random_input_series(rng: random.Random, M: int, degree: int = 5, height: int = 9):
    coeffs = [Fraction(rng.randint(-height, height), rng.randint(1, 4)) for _ in range(degree + 1)]
    return TruncSeries([qq(c) for c in coeffs], M)


def _extend_once(cv, inputs, M, seed, backend):
    if cv.mode == "time":
        lam, rep = extend_solution_time(cv, inputs, M, seed, backend)
        return rep, lam
    return extend_solution(cv.P_star, cv.guard_star, inputs, M, seed=seed, backend=backend,
                           index=cv.distinguished), None


def verify_surjectivity_sample(cv: ChangeOfVariables, trials: int = 20, M: int = 10, seed: int = 0,
                               backend: str = "auto", degree: int = 5) -> SamplingReport:
    """Extend random polynomial inputs of degree ``<= degree`` through ``cv``.

    ``backend="auto"`` tries exact rationals and falls back to floats when
    the initial equation has no rational root.  A trial counts as a success
    when the extension exists, ``P*`` vanishes through ``M - h`` and, with
    exact arithmetic, the original relation vanishes on the mapped-back tuple.
    """
    report = SamplingReport(trials)
    h = order_wrt(cv.P_star, cv.distinguished)
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        inputs = {i: random_input_series(rng, M, degree) for i in range(1, cv.d + 1)}
        order = ["exact", "float"] if backend == "auto" else [backend]
        rep = None
        err = None
        for be in order:
            try:
                rep, lam = _extend_once(cv, inputs, M, seed + trial, be)
                break
            except ExtensionError as exc:
                err = exc
        if rep is None:
            report.failures.append(f"trial {trial}: {type(err).__name__}: {err}")
            continue
        ok = rep.residual_depth >= M - h
        if ok and rep.backend == "exact":
            full = cv.original_solution(rep.solution)
            residuals = [evaluate_on_series(r, full) for r in cv.relations]
            ok = all(r.M >= 0 and r.is_zero() for r in residuals)
        if ok:
            report.successes += 1
        else:
            report.failures.append(f"trial {trial}: residual check failed")
        report.depths.append(rep.residual_depth)
        report.backends.append(rep.backend)
        report.lambdas.append(lam)
    return report

