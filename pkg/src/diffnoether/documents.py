"""System files and result documents (YAML).

Polynomials are stored in their text form and rationals as ``num/den``
strings, so documents are exact and diff well.  Key order is fixed, which
makes output byte-identical for identical input and seed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import yaml

from .diffpoly import DiffPoly
from .domains import CC, QQ, format_scalar, parse_scalar, up_strip
from .errors import PolySyntaxError
from .pipeline import ChangeOfVariables, PrimitiveElementResult, SamplingReport
from .series import ExtensionReport, TruncSeries
from .textio import format_diffpoly, parse_diffpoly
from .transforms import Automorphism

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

DEFAULT_OPTIONS = {
    "seed": 0,
    "trunc": 10,
    "backend": "exact",
    "degree_bound": None,
    "trials": 200,
}


@dataclass
class SystemFile:
    names: list
    d: int
    mode: str
    equations: list
    inequation: DiffPoly | None = None
    options: dict = field(default_factory=dict)

    @property
    def time(self):
        return self.mode == "time"


def _require(cond, msg):
    if not cond:
        raise PolySyntaxError(msg)


def parse_system(text: str, force_time: bool = False) -> SystemFile:
    """Read a system file; see the README for the layout."""
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise PolySyntaxError(f"system file is not valid YAML: {exc}") from None
    _require(isinstance(data, dict), "system file must be a mapping")
    names = data.get("indeterminates")
    _require(isinstance(names, list) and names, "'indeterminates' must be a non-empty list")
    names = [str(n) for n in names]
    for n in names:
        _require(bool(_NAME.match(n)), f"invalid indeterminate name {n!r}")
    _require(len(set(names)) == len(names), "indeterminate names must be unique")
    d = data.get("d")
    _require(isinstance(d, int) and 1 <= d < len(names), "'d' must satisfy 1 <= d < number of indeterminates")
    mode = data.get("mode", "constant")
    _require(mode in ("constant", "time"), "'mode' must be 'constant' or 'time'")
    if force_time:
        mode = "time"
    time = mode == "time"
    if time:
        _require("t" not in names, "'t' is reserved in time mode")
    eqs = data.get("equations")
    _require(isinstance(eqs, list) and eqs, "'equations' must be a non-empty list")
    equations = [parse_diffpoly(str(e), names, time) for e in eqs]
    ineq = data.get("inequation")
    inequation = None if ineq in (None, "", 1, "1") else parse_diffpoly(str(ineq), names, time)
    options = dict(DEFAULT_OPTIONS)
    extra = data.get("options") or {}
    _require(isinstance(extra, dict), "'options' must be a mapping")
    unknown = set(extra) - set(DEFAULT_OPTIONS)
    _require(not unknown, f"unknown options {sorted(unknown)}")
    options.update(extra)
    return SystemFile(names, d, mode, equations, inequation, options)


def dump(doc) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False, width=10_000)


def load(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise PolySyntaxError(f"document is not valid YAML: {exc}") from None


def _fmt(p, names):
    return format_diffpoly(p, names)


def _automorphism_doc(a: Automorphism, names):
    return {
        "tag": a.tag,
        "forward": {names[i - 1]: _fmt(p, names) for i, p in sorted(a.forward.items())},
        "inverse": {names[i - 1]: _fmt(p, names) for i, p in sorted(a.inverse.items())},
    }


def _automorphism_from(doc, names):
    idx = {n: i + 1 for i, n in enumerate(names)}
    fwd = {idx[k]: parse_diffpoly(v, names) for k, v in (doc.get("forward") or {}).items()}
    inv = {idx[k]: parse_diffpoly(v, names) for k, v in (doc.get("inverse") or {}).items()}
    return Automorphism(fwd, inv, doc.get("tag", "?"))


def document_names(names, mode):
    """Names used inside documents; time mode appends ``t`` as an indeterminate."""
    return list(names) + (["t"] if mode == "time" else [])


def cv_to_document(cv: ChangeOfVariables, names, options=None) -> dict:
    names = document_names(names, cv.mode)
    doc = {
        "kind": "change_of_variables",
        "mode": cv.mode,
        "indeterminates": names,
        "d": cv.d,
        "n": cv.n,
        "distinguished": names[cv.d],
        "time_indeterminate": names[cv.time_index - 1] if cv.time_index else None,
        "original": {
            "relations": [_fmt(r, names) for r in cv.relations],
            "inequation": _fmt(cv.ineq, names),
        },
        "source": _fmt(cv.source, names),
        "automorphisms": [_automorphism_doc(a, names) for a in cv.automorphisms],
        "transformed": {
            "P": _fmt(cv.P_star, names),
            "guard": _fmt(cv.guard_star, names),
        },
    }
    if cv.primitive is not None:
        pr = cv.primitive
        doc["primitive_element"] = {
            "renaming": _automorphism_doc(pr.renaming, names),
            "P_I": _fmt(pr.P_I, names),
            "Q": _fmt(pr.Q, names),
            "table": {names[k - 1]: _fmt(T, names) for k, T in sorted(pr.table.items())},
            "shifts": {names[k - 1]: [format_scalar(c) for c in s] for k, s in sorted(pr.shifts.items())},
        }
    if options is not None:
        doc["options"] = dict(options)
    return doc


def cv_from_document(doc) -> ChangeOfVariables:
    if not isinstance(doc, dict) or doc.get("kind") != "change_of_variables":
        raise PolySyntaxError("not a change_of_variables document")
    try:
        return _cv_from_document(doc)
    except PolySyntaxError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise PolySyntaxError(f"malformed change_of_variables document: {exc!r}") from None
    except AssertionError as exc:
        raise PolySyntaxError(f"inconsistent change_of_variables document: {exc}") from None


def _cv_from_document(doc):
    names = [str(n) for n in doc["indeterminates"]]

    def P(text):
        return parse_diffpoly(str(text), names)

    autos = [_automorphism_from(a, names) for a in doc.get("automorphisms") or []]
    tname = doc.get("time_indeterminate")
    time_index = names.index(tname) + 1 if tname else None
    prim = None
    if doc.get("primitive_element"):
        pe = doc["primitive_element"]
        idx = {n: i + 1 for i, n in enumerate(names)}
        prim = PrimitiveElementResult(
            _automorphism_from(pe["renaming"], names), P(pe["P_I"]), P(pe["Q"]),
            {idx[k]: P(v) for k, v in (pe.get("table") or {}).items()},
            {idx[k]: up_strip(parse_scalar(c) for c in v) for k, v in (pe.get("shifts") or {}).items()},
            int(doc["d"]), int(doc["n"]))
    cv = ChangeOfVariables(
        autos, int(doc["n"]), int(doc["d"]), P(doc["transformed"]["P"]), P(doc["transformed"]["guard"]),
        P(doc["source"]), P(doc["original"]["inequation"]), doc.get("mode", "constant"), time_index, prim,
        relations=[P(r) for r in doc["original"]["relations"]])
    cv.names = names
    cv.check_invariants()
    return cv


def series_doc(s: TruncSeries):
    return [format_scalar(c) for c in s.coeffs]


def extension_to_document(rep: ExtensionReport, names, original=None, lam=None) -> dict:
    doc = {
        "kind": "extension",
        "backend": rep.backend,
        "distinguished": names[rep.index - 1],
        "initial_values": [format_scalar(c) for c in rep.initial_values],
        "roots": [format_scalar(c) for c in rep.roots],
        "guard_value": format_scalar(rep.guard_value),
        "residual_depth": rep.residual_depth,
    }
    if lam is not None:
        doc["lambda"] = format_scalar(lam)
    doc["series"] = {names[i - 1]: series_doc(s) for i, s in sorted(rep.solution.items())}
    if original is not None:
        doc["original"] = {names[i - 1]: series_doc(s) for i, s in sorted(original.items())}
    return doc


def sampling_to_document(rep: SamplingReport) -> dict:
    return {
        "kind": "sampling_report",
        "trials": rep.trials,
        "successes": rep.successes,
        "all_succeeded": rep.all_succeeded,
        "residual_depths": list(rep.depths),
        "backends": list(rep.backends),
        "lambdas": [None if x is None else format_scalar(x) for x in rep.lambdas],
        "failures": list(rep.failures),
    }


def parse_series(text: str, M: int, backend: str = "exact") -> TruncSeries:
    """Comma separated coefficients, lowest degree first."""
    try:
        return TruncSeries.parse(text, M, QQ if backend == "exact" else CC)
    except (ValueError, ZeroDivisionError) as exc:
        raise PolySyntaxError(f"bad series {text!r}: {exc}") from None
