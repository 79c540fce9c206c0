"""Command line front end: ``diffnoether <command> ...``.

Exit codes: 0 success, 1 other library error, 2 usage, 3 syntax,
4 precondition, 5 bounded search exhausted, 6 no rational root.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import documents
from .errors import (
    DiffAlgebraError,
    NoRationalRoot,
    PolySyntaxError,
    PreconditionError,
    SearchExhausted,
)
from .pipeline import extend_solution_time, normalize, normalize_time, verify_surjectivity_sample
from .reduction import partial_reduce, saturation_membership
from .series import extend_solution
from .textio import format_diffpoly, parse_diffpoly
from .transforms import ShiftSearchParams, is_manageable, make_manageable

EXIT_OK = 0
EXIT_OTHER = 1
EXIT_SYNTAX = 3
EXIT_PRECONDITION = 4
EXIT_SEARCH = 5
EXIT_NO_ROOT = 6


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, PolySyntaxError):
        return EXIT_SYNTAX
    if isinstance(exc, PreconditionError):
        return EXIT_PRECONDITION
    if isinstance(exc, SearchExhausted):
        return EXIT_SEARCH
    if isinstance(exc, NoRationalRoot):
        return EXIT_NO_ROOT
    return EXIT_OTHER


def _names(arg):
    names = [n.strip() for n in arg.split(",") if n.strip()]
    if len(set(names)) != len(names):
        raise PolySyntaxError("indeterminate names must be unique")
    return names


def _index(names, name):
    if name not in names:
        raise PolySyntaxError(f"unknown indeterminate {name!r}")
    return names.index(name) + 1


def _params(args, defaults=None):
    defaults = defaults or {}
    seed = args.seed if args.seed is not None else defaults.get("seed", 0)
    trials = args.trials if args.trials is not None else defaults.get("trials", 200)
    bound = args.degree_bound if args.degree_bound is not None else defaults.get("degree_bound")
    return ShiftSearchParams(degree_bound=bound, trials=trials, seed=seed)


def _emit(doc, args, out):
    text = documents.dump(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        out.write(text)


def _poly_args(args):
    names = _names(args.names)
    return names, args.time


def cmd_reduce(args, out):
    names, time = _poly_args(args)
    Q = parse_diffpoly(args.Q, names, time)
    P = parse_diffpoly(args.P, names, time)
    i = _index(names, args.index)
    cert = partial_reduce(Q, P, i)
    doc = {
        "kind": "reduction",
        "index": args.index,
        "separant": format_diffpoly(cert.separant, names),
        "power": cert.power,
        "cofactors": {int(j): format_diffpoly(c, names) for j, c in sorted(cert.cofactors.items())},
        "remainder": format_diffpoly(cert.remainder, names),
        "verified": cert.verify(Q, P),
    }
    _emit(doc, args, out)


def cmd_member(args, out):
    names, time = _poly_args(args)
    Q = parse_diffpoly(args.Q, names, time)
    P = parse_diffpoly(args.P, names, time)
    i = _index(names, args.index)
    rem = partial_reduce(Q, P, i).remainder
    doc = {
        "kind": "membership",
        "index": args.index,
        "member": saturation_membership(Q, P, i),
        "remainder": format_diffpoly(rem, names),
    }
    _emit(doc, args, out)


def cmd_manageable(args, out):
    names, time = _poly_args(args)
    Q = parse_diffpoly(args.Q, names, time)
    i = _index(names, args.index)
    doc = {"kind": "manageability", "index": args.index, "manageable": is_manageable(Q, i)}
    if args.transform:
        f = make_manageable(Q, i, _params(args))
        doc["automorphism"] = documents._automorphism_doc(f, names)
        doc["transformed"] = format_diffpoly(f.apply(Q), names)
    _emit(doc, args, out)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise PolySyntaxError(f"cannot read {path}: {exc.strerror}") from None


def cmd_normalize(args, out):
    system = documents.parse_system(_read(args.system), force_time=args.time)
    opts = dict(system.options)
    for key in ("seed", "trials", "degree_bound"):
        if getattr(args, key) is not None:
            opts[key] = getattr(args, key)
    params = ShiftSearchParams(degree_bound=opts["degree_bound"], trials=opts["trials"], seed=opts["seed"])
    if system.time:
        if len(system.equations) != 1 or len(system.names) != system.d + 1:
            raise PreconditionError("time mode supports a single equation in d+1 indeterminates")
        cv = normalize_time(system.equations[0], system.inequation, system.d, params)
    else:
        cv = normalize(system.equations, system.d, system.inequation, params, n=len(system.names))
    _emit(documents.cv_to_document(cv, system.names, opts), args, out)


def _load_cv(path):
    doc = documents.load(_read(path))
    cv = documents.cv_from_document(doc)
    return cv, doc


def cmd_extend(args, out):
    cv, doc = _load_cv(args.cv)
    opts = doc.get("options") or {}
    M = args.trunc if args.trunc is not None else opts.get("trunc", 10)
    backend = args.backend or opts.get("backend", "exact")
    seed = args.seed if args.seed is not None else opts.get("seed", 0)
    if len(args.input) != cv.d:
        raise PreconditionError(f"expected {cv.d} --input series, got {len(args.input)}")
    inputs = {i: documents.parse_series(text, M, backend) for i, text in enumerate(args.input, start=1)}
    lam = None
    if cv.mode == "time":
        lam, rep = extend_solution_time(cv, inputs, M, seed=seed, backend=backend)
    else:
        rep = extend_solution(cv.P_star, cv.guard_star, inputs, M, seed=seed, backend=backend,
                              index=cv.distinguished)
    original = cv.original_solution(rep.solution)
    _emit(documents.extension_to_document(rep, cv.names, original, lam), args, out)


def cmd_verify(args, out):
    cv, doc = _load_cv(args.cv)
    opts = doc.get("options") or {}
    M = args.trunc if args.trunc is not None else opts.get("trunc", 10)
    seed = args.seed if args.seed is not None else opts.get("seed", 0)
    trials = args.trials if args.trials is not None else 20
    backend = args.backend or "auto"
    rep = verify_surjectivity_sample(cv, trials=trials, M=M, seed=seed, backend=backend)
    _emit(documents.sampling_to_document(rep), args, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffnoether",
                                     description="Exact differential algebra: reduction and normalization.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, search=False):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("-o", "--output", help="write the result document here")
        if search:
            p.add_argument("--trials", type=int, default=None)
            p.add_argument("--degree-bound", dest="degree_bound", type=int, default=None)

    def poly_opts(p):
        p.add_argument("--names", default="x,y", help="comma separated indeterminates (default x,y)")
        p.add_argument("--index", default="y", help="distinguished indeterminate (default y)")
        p.add_argument("--time", action="store_true", help="allow the time symbol t in coefficients")

    p = sub.add_parser("reduce", help="partial reduction with certificate")
    p.add_argument("Q")
    p.add_argument("P")
    poly_opts(p)
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("member", help="membership in [P]:S^oo")
    p.add_argument("Q")
    p.add_argument("P")
    poly_opts(p)
    common(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("manageable", help="manageability test and transform")
    p.add_argument("Q")
    poly_opts(p)
    p.add_argument("--transform", action="store_true")
    common(p, search=True)
    p.set_defaults(func=cmd_manageable)

    p = sub.add_parser("normalize", help="normalize a system file")
    p.add_argument("system")
    p.add_argument("--time", action="store_true")
    common(p, search=True)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("extend", help="extend input series through a change of variables")
    p.add_argument("cv")
    p.add_argument("--input", action="append", default=[], help="coefficients, lowest degree first")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--backend", choices=["exact", "float"], default=None)
    common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="sample random inputs and extend them")
    p.add_argument("cv")
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--backend", choices=["exact", "float", "auto"], default=None)
    p.add_argument("--trials", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except DiffAlgebraError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return exit_code_for(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
