"""Command-line interface.

Exit codes: 0 success (normalized / is a basis / embedded / equal),
1 definite failure, 2 inconclusive (window boundary or completion limits),
3 input error.

JSON reports (``--json OUT``) always carry exactly these keys:

* ``command``: the subcommand that ran;
* ``inputs.digest``: hash of the input file (or example name) and options;
* ``params``: the effective options;
* ``verdict``: ``ok`` | ``fail`` | ``inconclusive``;
* ``details``: command-specific payload (canonical polynomial text,
  composition verdicts and counts, word lists, basis members, ...);
* ``traces``: reduction traces when ``--trace`` is given, else ``[]``;
* ``timings``: wall-clock seconds when ``--timings`` is given, else null.

Keys are sorted and timings default to null, so identical inputs and flags
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional

from .words import AlgebraSignature, ConformalError, compare_words
from .dsl import (ParseError, PresentationFile, parse_poly, parse_presentation,
                  parse_word, poly_str)
from .rewriting import RelationSet, irr_enumerate, kd_basis, reduce_poly
from .gsb import (CompletionLimits, MultBounds, check_gsb_rset, complete,
                  minimalize, reduce_basis)
from .envelope import (IndexWindow, SchemaIndex, builtin_example,
                       comp_window_filter, embedding_check, equivalence_check,
                       instantiate_schemas, schema_shapes)

OK, FAIL, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


@dataclass
class Report:
    command: str
    digest: str
    params: dict
    verdict: str = "ok"
    details: dict = field(default_factory=dict)
    traces: list = field(default_factory=list)
    timings: Optional[dict] = None

    def to_json(self) -> str:
        data = {"command": self.command, "inputs": {"digest": self.digest},
                "params": self.params, "verdict": self.verdict,
                "details": self.details, "traces": self.traces,
                "timings": self.timings}
        return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\x00")
    return h.hexdigest()[:16]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="OUT", help="write a JSON report")
    common.add_argument("--trace", action="store_true",
                        help="include reduction traces in output")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the JSON report")
    common.add_argument("--window", type=int, default=None,
                        help="composition window W for indexed families")
    common.add_argument("--relation-multiplier", type=int, default=None,
                        help="relation window multiplier M (radius is M*W)")
    common.add_argument("--max-length", type=int, default=None)
    common.add_argument("--max-dpow", type=int, default=None)
    common.add_argument("--mult-bound-left", type=int, default=None)
    common.add_argument("--mult-bound-right", type=int, default=None)
    common.add_argument("--max-iters", type=int, default=None,
                        help="completion round limit")
    common.add_argument("--max-basis", type=int, default=None,
                        help="completion basis size limit")

    ap = argparse.ArgumentParser(
        prog="conformal",
        description="Groebner-Shirshov bases in free associative conformal "
                    "algebras with uniform locality")
    sub = ap.add_subparsers(dest="command", required=True)

    def filecmd(name, help_, extra=()):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.add_argument("-f", "--file", required=True, help="presentation file")
        for argname in extra:
            p.add_argument(argname)
        return p

    filecmd("normalize", "normalize an expression", ["expr"])
    filecmd("order", "compare two normal words", ["left", "right"])
    filecmd("reduce", "divide a polynomial by the relations", ["poly"])
    filecmd("compositions", "list all compositions and their verdicts")
    filecmd("check", "decide whether the relations form a basis")
    filecmd("complete", "run Shirshov completion")
    filecmd("minimalize", "drop relations with covered leading words")
    filecmd("reduce-basis", "compute the reduced basis")
    filecmd("irr", "list irreducible words within the bounds")
    filecmd("kdbasis", "list D-free irreducible words")

    px = sub.add_parser("example", help="run a built-in example",
                        parents=[common])
    px.add_argument("name", help="virasoro | heisenberg-virasoro")
    px.add_argument("action",
                    choices=["check", "irr", "kdbasis", "embed", "equiv"])
    return ap


@dataclass
class _Context:
    pf: PresentationFile
    sig: AlgebraSignature
    options: dict
    rset: RelationSet
    gens: tuple
    window: Optional[IndexWindow]
    shapes: list


def _load_context(args) -> _Context:
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    pf = parse_presentation(text)
    options = dict(pf.options)
    for key, attr in [("window", "window"),
                      ("relation_multiplier", "relation_multiplier"),
                      ("max_length", "max_length"), ("max_dpow", "max_dpow"),
                      ("mult_bound_left", "mult_bound_left"),
                      ("mult_bound_right", "mult_bound_right"),
                      ("max_iters", "max_iters"), ("max_basis", "max_basis")]:
        v = getattr(args, attr, None)
        if v is not None:
            options[key] = v
    window = None
    lazy = None
    shapes = []
    polys = pf.concrete_relations()
    if pf.schemas:
        window = IndexWindow(options.get("window", 2),
                             options.get("relation_multiplier", 4))
        polys = polys + instantiate_schemas(pf.schemas, pf.sig, window.radius)
        lazy = SchemaIndex(pf.schemas)
        shapes = schema_shapes(pf.schemas)
    if pf.sig.generators is not None:
        gens = pf.sig.generators
    else:
        gens = pf.sig.family_generators(window.W if window else 2)
    rset = RelationSet(pf.sig, [p.monic() for p in polys if not p.is_zero()],
                       lazy=lazy)
    args._digest = _digest(text, json.dumps(options, sort_keys=True))
    return _Context(pf, pf.sig, options, rset, gens, window, shapes)


def _bounds(ctx) -> MultBounds:
    return MultBounds(ctx.options.get("mult_bound_left"),
                      ctx.options.get("mult_bound_right"))


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise ConformalError(f"environment variable {name} must be an "
                             f"integer, got {raw!r}")


def _limits(ctx) -> CompletionLimits:
    return CompletionLimits(
        max_rounds=ctx.options.get("max_iters",
                                   _env_int("CONFORMAL_MAX_ITERS", 50)),
        max_basis=ctx.options.get("max_basis",
                                  _env_int("CONFORMAL_MAX_BASIS", 100000)))


def _comp_filter(ctx):
    if ctx.window is not None:
        return comp_window_filter(ctx.sig, ctx.window.W)
    return None


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code not in (0, None) else 0
    t0 = time.monotonic()
    try:
        code, report = _dispatch(args)
    except (ParseError, ConformalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if args.json:
        if args.timings:
            report.timings = {"total_s": round(time.monotonic() - t0, 3)}
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return code


def _dispatch(args):
    if args.command == "example":
        return _run_example(args)
    ctx = _load_context(args)
    handler = {
        "normalize": _cmd_normalize, "order": _cmd_order,
        "reduce": _cmd_reduce, "compositions": _cmd_compositions,
        "check": _cmd_check, "complete": _cmd_complete,
        "minimalize": _cmd_minimalize, "reduce-basis": _cmd_reduce_basis,
        "irr": _cmd_irr, "kdbasis": _cmd_kdbasis,
    }[args.command]
    return handler(ctx, args)


def _report(args, command, params, verdict="ok", details=None) -> Report:
    return Report(command, getattr(args, "_digest", _digest(command)),
                  params, verdict, details or {})


def _cmd_normalize(ctx, args):
    p = parse_poly(args.expr, ctx.sig)
    print(poly_str(p))
    return OK, _report(args, "normalize", {"expr": args.expr},
                       details={"result": poly_str(p)})


def _cmd_order(ctx, args):
    u = parse_word(args.left, ctx.sig)
    v = parse_word(args.right, ctx.sig)
    c = compare_words(ctx.sig, u, v)
    word = {-1: "less", 0: "equal", 1: "greater"}[c]
    print(word)
    return OK, _report(args, "order",
                       {"left": args.left, "right": args.right},
                       details={"result": word})


def _cmd_reduce(ctx, args):
    p = parse_poly(args.poly, ctx.sig)
    trace = reduce_poly(p, ctx.rset)
    print(poly_str(trace.remainder))
    if args.trace:
        for st in trace.steps:
            print(f"  eliminated {st.word} via {st.pattern.describe()} "
                  f"(coefficient {st.coeff})")
    rep = _report(args, "reduce", {"poly": args.poly},
                  details={"remainder": poly_str(trace.remainder),
                           "steps": len(trace.steps)})
    if args.trace:
        rep.traces = [trace.to_json()]
    return OK, rep


def _check_core(ctx):
    return check_gsb_rset(ctx.rset, ctx.sig, ctx.gens,
                          comp_filter=_comp_filter(ctx),
                          bounds=_bounds(ctx),
                          shapes=ctx.shapes or None)


def _gsb_exit(report):
    if report.is_gsb:
        return OK
    return INCONCLUSIVE if report.n_inconclusive and not report.n_nontrivial \
        else FAIL


def _cmd_compositions(ctx, args):
    rep = _check_core(ctx)
    for v in rep.verdicts:
        print(f"{v.verdict:12s} {v.comp.describe()}")
        if v.verdict != "trivial":
            print(f"             remainder: {poly_str(v.remainder)}")
    code = _gsb_exit(rep)
    return code, _report(args, "compositions", ctx.options,
                         verdict="ok" if rep.is_gsb else "fail",
                         details=rep.to_json(with_trace=args.trace))


def _cmd_check(ctx, args):
    rep = _check_core(ctx)
    verdict = "ok" if rep.is_gsb else (
        "inconclusive" if rep.n_inconclusive and not rep.n_nontrivial
        else "fail")
    print(f"basis: {'yes' if rep.is_gsb else 'no'} "
          f"({rep.n_trivial} trivial, {rep.n_nontrivial} nontrivial, "
          f"{rep.n_inconclusive} inconclusive compositions)")
    return _gsb_exit(rep), _report(args, "check", ctx.options, verdict,
                                   rep.to_json(with_trace=args.trace))


def _cmd_complete(ctx, args):
    res = complete(ctx.rset.polys(), ctx.sig, ctx.gens, bounds=_bounds(ctx),
                   limits=_limits(ctx), comp_filter=_comp_filter(ctx))
    for p in res.basis:
        print(poly_str(p))
    if not res.completed:
        print(f"incomplete: {res.diagnostic}", file=sys.stderr)
    details = {"basis": [poly_str(p) for p in res.basis],
               "completed": res.completed, "rounds": res.rounds,
               "added": res.added}
    if res.diagnostic:
        details["diagnostic"] = res.diagnostic
    return (OK if res.completed else INCONCLUSIVE), _report(
        args, "complete", ctx.options,
        "ok" if res.completed else "inconclusive", details)


def _cmd_minimalize(ctx, args):
    out = minimalize(ctx.rset.polys(), ctx.sig)
    for p in out:
        print(poly_str(p))
    return OK, _report(args, "minimalize", ctx.options,
                       details={"basis": [poly_str(p) for p in out]})


def _cmd_reduce_basis(ctx, args):
    out = reduce_basis(ctx.rset.polys(), ctx.sig)
    for p in out:
        print(poly_str(p))
    return OK, _report(args, "reduce-basis", ctx.options,
                       details={"basis": [poly_str(p) for p in out]})


def _irr_bounds(ctx):
    return (ctx.options.get("max_length", 3), ctx.options.get("max_dpow", 2))


def _cmd_irr(ctx, args):
    max_len, max_dpow = _irr_bounds(ctx)
    words = irr_enumerate(ctx.rset, ctx.sig, ctx.gens, max_len, max_dpow)
    for w in words:
        print(w)
    return OK, _report(args, "irr", ctx.options,
                       details={"count": len(words),
                                "words": [str(w) for w in words]})


def _cmd_kdbasis(ctx, args):
    max_len, _ = _irr_bounds(ctx)
    words = kd_basis(ctx.rset, ctx.sig, ctx.gens, max_len)
    for w in words:
        print(w)
    return OK, _report(args, "kdbasis", ctx.options,
                       details={"count": len(words),
                                "words": [str(w) for w in words]})


def _run_example(args):
    window = IndexWindow(args.window or 2, args.relation_multiplier or 4)
    ex = builtin_example(args.name, window)
    args._digest = _digest(args.name, str(window.W), str(window.M))
    params = {"example": ex.name, "window": window.W,
              "relation_multiplier": window.M}
    max_len = args.max_length or 3
    max_dpow = args.max_dpow if args.max_dpow is not None else 2

    if args.action == "check":
        rset = ex.basis_rset()
        rep = check_gsb_rset(rset, ex.sig, ex.gens(),
                             comp_filter=comp_window_filter(ex.sig, window.W))
        print(f"basis: {'yes' if rep.is_gsb else 'no'} "
              f"({rep.n_trivial} trivial, {rep.n_nontrivial} nontrivial, "
              f"{rep.n_inconclusive} inconclusive)")
        verdict = "ok" if rep.is_gsb else "fail"
        return _gsb_exit(rep), Report("example check", args._digest, params,
                                      verdict, rep.to_json())

    if args.action in ("irr", "kdbasis"):
        rset = ex.basis_rset()
        if args.action == "kdbasis":
            words = kd_basis(rset, ex.sig, ex.gens(), max_len)
            expected = set(ex.irr_expected(window.W, max_len, 0))
        else:
            words = irr_enumerate(rset, ex.sig, ex.gens(), max_len, max_dpow)
            expected = set(ex.irr_expected(window.W, max_len, max_dpow))
        for w in words:
            print(w)
        match = set(words) == expected
        print(f"matches closed form: {'yes' if match else 'no'}")
        return (OK if match else FAIL), Report(
            f"example {args.action}", args._digest, params,
            "ok" if match else "fail",
            {"count": len(words), "matches_closed_form": match,
             "words": [str(w) for w in words]})

    if args.action == "embed":
        rset = ex.basis_rset()
        gsb = check_gsb_rset(rset, ex.sig, ex.gens(),
                             comp_filter=comp_window_filter(ex.sig, window.W))
        emb = embedding_check(rset, ex.sig, ex.gens(), max_dpow)
        ok = gsb.is_gsb and emb.embedded
        print(f"embedded: {'yes' if ok else 'no'}")
        if emb.inconclusive:
            return INCONCLUSIVE, Report("example embed", args._digest, params,
                                        "inconclusive", emb.to_json())
        return (OK if ok else FAIL), Report(
            "example embed", args._digest, params, "ok" if ok else "fail",
            {"gsb": gsb.is_gsb, **emb.to_json()})

    # equiv
    eq = equivalence_check(ex)
    print(f"ideals equal over the window: {'yes' if eq.ok else 'no'}")
    if not eq.completion.completed:
        return INCONCLUSIVE, Report("example equiv", args._digest, params,
                                    "inconclusive", eq.to_json())
    return (OK if eq.ok else FAIL), Report(
        "example equiv", args._digest, params, "ok" if eq.ok else "fail",
        eq.to_json())


if __name__ == "__main__":
    sys.exit(main())
