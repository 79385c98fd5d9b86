"""Command-line front end.

    hyperdist <command> [--in FILE] [--format ket|json] [--seed N]
                        [--max-size N] [--max-denominator N] ...

Exit status: 0 success, 1 domain error, 2 parse or validation error,
3 refinement undetermined.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from .errors import HyperdistError, IncompleteSupport, ValidationError
from .fixtures import FIXTURES, show
from .hypercond import denote_channel, hyper_condition
from .kernel import Channel, Dist, SubDist, render_ket, render_label
from .laws import CHECKERS, CheckConfig
from .normalise import disintegrate, hyper_normalise, nrm
from .predicates import Predicate, condition, test_from_predicate, validity
from .refinement import RefinementWitness, check_witness, hyper_refines, test_refines
from .workspace import Workspace, WorkspaceError, load, value_to_json

EXIT_OK, EXIT_DOMAIN, EXIT_INVALID, EXIT_UNDETERMINED = 0, 1, 2, 3


class _Undetermined(Exception):
    def __init__(self, cause: IncompleteSupport):
        self.cause = cause


# -- helpers ---------------------------------------------------------------------


def _workspace(args) -> Workspace:
    if args.infile is None:
        raise WorkspaceError("this command needs a workspace: --in FILE")
    try:
        return load(args.infile)
    except OSError as exc:
        raise WorkspaceError(f"cannot read {args.infile}: {exc.strerror}") from None


def _need(args, flag: str) -> str:
    value = getattr(args, flag)
    if value is None:
        raise WorkspaceError(f"missing --{flag.replace('_', '-')}")
    return value


def _fetch(ws: Workspace, name: str, *kinds):
    obj = ws.get(name)
    if kinds and not isinstance(obj, kinds):
        wanted = " or ".join(k.__name__ for k in kinds)
        raise WorkspaceError(f"{name} is a {type(obj).__name__}, expected {wanted}")
    return obj


def _as_test(obj) -> Channel:
    if isinstance(obj, Predicate):
        return test_from_predicate(obj)
    return obj


def _rows(ch: Channel) -> list:
    return [f"{render_label(a, ch.source)} -> {render_ket(ch(a))}" for a in ch.source.labels]


def _emit(args, ket_lines: list, doc) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        for line in ket_lines:
            sys.stdout.write(line + "\n")


# -- commands ----------------------------------------------------------------------


def cmd_nrm(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist, SubDist)
    out = nrm(d)
    _emit(args, [render_ket(out)], value_to_json(out))
    return EXIT_OK


def cmd_hypernorm(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist)
    out = hyper_normalise(d)
    _emit(args, [render_ket(out)], value_to_json(out))
    return EXIT_OK


def cmd_condition(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist)
    p = _fetch(ws, _need(args, "pred"), Predicate)
    v = validity(d, p)
    out = condition(d, p)
    _emit(
        args,
        [f"validity: {show(v)}", f"posterior: {render_ket(out)}"],
        {"validity": value_to_json(v), "posterior": value_to_json(out)},
    )
    return EXIT_OK


def cmd_hypercond(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist)
    t = _as_test(_fetch(ws, _need(args, "test"), Channel, Predicate))
    out = hyper_condition(d, t)
    _emit(args, [render_ket(out)], value_to_json(out))
    return EXIT_OK


def cmd_disintegrate(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist)
    split = disintegrate(d)
    _emit(
        args,
        [f"marginal: {render_ket(split.marginal)}", "conditional:"]
        + ["  " + r for r in _rows(split.conditional)],
        {"marginal": value_to_json(split.marginal), "conditional": value_to_json(split.conditional)},
    )
    return EXIT_OK


def cmd_denote(args) -> int:
    ws = _workspace(args)
    d = _fetch(ws, _need(args, "dist"), Dist)
    t = _as_test(_fetch(ws, _need(args, "test"), Channel, Predicate))
    out = denote_channel(t, d)
    _emit(args, [render_ket(out)], value_to_json(out))
    return EXIT_OK


def cmd_refine(args) -> int:
    ws = _workspace(args)
    src = _fetch(ws, _need(args, "from_"), Channel, Dist)
    tgt = _fetch(ws, _need(args, "to"), Channel, Dist)
    if isinstance(src, Channel) != isinstance(tgt, Channel):
        raise WorkspaceError("refine compares two tests or two hyper distributions")
    if isinstance(src, Channel):
        h = test_refines(src, tgt)
        if h is None:
            _emit(args, ["DOES NOT REFINE"], {"refines": False})
            return EXIT_OK
        _emit(args, ["h:"] + ["  " + r for r in _rows(h)] + ["REFINES"], {"refines": True, "h": value_to_json(h)})
        return EXIT_OK
    try:
        w = hyper_refines(src, tgt)
    except IncompleteSupport as exc:
        raise _Undetermined(exc) from None
    if w is None:
        _emit(args, ["DOES NOT REFINE"], {"refines": False})
        return EXIT_OK
    _emit(
        args,
        [f"witness: {render_ket(w.omega)}", "REFINES"],
        {"refines": True, "witness": value_to_json(w.omega)},
    )
    return EXIT_OK


def cmd_witness(args) -> int:
    ws = _workspace(args)
    phi = _fetch(ws, _need(args, "from_"), Dist)
    psi = _fetch(ws, _need(args, "to"), Dist)
    omega = _fetch(ws, _need(args, "witness"), Dist)
    w = RefinementWitness(omega)
    ok = check_witness(phi, psi, omega)
    lines = [
        f"inner projection: {render_ket(w.source_projection())}",
        f"outer projection: {render_ket(w.target_projection())}",
        "VALID" if ok else "INVALID",
    ]
    _emit(
        args,
        lines,
        {
            "valid": ok,
            "inner_projection": value_to_json(w.source_projection()),
            "outer_projection": value_to_json(w.target_projection()),
        },
    )
    return EXIT_OK if ok else EXIT_DOMAIN


def cmd_laws(args) -> int:
    try:
        cfg = CheckConfig(
            max_space_size=args.max_size,
            max_arity=args.max_arity,
            max_denominator=args.max_denominator,
            mode=args.mode,
            seed=args.seed,
            trials=args.trials,
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    names = [args.law] if args.law else list(CHECKERS)
    reports = [CHECKERS[n](cfg) for n in names]
    lines = []
    for r in reports:
        lines.append(r.summary())
        for p in r.parts:
            lines.append("  " + p.summary())
        if r.counterexample is not None:
            lines.append(f"  counterexample [{r.counterexample['law']}]:")
            lines.append(f"    lhs = {r.counterexample['lhs']}")
            lines.append(f"    rhs = {r.counterexample['rhs']}")
    _emit(args, lines, {"config": asdict(cfg), "reports": [r.to_json() for r in reports]})
    return EXIT_OK if all(r.ok for r in reports) else EXIT_DOMAIN


def cmd_examples(args) -> int:
    if args.only:
        if args.only not in FIXTURES:
            raise ValidationError(f"unknown fixture {args.only!r}; known: {', '.join(FIXTURES)}")
        chosen = [FIXTURES[args.only]]
    else:
        chosen = list(FIXTURES.values())
    lines, docs, exact = [], [], 0
    for fx in chosen:
        checks = fx.run()
        good = all(c.ok for c in checks)
        exact += good
        lines.append(f"{fx.name}: {fx.title}")
        entries = []
        for c in checks:
            if c.ok:
                lines.append(f"  {c.label} = {show(c.computed)}")
            else:
                lines.append(f"  {c.label}: MISMATCH")
                lines.append(f"    expected {show(c.expected)}")
                lines.append(f"    computed {show(c.computed)}")
            entries.append({"check": c.label, "exact": c.ok, "computed": show(c.computed), "expected": show(c.expected)})
        docs.append({"fixture": fx.name, "exact": good, "checks": entries})
    lines.append(f"{exact}/{len(chosen)} fixtures exact")
    _emit(args, lines, {"fixtures": docs, "exact": exact, "total": len(chosen)})
    return EXIT_OK if exact == len(chosen) else EXIT_DOMAIN


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="infile", metavar="FILE", help="workspace file (JSON)")
    common.add_argument("--format", choices=("ket", "json"), default="ket")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-size", type=int, default=3)
    common.add_argument("--max-denominator", type=int, default=4)

    parser = argparse.ArgumentParser(prog="hyperdist", description="Exact hyper normalisation and conditioning.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_text, *flags):
        p = sub.add_parser(name, parents=[common], help=help_text)
        for flag in flags:
            dest = "from_" if flag == "from" else flag.replace("-", "_")
            p.add_argument(f"--{flag}", dest=dest, metavar="NAME")
        p.set_defaults(run=fn)
        return p

    add("nrm", cmd_nrm, "normalise a (sub)distribution", "dist")
    add("hypernorm", cmd_hypernorm, "hyper normalise a distribution over n*A", "dist")
    add("condition", cmd_condition, "validity and conditional of a state by a predicate", "dist", "pred")
    add("hypercond", cmd_hypercond, "hyper conditional of a state by a test or predicate", "dist", "test")
    add("disintegrate", cmd_disintegrate, "split a joint over n*A into marginal and conditional", "dist")
    add("denote", cmd_denote, "tag-erased hyper conditional", "dist", "test")
    add("refine", cmd_refine, "decide refinement of tests or hyper distributions", "from", "to")
    add("witness", cmd_witness, "check a refinement witness", "from", "to", "witness")
    laws = add("laws", cmd_laws, "run the law checkers")
    laws.add_argument("--law", choices=list(CHECKERS))
    laws.add_argument("--mode", choices=("exhaustive", "randomised"), default="exhaustive")
    laws.add_argument("--max-arity", type=int, default=3)
    laws.add_argument("--trials", type=int, default=50)
    ex = add("examples", cmd_examples, "replay the built-in worked examples")
    group = ex.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true")
    group.add_argument("--only", metavar="FIXTURE")
    return parser


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except _Undetermined as exc:
        sys.stderr.write(f"undetermined: {exc.cause}\n")
        return EXIT_UNDETERMINED
    except ValidationError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID
    except HyperdistError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
