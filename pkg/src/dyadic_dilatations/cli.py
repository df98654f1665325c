"""Command line interface.

Exit codes: 0 success (every check passed), 1 some check failed,
2 usage, parse, validation or domain error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import automata, verify
from .dilatation import combine, delta_op, inv_op, restrict, sigma_op, stabilize
from .report import CheckReport
from .textformat import (
    Workspace,
    format_machine,
    format_structure,
    parse_level_table,
    parse_workspace,
)
from .words import DyadicScale, OmegaWord, check_finite


class UsageError(Exception):
    pass


def _word(text: str) -> OmegaWord:
    return OmegaWord.parse(text)


def load_workspace(path: Optional[str]) -> Workspace:
    if path is None:
        return Workspace()
    return parse_workspace(Path(path).read_text())


def render_reports(reports: list[CheckReport], fmt: str) -> str:
    lines = []
    for r in reports:
        first = r.witnesses[0] if r.witnesses else {}
        wit = ";".join(f"{k}={v}" for k, v in first.items())
        if fmt == "tsv":
            lines.append("\t".join([r.name, r.verdict, str(r.cases), wit]))
            continue
        lines.append(f"{r.verdict} {r.name} (cases={r.cases})")
        for w in r.witnesses:
            lines.append("    witness: " + " ".join(f"{k}={v}" for k, v in w.items()))
        for k, v in r.notes.items():
            if k != "failures" and not k.endswith("_scale"):
                lines.append(f"    {k}: {v}")
    return "\n".join(lines)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="workspace file with machines, wfuns and structures")
    p.add_argument("--format", choices=("text", "tsv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dyadic-dil", description="Dilatation structures on the dyadic tree boundary")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="run a machine on a word (finite or BITS(BITS))")
    _common(p)
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True)

    for name in ("dilate", "undilate"):
        p = sub.add_parser(name, help=f"{name} a point by 2^±p at a base")
        _common(p)
        p.add_argument("--structure", required=True)
        p.add_argument("--base", required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--point", required=True)

    for name in ("delta", "sigma", "inv"):
        p = sub.add_parser(name, help=f"the {name} operator at scale 2^p")
        _common(p)
        p.add_argument("--structure", required=True)
        p.add_argument("--base", required=True)
        p.add_argument("--u", required=True)
        if name != "inv":
            p.add_argument("--v", required=True)
        p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("stabilize", help="sweep an operator over p = 1..pmax")
    _common(p)
    p.add_argument("--structure", required=True)
    p.add_argument("--op", choices=("delta", "sigma", "inv"), default="delta")
    p.add_argument("--base", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--v", default=None)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--pmax", type=int, default=9)

    p = sub.add_parser("section", help="print the section of a machine at a finite word")
    _common(p)
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True)

    p = sub.add_parser("compose", help="machine for w -> second(first(w))")
    _common(p)
    p.add_argument("--machine", action="append", required=True, help="give twice: first, then second")

    p = sub.add_parser("invert", help="print the inverse machine")
    _common(p)
    p.add_argument("--machine", required=True)

    p = sub.add_parser("restrict", help="structure induced on the cylinder of a letter")
    _common(p)
    p.add_argument("--structure", required=True)
    p.add_argument("--letter", choices=("0", "1"), required=True)

    p = sub.add_parser("combine", help="glue two structures on the 0 and 1 cylinders")
    _common(p)
    p.add_argument("--structure", action="append", required=True, help="give twice: the 0 part, then the 1 part")
    p.add_argument("--level1", default=None, help='level-1 table, e.g. "0 -> id , 1 -> flip" (default: id)')
    p.add_argument("--name", default=None)

    check = sub.add_parser("check", help="run a finite-depth checker")
    csub = check.add_subparsers(dest="check", required=True)
    for name in ("axioms", "smooth", "selfsimilar", "lipschitz", "linear", "isometry", "nondegenerate"):
        c = csub.add_parser(name)
        _common(c)
        c.add_argument("--depth", type=int, default=6)
        if name in ("isometry", "nondegenerate"):
            c.add_argument("--machine", required=True)
        else:
            c.add_argument("--structure", required=True)
        if name == "axioms":
            c.add_argument("--pmax", type=int, default=3)
            c.add_argument("--P", type=int, default=None, help="largest p for the A4 sweep")
        if name == "smooth":
            c.add_argument("--eps", type=int, default=0, help="j for tolerance 2^-j")
        if name == "linear":
            g = c.add_mutually_exclusive_group(required=True)
            g.add_argument("--machine")
            g.add_argument("--prepend", action="store_true", help="check the prepend maps w -> 0w, 1w")
        if name == "nondegenerate":
            c.add_argument("--modulus", type=int, default=0, help="also print f(1..n)")
    return parser


def _print(text: str) -> None:
    sys.stdout.write(text + ("\n" if not text.endswith("\n") else ""))


def _run_check(args, ws: Workspace) -> int:
    kind = args.check
    if kind == "isometry":
        m = ws.machine(args.machine)
        reports = [automata.check_isometry(m)]
        if reports[0].passed:
            reports.append(verify.check_isometry_distances(m, args.depth))
    elif kind == "nondegenerate":
        m = ws.machine(args.machine)
        reports = [automata.check_nondegenerate(m)]
        if args.modulus and reports[0].passed:
            reports[0].notes["modulus"] = " ".join(map(str, automata.continuity_modulus(m, args.modulus)))
    else:
        d = ws.structure(args.structure)
        if kind == "axioms":
            reports = verify.check_axioms(d, args.depth, args.pmax, args.P)
        elif kind == "smooth":
            s = verify.check_smooth(d, DyadicScale(-args.eps), args.depth)
            r = CheckReport("smooth", s.passed, params={"eps": str(s.eps), "depth": args.depth})
            r.notes.update(mu=str(s.empirical_mu), mu_lenient=str(s.empirical_mu_lenient), window_bound=str(s.window_bound))
            if not s.passed:
                r.witnesses.append({"mu": str(s.empirical_mu), "required": str(s.window_bound)})
            reports = [r]
        elif kind == "selfsimilar":
            reports = [verify.check_selfsimilar(d, args.depth)]
        elif kind == "lipschitz":
            reports = [verify.check_lipschitz(d, args.depth)]
        elif args.prepend:
            reports = [verify.check_prepend_linearity(d, args.depth)]
        else:
            reports = [verify.check_linear(d, ws.machine(args.machine), args.depth)]
    _print(render_reports(reports, args.format))
    return 0 if all(r.passed for r in reports) else 1


def dispatch(args) -> int:
    ws = load_workspace(args.file)
    cmd = args.command
    if cmd == "check":
        return _run_check(args, ws)
    if cmd == "eval":
        m = ws.machine(args.machine)
        if "(" in args.word:
            _print(str(automata.eval_omega(m, _word(args.word))))
        else:
            out, state = automata.eval_finite(m, check_finite(args.word))
            _print(f"{out}\t{state}" if args.format == "tsv" else f"{out or 'e'} {state}")
        return 0
    if cmd in ("section", "invert", "compose"):
        if cmd == "section":
            m = automata.section(ws.machine(args.machine), check_finite(args.word))
        elif cmd == "invert":
            m = automata.invert(ws.machine(args.machine))
        else:
            if len(args.machine) != 2:
                raise UsageError("compose takes exactly two --machine options")
            m = automata.compose(ws.machine(args.machine[0]), ws.machine(args.machine[1]))
        _print(format_machine(m))
        return 0
    if cmd == "restrict":
        _print(format_structure(restrict(ws.structure(args.structure), args.letter)))
        return 0
    if cmd == "combine":
        if len(args.structure) != 2:
            raise UsageError("combine takes exactly two --structure options")
        level1 = parse_level_table(args.level1) if args.level1 else None
        d = combine(ws.structure(args.structure[0]), ws.structure(args.structure[1]), level1, args.name)
        _print(format_structure(d, args.name or "combined"))
        return 0

    d = ws.structure(args.structure)
    base = _word(args.base)
    if cmd == "dilate":
        _print(str(d.dilate(base, args.p, _word(args.point))))
    elif cmd == "undilate":
        _print(str(d.undilate(base, args.p, _word(args.point))))
    elif cmd == "delta":
        _print(str(delta_op(d, base, _word(args.u), _word(args.v), args.p)))
    elif cmd == "sigma":
        _print(str(sigma_op(d, base, _word(args.u), _word(args.v), args.p)))
    elif cmd == "inv":
        _print(str(inv_op(d, base, _word(args.u), args.p)))
    elif cmd == "stabilize":
        v = _word(args.v) if args.v is not None else base
        r = stabilize(d, args.op, base, _word(args.u), v, args.depth, args.pmax)
        sep = "\t" if args.format == "tsv" else " "
        for p, val in enumerate(r.values, 1):
            _print(f"p={p}{sep}{val}")
        _print(f"stable_from={r.stable_from if r.stable else 'NONE'}{sep}limit={r.limit_candidate or 'NONE'}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return dispatch(args)
    except (ValueError, UsageError, OSError) as e:
        # WorkspaceError, WordError, MachineError and DilatationError are ValueErrors
        print(f"error: {e}", file=sys.stderr)
        return 2


run = main

if __name__ == "__main__":
    sys.exit(main())
