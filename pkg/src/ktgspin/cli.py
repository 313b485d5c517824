"""Command-line interface: ``ktgspin SUBCOMMAND FILE ...``.

Exit status is 0 on success, 1 for bad input (unreadable file, parse error,
unknown edge or family) and 2 when a computed certificate fails its own
re-verification.
"""

from __future__ import annotations

import argparse
import sys

from .algebra import AlgebraError, associated_quandle, family_from_spec
from .coloring import check_coloring, enumerate_colorings, fox_colorings, is_trivial_coloring
from .diagram import DiagramError, constituent_cycles, extract_subdiagram, sort_ids
from .ktgio import ParseError, parse_table, read_diagram, serialize, table_violations
from .moves import DEFAULT_BUDGET, Move, MoveError, apply_move, applicable_moves, simplify
from .spin import (
    DEFAULT_N_RANGE,
    KNOTTED,
    UNKNOTTED,
    SpinError,
    almost_trivial_check,
    classify_spin,
    spin_constituents,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class InvariantBreach(RuntimeError):
    pass


def _cmd_validate(args, out):
    d = read_diagram(args.file)
    out.append(f"valid: {len(d.vertices)} vertices, {d.crossing_count} crossings, "
               f"{len(d.arcs)} arcs, {len(d.edges)} edges")
    out.append(f"planar: {'yes' if d.is_planar else 'no'}")


def _cmd_colorings(args, out):
    d = read_diagram(args.file)
    q = associated_quandle(family_from_spec(args.family))
    res = enumerate_colorings(d, q, keep=args.show)
    for col in res.colorings:
        errs = check_coloring(d, q, col)
        if errs:
            raise InvariantBreach(f"enumerated coloring is invalid: {errs[0]}")
    nontrivial = sum(1 for c in res.colorings if not is_trivial_coloring(c))
    out.append(f"colorings: {res.count}")
    if args.show:
        out.append(f"shown: {len(res.colorings)} ({nontrivial} nontrivial)")
        for col in res.colorings:
            out.append("  " + " ".join(f"{a}={col[a][0]}/{col[a][1]}" for a in sort_ids(col)))


def _cmd_fox(args, out):
    d = read_diagram(args.file)
    res = fox_colorings(d, args.n)
    out.append(f"fox {args.n}: {res.count}")
    col = res.nontrivial()
    if col is not None:
        out.append("nontrivial: " + " ".join(f"{a}={col[a]}" for a in sort_ids(col)))


def _cmd_constituents(args, out):
    d = read_diagram(args.file)
    n_range = range(2, args.nmax + 1)
    for cyc in constituent_cycles(d):
        k = extract_subdiagram(d, cyc)
        evidence = next((f"fox {n}: {fox_colorings(k, n).count}" for n in n_range
                         if fox_colorings(k, n).is_nontrivial), "fox-trivial")
        out.append(f"{'+'.join(cyc)}: {k.crossing_count} crossings, {evidence}")
    if args.edge:
        rep = spin_constituents(d, args.edge, n_range)
        out.append(f"spin along {args.edge}:")
        out += ["  " + ln for ln in rep.lines()]


def _cmd_spin(args, out):
    d = read_diagram(args.file)
    if not args.all and not args.edge:
        raise SpinError("give --edge E or --all")
    edges = sort_ids(d.edges) if args.all else [args.edge]
    n_range = range(2, args.nmax + 1)
    for e in edges:
        cert = classify_spin(d, e, n_range, args.budget)
        for c in (cert, cert.mirror):
            if c is None or c.witness is None:
                continue
            errs = c.witness.verify()
            if errs:
                raise InvariantBreach(f"edge {e}: certificate fails re-verification: {errs[0]}")
        if cert.mirror is not None and {cert.verdict, cert.mirror.verdict} == {KNOTTED, UNKNOTTED}:
            raise InvariantBreach(f"edge {e}: diagram and mirror disagree")
        if args.verbose:
            out += cert.lines()
        else:
            extra = f" (n={cert.witness.n})" if cert.verdict == KNOTTED else ""
            if cert.verdict == UNKNOTTED:
                extra = f" ({len(cert.witness.trace.steps)} moves)"
            out.append(f"{e}: {cert.verdict}{extra}")
    if args.almost_trivial:
        out += almost_trivial_check(d, args.budget).lines()


def _cmd_simplify(args, out):
    d = read_diagram(args.file)
    tr = simplify(d, args.budget)
    out += tr.lines()
    if tr.replay().crossing_count != tr.final_crossings:
        raise InvariantBreach("trace does not replay")
    if args.write:
        out.append(serialize(tr.final).rstrip("\n"))


def _cmd_axioms(args, out):
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    kind, _ = parse_table(text)
    errs = table_violations(text)
    out.append(f"{kind}: {'ok' if not errs else f'{len(errs)} violations'}")
    out += ["  " + e for e in errs[: args.limit]]
    if len(errs) > args.limit:
        out.append(f"  ... {len(errs) - args.limit} more")
    if errs:
        return EXIT_INPUT
    return EXIT_OK


def _cmd_moves(args, out):
    d = read_diagram(args.file)
    if args.apply:
        d2 = apply_move(d, Move.parse(args.apply))
        out.append(serialize(d2).rstrip("\n"))
    else:
        for m in applicable_moves(d, insertions=args.insertions):
            out.append(str(m))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ktgspin", description="Colorings, moves and twist-spin verdicts for KTG diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="parse and validate a diagram")
    s.add_argument("file")
    s.set_defaults(func=_cmd_validate)

    s = sub.add_parser("colorings", help="count colorings by a G-family's associated quandle")
    s.add_argument("file")
    s.add_argument("--family", required=True, help="dihedral:N, alexander:P, conjugation:S3 or conjugation:Z/K")
    s.add_argument("--show", type=int, default=0, metavar="K", help="print the first K colorings")
    s.set_defaults(func=_cmd_colorings)

    s = sub.add_parser("fox", help="count Fox n-colorings of a knot diagram")
    s.add_argument("file")
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=_cmd_fox)

    s = sub.add_parser("constituents", help="list constituent cycles")
    s.add_argument("file")
    s.add_argument("--edge", help="also report spin constituents for this cut edge")
    s.add_argument("--nmax", type=int, default=max(DEFAULT_N_RANGE))
    s.set_defaults(func=_cmd_constituents)

    s = sub.add_parser("spin", help="classify ±1-twist spins")
    s.add_argument("file")
    s.add_argument("--edge")
    s.add_argument("--all", action="store_true")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--nmax", type=int, default=max(DEFAULT_N_RANGE))
    s.add_argument("--verbose", "-v", action="store_true", help="print full certificates")
    s.add_argument("--almost-trivial", action="store_true", help="also check the almost-trivial criterion")
    s.set_defaults(func=_cmd_spin)

    s = sub.add_parser("simplify", help="search for a diagram with fewer crossings")
    s.add_argument("file")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--write", action="store_true", help="print the final diagram")
    s.set_defaults(func=_cmd_simplify)

    s = sub.add_parser("axioms", help="check a quandle or G-family table")
    s.add_argument("file")
    s.add_argument("--limit", type=int, default=20)
    s.set_defaults(func=_cmd_axioms)

    s = sub.add_parser("moves", help="list applicable moves or apply one")
    s.add_argument("file")
    s.add_argument("--apply", metavar="KIND@SITE")
    s.add_argument("--insertions", action="store_true", help="include crossing-adding moves")
    s.set_defaults(func=_cmd_moves)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    out = []
    try:
        code = args.func(args, out) or EXIT_OK
    except InvariantBreach as exc:
        stdout.write("".join(ln + "\n" for ln in out))
        stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except ParseError as exc:
        for line, msg in exc.errors:
            stderr.write(f"{args.file}:{line}: {msg}\n" if line else f"{args.file}: {msg}\n")
        return EXIT_INPUT
    except (OSError, AlgebraError, DiagramError, MoveError, SpinError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        if isinstance(exc, SpinError) and "edge" in str(exc):
            parser.print_usage(stderr)
        return EXIT_INPUT
    stdout.write("".join(ln + "\n" for ln in out))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
