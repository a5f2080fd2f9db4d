"""Command-line interface.

Exit codes: 0 success / certified, 1 usage error, 2 no epimorphism onto Z,
3 inconclusive certificate, 4 failed certificate, 5 parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction

from .certify import (
    DEFICIENCY_ROUTE,
    USER_ROUTE,
    V_CERTIFIED,
    V_INCONCLUSIVE,
    certify,
    render_certificate,
)
from .covers import kernel_presentation
from .errors import HnnCertError, PresentationSyntaxError
from .hnn import split_as_hnn
from .intlin import abelianization, relation_matrix
from .l2est import betti_growth, l2_bounds
from .presentations import FinitePresentation, move_to_dict
from .textio import parse_presentation
from .zmaps import find_zmap, normalize_stable_letter, parse_zmap

EXIT_OK, EXIT_USAGE, EXIT_NO_ZMAP, EXIT_INCONCLUSIVE, EXIT_FAILED, EXIT_PARSE = range(6)

DEFAULT_FORMAT = {"parse": "json", "abelianize": "json", "find-z": "json", "split": "json",
                  "cover": "json", "betti-growth": "text", "certify": "text"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _NoZmap(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hnncert",
                     description="HNN splittings, cyclic covers, Betti growth and "
                                 "acylindrical hyperbolicity certificates")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help, z=False):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("input", help="presentation text, a file path, or - for stdin")
        sp.add_argument("--format", choices=("json", "text"), default=None)
        if z:
            sp.add_argument("--z", metavar="MAP", help='epimorphism onto Z, e.g. "t=1,a=0"')
        return sp

    add("parse", "parse and print the canonical presentation")
    add("abelianize", "first Betti number and torsion")
    add("find-z", "find an epimorphism onto Z")
    add("split", "HNN splitting over the stable letter", z=True)
    sp = add("cover", "presentation of the degree-n cyclic cover", z=True)
    sp.add_argument("-n", type=int, required=True)
    sp = add("betti-growth", "b1 of cyclic covers for n = 1..max-n", z=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp = add("certify", "build an acylindrical hyperbolicity certificate", z=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--use-deficiency", action="store_true")
    grp.add_argument("--l2-lower-bound", metavar="P/Q")
    return parser


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _normalized(p: FinitePresentation, zarg: str | None):
    if zarg is not None:
        eps = parse_zmap(zarg, p)
    else:
        eps = find_zmap(p)
        if eps is None:
            raise _NoZmap()
    return normalize_stable_letter(p, eps), eps


def _norm_doc(p, norm, eps) -> dict:
    moves, cur = [], p
    for mv, nxt in zip(norm.moves, norm.history):
        moves.append(move_to_dict(mv, cur))
        cur = nxt
    return {"eps": {n: str(v) for n, v in zip(p.generators, eps.values)},
            "moves": moves, "stable": norm.stable.name,
            "presentation": norm.presentation.to_dict()}


def _cmd_parse(p, args, fmt):
    if fmt == "json":
        return EXIT_OK, _dump(p.to_dict())
    return EXIT_OK, f"{p}\n"


def _cmd_abelianize(p, args, fmt):
    ab = abelianization(p)
    if fmt == "json":
        return EXIT_OK, _dump({"schema_version": "1", "b1": str(ab.b1),
                               "torsion": [str(d) for d in ab.torsion],
                               "min_abelian_gens": str(ab.min_abelian_gens),
                               "relation_matrix": relation_matrix(p).to_strings()})
    tors = " x ".join(f"Z/{d}" for d in ab.torsion) or "none"
    return EXIT_OK, (f"b1 = {ab.b1}\ntorsion = {tors}\n"
                     f"min_abelian_gens = {ab.min_abelian_gens}\n")


def _cmd_find_z(p, args, fmt):
    eps = find_zmap(p)
    if eps is None:
        raise _NoZmap()
    if fmt == "json":
        return EXIT_OK, _dump({"schema_version": "1",
                               "zmap": {n: str(v) for n, v in zip(p.generators, eps.values)}})
    return EXIT_OK, eps.format(p.generators) + "\n"


def _cmd_split(p, args, fmt):
    norm, eps = _normalized(p, args.z)
    split = split_as_hnn(norm.presentation, norm.stable)
    if fmt == "json":
        doc = split.to_dict()
        doc["normalization"] = _norm_doc(p, norm, eps)
        return EXIT_OK, _dump(doc)
    names = split.base.generators
    lines = [f"stable letter: {split.stable.name}",
             f"k = {split.k}, N = {split.shift_bound_N}, M = {split.rank_bound_M} "
             f"(coarse shift bound {split.coarse_shift_bound})",
             f"base: < {split.base} >",
             "C: " + ", ".join(split.base.format_word(w) for w in split.assoc_C),
             "D: " + ", ".join(split.base.format_word(w) for w in split.assoc_D)]
    lines += [f"t {names[a]} t^-1 = {names[b]}" for a, b in split.conj_relations]
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_cover(p, args, fmt):
    norm, eps = _normalized(p, args.z)
    cover = kernel_presentation(norm.presentation, norm.stable, args.n)
    if fmt == "json":
        doc = cover.to_dict()
        doc["normalization"] = _norm_doc(p, norm, eps)
        return EXIT_OK, _dump(doc)
    lines = [f"K_{cover.n}: < {cover.pres} >"]
    lines += [f"{cover.pres.generators[i]} = {norm.presentation.format_word(w)}"
              for i, w in enumerate(cover.embedding)]
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_betti_growth(p, args, fmt):
    if args.max_n < 1:
        raise UsageError("--max-n must be at least 1")
    norm, eps = _normalized(p, args.z)
    report = betti_growth(norm.presentation, norm.stable, args.max_n)
    bounds = l2_bounds(p)
    if fmt == "json":
        doc = report.to_dict()
        doc["bounds"] = bounds.to_dict()
        return EXIT_OK, _dump(doc)
    table = [("n", "b1", "torsion", "ratio")]
    for r in report.rows:
        table.append((str(r.n), str(r.b1), ",".join(map(str, r.torsion)) or "-", str(r.ratio)))
    widths = [max(len(row[i]) for row in table) for i in range(4)]
    lines = [f"# {report.label} (estimator only, not a limit claim)"]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip() for row in table]
    lines.append(f"# bounds: {bounds.lower_from_deficiency} <= b <= {bounds.upper_from_rank} "
                 f"(deficiency - 1, generators - 1)")
    return EXIT_OK, "\n".join(lines) + "\n"


def _cmd_certify(p, args, fmt):
    eps = parse_zmap(args.z, p) if args.z is not None else None
    if args.l2_lower_bound is not None:
        try:
            lower = Fraction(args.l2_lower_bound)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --l2-lower-bound {args.l2_lower_bound!r}") from None
        cert = certify(p, lower, USER_ROUTE, eps=eps,
                       user_note=f"--l2-lower-bound {args.l2_lower_bound}")
    else:
        cert = certify(p, provenance=DEFICIENCY_ROUTE, eps=eps)
    code = {V_CERTIFIED: EXIT_OK, V_INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(cert.verdict,
                                                                          EXIT_FAILED)
    return code, render_certificate(cert, fmt)


COMMANDS = {"parse": _cmd_parse, "abelianize": _cmd_abelianize, "find-z": _cmd_find_z,
            "split": _cmd_split, "cover": _cmd_cover, "betti-growth": _cmd_betti_growth,
            "certify": _cmd_certify}


def run(argv: list[str]) -> tuple[int, str, str]:
    """Run a command; returns (exit code, stdout text, stderr text)."""
    err: list[str] = []
    try:
        args = _build_parser().parse_args(argv)
    except UsageError as exc:
        return EXIT_USAGE, "", f"usage error: {exc}\n"
    fmt = args.format or DEFAULT_FORMAT[args.command]
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            p = parse_presentation(_read_input(args.input))
        err += [f"warning: {w.message}\n" for w in caught]
    except PresentationSyntaxError as exc:
        return EXIT_PARSE, "", f"parse error: {exc}\n"
    except OSError as exc:
        return EXIT_PARSE, "", f"cannot read input: {exc}\n"
    try:
        code, out = COMMANDS[args.command](p, args, fmt)
    except _NoZmap:
        return EXIT_NO_ZMAP, "", "".join(err) + "b1 = 0: no epimorphism onto Z\n"
    except (UsageError, ValueError, KeyError) as exc:
        return EXIT_USAGE, "", "".join(err) + f"usage error: {exc}\n"
    except HnnCertError as exc:
        return EXIT_USAGE, "", "".join(err) + f"error: {type(exc).__name__}: {exc}\n"
    return code, out, "".join(err)


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
