"""Command line front end: ``hecke <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import congruence, farey, fpgroup, report
from ._accel import ClosureCapExceeded
from .group import NotInGroup, classify, decompose, gen_S, gen_T, parse_matrix
from .ring import parse_element

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _dump(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


# -- verify / explain / prop52 ------------------------------------------------------

def cmd_verify(args) -> int:
    only: List[str] = list(args.only or [])
    if args.name != "all":
        only.append(args.name)
    for name in only:
        if name not in report.CHECK_NAMES:
            print(f"error: unknown check {name!r}; known: {', '.join(report.CHECK_NAMES)}", file=sys.stderr)
            return EXIT_INPUT
    rep = report.run_all(only or None, catalog_dir=args.catalog)
    print(rep.dumps() if args.json else rep.text())
    return rep.exit_code


def cmd_explain(args) -> int:
    try:
        print(report.explain(args.check, catalog_dir=args.catalog))
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_prop52(args) -> int:
    res = congruence.prop52_pipeline()
    if args.json:
        _dump(res.to_json())
    else:
        for leg in res.legs:
            print(f"{leg.status.upper():8} {leg.check:10}  {leg.anchor}")
        print(f"verdict ({', '.join(res.subjects)}): {res.verdict}")
    return EXIT_OK if res.verdict == "not congruence" else EXIT_FAIL


# -- hfs -------------------------------------------------------------------------------

def cmd_hfs(args) -> int:
    try:
        sym = farey.parse_hfs(_read(args.file))
        if args.action == "validate":
            print(f"ok: q={sym.q}, {len(sym.vertices)} vertices, {len(sym.pairings)} sides")
        elif args.action == "invariants":
            inv = farey.invariants(sym)
            if args.json:
                _dump(inv.to_json())
            else:
                print(f"d={inv.d} v2={inv.v2} vq={inv.vq} v_inf={inv.v_inf} r={inv.r} g={inv.g} "
                      f"widths={list(inv.widths)} geometric_width={inv.geometric_width}")
        else:
            gens = farey.side_pairing_generators(sym)
            if args.json:
                _dump([sp.to_json() for sp in gens])
            else:
                for sp in gens:
                    print(f"{sp.kind:5} {sp.edges}  {sp.generator}  word={sp.word}  {classify(sp.generator)}")
    except (farey.HFSError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


# -- fp --------------------------------------------------------------------------------

def _subgroup_words(text: str, alphabet: str) -> List[str]:
    words = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        words.append(fpgroup.st_to_xy(line) if alphabet == "st" else line)
    return words


def cmd_fp(args) -> int:
    pres = fpgroup.Presentation.hecke(args.q)
    if args.action == "index":
        if not args.subgroup_words:
            print("error: --subgroup-words is required", file=sys.stderr)
            return EXIT_INPUT
        try:
            words = _subgroup_words(_read(args.subgroup_words), args.alphabet)
            table = fpgroup.todd_coxeter(pres, words)
        except (ValueError, fpgroup.CosetCapExceeded) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INPUT
        if args.json:
            _dump({"index": table.index, "normal": table.is_normal(), "table": table.to_json()})
        else:
            print(table.index)
        return EXIT_OK
    try:
        tables = fpgroup.low_index_subgroups(pres, args.max)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        _dump([{"index": t.index, "normal": t.is_normal(), "table": t.to_json()} for t in tables])
    else:
        for t in tables:
            print(f"index {t.index:2}  {'normal' if t.is_normal() else 'non-normal'}")
    return EXIT_OK


# -- quotient / decompose -----------------------------------------------------------------

def cmd_quotient(args) -> int:
    try:
        alpha = parse_element(args.modulus, args.q)
        G = congruence.image_group([gen_S(args.q), gen_T(args.q)], alpha)
    except (ValueError, ClosureCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        _dump({"modulus": str(alpha), "ringSize": G.ring.cardinality, "order": G.order})
    else:
        print(G.order)
    return EXIT_OK


def cmd_decompose(args) -> int:
    try:
        g = parse_matrix(args.matrix, args.q)
        print(decompose(g))
    except NotInGroup as exc:
        print(f"not in G_{args.q}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hecke", description="Exact computations in Hecke groups.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification checks")
    v.add_argument("name", nargs="?", default="all", help="'all' or a check name")
    fmt = v.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--text", action="store_true")
    v.add_argument("--only", action="append", metavar="CHECK", help="restrict to this check (repeatable)")
    v.add_argument("--catalog", type=Path, help="directory with golden files (default: bundled)")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("explain", help="show anchor and witnesses of one check")
    e.add_argument("check")
    e.add_argument("--catalog", type=Path)
    e.set_defaults(func=cmd_explain)

    pr = sub.add_parser("prop52", help="run the non-congruence pipeline")
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_prop52)

    h = sub.add_parser("hfs", help="Hecke-Farey symbol files")
    h.add_argument("action", choices=("validate", "invariants", "generators"))
    h.add_argument("file", help="path, or - for stdin")
    h.add_argument("--json", action="store_true")
    h.set_defaults(func=cmd_hfs)

    f = sub.add_parser("fp", help="coset enumeration in <x, y | x^2, y^q>")
    f.add_argument("action", choices=("index", "low-index"))
    f.add_argument("--subgroup-words", metavar="FILE", help="one word per line")
    f.add_argument("--alphabet", choices=("st", "xy"), default="st",
                   help="words over S,T,t (default) or x,y,X,Y")
    f.add_argument("--max", type=int, default=5)
    f.add_argument("--q", type=int, default=5)
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_fp)

    qp = sub.add_parser("quotient", help="finite quotients of G_q")
    qp.add_argument("action", choices=("order",))
    qp.add_argument("--modulus", required=True)
    qp.add_argument("--q", type=int, default=5)
    qp.add_argument("--json", action="store_true")
    qp.set_defaults(func=cmd_quotient)

    d = sub.add_parser("decompose", help="write a matrix as a word in S, T, t")
    d.add_argument("--matrix", required=True, help="literal [[a,b],[c,d]]")
    d.add_argument("--q", type=int, default=5)
    d.set_defaults(func=cmd_decompose)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
