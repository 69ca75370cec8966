"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 input outside an operation's
domain (for example r = 1/2), 4 Kauffman bracket crossing cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from functools import lru_cache

from . import jones, stabilizer
from .analysis import (BinaryExpansion, InsufficientPrecision, evaluate, fixes, fixes_interval,
                       is_in_commutator, is_in_rectangular, parse_number)
from .group import Element, generator, parse_element
from .trees import ParseError, all_pairs, parse_pair, serialize_pair

EXIT_PARSE, EXIT_DOMAIN, EXIT_CAP = 2, 3, 4

TREFOIL_TEXT = "(((.,.),(.,.)),.);(.,((.,.),(.,.)))"
FIGURE_EIGHT_TEXT = "((((.,((.,.),.)),.),.),.);((.,.),((.,(.,.)),(.,.)))"


class DomainError(ValueError):
    pass


# -- element library -----------------------------------------------------------


@lru_cache(maxsize=None)
def library() -> dict[str, Element]:
    """Named elements available as ``@name``; each is checked when first loaded."""
    lib = {f"x{n}": generator(n) for n in range(6)}
    for u, rec in stabilizer.basic_table().items():
        lib[f"g{u}"] = rec.element
    lib["trefoil"] = Element(parse_pair(TREFOIL_TEXT))
    lib["figure8"] = Element(parse_pair(FIGURE_EIGHT_TEXT))
    fp = jones.fingerprint(lib["trefoil"])
    assert (fp.components, fp.determinant, fp.coloring(3)) == (1, 3, 9)
    fp = jones.fingerprint(lib["figure8"])
    assert (fp.components, fp.determinant, fp.coloring(5)) == (1, 5, 25)
    return lib


def resolve(text: str) -> Element:
    text = text.strip()
    if text.startswith("@"):
        try:
            return library()[text[1:]]
        except KeyError:
            raise ParseError(f"unknown library element {text!r}; known: "
                             + ", ".join("@" + k for k in library()), 0) from None
    return parse_element(text)


def parse_point(text: str):
    """Rational or binary literal; finite-precision literals stay as expansions."""
    try:
        return parse_number(text)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), 0) from None


def _exact(r) -> Fraction:
    if isinstance(r, BinaryExpansion):
        raise DomainError(f"{r} has finite precision; this command needs an exact point")
    if not 0 <= r <= 1:
        raise DomainError(f"{r} is outside [0, 1]")
    return r


# -- el ------------------------------------------------------------------------


def cmd_el(args) -> None:
    if args.el_cmd == "parse":
        print(resolve(args.expr))
    elif args.el_cmd == "mul":
        result = Element.identity()
        for e in args.exprs:
            result = result * resolve(e)
        print(result)
    elif args.el_cmd == "inv":
        print(resolve(args.expr).inverse())
    elif args.el_cmd == "eval":
        print(evaluate(resolve(args.elem), _exact(parse_point(args.r))))
    elif args.el_cmd == "fixes":
        g, r = resolve(args.elem), parse_point(args.r)
        if isinstance(r, BinaryExpansion):
            lo, hi = r.interval()
            if not fixes_interval(g, lo, hi):
                raise DomainError(f"cannot decide whether {r} is fixed from its known digits")
            print("true")
        else:
            print(str(fixes(g, _exact(r))).lower())
    elif args.el_cmd == "member":
        print(str(member(resolve(args.elem), args.sub)).lower())


def member(g: Element, sub: str) -> bool:
    kind, _, arg = sub.partition(":")
    if kind == "stab":
        return fixes(g, _exact(parse_point(arg)))
    if kind == "commutator" and not arg:
        return is_in_commutator(g)
    if kind == "rect":
        try:
            a, b = (int(x) for x in arg.split(","))
        except ValueError:
            raise ParseError(f"expected rect:<a>,<b>, got {sub!r}", 0) from None
        return is_in_rectangular(g, a, b)
    raise ParseError(f"unknown subgroup {sub!r}; use stab:<r>, commutator or rect:<a>,<b>", 0)


# -- link ----------------------------------------------------------------------


def _diagram_source(args):
    if args.raw_pair is not None:
        return parse_pair(args.raw_pair)
    if args.elem is None:
        raise ParseError("give --elem or --raw-pair", 0)
    return resolve(args.elem)


def cmd_link(args) -> None:
    src = _diagram_source(args)
    if args.link_cmd == "svg":
        text = jones.render_svg(src, mirror=args.mirror)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    d = jones.to_diagram(src, mirror=args.mirror)
    if args.link_cmd == "pd":
        if d.crossings:
            print(jones.format_pd(d))
        if d.free_loops:
            print(f"# {d.free_loops} crossingless loop(s)")
    else:
        fp = jones.fingerprint(d, cap=args.bracket_cap)
        print(json.dumps({"crossings": len(d), **fp.as_dict()}))


# -- stab ----------------------------------------------------------------------


def cmd_stab(args) -> None:
    r = parse_point(args.r)
    if not isinstance(r, BinaryExpansion) and r == Fraction(1, 2):
        raise DomainError("r = 1/2: every element of Stab(1/2) produces a split link, "
                          "so no unknot element and no knot can be realized there")
    if args.target is None:
        h = stabilizer.unknot_stabilizer(r)
        target_fp = jones.UNKNOT
    else:
        g = resolve(args.target)
        h = stabilizer.alexander_element(r, g, cap=args.bracket_cap)
        target_fp = jones.fingerprint(g, cap=args.bracket_cap)
    fp = jones.fingerprint(h, cap=args.bracket_cap)
    print(h)
    print(json.dumps({"r": str(r), "leaves": h.leaves, "fixes": True,
                      "fingerprint": fp.as_dict(), "target": target_fp.as_dict(),
                      "match": fp == target_fp}))


# -- enumerate -----------------------------------------------------------------

CSV_FIELDS = ["pair", "components", "determinant"] + [f"col{p}" for p in jones.COLORING_PRIMES] + ["kauffman_f"]


def _row(p, fp: jones.Fingerprint) -> dict:
    row = {"pair": serialize_pair(p), "components": fp.components, "determinant": fp.determinant,
           "kauffman_f": str(fp.kauffman_f)}
    row.update({f"col{q}": n for q, n in fp.colorings})
    return row


def parse_query(text: str) -> dict[str, str]:
    """``components=1,determinant=3`` style filter; keys are CSV column names."""
    query = {}
    for part in text.split(","):
        key, eq, value = part.partition("=")
        key = key.strip()
        if not eq or key not in CSV_FIELDS or key == "pair":
            raise ParseError(f"bad fingerprint filter {part!r}; keys: {', '.join(CSV_FIELDS[1:])}", 0)
        query[key] = value.strip()
    return query


def cmd_enumerate(args) -> None:
    if not 1 <= args.leaves <= 8:
        raise DomainError("enumeration supports 1 to 8 leaves")
    query = parse_query(args.find) if args.find else None
    writer = csv.DictWriter(sys.stdout, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    rows = []
    for p in all_pairs(args.leaves):
        row = _row(p, jones.fingerprint(p, cap=args.bracket_cap))
        if query is None or all(str(row[k]) == v for k, v in query.items()):
            writer.writerow(row)
            rows.append(row)
            if query is not None:
                break
    if args.figure:
        plot_enumeration(rows, args.leaves, args.figure)


def plot_enumeration(rows: list[dict], leaves: int, path: str) -> None:
    """Bar chart of determinant frequencies, one bar series per component count."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    counts: dict[int, dict[int, int]] = {}
    for row in rows:
        by_det = counts.setdefault(row["components"], {})
        by_det[row["determinant"]] = by_det.get(row["determinant"], 0) + 1
    dets = sorted({d for by_det in counts.values() for d in by_det})
    fig, ax = plt.subplots(figsize=(7, 4))
    width = 0.8 / max(len(counts), 1)
    for k, comp in enumerate(sorted(counts)):
        xs = [i + k * width for i in range(len(dets))]
        ax.bar(xs, [counts[comp].get(d, 0) for d in dets], width, label=f"{comp} component(s)")
    ax.set_xticks([i + 0.4 - width / 2 for i in range(len(dets))])
    ax.set_xticklabels([str(d) for d in dets])
    ax.set_xlabel("determinant")
    ax.set_ylabel("reduced pairs")
    ax.set_title(f"Links of reduced {leaves}-leaf tree pairs")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# -- entry point ---------------------------------------------------------------


def _cap(text: str) -> int | None:
    if text.lower() in ("none", "off"):
        return None
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("cap must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thompson-links",
                                     description="Thompson's group F, Jones links and stabilizers.")
    sub = parser.add_subparsers(dest="command", required=True)

    el = sub.add_parser("el", help="element algebra")
    el_sub = el.add_subparsers(dest="el_cmd", required=True)
    p = el_sub.add_parser("parse", help="print the reduced pair")
    p.add_argument("expr")
    p = el_sub.add_parser("mul", help="left-to-right product")
    p.add_argument("exprs", nargs="+")
    p = el_sub.add_parser("inv", help="inverse")
    p.add_argument("expr")
    for name, text in (("eval", "image of a point"), ("fixes", "is the point fixed")):
        p = el_sub.add_parser(name, help=text)
        p.add_argument("--elem", required=True)
        p.add_argument("--r", required=True)
    p = el_sub.add_parser("member", help="subgroup membership")
    p.add_argument("--elem", required=True)
    p.add_argument("--sub", required=True, help="stab:<r>, commutator or rect:<a>,<b>")
    el.set_defaults(func=cmd_el)

    link = sub.add_parser("link", help="Jones link of an element")
    link_sub = link.add_subparsers(dest="link_cmd", required=True)
    for name in ("pd", "invariants", "svg"):
        p = link_sub.add_parser(name)
        p.add_argument("--elem")
        p.add_argument("--raw-pair", help="tree pair used as given, without reducing")
        p.add_argument("--mirror", action="store_true", help="flip every crossing")
        p.add_argument("--bracket-cap", type=_cap, default=jones.DEFAULT_BRACKET_CAP)
        if name == "svg":
            p.add_argument("--out", help="write here instead of stdout")
    link.set_defaults(func=cmd_link)

    stab = sub.add_parser("stab", help="stabilizer constructions")
    stab_sub = stab.add_subparsers(dest="stab_cmd", required=True)
    p = stab_sub.add_parser("construct", help="element of Stab(r) realizing a link")
    p.add_argument("--r", required=True, help="p/q, 0.bits, 0.bits(period) or 0.bits...")
    p.add_argument("--target", help="element whose link to realize (default: the unknot)")
    p.add_argument("--bracket-cap", type=_cap, default=None)
    stab.set_defaults(func=cmd_stab)

    en = sub.add_parser("enumerate", help="links of all reduced N-leaf pairs as CSV")
    en.add_argument("--leaves", type=int, required=True)
    en.add_argument("--find", help="stop at the first row matching e.g. components=1,determinant=3")
    en.add_argument("--figure", help="also save a PNG chart of the emitted rows")
    en.add_argument("--bracket-cap", type=_cap, default=jones.DEFAULT_BRACKET_CAP)
    en.set_defaults(func=cmd_enumerate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except jones.CrossingCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DomainError, InsufficientPrecision, stabilizer.RIsHalf, stabilizer.RNotInRange,
            ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
