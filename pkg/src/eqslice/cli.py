"""Batch command-line front end.

Subcommands: invariants, quotient, classify, unknot-search, tree,
plumbing, certify.  Output is line-oriented text by default or json-lines
mirroring the same fields; DOT export is available for trees and
plumbings.  Exit codes: 0 success/Slice, 2 parse error or unknown tag,
3 state-sum limit exceeded, 4 fold failure (not axis-normal), 5 tree
validation failure, 10 NotSlice, 11 Inconclusive.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import invariants as inv
from . import linkdiag, symdiag, eqtree, plumbing as plumb, certify

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_LIMIT = 3
EXIT_FOLD = 4
EXIT_TREE = 5
EXIT_NOT_SLICE = 10
EXIT_INCONCLUSIVE = 11


class _Output:
    def __init__(self, fmt):
        self.fmt = fmt

    def emit(self, lines):
        for line in lines:
            if self.fmt == "json-lines":
                key, sep, value = line.partition(": ")
                if sep:
                    print(json.dumps({"key": key.strip(), "value": value}))
                else:
                    print(json.dumps({"text": line}))
            else:
                print(line)


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_diagram(path):
    """A LinkDiagram from a PD file or the base of a symmetric-diagram file."""
    text = _read(path)
    if "base:" in text:
        return symdiag.parse_sym(text).base
    entries = linkdiag.parse_pd_file(text)
    return next(iter(entries.values()))


def _load_sym(path):
    return symdiag.parse_sym(_read(path))


def cmd_invariants(args, out):
    d = _load_diagram(args.file)
    if args.perturb:
        rng = random.Random(args.seed)
        reference = inv.jones(d)
        applied = 0
        cur = d
        for _ in range(args.perturb):
            cur = _random_move(cur, rng, max_crossings=args.max_crossings)
            applied += 1
            if inv.jones(cur) != reference:
                out.emit(["perturb: FAILED after %d moves" % applied])
                return 1
        out.emit(["perturb: %d random moves, jones preserved" % applied])
        d = cur
    report = inv.invariant_report(d)
    out.emit(report.as_lines())
    return EXIT_OK


def _random_move(d, rng, max_crossings=14):
    moves = []
    for cid in linkdiag.r1_sites(d):
        moves.append(("r1-", cid))
    for pair in linkdiag.r2_sites(d):
        moves.append(("r2-", pair))
    for site in linkdiag.r3_sites(d):
        moves.append(("r3", site))
    if d.n_crossings + 1 <= max_crossings and d.occ:
        for e in sorted(d.occ):
            moves.append(("r1+", e))
    if d.n_crossings + 2 <= max_crossings:
        for cand in linkdiag.r2_add_candidates(d, max_results=20):
            moves.append(("r2+", cand))
    rng.shuffle(moves)
    for kind, payload in moves:
        try:
            if kind == "r1-":
                return linkdiag.apply_r1_remove(d, payload)
            if kind == "r2-":
                return linkdiag.apply_r2_remove(d, *payload)
            if kind == "r3":
                return linkdiag.apply_r3(d, *payload)
            if kind == "r1+":
                return rng.choice(linkdiag.r1_add_variants(d, payload))
            if kind == "r2+":
                return linkdiag.apply_r2_add(
                    d, payload[0], payload[1], x_over=rng.random() < 0.5
                )
        except linkdiag.DiagramError:
            continue
    return d


def cmd_quotient(args, out):
    sd = _load_sym(args.file)
    errors = symdiag.validate_symmetric(sd)
    if errors:
        out.emit(["invalid symmetric diagram: %s" % e for e in errors])
        return EXIT_PARSE
    q = symdiag.quotient(sd, args.half)
    pd_text = linkdiag.format_pd(q)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(pd_text + "\n")
    out.emit(["quotient: %s" % pd_text])
    report = inv.invariant_report(q)
    out.emit(report.as_lines())
    return EXIT_OK


def cmd_classify(args, out):
    sd = _load_sym(args.file)
    errors = symdiag.validate_symmetric(sd)
    if errors:
        out.emit(["invalid symmetric diagram: %s" % e for e in errors])
        return EXIT_PARSE
    for move in symdiag.available_moves(sd):
        out.emit(["site %s: %s" % (move.site, move.type)])
    return EXIT_OK


def cmd_unknot_search(args, out):
    sd = _load_sym(args.file)
    allowed = tuple(args.types.split(",")) if args.types else symdiag.MOVE_TYPES
    seq = symdiag.equivariant_unknotting_search(sd, args.max_moves, allowed)
    stats = symdiag.equivariant_unknotting_search.last_stats
    if seq is None:
        out.emit([
            "result: NotFound",
            "expanded: %d" % stats.get("expanded", 0),
            "depth: %d" % stats.get("depth", 0),
        ])
        return EXIT_INCONCLUSIVE
    counts = seq.counts()
    out.emit(
        ["result: found", "moves: %d" % len(seq), "k_total: %d" % seq.k_total]
        + ["move: %s %s" % (m.type, m.site) for m in seq.moves]
        + ["count %s: %d" % (t, counts[t]) for t in symdiag.MOVE_TYPES]
    )
    return EXIT_OK


def _load_tree(path):
    return eqtree.parse_tree(_read(path))


def _load_plumbing(spec):
    """Either ``builtin:name`` / ``builtin:name(n)`` or a descriptor file."""
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        if "(" in name:
            name, _, arg = name.partition("(")
            return plumb.builtin(name, int(arg.rstrip(")")))
        return plumb.builtin(name)
    return plumb.parse_plumbing(_read(spec))


def cmd_tree(args, out):
    if args.op == "validate":
        tree = _load_tree(args.file)
        errors = (
            tree.validate()
            if isinstance(tree, eqtree.EquivariantTree)
            else tree.validate()
        )
        if errors:
            out.emit(["invalid: %s" % e for e in errors])
            return EXIT_TREE
        out.emit(["ok"])
        return EXIT_OK
    if args.op == "assoc":
        tree = _load_tree(args.file)
        if isinstance(tree, eqtree.EquivariantTree):
            sd = eqtree.associated_si_link(tree)
            lines = [
                "# associated strongly invertible link",
                "# Hopf handedness defaults to positive at moving vertices;",
                "# the fixed vertex model follows its weight",
            ]
            text = symdiag.format_sym(sd)
            out.emit(lines + text.splitlines())
        else:
            d = eqtree.associated_link(tree)
            out.emit(["# associated link", linkdiag.format_pd(d),
                      "components: %d" % d.n_components])
        return EXIT_OK
    if args.op == "prune":
        tree = _load_tree(args.file)
        pruned = eqtree.prune_to_size(tree, args.k)
        out.emit(eqtree.format_tree(pruned).splitlines())
        return EXIT_OK
    if args.op == "derive":
        pt = _load_plumbing(args.file)
        et, embedding = plumb.derive_embedded_tree(pt)
        if args.dot:
            out.emit(eqtree.tree_to_dot(et).splitlines())
        else:
            out.emit(eqtree.format_tree(et).splitlines())
            out.emit([
                "embedding: " + " ".join(
                    "%s->%s" % (v, embedding[v]) for v in sorted(embedding)
                )
            ])
        return EXIT_OK
    raise ValueError("unknown tree op %r" % args.op)


def cmd_plumbing(args, out):
    pt = _load_plumbing(args.file)
    if args.op == "validate":
        errors = plumb.validate_plumbing(pt)
        if errors:
            out.emit(["invalid: %s" % e for e in errors])
            return EXIT_TREE
        out.emit(["ok", "type: %s" % plumb.plumbing_type(pt),
                  "spheres: %d" % pt.n_spheres])
        return EXIT_OK
    if args.op == "dot":
        out.emit(plumb.plumbing_to_dot(pt).splitlines())
        return EXIT_OK
    if args.op == "show":
        out.emit(plumb.format_plumbing(pt).splitlines())
        return EXIT_OK
    raise ValueError("unknown plumbing op %r" % args.op)


def cmd_certify(args, out):
    sd = _load_sym(args.file)
    if args.ambient not in plumb.AMBIENTS:
        out.emit(["unknown ambient tag: %s" % args.ambient])
        return EXIT_PARSE
    verdict = certify.adjudicate(
        sd, args.ambient, search_budget=args.budget,
        convention=args.convention,
    )
    out.emit(verdict.as_lines())
    if verdict.conclusion == certify.SLICE:
        return EXIT_OK
    if verdict.conclusion == certify.NOT_SLICE:
        return EXIT_NOT_SLICE
    return EXIT_INCONCLUSIVE


def build_parser():
    p = argparse.ArgumentParser(
        prog="eqslice",
        description="Strongly invertible knot diagrams, symmetric plumbing "
                    "trees, and equivariant sliceness certificates.",
    )
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("invariants", help="invariant report for a diagram file")
    sp.add_argument("file")
    sp.add_argument("--perturb", type=int, default=0,
                    help="apply N random Reidemeister rewrites first")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-crossings", type=int, default=14)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("quotient", help="quotient knot along a half-axis")
    sp.add_argument("file")
    sp.add_argument("half", choices=("h1", "h2"))
    sp.add_argument("--out", help="write the quotient PD code here")
    sp.set_defaults(func=cmd_quotient)

    sp = sub.add_parser("classify", help="classify symmetric move sites")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("unknot-search", help="equivariant unknotting search")
    sp.add_argument("file")
    sp.add_argument("--max-moves", type=int, default=2)
    sp.add_argument("--types", help="comma list from A,B+,B-,C")
    sp.set_defaults(func=cmd_unknot_search)

    sp = sub.add_parser("tree", help="bipartitioned-tree operations")
    sp.add_argument("op", choices=("validate", "assoc", "prune", "derive"))
    sp.add_argument("file", help="tree file, or plumbing spec for derive")
    sp.add_argument("--k", type=int, help="target size for prune")
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(func=cmd_tree)

    sp = sub.add_parser("plumbing", help="plumbing-tree operations")
    sp.add_argument("op", choices=("validate", "dot", "show"))
    sp.add_argument("file", help="descriptor file or builtin:name(n)")
    sp.set_defaults(func=cmd_plumbing)

    sp = sub.add_parser("certify", help="sliceness adjudication")
    sp.add_argument("file")
    sp.add_argument("ambient")
    sp.add_argument("--budget", type=int, default=6)
    sp.add_argument("--convention", choices=("as-stated", "mirrored"),
                    default=certify.DEFAULT_CONVENTION)
    sp.set_defaults(func=cmd_certify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.format)
    try:
        return args.func(args, out)
    except linkdiag.ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except inv.LimitExceeded as exc:
        print("limit exceeded: %s" % exc, file=sys.stderr)
        return EXIT_LIMIT
    except symdiag.FoldError as exc:
        print("fold error: %s" % exc, file=sys.stderr)
        return EXIT_FOLD
    except (eqtree.TreeError, plumb.PlumbingError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_TREE
    except (symdiag.SymmetryError, linkdiag.DiagramError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print("io error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
