"""Scratch: find the transvergent figure-8 diagram by equivariant enumeration.

Shape: on-axis crossings c1, c2; off-axis mirror pair r/l; two fixed-point
arcs.  Enumerate equivariant gluings of the right-side ports, over/under
choices, and axis event orders; filter by: valid + planar + knot +
figure-8 Jones + quotients {T(2,5), unknot} + one-B-move unknotting.
"""

from itertools import combinations

from eqslice.linkdiag import MapBuilder, format_pd, is_planar, DiagramError
from eqslice.invariants import jones, goeritz_split, try_unknot
from eqslice.laurent import LaurentPolynomial, format_jones
from eqslice.symdiag import (
    AxisEvent, SymmetricDiagram, validate_symmetric, classify_move,
    quotient, apply_move, Move, format_sym, FoldError, SymmetryError,
)

FIG8_JONES = LaurentPolynomial({4: 1, 2: -1, 0: 1, -2: -1, -4: 1})
T25_L = LaurentPolynomial({-14: -1, -12: 1, -10: -1, -8: 1, -4: 1})
T25_R = T25_L.substituted_inverse()
ONE = LaurentPolynomial.one()

RIGHT_PORTS = [("c1", 0), ("c1", 3), ("c2", 0), ("c2", 3),
               ("r", 0), ("r", 1), ("r", 2), ("r", 3)]
PORT_MIRROR = {0: 1, 1: 0, 2: 3, 3: 2}
NODE_MIRROR = {"c1": "c1", "c2": "c2", "r": "l", "l": "r"}


def mirror_port(p):
    return (NODE_MIRROR[p[0]], PORT_MIRROR[p[1]])


def perfect_matchings(items):
    if not items:
        yield []
        return
    first = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for m in perfect_matchings(rest):
            yield [(first, items[k])] + m


def build(fixed_ports, matching, over_c1, over_c2, over_r):
    mb = MapBuilder()
    mb.node("c1", over_c1)
    mb.node("c2", over_c2)
    mb.node("r", over_r)
    mb.node("l", over_r)
    for p in fixed_ports:
        mb.join(mb.port(*p), mb.port(*mirror_port(p)))
    for p, q in matching:
        mb.join(mb.port(*p), mb.port(*q))
        mb.join(mb.port(*mirror_port(p)), mb.port(*mirror_port(q)))
    d = mb.build()
    pe = mb.port_edge
    nc = mb.node_crossing
    iota_c = {nc["c1"]: nc["c1"], nc["c2"]: nc["c2"],
              nc["r"]: nc["l"], nc["l"]: nc["r"]}
    iota_e = {}
    for (nid, p), e in pe.items():
        iota_e[e] = pe[mirror_port((nid, p))]
    rights_c = {nc["r"]}
    right_edges = set()
    for p, q in matching:
        right_edges.add(pe[p])
    fixed_edges = [pe[p] for p in fixed_ports]
    return d, nc, pe, iota_c, iota_e, rights_c, right_edges, fixed_edges


def event_orders(nc, fixed_edges):
    f1 = AxisEvent("fixed", fixed_edges[0])
    f2 = AxisEvent("fixed", fixed_edges[1])
    x1 = AxisEvent("crossing", nc["c1"], "B")
    x2 = AxisEvent("crossing", nc["c2"], "B")
    import itertools
    seen = set()
    for perm in itertools.permutations([f1, f2, x1, x2]):
        key = tuple(repr(ev) for ev in perm)
        if key not in seen:
            seen.add(key)
            yield perm


def main():
    hits = 0
    for fixed_ports in combinations(RIGHT_PORTS, 2):
        remaining = [p for p in RIGHT_PORTS if p not in fixed_ports]
        for matching in perfect_matchings(remaining):
            for over_c1 in (0, 1):
                for over_c2 in (0, 1):
                    for over_r in (0, 1):
                        try:
                            d, nc, pe, ic, ie, rc, re_, fe = build(
                                fixed_ports, matching, over_c1, over_c2, over_r)
                        except DiagramError:
                            continue
                        if d.n_components != 1 or not is_planar(d):
                            continue
                        if jones(d) != FIG8_JONES:
                            continue
                        for order in event_orders(nc, fe):
                            sd = SymmetricDiagram(d, ic, ie, order, rc, re_)
                            if validate_symmetric(sd):
                                continue
                            try:
                                q1 = quotient(sd, "h1")
                                q2 = quotient(sd, "h2")
                            except (FoldError, SymmetryError, DiagramError):
                                continue
                            try:
                                v1, v2 = jones(q1), jones(q2)
                            except DiagramError:
                                continue
                            pair = {0: None}
                            ok = (v1 in (T25_L, T25_R) and
                                  try_unknot(q2) == "ProvenUnknot" and
                                  goeritz_split(q1)[0] == 5)
                            if not ok:
                                continue
                            # one-B-move unknotting check
                            unknots = []
                            for cid in (nc["c1"], nc["c2"]):
                                t = classify_move(sd, cid)
                                nd = apply_move(sd, Move(cid, t))
                                unknots.append(
                                    (cid, t, try_unknot(nd.base)))
                            hits += 1
                            print("=" * 60)
                            print("fixed:", fixed_ports, "match:", matching,
                                  "overs:", over_c1, over_c2, over_r)
                            print("events:", [repr(e) for e in order])
                            print("pd:", format_pd(d))
                            print("h1:", format_jones(v1),
                                  "T25_L" if v1 == T25_L else "T25_R")
                            print("h2: unknot", format_jones(v2))
                            print("B moves:", unknots)
                            print(format_sym(sd))
                            if hits >= 8:
                                return
    print("total hits:", hits)


if __name__ == "__main__":
    main()
