"""Scratch: freeze the corpus files."""

from itertools import combinations

from eqslice.linkdiag import (
    MapBuilder, format_pd, is_planar, DiagramError, parse_pd,
)
from eqslice.invariants import jones, goeritz_split, try_unknot
from eqslice.laurent import LaurentPolynomial, format_jones
from eqslice.symdiag import (
    AxisEvent, SymmetricDiagram, validate_symmetric, classify_move,
    quotient, apply_move, Move, format_sym, FoldError, SymmetryError,
    parse_sym, mirror_symmetric,
)

FIG8_JONES = LaurentPolynomial({4: 1, 2: -1, 0: 1, -2: -1, -4: 1})
T25_L = LaurentPolynomial({-14: -1, -12: 1, -10: -1, -8: 1, -4: 1})

FIG8_TAU = """\
base: PD[X(5,8,2,1), X(7,6,1,2), X(6,3,4,5), X(8,4,3,7)]
iota_crossings: 1:1 2:2 4:3
iota_edges: 2:1 3:3 4:4 8:5 7:6
axis: fixed 4, fixed 3, crossing 2 B, crossing 1 B
"""


def check_fig8_tau():
    sd = parse_sym(FIG8_TAU)
    assert not validate_symmetric(sd)
    assert jones(sd.base) == FIG8_JONES
    q1, q2 = quotient(sd, "h1"), quotient(sd, "h2")
    print("fig8_tau h1:", format_jones(jones(q1)), goeritz_split(q1))
    print("fig8_tau h2:", try_unknot(q2))
    assert jones(q1) == T25_L
    for ev in sd.crossing_events():
        print("  classify", ev.ref, classify_move(sd, ev.ref))
    m = mirror_symmetric(sd)
    print("mirror file:")
    print(format_sym(m))
    mq1 = quotient(m, "h1")
    print("mirror h1:", format_jones(jones(mq1)))
    assert jones(mq1) == T25_L.substituted_inverse()
    for ev in m.crossing_events():
        print("  classify", ev.ref, classify_move(m, ev.ref))


def search_other_inversion():
    """Valid symmetric fig-8 diagrams whose quotient pair differs."""
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

    seen_signatures = set()
    for fixed_ports in combinations(RIGHT_PORTS, 2):
        remaining = [p for p in RIGHT_PORTS if p not in fixed_ports]
        for matching in perfect_matchings(remaining):
            for over_c1 in (0, 1):
                for over_c2 in (0, 1):
                    for over_r in (0, 1):
                        mb = MapBuilder()
                        mb.node("c1", over_c1)
                        mb.node("c2", over_c2)
                        mb.node("r", over_r)
                        mb.node("l", over_r)
                        try:
                            for p in fixed_ports:
                                mb.join(mb.port(*p), mb.port(*mirror_port(p)))
                            for p, q in matching:
                                mb.join(mb.port(*p), mb.port(*q))
                                mb.join(mb.port(*mirror_port(p)),
                                        mb.port(*mirror_port(q)))
                            d = mb.build()
                        except DiagramError:
                            continue
                        if d.n_components != 1 or not is_planar(d):
                            continue
                        if jones(d) != FIG8_JONES:
                            continue
                        pe, nc = mb.port_edge, mb.node_crossing
                        iota_c = {nc["c1"]: nc["c1"], nc["c2"]: nc["c2"],
                                  nc["r"]: nc["l"], nc["l"]: nc["r"]}
                        iota_e = {e: pe[mirror_port(k)] for k, e in pe.items()}
                        rights_c = {nc["r"]}
                        right_edges = {pe[p] for p, q in matching}
                        fe = [pe[p] for p in fixed_ports]
                        order = (AxisEvent("fixed", fe[0]),
                                 AxisEvent("fixed", fe[1]),
                                 AxisEvent("crossing", nc["c1"], "B"),
                                 AxisEvent("crossing", nc["c2"], "B"))
                        sd = SymmetricDiagram(d, iota_c, iota_e, order,
                                              rights_c, right_edges)
                        if validate_symmetric(sd):
                            continue
                        try:
                            q1, q2 = quotient(sd, "h1"), quotient(sd, "h2")
                            v1, v2 = jones(q1), jones(q2)
                        except (FoldError, SymmetryError, DiagramError):
                            continue
                        sig = tuple(sorted([str(sorted(v1.coeffs.items())),
                                            str(sorted(v2.coeffs.items()))]))
                        if sig in seen_signatures:
                            continue
                        seen_signatures.add(sig)
                        print("-" * 50)
                        print("quotient pair:",
                              format_jones(v1), "|", format_jones(v2))
                        print(format_sym(sd))


def check_clasp():
    # on-axis kink: one crossing, both loops iota-invariant
    text = """\
base: PD[X(1,1,2,2)]
iota_crossings: 1:1
iota_edges: 1:1 2:2
axis: fixed 1, crossing 1 C, fixed 2
"""
    sd = parse_sym(text)
    errs = validate_symmetric(sd)
    print("clasp validate:", errs)
    if not errs:
        print("classify:", classify_move(sd, 1))
        nd = apply_move(sd, Move(1, "C"))
        print("after C-move validate:", validate_symmetric(nd))
    # try the other kink tuple as well
    for pd in ("PD[X(2,2,1,1)]", "PD[X(1,2,2,1)]", "PD[X(2,1,1,2)]"):
        try:
            sd2 = SymmetricDiagram(parse_pd(pd), {1: 1}, {1: 1, 2: 2},
                                   (AxisEvent("fixed", 1),
                                    AxisEvent("crossing", 1, "C"),
                                    AxisEvent("fixed", 2)))
            errs2 = validate_symmetric(sd2)
            print(pd, "->", errs2 if errs2 else classify_move(sd2, 1))
        except Exception as exc:
            print(pd, "EXC", exc)


def check_unknot_std():
    text = """\
base: PD[O]
iota_crossings:
iota_edges:
axis: fixed loop, fixed loop
"""
    sd = parse_sym(text)
    print("unknot_std validate:", validate_symmetric(sd))
    print("unknot_std q1:", quotient(sd, "h1").n_components,
          quotient(sd, "h1").n_crossings)


if __name__ == "__main__":
    check_fig8_tau()
    check_clasp()
    check_unknot_std()
    search_other_inversion()
