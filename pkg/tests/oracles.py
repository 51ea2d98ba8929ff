"""Independent oracles used by the test suite.

These deliberately avoid the library's computation paths: the bracket
oracle resolves crossings recursively through the skein relation instead
of summing over all states, and the component oracle for associated links
is a plain union-find over Hopf-component handles.
"""

from eqslice.laurent import LaurentPolynomial
from eqslice.linkdiag import Crossing, LinkDiagram

DELTA = LaurentPolynomial({2: -1, -2: -1})
A_POS = LaurentPolynomial({1: 1})
A_NEG = LaurentPolynomial({-1: 1})


def _smooth(diagram, cid, which):
    """Remove one crossing, joining its edge ends per the chosen smoothing."""
    c = diagram.by_id[cid]
    s = c.slots
    pairs = ((s[0], s[1]), (s[2], s[3])) if which == "A" else ((s[1], s[2]), (s[3], s[0]))
    parent = {e: e for e in diagram.occ}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    remaining = []
    used = set()
    for other in diagram.crossings:
        if other.id == cid:
            continue
        slots = tuple(find(e) for e in other.slots)
        remaining.append(Crossing(other.id, slots))
        used.update(slots)
    touched = {find(e) for e in s}
    loops = len(touched - used)
    return LinkDiagram(remaining, diagram.free_loops + loops)


def skein_bracket(diagram):
    """Kauffman bracket via the recursive skein relation."""
    if not diagram.crossings:
        loops = diagram.free_loops
        if loops == 0:
            return LaurentPolynomial.zero()
        return DELTA ** (loops - 1)
    cid = diagram.crossings[0].id
    return (
        A_POS * skein_bracket(_smooth(diagram, cid, "A"))
        + A_NEG * skein_bracket(_smooth(diagram, cid, "B"))
    )


def union_find_component_count(n_vertices, edges, class_of):
    """Expected component count of an associated link by pure merging.

    Every vertex contributes two Hopf components; each tree edge merges
    the components named by its class at either endpoint.
    """
    parent = {}
    for v in range(n_vertices):
        parent[(v, "P")] = (v, "P")
        parent[(v, "Q")] = (v, "Q")

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    merges = 0
    for e, (u, v) in edges:
        a = find((u, class_of(u, e)))
        b = find((v, class_of(v, e)))
        if a != b:
            parent[a] = b
            merges += 1
    return 2 * n_vertices - merges
