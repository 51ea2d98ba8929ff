"""Locally bipartitioned trees and their associated links.

A bipartitioned tree carries, at each vertex, an unordered split of its
incident edges into two classes; its associated link takes one Hopf link
per vertex and connect-sums along tree edges, matching partition classes
to Hopf components.  The equivariant refinement adds an involution rho
with a single fixed vertex and vertex weights A / B+ / B- / C subject to:

1. rho fixes exactly one vertex;
2. weight-A vertices move, their partners are weight A, and rho carries
   the partition of one onto the partition of the other (either way);
3. weight B+/B- vertices are fixed and rho swaps their two classes;
4. weight-C vertices are fixed and rho preserves each class.

The associated strongly invertible link realizes the fixed vertex's Hopf
link by a symmetric model matching its weight and mirrors everything else
across the axis.
"""

from __future__ import annotations

from collections import defaultdict, deque

from .linkdiag import (
    Crossing,
    DiagramError,
    LinkDiagram,
    splice_edges,
    splice_edges_tail,
)
from .symdiag import (
    AxisEvent,
    SymmetricDiagram,
    SymmetryError,
    require_valid,
)

WEIGHT_A = "A"
WEIGHT_B_PLUS = "B+"
WEIGHT_B_MINUS = "B-"
WEIGHT_C = "C"
FIXED_WEIGHTS = (WEIGHT_B_PLUS, WEIGHT_B_MINUS, WEIGHT_C)


class TreeError(Exception):
    pass


def _norm_edge(e):
    u, v = e
    return (u, v) if u <= v else (v, u)


class BipartitionedTree:
    """Finite tree with a 2-class split of each vertex's incident edges.

    ``pi[v]`` holds one class of the split (labelled P); the other is the
    complement of the incident set.  The labelling is not intrinsic.
    """

    def __init__(self, vertices, edges, pi):
        self.vertices = tuple(sorted(vertices))
        self.edges = tuple(sorted(_norm_edge(e) for e in edges))
        self.pi = {v: frozenset(_norm_edge(e) for e in pi.get(v, ())) for v in self.vertices}

    def incident(self, v):
        return frozenset(e for e in self.edges if v in e)

    def p_class(self, v):
        return self.pi[v]

    def q_class(self, v):
        return self.incident(v) - self.pi[v]

    def class_of(self, v, e):
        """'P' or 'Q' for an incident edge."""
        e = _norm_edge(e)
        if e not in self.incident(v):
            raise TreeError("edge %r is not incident to %r" % (e, v))
        return "P" if e in self.pi[v] else "Q"

    def validate(self):
        errors = []
        if len(set(self.vertices)) != len(self.vertices) or not self.vertices:
            errors.append("empty or duplicated vertex set")
            return errors
        vs = set(self.vertices)
        for e in self.edges:
            if e[0] == e[1] or e[0] not in vs or e[1] not in vs:
                errors.append("bad edge %r" % (e,))
        if len(set(self.edges)) != len(self.edges):
            errors.append("duplicate edges")
        if errors:
            return errors
        if len(self.edges) != len(self.vertices) - 1:
            errors.append("edge count %d != |V|-1" % len(self.edges))
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                errors.append("cycle through edge %r" % ((u, v),))
            parent[ru] = rv
        if len({find(v) for v in self.vertices}) != 1:
            errors.append("graph is not connected")
        for v in self.vertices:
            if not self.pi[v] <= self.incident(v):
                errors.append("partition at %r uses non-incident edges" % v)
        return errors


class EquivariantTree:
    def __init__(self, base, rho, weights):
        self.base = base
        self.rho = dict(rho)
        self.weights = dict(weights)

    def rho_edge(self, e):
        return _norm_edge((self.rho[e[0]], self.rho[e[1]]))

    def rho_class(self, v, which):
        cls = self.base.p_class(v) if which == "P" else self.base.q_class(v)
        return frozenset(self.rho_edge(e) for e in cls)

    def fixed_vertices(self):
        return [v for v in self.base.vertices if self.rho.get(v) == v]

    def validate(self):
        errors = list(self.base.validate())
        if errors:
            return errors
        vs = set(self.base.vertices)
        if set(self.rho) != vs or any(self.rho[self.rho[v]] != v for v in vs):
            errors.append("rho is not an involution of the vertex set")
            return errors
        edge_set = set(self.base.edges)
        for e in self.base.edges:
            if self.rho_edge(e) not in edge_set:
                errors.append("rho does not preserve edge %r" % (e,))
        if errors:
            return errors
        fixed = self.fixed_vertices()
        if len(fixed) != 1:
            errors.append(
                "condition 1 violated: rho fixes %d vertices, not 1" % len(fixed)
            )
        if set(self.weights) != vs:
            errors.append("weights missing for some vertices")
            return errors
        for v in sorted(vs):
            w = self.weights[v]
            if w == WEIGHT_A:
                if self.rho[v] == v:
                    errors.append(
                        "condition 2 violated at %r: weight A but rho-fixed" % v
                    )
                    continue
                if self.weights[self.rho[v]] != WEIGHT_A:
                    errors.append(
                        "condition 2 violated at %r: partner weight is not A" % v
                    )
                img = self.rho_class(v, "P")
                u = self.rho[v]
                if img not in (self.base.p_class(u), self.base.q_class(u)):
                    errors.append(
                        "condition 2 violated at %r: rho(P) matches neither class" % v
                    )
            elif w in (WEIGHT_B_PLUS, WEIGHT_B_MINUS):
                if self.rho[v] != v:
                    errors.append(
                        "condition 3 violated at %r: weight %s on a moved vertex"
                        % (v, w)
                    )
                elif self.rho_class(v, "P") != self.base.q_class(v):
                    errors.append(
                        "condition 3 violated at %r: rho(P) != Q" % v
                    )
            elif w == WEIGHT_C:
                if self.rho[v] != v:
                    errors.append(
                        "condition 4 violated at %r: weight C on a moved vertex" % v
                    )
                elif self.rho_class(v, "P") != self.base.p_class(v):
                    errors.append(
                        "condition 4 violated at %r: rho(P) != P" % v
                    )
            else:
                errors.append("unknown weight %r at %r" % (w, v))
        return errors


def require_valid_tree(et):
    errors = et.validate()
    if errors:
        raise TreeError("; ".join(errors))


def tree_type(et):
    require_valid_tree(et)
    (fixed,) = et.fixed_vertices()
    return et.weights[fixed]


def prune_to_size(et, k):
    """Remove rho-paired weight-A leaf pairs until k vertices remain."""
    require_valid_tree(et)
    n = len(et.base.vertices)
    if k % 2 == 0 or not 1 <= k <= n:
        raise TreeError("target size %r must be odd and within 1..%d" % (k, n))
    omega = tree_type(et)
    cur = et
    while len(cur.base.vertices) > k:
        degree = defaultdict(int)
        for u, v in cur.base.edges:
            degree[u] += 1
            degree[v] += 1
        leaves = sorted(
            v for v in cur.base.vertices
            if degree[v] <= 1 and cur.weights[v] == WEIGHT_A
            and cur.rho[v] != v and degree[cur.rho[v]] <= 1
        )
        if not leaves:
            raise TreeError(
                "stuck: no removable rho-paired leaf pair in %r"
                % (cur.base.vertices,)
            )
        v = leaves[0]
        u = cur.rho[v]
        drop = {v, u}
        new_vertices = [x for x in cur.base.vertices if x not in drop]
        new_edges = [e for e in cur.base.edges if not (set(e) & drop)]
        new_pi = {
            x: frozenset(e for e in cur.base.pi[x] if not (set(e) & drop))
            for x in new_vertices
        }
        new_rho = {x: cur.rho[x] for x in new_vertices}
        new_w = {x: cur.weights[x] for x in new_vertices}
        cur = EquivariantTree(
            BipartitionedTree(new_vertices, new_edges, new_pi), new_rho, new_w
        )
    require_valid_tree(cur)
    if tree_type(cur) != omega:
        raise TreeError("pruning changed the tree type")  # cannot happen
    return cur


# -- Hopf link models --------------------------------------------------------

# Plain positive Hopf link: components {1, 4} and {2, 3}.
_PLAIN_HOPF = ((1, 3, 4, 2), (3, 1, 2, 4))
# Mirror (negative) Hopf.
_PLAIN_HOPF_NEG = ((2, 1, 3, 4), (4, 3, 1, 2))

# Mirrored pairs of Hopf links for moving vertices: edges 1..4 on the right
# copy, twins 5..8 = iota images on the left copy (left tuples follow the
# reflection formula for the right copy's crossing signs).
_A_MODEL = {
    1: {"right": ((1, 3, 4, 2), (3, 1, 2, 4)),
        "left": ((7, 5, 6, 8), (5, 7, 8, 6))},
    -1: {"right": ((2, 1, 3, 4), (4, 3, 1, 2)),
         "left": ((8, 7, 5, 6), (6, 5, 7, 8))},
}
_A_TWINS = {1: 5, 2: 6, 3: 7, 4: 8, 5: 1, 6: 2, 7: 3, 8: 4}

# On-axis column Hopf for weight B-: positive crossings, iota swaps the
# components; the mirror column (negative) realizes weight B+.
_B_MINUS_MODEL = {
    "crossings": ((1, 3, 4, 2), (3, 1, 2, 4)),
    "iota_edges": {1: 3, 3: 1, 2: 4, 4: 2},
    "right_edges": (1, 2),
    "events": ("B", "B"),
    "components": ((1, 4), (3, 2)),  # iota-swapped pair
}
_B_PLUS_MODEL = {
    "crossings": ((2, 1, 3, 4), (4, 3, 1, 2)),
    "iota_edges": {1: 3, 3: 1, 2: 4, 4: 2},
    "right_edges": (1, 2),
    "events": ("B", "B"),
    "components": ((1, 4), (3, 2)),
}
# Clasp of two invariant circles for weight C: crossing 1 is the right
# crossing; every edge crosses the axis through its own fixed point.
_C_MODEL = {
    "crossings": ((1, 2, 3, 4), (2, 1, 4, 3)),
    "iota_edges": {1: 1, 2: 2, 3: 3, 4: 4},
    "right_edges": (),
    "fixed_events": (1, 2, 3, 4),
    "components": ((1, 3), (2, 4)),  # each invariant
}


def _hopf_sign(signs, v):
    return 1 if signs is None else signs.get(v, 1)


class _Assembly:
    """Incremental diagram built from Hopf pieces joined by splices."""

    def __init__(self):
        self.crossings = []
        self.next_edge = 1
        self.next_crossing = 1
        self.diagram = None
        self.used_sites = set()

    def add_piece(self, tuples):
        emap = {}
        cids = []
        for slots in tuples:
            for e in slots:
                if e not in emap:
                    emap[e] = self.next_edge
                    self.next_edge += 1
        for slots in tuples:
            self.crossings.append(
                Crossing(self.next_crossing, tuple(emap[e] for e in slots))
            )
            cids.append(self.next_crossing)
            self.next_crossing += 1
        return emap, cids

    def build(self):
        self.diagram = LinkDiagram(self.crossings)
        return self.diagram

    def pick_site(self, rep_edge):
        """Edge of rep_edge's component farthest from previously used sites."""
        d = self.diagram
        cycle = d.components[d.comp_of_edge[rep_edge]]
        used_idx = [i for i, e in enumerate(cycle) if e in self.used_sites]
        if not used_idx:
            return min(cycle)
        n = len(cycle)
        best = None
        for i, e in enumerate(cycle):
            if e in self.used_sites:
                continue
            dist = min(min((i - j) % n, (j - i) % n) for j in used_idx)
            key = (-dist, e)
            if best is None or key < best:
                best = key
                best_edge = e
        if best is None:
            raise TreeError("component has no free splice site")
        return best_edge

    def splice(self, e1, e2):
        self.diagram = splice_edges(self.diagram, e1, e2)
        self.used_sites.update((e1, e2))

    def equivariant_splice(self, s1, s2, iota_e, right_crossings):
        """Mirrored pair of splices joining the components of s1 and s2.

        The involution reverses orientations, so the mirrored splice swaps
        tail ends where the primary swaps heads.  When the target edge is
        iota-invariant, both bands land on it: the primary splice must use
        its right-side end and the mirror its left-side end.
        """
        inv1 = iota_e[s1] == s1
        inv2 = iota_e[s2] == s2
        if inv1 and inv2:
            raise TreeError("cannot splice two invariant components")
        if inv1:
            s1, s2 = s2, s1
            inv2 = True
        if not inv2:
            self.diagram = splice_edges(self.diagram, s1, s2)
            self.diagram = splice_edges_tail(
                self.diagram, iota_e[s1], iota_e[s2]
            )
        else:
            head_cid = self.diagram.edge_ends[s2][1][0]
            if head_cid in right_crossings:
                self.diagram = splice_edges(self.diagram, s1, s2)
                self.diagram = splice_edges_tail(self.diagram, iota_e[s1], s2)
            else:
                self.diagram = splice_edges_tail(self.diagram, s2, s1)
                self.diagram = splice_edges(self.diagram, iota_e[s1], s2)
        self.used_sites.update((s1, s2, iota_e[s1], iota_e[s2]))


def associated_link(bt, signs=None):
    """One Hopf link per vertex, connect-summed along the tree edges.

    ``signs`` optionally maps vertices to +1/-1 Hopf handedness (default
    positive).  Splice sites follow a fixed farthest-from-used rule so the
    output diagram is canonical.
    """
    errors = bt.validate()
    if errors:
        raise TreeError("; ".join(errors))
    asm = _Assembly()
    comp_rep = {}
    for v in bt.vertices:
        model = _PLAIN_HOPF if _hopf_sign(signs, v) > 0 else _PLAIN_HOPF_NEG
        emap, _ = asm.add_piece(model)
        comp_rep[(v, "P")] = emap[1]
        comp_rep[(v, "Q")] = emap[2]
    asm.build()
    for e in bt.edges:
        u, v = e
        hu = comp_rep[(u, bt.class_of(u, e))]
        hv = comp_rep[(v, bt.class_of(v, e))]
        s1 = asm.pick_site(hu)
        s2 = asm.pick_site(hv)
        asm.splice(s1, s2)
    d = asm.diagram
    expected = len(bt.vertices) + 1
    if d.n_components != expected:
        raise TreeError(
            "associated link has %d components, expected %d"
            % (d.n_components, expected)
        )
    return d


def associated_si_link(et, signs=None):
    """Associated link with the symmetric structure induced by the weights.

    The fixed vertex's Hopf link uses the on-axis B+/B- column or the
    invariant-circle clasp for C; every moving vertex contributes a right
    Hopf link and its mirror, and all connect sums are performed in
    mirrored pairs.  Hopf handedness at moving vertices defaults to
    positive on the right-hand representative; the symmetric models fix
    the fixed vertex's handedness.
    """
    require_valid_tree(et)
    (fixed,) = et.fixed_vertices()
    omega = et.weights[fixed]

    # Split the moving vertices into right/left by rho-paired branches.
    side = {fixed: "axis"}
    children = defaultdict(list)
    order = [fixed]
    parent = {fixed: None}
    queue = deque([fixed])
    adjacency = defaultdict(set)
    for u, v in et.base.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    while queue:
        x = queue.popleft()
        for y in sorted(adjacency[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
                queue.append(y)
    for y in order[1:]:
        if parent[y] == fixed:
            if et.rho[y] in side:
                side[y] = "left" if side[et.rho[y]] == "right" else "right"
            else:
                side[y] = "right" if min(y, et.rho[y]) == y else "left"
        else:
            side[y] = side[parent[y]]

    asm = _Assembly()
    iota_e = {}
    iota_c = {}
    right_crossings = set()
    right_edges = set()
    axis = []
    comp_rep = {}

    if omega == WEIGHT_C:
        model = _C_MODEL
        emap, cids = asm.add_piece(model["crossings"])
        for a, b in model["iota_edges"].items():
            iota_e[emap[a]] = emap[b]
        iota_c[cids[0]] = cids[1]
        iota_c[cids[1]] = cids[0]
        right_crossings.add(cids[0])
        for e in model["fixed_events"]:
            axis.append(AxisEvent("fixed", emap[e]))
        comp_rep[(fixed, "P")] = emap[model["components"][0][0]]
        comp_rep[(fixed, "Q")] = emap[model["components"][1][0]]
    else:
        model = _B_PLUS_MODEL if omega == WEIGHT_B_PLUS else _B_MINUS_MODEL
        emap, cids = asm.add_piece(model["crossings"])
        for a, b in model["iota_edges"].items():
            iota_e[emap[a]] = emap[b]
        for cid in cids:
            iota_c[cid] = cid
            axis.append(AxisEvent("crossing", cid, "B"))
        for e in model["right_edges"]:
            right_edges.add(emap[e])
        comp_rep[(fixed, "P")] = emap[model["components"][0][0]]
        comp_rep[(fixed, "Q")] = emap[model["components"][1][0]]

    # Moving vertices: right copies and mirrored left copies.
    for v in order[1:]:
        if side[v] != "right":
            continue
        u = et.rho[v]
        sgn = _hopf_sign(signs, v)
        model = _A_MODEL[1 if sgn > 0 else -1]
        emap, cids = asm.add_piece(model["right"] + model["left"])
        for a, b in _A_TWINS.items():
            iota_e[emap[a]] = emap[b]
        iota_c[cids[0]] = cids[2]
        iota_c[cids[2]] = cids[0]
        iota_c[cids[1]] = cids[3]
        iota_c[cids[3]] = cids[1]
        right_crossings.update((cids[0], cids[1]))
        right_edges.update(emap[x] for x in (1, 2, 3, 4))
        comp_rep[(v, "P")] = emap[1]
        comp_rep[(v, "Q")] = emap[2]
        # Transport the labelling to the mirror vertex: rho carries the
        # class P_v onto one of the classes at rho(v).
        img = et.rho_class(v, "P")
        if img == et.base.p_class(u):
            comp_rep[(u, "P")] = emap[_A_TWINS[1]]
            comp_rep[(u, "Q")] = emap[_A_TWINS[2]]
        else:
            comp_rep[(u, "P")] = emap[_A_TWINS[2]]
            comp_rep[(u, "Q")] = emap[_A_TWINS[1]]

    asm.build()

    # Connect sums in mirrored pairs, walking tree edges outward from the
    # fixed vertex in breadth-first order.  The mirror splice swaps tail
    # ends because the involution reverses strand orientations.
    done = set()
    order_index = {v: i for i, v in enumerate(order)}
    tree_edges = sorted(
        et.base.edges,
        key=lambda e: (max(order_index[e[0]], order_index[e[1]]), e),
    )
    for e in tree_edges:
        if e in done:
            continue
        mirror_e = et.rho_edge(e)
        if mirror_e == e:
            raise TreeError("rho inverts a tree edge; invalid tree")
        done.add(e)
        done.add(mirror_e)
        u, v = e
        hu = comp_rep[(u, et.base.class_of(u, e))]
        hv = comp_rep[(v, et.base.class_of(v, e))]
        s1 = asm.pick_site(hu)
        s2 = asm.pick_site(hv)
        asm.equivariant_splice(s1, s2, iota_e, right_crossings)

    sd = SymmetricDiagram(
        asm.diagram, iota_c, iota_e, axis, right_crossings, right_edges
    )
    require_valid(sd)
    expected = len(et.base.vertices) + 1
    if sd.base.n_components != expected:
        raise TreeError(
            "associated link has %d components, expected %d"
            % (sd.base.n_components, expected)
        )
    return sd


# -- text format and DOT ------------------------------------------------------

def parse_tree(text):
    """Parse the tree file format.

    Sections: ``vertices:``, ``edges:`` (u-v pairs), optional ``rho:``
    (a:b pairs), optional ``weights:`` (v:w), and ``P:`` entries
    ``v=u1-v1,u2-v2`` listing one partition class per vertex.
    """
    vertices = []
    edges = []
    rho = {}
    weights = {}
    pi = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        rest = rest.strip()
        if key == "vertices":
            vertices = [int(x) for x in rest.replace(",", " ").split()]
        elif key == "edges":
            for chunk in rest.replace(",", " ").split():
                u, _, v = chunk.partition("-")
                edges.append((int(u), int(v)))
        elif key == "rho":
            for chunk in rest.replace(",", " ").split():
                a, _, b = chunk.partition(":")
                rho[int(a)] = int(b)
                rho[int(b)] = int(a)
        elif key == "weights":
            for chunk in rest.replace(",", " ").split():
                v, _, w = chunk.partition(":")
                weights[int(v)] = w
        elif key == "p":
            for chunk in rest.split():
                v, _, lst = chunk.partition("=")
                es = []
                if lst:
                    for pair in lst.split(","):
                        a, _, b = pair.partition("-")
                        es.append((int(a), int(b)))
                pi[int(v)] = es
        else:
            raise TreeError("unknown section %r (line %d)" % (key, lineno))
    bt = BipartitionedTree(vertices, edges, pi)
    if rho or weights:
        return EquivariantTree(bt, rho, weights)
    return bt


def format_tree(tree):
    et = tree if isinstance(tree, EquivariantTree) else None
    bt = et.base if et else tree
    lines = ["vertices: " + " ".join(str(v) for v in bt.vertices)]
    lines.append("edges: " + " ".join("%d-%d" % e for e in bt.edges))
    if et:
        done = set()
        pairs = []
        for v in bt.vertices:
            if v in done:
                continue
            done.update((v, et.rho[v]))
            pairs.append("%d:%d" % (v, et.rho[v]))
        lines.append("rho: " + " ".join(pairs))
        lines.append(
            "weights: " + " ".join("%d:%s" % (v, et.weights[v]) for v in bt.vertices)
        )
    lines.append(
        "P: "
        + " ".join(
            "%d=%s" % (v, ",".join("%d-%d" % e for e in sorted(bt.pi[v])))
            for v in bt.vertices
        )
    )
    return "\n".join(lines) + "\n"


def tree_to_dot(tree):
    """DOT export; edges coloured by their class at the lower endpoint and
    the fixed vertex labelled with its weight."""
    et = tree if isinstance(tree, EquivariantTree) else None
    bt = et.base if et else tree
    lines = ["graph tree {"]
    for v in bt.vertices:
        label = str(v)
        shape = "circle"
        if et:
            w = et.weights[v]
            if v == et.rho.get(v):
                label = "%d [%s]" % (v, w)
                shape = "doublecircle"
        lines.append('  v%d [label="%s", shape=%s];' % (v, label, shape))
    for e in bt.edges:
        u, v = e
        colour = "blue" if bt.class_of(u, e) == "P" else "red"
        lines.append(
            '  v%d -- v%d [color=%s, label="%s%s"];'
            % (u, v, colour, bt.class_of(u, e), bt.class_of(v, e))
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
