"""Symmetric plumbing trees of 2-spheres and ambient 4-manifold descriptors.

A plumbing tree records spheres with integer framings and plumbing points
(the tree edges, each joining two spheres) typed A / B+ / B- / C, together
with an involution on the spheres.  "Simple symmetric" means the induced
involution on points fixes exactly one point, whose type is B+/B-/C; all
other points are type A and pair up.

Ambient 4-manifolds appear only as symbolic descriptors: named manifold,
involution tag, fixed-surface list, and a quotient tag consumed by the
obstruction pipeline.  No smooth topology is modelled.
"""

from __future__ import annotations

from collections import defaultdict

from .eqtree import (
    BipartitionedTree,
    EquivariantTree,
    TreeError,
    WEIGHT_A,
    WEIGHT_B_MINUS,
    WEIGHT_B_PLUS,
    WEIGHT_C,
    FIXED_WEIGHTS,
)


class PlumbingError(Exception):
    pass


class AmbientDescriptor:
    """Symbolic 4-manifold-with-involution record."""

    def __init__(self, tag, manifold, involution, fixed_surfaces,
                 quotient_tag, verified=True, notes=""):
        self.tag = tag
        self.manifold = manifold
        self.involution = involution
        self.fixed_surfaces = tuple(fixed_surfaces)
        self.quotient_tag = quotient_tag
        self.verified = verified
        self.notes = notes

    def sphere_component(self):
        """First genus-0 fixed-surface component, or None."""
        for name, genus in self.fixed_surfaces:
            if genus == 0:
                return name
        return None

    def __repr__(self):
        return "AmbientDescriptor(%s)" % self.tag


AMBIENTS = {
    "s2xs2_tau1": AmbientDescriptor(
        "s2xs2_tau1",
        "S2xS2",
        "swap of the two factors",
        (("diagonal sphere", 0),),
        "CP2",
    ),
    "s2xs2_tau2": AmbientDescriptor(
        "s2xs2_tau2",
        "S2xS2",
        "factor swap composed with a reflection of each factor",
        (("antidiagonal sphere", 0),),
        "CP2_mirror",
        verified=False,
        notes="quotient tag per the cited mirror argument; fixed-surface "
              "metadata unverified",
    ),
    "three_s2xs2": AmbientDescriptor(
        "three_s2xs2",
        "#3(S2xS2)",
        "swap of two summands with a double reflection on the third",
        (("connect-sum sphere", 0),),
        None,
    ),
    "s4": AmbientDescriptor(
        "s4",
        "S4",
        "half-turn rotation",
        (("standard sphere", 0),),
        "S4",
    ),
}


class PlumbingTree:
    def __init__(self, framings, points, sigma, ambient=None):
        self.framings = dict(framings)        # sphere id -> int framing
        self.points = {
            pid: (min(a, b), max(a, b), t) for pid, (a, b, t) in points.items()
        }
        self.sigma = dict(sigma)
        self.ambient = ambient

    @property
    def n_spheres(self):
        return len(self.framings)

    def point_involution(self):
        """Involution on point ids induced by sigma; raises if undefined."""
        by_pair = {}
        for pid, (a, b, _t) in self.points.items():
            key = frozenset((a, b))
            if key in by_pair:
                raise PlumbingError("parallel plumbing points %r" % (key,))
            by_pair[key] = pid
        out = {}
        for pid, (a, b, _t) in self.points.items():
            image = frozenset((self.sigma[a], self.sigma[b]))
            if image not in by_pair:
                raise PlumbingError(
                    "sigma does not act on the plumbing points (point %r)" % pid
                )
            out[pid] = by_pair[image]
        return out

    def fixed_point_id(self):
        pi = self.point_involution()
        fixed = [p for p, q in pi.items() if p == q]
        if len(fixed) != 1:
            raise PlumbingError("plumbing has %d fixed points, not 1" % len(fixed))
        return fixed[0]


def validate_plumbing(pt):
    """List of violations; empty means valid."""
    errors = []
    spheres = set(pt.framings)
    if not spheres:
        return ["no spheres"]
    for pid, (a, b, t) in pt.points.items():
        if a == b or a not in spheres or b not in spheres:
            errors.append("point %r joins bad spheres" % pid)
        if t not in (WEIGHT_A,) + FIXED_WEIGHTS:
            errors.append("point %r has unknown type %r" % (pid, t))
    if errors:
        return errors
    if len(pt.points) != len(spheres) - 1:
        errors.append(
            "point count %d != n_spheres - 1" % len(pt.points)
        )
    parent = {s: s for s in spheres}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pid, (a, b, _t) in pt.points.items():
        ra, rb = find(a), find(b)
        if ra == rb:
            errors.append("cycle through point %r" % pid)
        parent[ra] = rb
    if len({find(s) for s in spheres}) != 1:
        errors.append("sphere graph is not connected")
    if errors:
        return errors

    if set(pt.sigma) != spheres or any(
        pt.sigma[pt.sigma[s]] != s for s in spheres
    ):
        errors.append("sigma is not an involution of the sphere set")
        return errors
    for s in spheres:
        if pt.framings[s] != pt.framings[pt.sigma[s]]:
            errors.append("framing of sphere %r differs from its image" % s)

    try:
        pi = pt.point_involution()
    except PlumbingError as exc:
        errors.append(str(exc))
        return errors
    fixed = sorted(p for p, q in pi.items() if p == q)
    if len(fixed) != 1:
        errors.append(
            "simple symmetric plumbing needs exactly 1 fixed point, found %d"
            % len(fixed)
        )
        return errors
    fp = fixed[0]
    a, b, t = pt.points[fp]
    if t not in FIXED_WEIGHTS:
        errors.append("fixed point %r must be typed B+/B-/C, not %s" % (fp, t))
    if t in (WEIGHT_B_PLUS, WEIGHT_B_MINUS) and pt.sigma[a] != b:
        errors.append(
            "type %s fixed point %r must swap its two spheres" % (t, fp)
        )
    if t == WEIGHT_C and (pt.sigma[a] != a or pt.sigma[b] != b):
        errors.append("type C fixed point %r must fix both spheres" % fp)
    for pid, (x, y, ty) in pt.points.items():
        if pid != fp and ty != WEIGHT_A:
            errors.append("moving point %r must be type A, is %s" % (pid, ty))
        if pid != fp and pi[pid] == pid:
            errors.append("point %r is also fixed; plumbing is not simple" % pid)
    if pt.n_spheres % 2:
        errors.append("sphere count %d is odd" % pt.n_spheres)
    return errors


def require_valid_plumbing(pt):
    errors = validate_plumbing(pt)
    if errors:
        raise PlumbingError("; ".join(errors))


def plumbing_type(pt):
    require_valid_plumbing(pt)
    return pt.points[pt.fixed_point_id()][2]


def derive_embedded_tree(pt):
    """Equivariant tree with one vertex per plumbing point, plus its
    embedding map.

    Vertices are point ids; each moving point attaches to the next point
    on the route toward the fixed one, the connecting tree edge running
    along their shared sphere.  Bipartitions assign each tree edge to the
    local sheet it runs along, so the partition classes at a vertex are
    exactly the two spheres meeting there.  Returns (tree, embedding) with
    embedding a bijection point-vertex -> point id (the identity).
    """
    require_valid_plumbing(pt)
    fp = pt.fixed_point_id()
    pi = pt.point_involution()

    # Distance of each sphere from the fixed point's pair.
    adj = defaultdict(list)
    for pid, (a, b, _t) in pt.points.items():
        adj[a].append((b, pid))
        adj[b].append((a, pid))
    fa, fb, _ = pt.points[fp]
    dist = {fa: 0, fb: 0}
    frontier = [fa, fb]
    while frontier:
        nxt = []
        for s in frontier:
            for s2, _pid in adj[s]:
                if s2 not in dist:
                    dist[s2] = dist[s] + 1
                    nxt.append(s2)
        frontier = nxt

    def toward_fixed(pid):
        a, b, _t = pt.points[pid]
        return a if dist[a] < dist[b] else b

    def parent_point(pid):
        s = toward_fixed(pid)
        if pid == fp:
            return None
        # the next point from s on the route toward the fixed point
        best = None
        for s2, qid in adj[s]:
            if qid == pid:
                continue
            if dist[s2] < dist[s] or (qid == fp and dist[s] == 0):
                best = qid
        if best is None and s in (fa, fb):
            best = fp
        if best is None:
            raise PlumbingError("no route from point %r to the fixed point" % pid)
        return best

    vertices = sorted(pt.points)
    edges = []
    along = {}
    for pid in vertices:
        if pid == fp:
            continue
        q = parent_point(pid)
        e = (min(pid, q), max(pid, q))
        edges.append(e)
        shared = set(pt.points[pid][:2]) & set(pt.points[q][:2])
        if len(shared) != 1:
            raise PlumbingError(
                "points %r and %r share %d spheres" % (pid, q, len(shared))
            )
        along[e] = shared.pop()

    pi_classes = {}
    for pid in vertices:
        a, b, _t = pt.points[pid]
        incident = [e for e in edges if pid in e]
        pi_classes[pid] = [e for e in incident if along[e] == a]

    weights = {pid: WEIGHT_A for pid in vertices}
    weights[fp] = pt.points[fp][2]
    et = EquivariantTree(
        BipartitionedTree(vertices, edges, pi_classes), pi, weights
    )
    tree_errors = et.validate()
    if tree_errors:
        raise PlumbingError(
            "derived tree is invalid: %s" % "; ".join(tree_errors)
        )
    embedding = {pid: pid for pid in vertices}
    return et, embedding


class ImmersedSurfaceBudget:
    """Available self-intersections of a symmetric immersed surface."""

    def __init__(self, n_type_a, omega):
        if n_type_a < 0:
            raise ValueError("negative type-A count")
        if omega is not None and omega not in FIXED_WEIGHTS:
            raise ValueError("omega must be B+/B-/C or None")
        self.n_type_a = n_type_a
        self.omega = omega

    def __repr__(self):
        return "ImmersedSurfaceBudget(A-pairs=%d, omega=%s)" % (
            self.n_type_a,
            self.omega,
        )


def capacity_check(budget, et):
    """'ok' when the tree fits into a surface with the given intersections.

    The fixed vertex occupies the single non-A intersection and the moving
    vertices pair up on type-A intersections, so at most
    2 * n_type_a + 1 vertices embed.
    """
    from .eqtree import tree_type, require_valid_tree

    require_valid_tree(et)
    omega = tree_type(et)
    if budget.omega != omega:
        return "omega mismatch: budget has %s, tree has %s" % (
            budget.omega,
            omega,
        )
    n_vertices = len(et.base.vertices)
    limit = 2 * budget.n_type_a + 1
    if n_vertices > limit:
        return "insufficient: %d vertices > capacity %d" % (n_vertices, limit)
    return "ok"


# -- builtins ------------------------------------------------------------

def builtin(name, n=None):
    """Builtin plumbing descriptors for the shipped ambient manifolds."""
    if name == "s2xs2_tau1":
        return PlumbingTree(
            {1: 0, 2: 0},
            {1: (1, 2, WEIGHT_B_PLUS)},
            {1: 2, 2: 1},
            AMBIENTS["s2xs2_tau1"],
        )
    if name == "s2xs2_tau2":
        return PlumbingTree(
            {1: 0, 2: 0},
            {1: (1, 2, WEIGHT_B_MINUS)},
            {1: 2, 2: 1},
            AMBIENTS["s2xs2_tau2"],
        )
    if name == "three_s2xs2":
        if n is None or n < 1:
            raise PlumbingError(
                "three_s2xs2 needs n >= 1 (n=0 duplicates the s2xs2 builtins)"
            )
        # Spheres 1, 2 carry the fixed C point and are each
        # sigma-invariant, so the two sigma-paired chains of n spheres
        # both hang off sphere 1.  Right chain: 3, 5, 7, ...; left chain:
        # 4, 6, 8, ....
        framings = {1: 0, 2: 0}
        points = {1: (1, 2, WEIGHT_C)}
        sigma = {1: 1, 2: 2}
        prev_r, prev_l = 1, 1
        for k in range(n):
            r = 3 + 2 * k
            l = 4 + 2 * k
            framings[r] = 0
            framings[l] = 0
            sigma[r] = l
            sigma[l] = r
            points[2 + 2 * k] = (prev_r, r, WEIGHT_A)
            points[3 + 2 * k] = (prev_l, l, WEIGHT_A)
            prev_r, prev_l = r, l
        return PlumbingTree(framings, points, sigma, AMBIENTS["three_s2xs2"])
    raise PlumbingError("unknown builtin %r" % name)


def builtin_plumbings_for_ambient(tag, max_n=6):
    """Plumbing trees shipped for an ambient tag, for the certify pipeline."""
    if tag == "s2xs2_tau1":
        return [builtin("s2xs2_tau1")]
    if tag == "s2xs2_tau2":
        return [builtin("s2xs2_tau2")]
    if tag == "three_s2xs2":
        return [builtin("three_s2xs2", n) for n in range(1, max_n + 1)]
    if tag == "s4":
        return []
    raise PlumbingError("unknown ambient tag %r" % tag)


# -- text format and DOT --------------------------------------------------

def parse_plumbing(text):
    framings = {}
    points = {}
    sigma = {}
    ambient = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        rest = rest.strip()
        if key == "spheres":
            for chunk in rest.replace(",", " ").split():
                sid, _, fr = chunk.partition(":")
                framings[int(sid)] = int(fr)
        elif key == "points":
            for chunk in rest.split(","):
                parts = chunk.split()
                if len(parts) != 3:
                    raise PlumbingError(
                        "bad point %r (line %d)" % (chunk, lineno)
                    )
                pid = int(parts[0])
                a, _, b = parts[1].partition("-")
                points[pid] = (int(a), int(b), parts[2])
        elif key == "sigma":
            for chunk in rest.replace(",", " ").split():
                a, _, b = chunk.partition(":")
                sigma[int(a)] = int(b)
                sigma[int(b)] = int(a)
        elif key == "ambient":
            ambient = AMBIENTS.get(rest)
            if ambient is None:
                raise PlumbingError("unknown ambient tag %r" % rest)
        else:
            raise PlumbingError("unknown section %r (line %d)" % (key, lineno))
    return PlumbingTree(framings, points, sigma, ambient)


def format_plumbing(pt):
    lines = [
        "spheres: " + " ".join(
            "%d:%d" % (s, pt.framings[s]) for s in sorted(pt.framings)
        )
    ]
    lines.append(
        "points: " + ", ".join(
            "%d %d-%d %s" % (pid, a, b, t)
            for pid, (a, b, t) in sorted(pt.points.items())
        )
    )
    done = set()
    pairs = []
    for s in sorted(pt.sigma):
        if s in done:
            continue
        done.update((s, pt.sigma[s]))
        pairs.append("%d:%d" % (s, pt.sigma[s]))
    lines.append("sigma: " + " ".join(pairs))
    if pt.ambient:
        lines.append("ambient: " + pt.ambient.tag)
    return "\n".join(lines) + "\n"


def plumbing_to_dot(pt):
    """DOT export: spheres as nodes, plumbing points as typed edges."""
    colour = {WEIGHT_A: "gray", WEIGHT_B_PLUS: "blue",
              WEIGHT_B_MINUS: "red", WEIGHT_C: "green"}
    lines = ["graph plumbing {"]
    for s in sorted(pt.framings):
        lines.append('  s%d [label="S%d (%d)"];' % (s, s, pt.framings[s]))
    for pid, (a, b, t) in sorted(pt.points.items()):
        lines.append(
            '  s%d -- s%d [label="%s", color=%s];' % (a, b, t, colour[t])
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
