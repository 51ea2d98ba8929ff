"""Planar link diagrams as PD-style crossing lists.

Conventions
-----------
A crossing ``X(a, b, c, d)`` lists the four incident edge ids in
counterclockwise order starting from the incoming under-strand, so the
under-strand runs a -> c.  The over-strand occupies slots 1 and 3; its
direction is recovered globally from orientation propagation.  A crossing
is positive exactly when the over-strand enters at slot 3.

Edges are positive integers, each appearing exactly twice over all crossing
slots.  Components with no crossings at all are carried as an explicit
``free_loops`` count since PD text cannot express them except as ``O``
tokens.
"""

from __future__ import annotations

import re
from collections import defaultdict


class DiagramError(Exception):
    """Structural problem with a diagram (bad edge counts, orientation, ...)."""


class ParseError(Exception):
    """Bad PD text; carries the offending position."""

    def __init__(self, message, position=None):
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)
        self.position = position


HEAD, TAIL = 0, 1


class Crossing:
    __slots__ = ("id", "slots")

    def __init__(self, cid, slots):
        self.id = cid
        self.slots = tuple(slots)
        if len(self.slots) != 4:
            raise DiagramError("crossing %r needs exactly 4 edges" % cid)

    def __eq__(self, other):
        return (
            isinstance(other, Crossing)
            and self.id == other.id
            and self.slots == other.slots
        )

    def __hash__(self):
        return hash((self.id, self.slots))

    def __repr__(self):
        return "X%d%r" % (self.id, self.slots)


class LinkDiagram:
    """Immutable-by-convention planar diagram with derived orientation data.

    Derived attributes:

    - ``edge_ends``: edge -> ((tail crossing, slot), (head crossing, slot))
    - ``components``: tuple of edge tuples in traversal order, sorted by
      smallest edge id, followed by free loops (which have no edges)
    - ``signs``: crossing id -> +1 / -1
    """

    def __init__(self, crossings, free_loops=0):
        self.crossings = tuple(sorted(crossings, key=lambda c: c.id))
        self.free_loops = int(free_loops)
        if self.free_loops < 0:
            raise DiagramError("negative free loop count")
        self.by_id = {c.id: c for c in self.crossings}
        if len(self.by_id) != len(self.crossings):
            raise DiagramError("duplicate crossing ids")
        self._derive()

    # -- construction helpers -------------------------------------------

    def _occurrences(self):
        occ = defaultdict(list)
        for c in self.crossings:
            for s, e in enumerate(c.slots):
                occ[e].append((c.id, s))
        return occ

    def _derive(self):
        occ = self._occurrences()
        for e, places in occ.items():
            if len(places) != 2:
                raise DiagramError(
                    "edge %d appears %d times, expected 2" % (e, len(places))
                )
        self.occ = dict(occ)

        # role[(cid, slot)]: HEAD if the edge points into the crossing there.
        role = {}
        over_in_at_3 = {}
        queue = []
        for c in self.crossings:
            role[(c.id, 0)] = HEAD
            role[(c.id, 2)] = TAIL
            queue.append((c.id, 0))
            queue.append((c.id, 2))

        def set_role(place, r):
            prev = role.get(place)
            if prev is not None:
                if prev != r:
                    raise DiagramError(
                        "orientation conflict at crossing %d slot %d"
                        % place
                    )
                return
            role[place] = r
            queue.append(place)
            cid, slot = place
            if slot in (1, 3):
                b = (slot == 3) == (r == HEAD)
                prev_b = over_in_at_3.get(cid)
                if prev_b is not None and prev_b != b:
                    raise DiagramError(
                        "over-strand orientation conflict at crossing %d" % cid
                    )
                over_in_at_3[cid] = b
                other = 1 if slot == 3 else 3
                set_role((cid, other), TAIL if r == HEAD else HEAD)

        def propagate():
            while queue:
                place = queue.pop()
                e = self.by_id[place[0]].slots[place[1]]
                a, b = self.occ[e]
                other = b if place == a else a
                if other == place:
                    # same (cid, slot) twice cannot happen; ids are unique
                    continue
                set_role(other, TAIL if role[place] == HEAD else HEAD)

        propagate()
        # Components never passing under get a deterministic orientation.
        while True:
            undecided = sorted(
                e for e, places in self.occ.items()
                if (places[0] not in role) and (places[1] not in role)
            )
            if not undecided:
                break
            e = undecided[0]
            place = min(self.occ[e])
            set_role(place, TAIL)
            propagate()

        self.edge_ends = {}
        for e, (a, b) in self.occ.items():
            ra, rb = role[a], role[b]
            if ra == rb:
                raise DiagramError("edge %d is not closable" % e)
            tail, head = (a, b) if ra == TAIL else (b, a)
            self.edge_ends[e] = (tail, head)

        self.signs = {}
        for c in self.crossings:
            self.signs[c.id] = 1 if over_in_at_3[c.id] else -1

        # Trace components.
        seen = set()
        comps = []
        for start in sorted(self.occ):
            if start in seen:
                continue
            cycle = []
            e = start
            while True:
                cycle.append(e)
                seen.add(e)
                cid, slot = self.edge_ends[e][1]
                nxt_slot = (slot + 2) % 4
                e = self.by_id[cid].slots[nxt_slot]
                if e == start:
                    break
                if e in seen:
                    raise DiagramError("component through edge %d does not close" % start)
            comps.append(tuple(cycle))
        comps.sort(key=lambda cyc: min(cyc))
        self.components = tuple(comps) + tuple(() for _ in range(self.free_loops))
        self.comp_of_edge = {}
        for i, cyc in enumerate(comps):
            for e in cyc:
                self.comp_of_edge[e] = i

    # -- basic queries ---------------------------------------------------

    @property
    def n_components(self):
        return len(self.components)

    @property
    def n_crossings(self):
        return len(self.crossings)

    def writhe(self):
        return sum(self.signs.values())

    def component_of_crossing(self, cid):
        c = self.by_id[cid]
        return (
            self.comp_of_edge[c.slots[0]],
            self.comp_of_edge[c.slots[1]],
        )

    def strands_at(self, cid):
        """((under-in, under-out), (over-in, over-out)) edge ids at a crossing."""
        c = self.by_id[cid]
        if self.signs[cid] > 0:
            return (c.slots[0], c.slots[2]), (c.slots[3], c.slots[1])
        return (c.slots[0], c.slots[2]), (c.slots[1], c.slots[3])

    def exact_key(self):
        return (tuple((c.id, c.slots) for c in self.crossings), self.free_loops)

    def __eq__(self, other):
        return isinstance(other, LinkDiagram) and self.exact_key() == other.exact_key()

    def __hash__(self):
        return hash(self.exact_key())

    def __repr__(self):
        return "LinkDiagram(%d crossings, %d components)" % (
            self.n_crossings,
            self.n_components,
        )

    def replace_crossings(self, new_by_id, free_loops_delta=0):
        cs = []
        for c in self.crossings:
            if c.id in new_by_id:
                repl = new_by_id[c.id]
                if repl is not None:
                    cs.append(Crossing(c.id, repl))
            else:
                cs.append(c)
        return LinkDiagram(cs, self.free_loops + free_loops_delta)


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(X\s*\(|O|PD\s*\[|\]|\)|,|\d+)", re.IGNORECASE)


def parse_pd(text):
    """Parse a single ``PD[...]`` expression into a LinkDiagram."""
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character %r" % text[pos], pos)
        tokens.append((m.group(1).replace(" ", "").upper(), m.start(1)))
        pos = m.end()

    def expect(kind, i):
        if i >= len(tokens) or tokens[i][0] != kind:
            at = tokens[i][1] if i < len(tokens) else len(text)
            raise ParseError("expected %r" % kind, at)
        return i + 1

    i = expect("PD[", 0)
    crossings = []
    free_loops = 0
    next_id = 1
    first = True
    while True:
        if i >= len(tokens):
            raise ParseError("unterminated PD expression", len(text))
        tok, at = tokens[i]
        if tok == "]":
            i += 1
            break
        if not first:
            if tok != ",":
                raise ParseError("expected ','", at)
            i += 1
            tok, at = tokens[i] if i < len(tokens) else ("", len(text))
        first = False
        if tok == "O":
            free_loops += 1
            i += 1
        elif tok == "X(":
            i += 1
            slots = []
            for k in range(4):
                if k:
                    i = expect(",", i)
                tok2, at2 = tokens[i] if i < len(tokens) else ("", len(text))
                if not tok2.isdigit():
                    raise ParseError("expected edge id", at2)
                v = int(tok2)
                if v <= 0:
                    raise ParseError("edge ids must be positive", at2)
                slots.append(v)
                i += 1
            i = expect(")", i)
            crossings.append(Crossing(next_id, slots))
            next_id += 1
        elif tok == "]":
            continue
        else:
            raise ParseError("unexpected token %r" % tok, at)
    if i < len(tokens):
        raise ParseError("trailing input", tokens[i][1])
    try:
        return LinkDiagram(crossings, free_loops)
    except DiagramError as exc:
        raise ParseError("inconsistent PD code: %s" % exc) from exc


def parse_pd_file(text):
    """Parse a file of either one bare PD code or named ``name: PD[...]`` blocks."""
    entries = {}
    bare = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" in line and not line.upper().startswith("PD"):
            name, _, rest = line.partition(":")
            entries[name.strip()] = parse_pd(rest)
        else:
            bare.append(line)
    if bare:
        entries[None] = parse_pd(" ".join(bare))
    if not entries:
        raise ParseError("no PD content found")
    return entries


def format_pd(diagram):
    parts = ["X(%d,%d,%d,%d)" % c.slots for c in diagram.crossings]
    parts.extend(["O"] * diagram.free_loops)
    return "PD[%s]" % ", ".join(parts)


# -- elementary moves ------------------------------------------------------

def _flipped_slots(diagram, cid):
    c = diagram.by_id[cid]
    a, b, cc, d = c.slots
    if diagram.signs[cid] > 0:
        return (d, a, b, cc)
    return (b, cc, d, a)


def mirror(diagram):
    """Swap over/under at every crossing."""
    return diagram.replace_crossings(
        {c.id: _flipped_slots(diagram, c.id) for c in diagram.crossings}
    )


def crossing_change(diagram, cid):
    """Swap over/under at one crossing; involutive."""
    if cid not in diagram.by_id:
        raise DiagramError("unknown crossing id %r" % cid)
    return diagram.replace_crossings({cid: _flipped_slots(diagram, cid)})


def reverse(diagram):
    """Reverse the orientation of every component."""
    return diagram.replace_crossings(
        {c.id: (c.slots[2], c.slots[3], c.slots[0], c.slots[1]) for c in diagram.crossings}
    )


def relabeled(diagram, edge_offset, crossing_offset):
    cs = [
        Crossing(c.id + crossing_offset, tuple(e + edge_offset for e in c.slots))
        for c in diagram.crossings
    ]
    return LinkDiagram(cs, diagram.free_loops)


def disjoint_union(d1, d2):
    eoff = max((e for e in d1.occ), default=0)
    coff = max(d1.by_id, default=0)
    d2r = relabeled(d2, eoff, coff)
    return LinkDiagram(d1.crossings + d2r.crossings, d1.free_loops + d2.free_loops)


def splice_edges(diagram, e1, e2):
    """Join two distinct edges of one diagram by swapping their head ends.

    This is the oriented connected-sum splice: afterwards e1 runs from its
    old tail to e2's old head and vice versa.
    """
    if e1 == e2:
        raise DiagramError("cannot splice an edge to itself")
    h1 = diagram.edge_ends[e1][1]
    h2 = diagram.edge_ends[e2][1]
    new = {}
    for cid, slot in (h1, h2):
        new.setdefault(cid, list(diagram.by_id[cid].slots))
    new[h1[0]][h1[1]] = e2
    new[h2[0]][h2[1]] = e1
    return diagram.replace_crossings({cid: tuple(s) for cid, s in new.items()})


def splice_edges_tail(diagram, e1, e2):
    """Splice variant swapping the tail ends; mirror image of splice_edges."""
    if e1 == e2:
        raise DiagramError("cannot splice an edge to itself")
    t1 = diagram.edge_ends[e1][0]
    t2 = diagram.edge_ends[e2][0]
    new = {}
    for cid, slot in (t1, t2):
        new.setdefault(cid, list(diagram.by_id[cid].slots))
    new[t1[0]][t1[1]] = e2
    new[t2[0]][t2[1]] = e1
    return diagram.replace_crossings({cid: tuple(s) for cid, s in new.items()})


def connect_sum(d1, comp1, d2, comp2, at1=None, at2=None):
    """Connect sum along chosen components, splicing one edge of each."""
    for d, comp in ((d1, comp1), (d2, comp2)):
        if not (0 <= comp < d.n_components):
            raise DiagramError("invalid component id %r" % comp)
    # A free-loop factor is an unknot summand: absorb it.
    if not d1.components[comp1]:
        merged = disjoint_union(d1, d2)
        return LinkDiagram(merged.crossings, merged.free_loops - 1)
    if not d2.components[comp2]:
        merged = disjoint_union(d1, d2)
        return LinkDiagram(merged.crossings, merged.free_loops - 1)
    eoff = max(d1.occ)
    coff = max(d1.by_id, default=0)
    d2r = relabeled(d2, eoff, coff)
    merged = LinkDiagram(d1.crossings + d2r.crossings, d1.free_loops + d2.free_loops)
    e1 = min(d1.components[comp1]) if at1 is None else at1
    e2 = (min(d2.components[comp2]) + eoff) if at2 is None else at2 + eoff
    return splice_edges(merged, e1, e2)


def linking_matrix(diagram):
    """Symmetric integer matrix of pairwise linking numbers; diagonal zero."""
    n = diagram.n_components
    twice = [[0] * n for _ in range(n)]
    for c in diagram.crossings:
        i, j = diagram.component_of_crossing(c.id)
        if i != j:
            twice[i][j] += diagram.signs[c.id]
            twice[j][i] += diagram.signs[c.id]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if twice[i][j] % 2:
                raise DiagramError("odd inter-component crossing sum")
            out[i][j] = twice[i][j] // 2
    return out


# -- faces (rotation-system combinatorics) --------------------------------

def faces(diagram):
    """Faces of the diagram as orbits of the left-face walk.

    Each face is a tuple of directed boundary steps ``(cid, slot)`` meaning
    the walk leaves crossing ``cid`` along the edge in ``slot``.  The corner
    of the face at that visit is ``(cid, slot)`` taken as the corner between
    rays ``slot`` and ``slot + 1``... see corner_face() for corner lookup.
    """
    if not diagram.crossings:
        return []
    steps = {(c.id, s) for c in diagram.crossings for s in range(4)}
    out = []
    while steps:
        start = min(steps)
        walk = []
        cur = start
        while True:
            walk.append(cur)
            steps.discard(cur)
            cid, slot = cur
            e = diagram.by_id[cid].slots[slot]
            a, b = diagram.occ[e]
            arrive = b if a == (cid, slot) else a
            cur = (arrive[0], (arrive[1] - 1) % 4)
            if cur == start:
                break
        out.append(tuple(walk))
    return out


def corner_faces(diagram):
    """Map corner (cid, k) -> face index; corner k sits between rays k, k+1.

    When the walk leaves crossing c via ray r it has just swept the corner
    between rays r and r+1?  No: arriving at (c, s) and leaving via (s-1)
    sweeps the corner between rays s-1 and s, which is corner (c, s-1) and
    equals the step key itself.
    """
    fs = faces(diagram)
    where = {}
    for idx, walk in enumerate(fs):
        for step in walk:
            where[step] = idx
    return fs, where


def is_planar(diagram):
    """Euler-characteristic check per connected crossing component."""
    if not diagram.crossings:
        return True
    adj = defaultdict(set)
    for e, (a, b) in diagram.edge_ends.items():
        adj[a[0]].add(b[0])
        adj[b[0]].add(a[0])
    fs, where = corner_faces(diagram)
    seen = set()
    for c in diagram.crossings:
        if c.id in seen:
            continue
        stack, piece = [c.id], set()
        while stack:
            x = stack.pop()
            if x in piece:
                continue
            piece.add(x)
            stack.extend(adj[x])
        seen |= piece
        v = len(piece)
        e = 2 * v
        f = len({where[(cid, s)] for cid in piece for s in range(4)})
        if v - e + f != 2:
            return False
    return True


def is_connected(diagram):
    if diagram.free_loops:
        return diagram.free_loops == 1 and not diagram.crossings
    if not diagram.crossings:
        return False
    adj = defaultdict(set)
    for e, (a, b) in diagram.edge_ends.items():
        adj[a[0]].add(b[0])
        adj[b[0]].add(a[0])
    stack, piece = [diagram.crossings[0].id], set()
    while stack:
        x = stack.pop()
        if x in piece:
            continue
        piece.add(x)
        stack.extend(adj[x])
    return len(piece) == len(diagram.crossings)


def split_pieces(diagram):
    """Connected pieces as (sub-diagram) list; free loops become unknots."""
    adj = defaultdict(set)
    for e, (a, b) in diagram.edge_ends.items():
        adj[a[0]].add(b[0])
        adj[b[0]].add(a[0])
    seen = set()
    pieces = []
    for c in diagram.crossings:
        if c.id in seen:
            continue
        stack, piece = [c.id], set()
        while stack:
            x = stack.pop()
            if x in piece:
                continue
            piece.add(x)
            stack.extend(adj[x])
        seen |= piece
        pieces.append(LinkDiagram([diagram.by_id[i] for i in piece], 0))
    pieces.extend(LinkDiagram([], 1) for _ in range(diagram.free_loops))
    return pieces


# -- Reidemeister rewrites -------------------------------------------------

def dissolve(diagram, cids):
    """Remove crossings, joining each one's strands straight through.

    The under pair (slots 0, 2) merges and the over pair (slots 1, 3)
    merges; edge cycles left with no crossing occurrences become free loops.
    """
    cids = set(cids)
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    for e in diagram.occ:
        parent.setdefault(e, e)
    for cid in cids:
        s = diagram.by_id[cid].slots
        union(s[0], s[2])
        union(s[1], s[3])

    new_crossings = []
    used_classes = set()
    for c in diagram.crossings:
        if c.id in cids:
            continue
        slots = tuple(find(e) for e in c.slots)
        new_crossings.append(Crossing(c.id, slots))
        used_classes.update(slots)

    touched = set()
    for cid in cids:
        touched.update(find(e) for e in diagram.by_id[cid].slots)
    loops = len(touched - used_classes)
    return LinkDiagram(new_crossings, diagram.free_loops + loops)


def r1_sites(diagram):
    """Crossings carrying a kink: an edge on two cyclically adjacent slots."""
    out = []
    for c in diagram.crossings:
        s = c.slots
        if any(s[i] == s[(i + 1) % 4] for i in range(4)):
            out.append(c.id)
    return out


def apply_r1_remove(diagram, cid):
    if cid not in set(r1_sites(diagram)):
        raise DiagramError("crossing %r carries no kink" % cid)
    return dissolve(diagram, [cid])


def r1_add_variants(diagram, edge):
    """All four kink insertions on an edge; returns list of new diagrams."""
    if edge not in diagram.occ:
        raise DiagramError("unknown edge %r" % edge)
    nid = max(diagram.by_id, default=0) + 1
    m = max(diagram.occ) + 1
    loop = m + 1
    head = diagram.edge_ends[edge][1]
    out = []
    # Strand runs edge -> m through the new crossing; patterns derived from
    # the four planar kink shapes (loop side x writhe sign), with the
    # incoming external connection always the original edge.
    for slots in (
        (edge, m, loop, loop),
        (loop, loop, m, edge),
        (edge, loop, loop, m),
        (loop, edge, m, loop),
    ):
        new = {cid2: list(diagram.by_id[cid2].slots) for cid2 in (head[0],)}
        new[head[0]][head[1]] = m
        cs = [
            Crossing(c.id, tuple(new[c.id]) if c.id in new else c.slots)
            for c in diagram.crossings
        ]
        cs.append(Crossing(nid, slots))
        out.append(LinkDiagram(cs, diagram.free_loops))
    return out


def r2_sites(diagram):
    """Empty bigons where one strand lies entirely over the other."""
    sites = []
    for walk in faces(diagram):
        if len(walk) != 2:
            continue
        (c1, s1), (c2, s2) = walk
        if c1 == c2:
            continue
        x = diagram.by_id[c1].slots[s1]
        y = diagram.by_id[c2].slots[s2]
        if x == y:
            continue
        x_places = diagram.occ[x]
        y_places = diagram.occ[y]
        x_over = all(slot in (1, 3) for _, slot in x_places)
        x_under = all(slot in (0, 2) for _, slot in x_places)
        y_over = all(slot in (1, 3) for _, slot in y_places)
        y_under = all(slot in (0, 2) for _, slot in y_places)
        if (x_over and y_under) or (x_under and y_over):
            sites.append((min(c1, c2), max(c1, c2)))
    return sorted(set(sites))


def apply_r2_remove(diagram, c1, c2):
    if (min(c1, c2), max(c1, c2)) not in r2_sites(diagram):
        raise DiagramError("crossings %r, %r do not bound a removable bigon" % (c1, c2))
    return dissolve(diagram, [c1, c2])


def _direction_along(diagram, cid, slot):
    """True if leaving crossing `cid` via `slot` follows the edge's direction."""
    e = diagram.by_id[cid].slots[slot]
    return diagram.edge_ends[e][0] == (cid, slot)


def r2_add_candidates(diagram, max_results=None):
    """(face walk-step pairs) where two distinct edges border a common face."""
    out = []
    for walk in faces(diagram):
        for i in range(len(walk)):
            for j in range(i + 1, len(walk)):
                e1 = diagram.by_id[walk[i][0]].slots[walk[i][1]]
                e2 = diagram.by_id[walk[j][0]].slots[walk[j][1]]
                if e1 != e2:
                    out.append((walk[i], walk[j]))
                    if max_results and len(out) >= max_results:
                        return out
    return out


def apply_r2_add(diagram, step_x, step_y, x_over=True):
    """Push the edge at step_x across the edge at step_y through their face.

    Both steps must border the same face (as returned by
    r2_add_candidates).  The face walk keeps the face on the left of each
    step; the four direction combinations fix the two new crossings.
    """
    cx, sx = step_x
    cy, sy = step_y
    x = diagram.by_id[cx].slots[sx]
    y = diagram.by_id[cy].slots[sy]
    if x == y:
        raise DiagramError("cannot push an edge across itself")
    x_forward = _direction_along(diagram, cx, sx)
    y_forward = _direction_along(diagram, cy, sy)

    m = max(diagram.occ) + 1
    xm, x2, ym, y2 = m, m + 1, m + 2, m + 3
    nc = max(diagram.by_id, default=0) + 1

    # Reattach the head ends of x and y to the new final segments.
    hx = diagram.edge_ends[x][1]
    hy = diagram.edge_ends[y][1]
    patched = {}
    for cid, slot in (hx, hy):
        patched.setdefault(cid, list(diagram.by_id[cid].slots))
    patched[hx[0]][hx[1]] = x2
    patched[hy[0]][hy[1]] = y2

    # Canonical picture: the face walk traverses x westward (face below it)
    # and y eastward (face above it); the finger dips from x through the
    # face across y.  Knot pieces in traversal order: x -> c1 -> xm -> c2
    # -> x2 and y -> ... -> ym -> ... -> y2.  Tuples were derived case by
    # case from strand direction vectors; positive crossings put the
    # over-strand entry at slot 3.
    case = (x_forward, y_forward, bool(x_over))
    table = {
        (False, True, True): ((y, xm, ym, x), (ym, xm, y2, x2)),
        (False, True, False): ((x, y, xm, ym), (xm, y2, x2, ym)),
        (False, False, True): ((ym, x, y2, xm), (y, x2, ym, xm)),
        (False, False, False): ((x, y2, xm, ym), (xm, y, x2, ym)),
        (True, True, True): ((ym, xm, y2, x), (y, xm, ym, x2)),
        (True, True, False): ((x, ym, xm, y2), (xm, ym, x2, y)),
        (True, False, True): ((y, x, ym, xm), (ym, x2, y2, xm)),
        (True, False, False): ((x, ym, xm, y), (xm, ym, x2, y2)),
    }
    t1, t2 = table[case]

    cs = [
        Crossing(c.id, tuple(patched[c.id]) if c.id in patched else c.slots)
        for c in diagram.crossings
    ]
    cs.append(Crossing(nc, t1))
    cs.append(Crossing(nc + 1, t2))
    return LinkDiagram(cs, diagram.free_loops)


def r3_sites(diagram):
    """Triangle faces with an edge lying over (or under) at both endpoints."""
    out = []
    for walk in faces(diagram):
        if len(walk) != 3:
            continue
        cids = [step[0] for step in walk]
        if len(set(cids)) != 3:
            continue
        edges = [diagram.by_id[c].slots[s] for c, s in walk]
        if len(set(edges)) != 3:
            continue
        for k in range(3):
            e = edges[k]
            places = diagram.occ[e]
            if all(slot in (1, 3) for _, slot in places) or all(
                slot in (0, 2) for _, slot in places
            ):
                out.append((walk, e))
                break
    return out


def apply_r3(diagram, walk, g):
    """Slide the strand carrying edge g across the far crossing of the triangle.

    The three crossings keep their signs and their strand-pair over/under
    relations; only the order in which each strand meets them changes.
    """
    cids = {step[0] for step in walk}
    ga, gb = diagram.occ[g]
    cA, cB = ga[0], gb[0]
    rest = cids - {cA, cB}
    if len(rest) != 1:
        raise DiagramError("degenerate triangle; skipping")
    (cC,) = rest

    face_edges = {diagram.by_id[c].slots[s] for c, s in walk}
    try:
        a = next(e for e in face_edges
                 if {p[0] for p in diagram.occ[e]} == {cA, cC})
        b = next(e for e in face_edges
                 if {p[0] for p in diagram.occ[e]} == {cB, cC})
    except StopIteration:
        raise DiagramError("degenerate triangle; skipping")

    def boundary(cid, inner):
        c = diagram.by_id[cid]
        slots_of = [s for s in range(4) if c.slots[s] == inner]
        if len(slots_of) != 1:
            raise DiagramError("degenerate triangle; skipping")
        return c.slots[(slots_of[0] + 2) % 4]

    mA = boundary(cA, g)
    mB = boundary(cB, g)
    sA = boundary(cA, a)
    tA = boundary(cC, a)
    sB = boundary(cB, b)
    tB = boundary(cC, b)
    if len({g, a, b, mA, mB, sA, tA, sB, tB}) != 9:
        raise DiagramError("triangle touches itself; skipping")

    def strand_is_over(cid, e):
        slot = next(p[1] for p in diagram.occ[e] if p[0] == cid)
        return slot in (1, 3)

    def rebuilt(under_pair, over_pair, sign):
        ui, uo = under_pair
        oi, oo = over_pair
        return (ui, oo, uo, oi) if sign > 0 else (ui, oi, uo, oo)

    def make(m_pair, o_pair, m_over, sign):
        if m_over:
            return rebuilt(o_pair, m_pair, sign)
        return rebuilt(m_pair, o_pair, sign)

    g_from_A = diagram.edge_ends[g][0][0] == cA
    a_from_A = diagram.edge_ends[a][0][0] == cA
    b_from_B = diagram.edge_ends[b][0][0] == cB

    # After the slide the moving strand meets its two crossings in the
    # opposite order, and each fixed strand meets cC before its crossing
    # with the moving strand (as seen from its near boundary edge).
    m_at_A = (g, mB) if g_from_A else (mB, g)
    m_at_B = (mA, g) if g_from_A else (g, mA)
    s1_at_A = (a, tA) if a_from_A else (tA, a)
    s1_at_C = (sA, a) if a_from_A else (a, sA)
    s2_at_B = (b, tB) if b_from_B else (tB, b)
    s2_at_C = (sB, b) if b_from_B else (b, sB)

    new_slots = {
        cA: make(m_at_A, s1_at_A, strand_is_over(cA, g), diagram.signs[cA]),
        cB: make(m_at_B, s2_at_B, strand_is_over(cB, g), diagram.signs[cB]),
        cC: make(s1_at_C, s2_at_C, strand_is_over(cC, a), diagram.signs[cC]),
    }
    return diagram.replace_crossings(new_slots)


def canonical_key(diagram):
    """Relabeling-invariant key; exact for knots, structural enough for search.

    For a one-component diagram the key is the minimum, over both traversal
    directions and all starting edges, of the crossing list relabeled in
    traversal order.  Multi-component diagrams fall back to a coarser key.
    """
    if diagram.free_loops or len(diagram.components) != 1 or not diagram.crossings:
        return ("coarse", _coarse_key(diagram))
    best = None
    cycle = diagram.components[0]
    n = len(cycle)
    for direction in (1, -1):
        seq = cycle if direction == 1 else tuple(reversed(cycle))
        for start in range(n):
            order = {seq[(start + i) % n]: i + 1 for i in range(n)}
            rows = []
            for c in diagram.crossings:
                slots = tuple(order[e] for e in c.slots)
                best_rot = min(
                    slots[k:] + slots[:k] for k in (0, 2)
                )  # under-in ambiguity only between the two under slots
                rows.append(best_rot)
            rows.sort()
            key = tuple(rows)
            if best is None or key < best:
                best = key
    return ("knot", best, diagram.free_loops)


def _coarse_key(diagram):
    degseq = []
    for c in diagram.crossings:
        comp_pair = tuple(sorted(diagram.component_of_crossing(c.id)))
        degseq.append((diagram.signs[c.id],) + comp_pair)
    return (tuple(sorted(degseq)), diagram.free_loops,
            tuple(sorted(len(comp) for comp in diagram.components)))


class MapBuilder:
    """Assemble a diagram from 4-valent nodes with explicit rotations.

    Each node has ports 0..3 in counterclockwise planar order; strands run
    straight through (port p to p+2) and ``over_pair`` says which opposite
    port pair (0 for ports {0,2}, 1 for {1,3}) carries the over-strand.
    Ports and symbolic junctions are wired with ``join``; junction chains
    collapse to single edges, and junction cycles with no ports at all
    become free loops.
    """

    def __init__(self):
        self.over = {}
        self.joins = []
        self.free_loops = 0

    def node(self, nid, over_pair):
        if nid in self.over:
            raise DiagramError("duplicate node %r" % nid)
        self.over[nid] = over_pair

    def port(self, nid, p):
        return ("p", nid, p)

    def junction(self, name):
        return ("j", name)

    def join(self, t1, t2):
        self.joins.append((t1, t2))

    def build(self):
        parent = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for t1, t2 in self.joins:
            union(t1, t2)
        classes = defaultdict(list)
        for t in parent:
            if t[0] == "p":
                classes[find(t)].append(t)
        # Junction-only cycles never enter `classes`; count them as loops.
        junction_classes = {find(t) for t in parent if t[0] == "j"}
        port_classes = set(classes)
        loops = self.free_loops + len(junction_classes - port_classes)

        edges = {}
        for i, (root, ports) in enumerate(sorted(classes.items()), start=1):
            if len(ports) != 2:
                raise DiagramError(
                    "junction class with %d ports; need exactly 2" % len(ports)
                )
            for p in ports:
                edges[p] = i

        expected = {(nid, p) for nid in self.over for p in range(4)}
        got = {(t[1], t[2]) for t in edges}
        if expected != got:
            raise DiagramError("not every node port is wired")

        # Orient strands: walk each strand cycle once, marking entry ports.
        entry = {}
        unvisited = set(expected)
        while unvisited:
            nid, p = min(unvisited)
            # leave via (nid, p)
            cur = (nid, p)
            while True:
                unvisited.discard(cur)
                e = edges[("p",) + cur]
                mate = next(
                    t for t in self._mates(edges, e) if t != ("p",) + cur
                )
                arrive = (mate[1], mate[2])
                entry[arrive] = True
                unvisited.discard(arrive)
                cur = (arrive[0], (arrive[1] + 2) % 4)
                if cur == (nid, p):
                    break

        crossings = []
        self.node_crossing = {}
        self.port_edge = {
            (t[1], t[2]): e for t, e in edges.items()
        }
        for nid in sorted(self.over, key=lambda x: str(x)):
            under_ports = (1, 3) if self.over[nid] == 0 else (0, 2)
            uin = next(p for p in under_ports if entry.get((nid, p)))
            slots = tuple(
                edges[("p", nid, (uin + k) % 4)] for k in range(4)
            )
            cid = len(crossings) + 1
            crossings.append(Crossing(cid, slots))
            self.node_crossing[nid] = cid
        return LinkDiagram(crossings, loops)

    @staticmethod
    def _mates(edges, e):
        return [t for t, val in edges.items() if val == e]
