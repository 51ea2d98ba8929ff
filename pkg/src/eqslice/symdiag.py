"""Strongly invertible knot and link diagrams in axis-normal form.

A symmetric diagram is stored as a full link diagram together with the
diagrammatic involution ``iota`` (on crossing and edge ids), a top-to-bottom
list of axis events, and a right/left side assignment for the off-axis
orbits.  The involution models a half-turn about a vertical axis: it
reflects the plane, swaps over and under, preserves crossing signs, and
reverses each component's orientation.

Axis events are either fixed points of the knot on the axis (each lies on
an iota-invariant edge) or on-axis crossings.  On-axis crossings classify
as B (iota exchanges the two strands, signed by orientation transport) or
C (iota preserves each strand setwise).

The compatibility condition at each crossing c with slots (e0, e1, e2, e3):

    sign +1:  iota(c).slots == (i(e1), i(e0), i(e3), i(e2))
    sign -1:  iota(c).slots == (i(e3), i(e2), i(e1), i(e0))

which encodes reflection (reversed cyclic order), over/under exchange, and
orientation reversal at once; it forces iota to preserve crossing signs.
"""

from __future__ import annotations

import re
from collections import defaultdict

from . import linkdiag
from .linkdiag import (
    Crossing,
    DiagramError,
    LinkDiagram,
    MapBuilder,
    ParseError,
    crossing_change,
    mirror,
    parse_pd,
    format_pd,
)
from .invariants import PROVEN_UNKNOT, try_unknot

TYPE_A = "A"
TYPE_B_PLUS = "B+"
TYPE_B_MINUS = "B-"
TYPE_C = "C"
MOVE_TYPES = (TYPE_A, TYPE_B_PLUS, TYPE_B_MINUS, TYPE_C)


class SymmetryError(Exception):
    """Diagram violates the symmetric-diagram contract."""


class FoldError(Exception):
    """Diagram is not in a foldable axis-normal form; quotient undefined."""


class AxisEvent:
    __slots__ = ("kind", "ref", "declared")

    def __init__(self, kind, ref=None, declared=None):
        self.kind = kind  # "fixed" | "crossing"
        self.ref = ref    # edge id / crossing id / None for a free loop
        self.declared = declared  # "B" | "C" for crossing events

    def __eq__(self, other):
        return (
            isinstance(other, AxisEvent)
            and (self.kind, self.ref, self.declared)
            == (other.kind, other.ref, other.declared)
        )

    def __repr__(self):
        if self.kind == "fixed":
            return "fixed %s" % ("loop" if self.ref is None else self.ref)
        return "crossing %d %s" % (self.ref, self.declared)


class SymmetricDiagram:
    def __init__(self, base, iota_crossings, iota_edges, axis,
                 right_crossings=(), right_edges=()):
        self.base = base
        self.iota_crossings = dict(iota_crossings)
        self.iota_edges = dict(iota_edges)
        self.axis = tuple(axis)
        self.right_crossings = frozenset(right_crossings)
        self.right_edges = frozenset(right_edges)

    def iota_c(self, cid):
        return self.iota_crossings[cid]

    def iota_e(self, e):
        return self.iota_edges[e]

    def on_axis(self, cid):
        return self.iota_crossings.get(cid) == cid

    def crossing_events(self):
        return [ev for ev in self.axis if ev.kind == "crossing"]

    def fixed_events(self):
        return [ev for ev in self.axis if ev.kind == "fixed"]

    def with_base(self, new_base):
        return SymmetricDiagram(
            new_base,
            self.iota_crossings,
            self.iota_edges,
            self.axis,
            self.right_crossings,
            self.right_edges,
        )

    def __repr__(self):
        return "SymmetricDiagram(%d crossings, %d axis events)" % (
            self.base.n_crossings,
            len(self.axis),
        )


# -- validation -------------------------------------------------------------

def _expected_image_slots(sd, cid):
    c = sd.base.by_id[cid]
    e = c.slots
    i = sd.iota_edges
    if sd.base.signs[cid] > 0:
        return (i[e[1]], i[e[0]], i[e[3]], i[e[2]])
    return (i[e[3]], i[e[2]], i[e[1]], i[e[0]])


def _strand_sets(diagram, cid):
    c = diagram.by_id[cid]
    return {c.slots[0], c.slots[2]}, {c.slots[1], c.slots[3]}


def classify_on_axis(sd, cid):
    """B+/B-/C for an iota-fixed crossing; raises on inconsistency."""
    under, over = _strand_sets(sd.base, cid)
    iu = {sd.iota_edges[e] for e in under}
    if iu == under:
        return TYPE_C
    if iu == over:
        e0 = sd.base.by_id[cid].slots[0]
        img = sd.iota_edges[e0]
        c = sd.base.by_id[cid]
        # Transport the under orientation by iota: the image strand enters
        # through iota(under-in).  Entering at slot 3 reads positive.
        if img == c.slots[3]:
            return TYPE_B_PLUS
        if img == c.slots[1]:
            return TYPE_B_MINUS
        raise SymmetryError("cannot read B sign at crossing %d" % cid)
    raise SymmetryError(
        "iota neither exchanges nor preserves the strands at crossing %d" % cid
    )


def validate_symmetric(sd):
    """List of violation messages; empty means the diagram is valid."""
    errors = []
    base = sd.base

    crossing_ids = set(base.by_id)
    edge_ids = set(base.occ)

    if set(sd.iota_crossings) != crossing_ids or any(
        sd.iota_crossings.get(sd.iota_crossings.get(c)) != c for c in crossing_ids
    ):
        errors.append("iota is not an involution on the crossing set")
        return errors
    if set(sd.iota_edges) != edge_ids or any(
        sd.iota_edges.get(sd.iota_edges.get(e)) != e for e in edge_ids
    ):
        errors.append("iota is not an involution on the edge set")
        return errors

    for cid in sorted(crossing_ids):
        img = sd.iota_crossings[cid]
        if tuple(base.by_id[img].slots) != _expected_image_slots(sd, cid):
            errors.append(
                "iota is not a symmetry at crossing %d (image %d mismatched)"
                % (cid, img)
            )

    fixed_crossings = {c for c in crossing_ids if sd.iota_crossings[c] == c}
    event_crossings = [ev.ref for ev in sd.crossing_events()]
    if len(set(event_crossings)) != len(event_crossings):
        errors.append("duplicate crossing events on the axis")
    if set(event_crossings) != fixed_crossings:
        missing = fixed_crossings - set(event_crossings)
        extra = set(event_crossings) - fixed_crossings
        for cid in sorted(missing):
            errors.append(
                "crossing %d is fixed by iota but absent from the axis list" % cid
            )
        for cid in sorted(extra):
            errors.append("crossing %d on the axis is not fixed by iota" % cid)

    if not errors:
        for ev in sd.crossing_events():
            try:
                kind = classify_on_axis(sd, ev.ref)
            except SymmetryError as exc:
                errors.append(str(exc))
                continue
            expected = "B" if kind in (TYPE_B_PLUS, TYPE_B_MINUS) else "C"
            if ev.declared != expected:
                errors.append(
                    "axis event at crossing %d declared %s but classifies %s"
                    % (ev.ref, ev.declared, expected)
                )

    invariant_edges = {e for e in edge_ids if sd.iota_edges[e] == e}
    fixed_evs = sd.fixed_events()
    fixed_edge_refs = [ev.ref for ev in fixed_evs if ev.ref is not None]
    if len(set(fixed_edge_refs)) != len(fixed_edge_refs):
        errors.append("duplicate fixed-point events")
    if set(fixed_edge_refs) != invariant_edges:
        errors.append(
            "fixed-point events (%s) do not match the iota-invariant edges (%s)"
            % (sorted(fixed_edge_refs), sorted(invariant_edges))
        )

    # Free loops: only the standard invariant unknot pattern is supported.
    if base.free_loops:
        ok_pattern = (
            base.free_loops == 1
            and not base.crossings
            and len(fixed_evs) == 2
            and all(ev.ref is None for ev in fixed_evs)
        )
        if not ok_pattern:
            errors.append("free loops are only supported as the standard unknot")
    elif any(ev.ref is None for ev in fixed_evs):
        errors.append("fixed-loop event without a free loop")

    # Component conditions: invariant with exactly two fixed points, or
    # swapped with a partner component.
    comp_edge_sets = [frozenset(comp) for comp in base.components if comp]
    for idx, comp in enumerate(comp_edge_sets):
        image = frozenset(sd.iota_edges[e] for e in comp)
        if image == comp:
            n_fixed = len([e for e in comp if e in invariant_edges])
            if n_fixed != 2:
                errors.append(
                    "invariant component %d has fixed-point count %d != 2"
                    % (idx, n_fixed)
                )
        elif image not in comp_edge_sets:
            errors.append("component %d maps to no component" % idx)

    errors.extend(_check_sides(sd))
    return errors


def _check_sides(sd):
    errors = []
    base = sd.base
    fixed_crossings = {c for c in base.by_id if sd.iota_crossings[c] == c}
    off_axis = set(base.by_id) - fixed_crossings
    for c in off_axis:
        img = sd.iota_crossings[c]
        marks = (c in sd.right_crossings) + (img in sd.right_crossings)
        if marks != 1:
            errors.append(
                "off-axis orbit {%d, %d} needs exactly one right mark" % (c, img)
            )
    for c in fixed_crossings:
        if c in sd.right_crossings:
            errors.append("on-axis crossing %d cannot be marked right" % c)
    invariant_edges = {e for e in base.occ if sd.iota_edges[e] == e}
    for e in set(base.occ) - invariant_edges:
        img = sd.iota_edges[e]
        marks = (e in sd.right_edges) + (img in sd.right_edges)
        if marks != 1:
            errors.append(
                "edge orbit {%d, %d} needs exactly one right mark" % (e, img)
            )
    for e in invariant_edges:
        if e in sd.right_edges:
            errors.append("invariant edge %d cannot be marked right" % e)
    if errors:
        return errors

    # Edges between two off-axis crossings stay on one side.
    for e, (tail, head) in base.edge_ends.items():
        if e in invariant_edges:
            continue
        sides = set()
        for cid, _slot in (tail, head):
            if cid in fixed_crossings:
                continue
            sides.add(cid in sd.right_crossings)
        if len(sides) == 2:
            errors.append("edge %d joins the two half-planes off the axis" % e)
            continue
        if sides:
            if (e in sd.right_edges) != (True in sides):
                errors.append("edge %d side mark disagrees with its crossings" % e)

    # Right stubs at an on-axis crossing occupy two adjacent slots, one
    # from each iota slot pair.
    for c in fixed_crossings:
        if not _stub_patterns(sd, c):
            errors.append(
                "side marks at on-axis crossing %d fit no half-plane split" % c
            )
    return errors


def _stub_patterns(sd, cid):
    """Consistent (lower, upper) right-stub slot patterns at an on-axis crossing.

    The slot involution at a fixed crossing pairs (0,1),(2,3) for positive
    crossings and (0,3),(1,2) for negative ones; the right half-plane takes
    one slot of each pair, and the two taken slots are cyclically adjacent.
    """
    slots = sd.base.by_id[cid].slots
    invariant = {e for e in slots if sd.iota_edges[e] == e}
    if sd.base.signs[cid] > 0:
        candidates = ((1, 2), (3, 0))
    else:
        candidates = ((0, 1), (2, 3))
    out = []
    for pattern in candidates:
        ok = True
        for s in range(4):
            e = slots[s]
            if e in invariant:
                continue
            if s in pattern:
                ok = ok and e in sd.right_edges
            else:
                ok = ok and e not in sd.right_edges
        if ok:
            out.append(pattern)
    return out


def require_valid(sd):
    errors = validate_symmetric(sd)
    if errors:
        raise SymmetryError("; ".join(errors))


# -- moves ------------------------------------------------------------------

class Move:
    __slots__ = ("site", "type")

    def __init__(self, site, move_type):
        self.site = site
        self.type = move_type

    def __eq__(self, other):
        return isinstance(other, Move) and (self.site, self.type) == (
            other.site,
            other.type,
        )

    def __repr__(self):
        return "Move(%r, %s)" % (self.site, self.type)


class UnknottingSequence:
    """Ordered symmetric crossing changes with self-intersection counts."""

    def __init__(self, moves):
        self.moves = tuple(moves)

    @property
    def k_total(self):
        return sum(2 if m.type == TYPE_A else 1 for m in self.moves)

    def counts(self):
        out = {t: 0 for t in MOVE_TYPES}
        for m in self.moves:
            out[m.type] += 1
        return out

    def type_multiset(self):
        out = []
        for m in self.moves:
            if m.type == TYPE_A:
                out.extend([TYPE_A, TYPE_A])
            else:
                out.append(m.type)
        return sorted(out)

    def __len__(self):
        return len(self.moves)

    def __repr__(self):
        return "UnknottingSequence(%s)" % (list(self.moves),)


def classify_move(sd, site):
    """A for off-axis orbits, B+/B-/C for on-axis crossings."""
    if site not in sd.base.by_id:
        raise SymmetryError("unknown crossing %r" % site)
    if sd.iota_crossings[site] != site:
        return TYPE_A
    if site not in {ev.ref for ev in sd.crossing_events()}:
        raise SymmetryError(
            "crossing %d is fixed by iota but absent from the axis list" % site
        )
    return classify_on_axis(sd, site)


def apply_move(sd, move):
    """Equivariant crossing change; preserves validity."""
    declared = move.type
    actual = classify_move(sd, move.site)
    if declared == TYPE_A:
        if actual != TYPE_A:
            raise SymmetryError("move at %r is %s, not A" % (move.site, actual))
        partner = sd.iota_crossings[move.site]
        new_base = crossing_change(crossing_change(sd.base, move.site), partner)
    else:
        if actual != declared:
            raise SymmetryError(
                "move at %r classifies %s, not %s" % (move.site, actual, declared)
            )
        new_base = crossing_change(sd.base, move.site)
    out = sd.with_base(new_base)
    require_valid(out)
    return out


def available_moves(sd, allowed_types=MOVE_TYPES):
    """Deduplicated candidate moves (A per right representative)."""
    out = []
    if TYPE_A in allowed_types:
        for c in sorted(sd.right_crossings):
            out.append(Move(c, TYPE_A))
    for ev in sd.crossing_events():
        t = classify_on_axis(sd, ev.ref)
        if t in allowed_types:
            out.append(Move(ev.ref, t))
    return out


def mirror_symmetric(sd):
    """Mirror the underlying diagram; B+ sites become B- sites."""
    out = sd.with_base(mirror(sd.base))
    require_valid(out)
    return out


def equivariant_unknotting_search(sd, max_moves, allowed_types=MOVE_TYPES,
                                  unknot_budget=2000):
    """Breadth-first search for a symmetric unknotting move sequence.

    Returns an UnknottingSequence (possibly empty) or None; search
    statistics are available on the function attribute ``last_stats``.
    Nodes whose unknot status is Unknown count as failures.
    """
    require_valid(sd)
    if sd.base.n_components != 1:
        raise SymmetryError("search requires a knot")

    start_key = sd.base.exact_key()
    seen = {start_key}
    frontier = [(sd, [])]
    expanded = 0
    for depth in range(max_moves + 1):
        next_frontier = []
        for state, path in frontier:
            expanded += 1
            if try_unknot(state.base, budget=unknot_budget) == PROVEN_UNKNOT:
                equivariant_unknotting_search.last_stats = {
                    "expanded": expanded,
                    "depth": depth,
                }
                return UnknottingSequence(path)
            if depth == max_moves:
                continue
            for move in available_moves(state, allowed_types):
                nxt = apply_move(state, move)
                key = nxt.base.exact_key()
                if key in seen:
                    continue
                seen.add(key)
                next_frontier.append((nxt, path + [move]))
        frontier = next_frontier
        if not frontier:
            break
    equivariant_unknotting_search.last_stats = {
        "expanded": expanded,
        "depth": max_moves,
    }
    return None


equivariant_unknotting_search.last_stats = {}


# -- quotients ---------------------------------------------------------------

def _right_stub_slots(sd, cid):
    patterns = _stub_patterns(sd, cid)
    if len(patterns) != 1:
        raise FoldError(
            "right stubs at on-axis crossing %d are not determined" % cid
        )
    return patterns[0]


def quotient(sd, half):
    """Quotient knot along the chosen half-axis, as a fresh LinkDiagram.

    The right half-tangle survives as-is.  Each on-axis crossing on the
    chosen half-axis becomes a wrap: the through-strand pierces the axis
    arc, passing over it beside its front (over-strand) stub and under it
    beside its back stub.  On-axis crossings on the other half-axis fold to
    plain strand passages.
    """
    if half not in ("h1", "h2"):
        raise ValueError("half must be 'h1' or 'h2'")
    require_valid(sd)
    if sd.base.n_components != 1:
        raise SymmetryError("quotients are defined for strongly invertible knots")

    if not sd.base.crossings:
        return LinkDiagram([], 1)

    fixed_positions = [i for i, ev in enumerate(sd.axis) if ev.kind == "fixed"]
    i1, i2 = fixed_positions
    above = [ev for ev in sd.axis[:i1]]
    between = [ev for ev in sd.axis[i1 + 1:i2]]
    below = [ev for ev in sd.axis[i2 + 1:]]

    for ev in above + between + below:
        if ev.declared != "B":
            raise FoldError(
                "on-axis crossing %d has kind %s; only B events fold"
                % (ev.ref, ev.declared)
            )
        under, over = _strand_sets(sd.base, ev.ref)
        if len(under | over) != 4:
            raise FoldError(
                "on-axis crossing %d has coincident edges; cannot fold" % ev.ref
            )

    # The h1 arc runs from the first fixed point upward through infinity
    # and back up to the second; h2 runs straight down between them.
    # Each entry is (event, enter_from_above).
    if half == "h2":
        path = [(ev, True) for ev in between]
        off_path = above + below
    else:
        path = [(ev, False) for ev in reversed(above)]
        path += [(ev, False) for ev in reversed(below)]
        off_path = between

    mb = MapBuilder()
    # Right off-axis crossings keep their rotation; over pair is ports 1,3.
    for cid in sorted(sd.right_crossings):
        mb.node(("c", cid), over_pair=1)

    fixed_evs = sd.fixed_events()
    fix_junctions = [mb.junction(("fix", i)) for i in range(2)]

    def stub_junction(cid, which):
        return mb.junction(("stub", cid, which))

    # Wire the right fragment.
    invariant_edges = {e for e in sd.base.occ if sd.iota_edges[e] == e}
    stub_slot_map = {}
    for ev, _ in path:
        lower, upper = _right_stub_slots(sd, ev.ref)
        stub_slot_map[ev.ref] = (lower, upper)
    for ev in off_path:
        lower, upper = _right_stub_slots(sd, ev.ref)
        stub_slot_map[ev.ref] = (lower, upper)

    def right_occurrences(e):
        out = []
        for cid, slot in sd.base.occ[e]:
            if cid in sd.right_crossings:
                out.append((cid, slot))
            elif cid in stub_slot_map and slot in stub_slot_map[cid]:
                out.append((cid, slot))
        return out

    def terminal_for(cid, slot):
        """Connection terminal for the given occurrence, right side only."""
        if cid in sd.right_crossings:
            return mb.port(("c", cid), slot)
        lower, upper = stub_slot_map[cid]
        if slot == lower:
            return stub_junction(cid, "lower")
        if slot == upper:
            return stub_junction(cid, "upper")
        raise FoldError("occurrence (%d, %d) is not on the right side" % (cid, slot))

    for e in sorted(sd.right_edges):
        occs = right_occurrences(e)
        if len(occs) != 2:
            raise FoldError("edge %d does not lie in the right fragment" % e)
        mb.join(terminal_for(*occs[0]), terminal_for(*occs[1]))

    for k, ev in enumerate(fixed_evs):
        occs = right_occurrences(ev.ref)
        if len(occs) != 1:
            raise FoldError(
                "invariant edge %d needs exactly one right-side end" % ev.ref
            )
        mb.join(terminal_for(*occs[0]), fix_junctions[k])

    # Off-path events: the two stubs join straight through the axis.
    for ev in off_path:
        mb.join(stub_junction(ev.ref, "lower"), stub_junction(ev.ref, "upper"))

    # Path events: build the two wrap crossings.
    chain = fix_junctions[0]
    for idx, (ev, enter_above) in enumerate(path):
        cid = ev.ref
        lower, upper = stub_slot_map[cid]
        slots = sd.base.by_id[cid].slots
        upper_is_front = upper in (1, 3)

        hi = ("hi", cid)
        lo = ("lo", cid)
        # w_hi ports ccw: 0=NE stub, 1=N axis, 2=SW to middle, 3=S axis.
        mb.node(hi, over_pair=0 if upper_is_front else 1)
        # w_lo ports ccw: 0=N axis, 1=NW to middle, 2=S axis, 3=SE stub.
        mb.node(lo, over_pair=1 if not upper_is_front else 0)
        mb.join(mb.port(hi, 0), stub_junction(cid, "upper"))
        mb.join(mb.port(lo, 3), stub_junction(cid, "lower"))
        mb.join(mb.port(hi, 2), mb.port(lo, 1))
        mb.join(mb.port(hi, 3), mb.port(lo, 0))
        if enter_above:
            mb.join(chain, mb.port(hi, 1))
            chain = mb.port(lo, 2)
        else:
            mb.join(chain, mb.port(lo, 2))
            chain = mb.port(hi, 1)
    mb.join(chain, fix_junctions[1])

    out = mb.build()
    if out.n_components != 1:
        raise FoldError(
            "quotient produced %d components; expected a knot" % out.n_components
        )
    if not linkdiag.is_planar(out):
        raise FoldError(
            "fold is not planar; the axis event order does not match the diagram"
        )
    return out


# -- text format -------------------------------------------------------------

def parse_sym(text):
    """Parse the structured symmetric-diagram text format."""
    base = None
    iota_crossings = {}
    iota_edges = {}
    right_crossings = set()
    right_edges = set()
    axis = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key = key.strip().lower()
        rest = rest.strip()
        if key in seen:
            raise ParseError("duplicate %r section (line %d)" % (key, lineno))
        seen.add(key)
        if key == "base":
            base = parse_pd(rest)
        elif key in ("iota_crossings", "iota_edges"):
            mapping = {}
            rights = set()
            if rest:
                for pair in rest.replace(",", " ").split():
                    m = re.fullmatch(r"(\d+)\s*[:>-]\s*(\d+)", pair)
                    if not m:
                        raise ParseError(
                            "bad iota pair %r (line %d)" % (pair, lineno)
                        )
                    a, b = int(m.group(1)), int(m.group(2))
                    mapping[a] = b
                    mapping[b] = a
                    if a != b:
                        rights.add(a)
            if key == "iota_crossings":
                iota_crossings = mapping
                right_crossings = rights
            else:
                iota_edges = mapping
                right_edges = rights
        elif key == "axis":
            for chunk in rest.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                parts = chunk.split()
                if parts[0] == "fixed":
                    if len(parts) == 2 and parts[1] == "loop":
                        axis.append(AxisEvent("fixed", None))
                    elif len(parts) == 2:
                        axis.append(AxisEvent("fixed", int(parts[1])))
                    else:
                        raise ParseError("bad axis event %r (line %d)" % (chunk, lineno))
                elif parts[0] == "crossing" and len(parts) == 3:
                    if parts[2] not in ("B", "C"):
                        raise ParseError("bad axis kind %r (line %d)" % (chunk, lineno))
                    axis.append(AxisEvent("crossing", int(parts[1]), parts[2]))
                else:
                    raise ParseError("bad axis event %r (line %d)" % (chunk, lineno))
        else:
            raise ParseError("unknown section %r (line %d)" % (key, lineno))
    if base is None:
        raise ParseError("missing base: section")
    return SymmetricDiagram(
        base, iota_crossings, iota_edges, axis, right_crossings, right_edges
    )


def format_sym(sd, header=None):
    lines = []
    if header:
        for h in header.splitlines():
            lines.append("# " + h)
    lines.append("base: " + format_pd(sd.base))

    def fmt_pairs(mapping, rights):
        done = set()
        parts = []
        for a in sorted(mapping):
            b = mapping[a]
            if a in done or b in done:
                continue
            done.update((a, b))
            if a == b:
                parts.append("%d:%d" % (a, a))
            else:
                r = a if a in rights else b
                parts.append("%d:%d" % (r, mapping[r]))
        return " ".join(parts)

    lines.append("iota_crossings: " + fmt_pairs(sd.iota_crossings, sd.right_crossings))
    lines.append("iota_edges: " + fmt_pairs(sd.iota_edges, sd.right_edges))
    lines.append("axis: " + ", ".join(repr(ev) for ev in sd.axis))
    return "\n".join(lines) + "\n"
