"""Sliceness certificates and non-sliceness verdicts.

Certificates check the tubing criterion: a strongly invertible knot is
equivariantly slice in an ambient carrying an n-sphere symmetric plumbing
tree once it bounds an invariant immersed disk with k <= n-1
self-intersections, exactly one of them of the type matched to the
plumbing (equal under the ``as-stated`` convention, with B+ and B-
exchanged under ``mirrored``), and the rest of type A.  Accepted
certificates embed a pruned equivariant tree with k vertices and record a
re-checkable transcript.

Non-sliceness comes from the quotient obstruction: were the knot slice,
both quotient knots would be slice in the quotient 4-manifold; quotient
knots matching the shipped database of knots not slice there yield a
NotSlice verdict.
"""

from __future__ import annotations

from . import data_text
from .laurent import LaurentPolynomial, format_jones, parse_jones
from .linkdiag import linking_matrix, mirror
from .invariants import (
    PROVEN_UNKNOT,
    goeritz_split,
    jones,
    try_unknot,
)
from .symdiag import (
    FoldError,
    SymmetryError,
    TYPE_A,
    TYPE_B_MINUS,
    TYPE_B_PLUS,
    TYPE_C,
    UnknottingSequence,
    equivariant_unknotting_search,
    quotient,
    require_valid,
)
from .eqtree import (
    EquivariantTree,
    BipartitionedTree,
    associated_si_link,
    prune_to_size,
    tree_type,
)
from .plumbing import (
    AMBIENTS,
    ImmersedSurfaceBudget,
    PlumbingError,
    builtin_plumbings_for_ambient,
    capacity_check,
    derive_embedded_tree,
    plumbing_type,
    require_valid_plumbing,
)

AS_STATED = "as-stated"
MIRRORED = "mirrored"
DEFAULT_CONVENTION = AS_STATED

SLICE = "Slice"
NOT_SLICE = "NotSlice"
INCONCLUSIVE = "Inconclusive"


class SoundnessError(Exception):
    """Both a certificate and an obstruction fired for the same input."""


def mirror_type(t):
    if t == TYPE_B_PLUS:
        return TYPE_B_MINUS
    if t == TYPE_B_MINUS:
        return TYPE_B_PLUS
    return t


def mirror_tree(et):
    """Same tree with B+ and B- weights exchanged."""
    return EquivariantTree(
        et.base,
        et.rho,
        {v: mirror_type(w) for v, w in et.weights.items()},
    )


class ImmersedDiskDescriptor:
    """Self-intersection data of the disk traced by an unknotting sequence.

    Each A move contributes a pair of type-A intersections, each on-axis
    move a single one, so k = 2 * #A + #(B or C).  Eligibility for the
    tubing criterion requires at most one non-A move.
    """

    def __init__(self, sequence):
        self.sequence = sequence
        self.types = sequence.type_multiset()
        self.k = sequence.k_total

    @property
    def non_a_types(self):
        return [t for t in self.types if t != TYPE_A]

    @property
    def eligible(self):
        return len(self.non_a_types) <= 1

    @property
    def omega(self):
        non_a = self.non_a_types
        return non_a[0] if non_a else None

    def describe(self):
        return "k=%d types=[%s]" % (self.k, ",".join(self.types) or "-")

    def __repr__(self):
        return "ImmersedDiskDescriptor(%s)" % self.describe()


def disk_from_sequence(seq):
    return ImmersedDiskDescriptor(seq)


class Rejection:
    def __init__(self, clause, message):
        self.clause = clause  # "i" | "ii" | "iii" | "eligibility"
        self.message = message

    def __repr__(self):
        return "Rejection(clause %s: %s)" % (self.clause, self.message)


class Certificate:
    """Verified tubing-construction transcript.

    ``tree`` is None exactly for embedded disks (k = 0), where no plumbing
    is consumed.  Construction re-checks every claim and raises on any
    internal inconsistency.
    """

    def __init__(self, disk, plumbing, pruned_tree, embedding, convention,
                 transcript, knot=None):
        self.disk = disk
        self.plumbing = plumbing
        self.tree = pruned_tree
        self.embedding = embedding
        self.convention = convention
        self.transcript = tuple(transcript)
        self.knot = knot
        self._verify()

    def _verify(self):
        if self.disk.k == 0:
            return
        require_valid_plumbing(self.plumbing)
        errors = self.tree.validate()
        if errors:
            raise SoundnessError("certificate tree invalid: %s" % errors)
        if len(self.tree.base.vertices) != self.disk.k:
            raise SoundnessError("certificate tree size != k")
        omega = tree_type(self.tree)
        if omega != plumbing_type(self.plumbing):
            raise SoundnessError("certificate tree type != plumbing type")
        disk_side = (
            self.tree if self.convention == AS_STATED else mirror_tree(self.tree)
        )
        budget = ImmersedSurfaceBudget(
            sum(1 for t in self.disk.types if t == TYPE_A) // 2,
            self.disk.omega,
        )
        cap = capacity_check(budget, disk_side)
        if cap != "ok":
            raise SoundnessError("disk-side capacity check failed: %s" % cap)
        # Diagram-level shadow of the mirror-boundary hypothesis: both
        # boundary links have the same component count and the same
        # unsigned linking data.
        d1 = associated_si_link(self.tree).base
        d2 = mirror(associated_si_link(disk_side).base)
        if d1.n_components != d2.n_components:
            raise SoundnessError("boundary links differ in component count")
        flat1 = sorted(abs(x) for row in linking_matrix(d1) for x in row)
        flat2 = sorted(abs(x) for row in linking_matrix(d2) for x in row)
        if flat1 != flat2:
            raise SoundnessError("boundary links differ in linking data")

    def as_lines(self):
        lines = ["certificate:"]
        lines.append("  convention: %s" % self.convention)
        lines.append("  disk: %s" % self.disk.describe())
        if self.tree is None:
            lines.append("  construction: embedded disk, no tubing needed")
        else:
            lines.append(
                "  plumbing: %d spheres, type %s"
                % (self.plumbing.n_spheres, plumbing_type(self.plumbing))
            )
            lines.append(
                "  tree: %d vertices, type %s"
                % (len(self.tree.base.vertices), tree_type(self.tree))
            )
            lines.append(
                "  embedding: %s"
                % " ".join(
                    "%s->%s" % (v, self.embedding[v])
                    for v in sorted(self.embedding)
                )
            )
        for step in self.transcript:
            lines.append("  step: %s" % step)
        return lines


class Verdict:
    def __init__(self, conclusion, ambient_tag, detail, certificate=None,
                 evidence=None):
        self.conclusion = conclusion
        self.ambient_tag = ambient_tag
        self.detail = detail
        self.certificate = certificate
        self.evidence = evidence

    def as_lines(self):
        lines = [
            "verdict: %s" % self.conclusion,
            "ambient: %s" % self.ambient_tag,
            "detail: %s" % self.detail,
        ]
        if self.evidence:
            for k in sorted(self.evidence):
                lines.append("evidence %s: %s" % (k, self.evidence[k]))
        if self.certificate:
            lines.extend(self.certificate.as_lines())
        return lines

    def __repr__(self):
        return "Verdict(%s)" % self.conclusion


# -- tubing criterion ---------------------------------------------------

def check_tubing(disk, pt, convention=DEFAULT_CONVENTION, knot=None):
    """Certificate or Rejection for a disk descriptor against a plumbing.

    Accepts when (i) k <= n-1, (ii) the single non-A intersection matches
    the plumbing type under the chosen convention, and (iii) the rest are
    type A.  k = 0 disks are embedded and accepted outright.
    """
    if convention not in (AS_STATED, MIRRORED):
        raise ValueError("unknown convention %r" % convention)
    if not disk.eligible:
        return Rejection(
            "eligibility",
            "disk has %d non-A intersections; at most 1 allowed"
            % len(disk.non_a_types),
        )
    if disk.k == 0:
        return Certificate(
            disk, None, None, None, convention,
            ["embedded disk from the empty unknotting sequence"],
            knot=knot,
        )
    require_valid_plumbing(pt)
    n = pt.n_spheres
    if disk.k > n - 1:
        return Rejection(
            "i", "k=%d exceeds n-1=%d for the %d-sphere plumbing"
            % (disk.k, n - 1, n)
        )
    omega_plumbing = plumbing_type(pt)
    expected = (
        omega_plumbing if convention == AS_STATED else mirror_type(omega_plumbing)
    )
    if disk.omega is None:
        return Rejection(
            "ii", "disk has no %s intersection (all type A)" % expected
        )
    if disk.omega != expected:
        return Rejection(
            "ii",
            "disk type %s does not match plumbing type %s under %s"
            % (disk.omega, omega_plumbing, convention),
        )
    extra = [t for t in disk.types if t not in (TYPE_A, disk.omega)]
    if extra:
        return Rejection("iii", "extra non-A intersections %s" % extra)

    full_tree, embedding = derive_embedded_tree(pt)
    transcript = [
        "derived equivariant tree with %d vertices from the %d-sphere plumbing"
        % (len(full_tree.base.vertices), n),
    ]
    pruned = prune_to_size(full_tree, disk.k)
    transcript.append(
        "pruned paired A leaves down to %d vertices" % disk.k
    )
    sub_embedding = {
        v: embedding[v] for v in pruned.base.vertices
    }
    if convention == MIRRORED:
        transcript.append(
            "disk-side tree mirrored (B+/B- exchanged) per convention"
        )
    transcript.append(
        "boundary links of both embeddings realize the associated "
        "strongly invertible link; tubing removes the %d intersections"
        % disk.k
    )
    return Certificate(
        disk, pt, pruned, sub_embedding, convention, transcript, knot=knot
    )


# -- quotient obstruction -------------------------------------------------

class ObstructionEntry:
    def __init__(self, name, jones_poly, det, citation):
        self.name = name
        self.jones = jones_poly
        self.det = det
        self.citation = citation


def load_obstruction_db(text=None):
    """Knots not slice in the standard-orientation quotient manifold.

    File rows: ``name | jones | determinant | citation``.  The Jones key
    is stored for the chirality that is obstructed in CP2 with its
    standard orientation; matching against the mirror quotient manifold
    mirrors the key.
    """
    if text is None:
        text = data_text("nonslice_cp2.txt")
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 4:
            raise ValueError("bad obstruction row %r" % line)
        entries.append(
            ObstructionEntry(
                parts[0], parse_jones(parts[1]), int(parts[2]), parts[3]
            )
        )
    return entries


def quotient_obstruction(sd, ambient, db=None):
    """Verdict from the two quotient knots against the obstruction database.

    Only ambients whose quotient tag carries a database (CP2 with either
    orientation) can return NotSlice; everything else is Inconclusive.
    """
    require_valid(sd)
    if ambient.sphere_component() is None:
        return Verdict(
            INCONCLUSIVE, ambient.tag,
            "ambient has no sphere component in its fixed surface",
        )
    if ambient.quotient_tag == "CP2":
        chirality = 1
    elif ambient.quotient_tag == "CP2_mirror":
        chirality = -1
    else:
        return Verdict(
            INCONCLUSIVE, ambient.tag,
            "no obstruction database for quotient tag %r" % ambient.quotient_tag,
        )
    if db is None:
        db = load_obstruction_db()
    quotients = {}
    for half in ("h1", "h2"):
        quotients[half] = quotient(sd, half)
    for half, q in quotients.items():
        vq = jones(q)
        dq = goeritz_split(q)[0]
        for entry in db:
            key = entry.jones if chirality > 0 else entry.jones.substituted_inverse()
            if vq == key and dq == entry.det:
                return Verdict(
                    NOT_SLICE, ambient.tag,
                    "quotient knot along %s matches a knot not slice in the "
                    "quotient manifold" % half,
                    evidence={
                        "half": half,
                        "entry": entry.name,
                        "citation": entry.citation,
                        "jones": format_jones(vq),
                        "determinant": str(dq),
                    },
                )
    return Verdict(
        INCONCLUSIVE, ambient.tag,
        "neither quotient matches the obstruction database",
    )


# -- full pipeline -----------------------------------------------------------

def adjudicate(sd, ambient_tag, search_budget=6,
               convention=DEFAULT_CONVENTION, db=None):
    """Obstruction first, then certificate searches over builtin plumbings.

    Both branches always run; a certificate and an obstruction firing
    together is a hard soundness error.  Budget exhaustion yields
    Inconclusive.
    """
    if ambient_tag not in AMBIENTS:
        raise PlumbingError("unknown ambient tag %r" % ambient_tag)
    ambient = AMBIENTS[ambient_tag]
    require_valid(sd)
    if sd.base.n_components != 1:
        raise SymmetryError("adjudication requires a strongly invertible knot")

    obstruction = quotient_obstruction(sd, ambient, db=db)

    certificate = None
    if try_unknot(sd.base) == PROVEN_UNKNOT:
        certificate = check_tubing(
            disk_from_sequence(UnknottingSequence(())),
            None,
            convention,
            knot=sd,
        )
    else:
        for pt in builtin_plumbings_for_ambient(ambient_tag, max_n=search_budget):
            omega = plumbing_type(pt)
            wanted = omega if convention == AS_STATED else mirror_type(omega)
            max_moves = min(search_budget, pt.n_spheres - 1)
            seq = equivariant_unknotting_search(
                sd, max_moves, allowed_types=(TYPE_A, wanted)
            )
            if seq is None:
                continue
            disk = disk_from_sequence(seq)
            result = check_tubing(disk, pt, convention, knot=sd)
            if isinstance(result, Certificate):
                certificate = result
                break

    if certificate is not None and obstruction.conclusion == NOT_SLICE:
        raise SoundnessError(
            "certificate and obstruction both fired for %s" % ambient_tag
        )
    if obstruction.conclusion == NOT_SLICE:
        return obstruction
    if certificate is not None:
        return Verdict(
            SLICE, ambient_tag,
            "tubing certificate constructed", certificate=certificate,
        )
    return Verdict(
        INCONCLUSIVE, ambient_tag,
        "no obstruction fired and no certificate found within budget %d"
        % search_budget,
    )
