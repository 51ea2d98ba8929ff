"""Exact classical invariants used as verification oracles.

Kauffman bracket and Jones polynomial by direct state sum, determinant and
signature from the Goeritz matrix with the Gordon-Litherland correction,
Arf from the determinant, and a bounded Reidemeister search for unknot
recognition.

Sign conventions: A-smoothings join slots (0,1) and (2,3); Jones uses
A = t^(-1/4), so the right-handed trefoil gets -t^4 + t^3 + t and
signature -2.
"""

from __future__ import annotations

import os
from collections import deque
from fractions import Fraction

from .laurent import LaurentPolynomial, format_jones
from . import linkdiag
from .linkdiag import (
    DiagramError,
    LinkDiagram,
    apply_r1_remove,
    apply_r2_remove,
    apply_r3,
    canonical_key,
    corner_faces,
    is_connected,
    is_planar,
    mirror,
    r1_sites,
    r2_sites,
    r3_sites,
    split_pieces,
)

DEFAULT_STATE_SUM_LIMIT = 24
STATE_SUM_LIMIT_ENV = "EQSLICE_STATESUM_LIMIT"

PROVEN_UNKNOT = "ProvenUnknot"
PROVEN_KNOTTED = "ProvenKnotted"
UNKNOWN = "Unknown"


class LimitExceeded(Exception):
    """State-sum crossing limit exceeded."""


def state_sum_limit():
    value = os.environ.get(STATE_SUM_LIMIT_ENV)
    return int(value) if value else DEFAULT_STATE_SUM_LIMIT


def kauffman_bracket(diagram, limit=None):
    """Bracket polynomial in A, normalized so one loop evaluates to 1.

    Sums over all 2^n smoothings, counting loops with a small union-find;
    free loops contribute extra delta = -A^2 - A^(-2) factors.
    """
    n = diagram.n_crossings
    cap = limit if limit is not None else state_sum_limit()
    if n > cap:
        raise LimitExceeded(
            "diagram has %d crossings; state-sum limit is %d" % (n, cap)
        )
    if n == 0:
        loops = diagram.free_loops
        if loops == 0:
            return LaurentPolynomial.zero()
        return _delta_power(loops - 1)

    index = {}
    for c in diagram.crossings:
        for s in range(4):
            index[(c.id, s)] = len(index)
    edge_joins = []
    for e, (a, b) in diagram.occ.items():
        edge_joins.append((index[a], index[b]))
    cross_ids = [c.id for c in diagram.crossings]
    a_joins = []
    b_joins = []
    for c in diagram.crossings:
        base = index[(c.id, 0)]
        a_joins.append((base, base + 1, base + 2, base + 3))
        b_joins.append((base + 1, base + 2, base + 3, base))

    size = 4 * n
    counts = {}
    for state in range(1 << n):
        parent = list(range(size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merges = 0
        exp = 0
        for i in range(n):
            if state >> i & 1:
                p, q, r, s = b_joins[i]
                exp -= 1
            else:
                p, q, r, s = a_joins[i]
                exp += 1
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[rp] = rq
                merges += 1
            rr, rs = find(r), find(s)
            if rr != rs:
                parent[rr] = rs
                merges += 1
        for p, q in edge_joins:
            rp, rq = find(p), find(q)
            if rp != rq:
                parent[rp] = rq
                merges += 1
        loops = size - merges
        key = (exp, loops)
        counts[key] = counts.get(key, 0) + 1

    total = LaurentPolynomial.zero()
    for (exp, loops), mult in counts.items():
        term = _delta_power(loops - 1 + diagram.free_loops).shifted(exp) * mult
        total = total + term
    return total


def _delta_power(k):
    """(-A^2 - A^-2)^k."""
    if k < 0:
        raise ValueError("negative delta power")
    return LaurentPolynomial({2: -1, -2: -1}) ** k


def jones(diagram, limit=None):
    """Jones polynomial in integer powers of t^(1/2), via A = t^(-1/4).

    The writhe normalization multiplies the bracket by (-A^3)^(-w); bracket
    exponent a then maps to t^(1/2)-exponent -a/2.
    """
    bracket = kauffman_bracket(diagram, limit=limit)
    w = diagram.writhe()
    sign = -1 if w % 2 else 1
    coeffs = {}
    for a_exp, coef in bracket.coeffs.items():
        shifted = a_exp - 3 * w
        if shifted % 2:
            raise DiagramError("bracket parity broken; internal error")
        coeffs[-shifted // 2] = sign * coef
    return LaurentPolynomial(coeffs)


def determinant_from_jones(poly):
    """|V(-1)| via t^(1/2) = i; the value is a Gaussian integer on an axis."""
    re, im = poly.evaluate_at_i()
    if re and im:
        raise DiagramError("Jones value at t=-1 is off-axis; internal error")
    return abs(re) + abs(im)


# -- Goeritz matrix and Gordon-Litherland signature -------------------------

def _checkerboard(diagram):
    """2-colouring of faces; corners opposite at a crossing share a colour.

    Which colour class plays "white" is immaterial: the signature formula
    below is Gordon-Litherland for whichever spanning surface the choice
    picks, and both evaluate to the link signature.
    """
    fs, where = corner_faces(diagram)
    colour = {}
    adj = [set() for _ in fs]
    for c in diagram.crossings:
        ids = [where[(c.id, k)] for k in range(4)]
        for k in range(4):
            adj[ids[k]].add(ids[(k + 1) % 4])
            adj[ids[(k + 1) % 4]].add(ids[k])
    start = 0
    colour[start] = 0
    stack = [start]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g in colour:
                if colour[g] == colour[f]:
                    raise DiagramError("faces are not checkerboard colourable")
            else:
                colour[g] = 1 - colour[f]
                stack.append(g)
    for f in range(len(fs)):
        if f not in colour:
            colour[f] = 0
    white_mark = colour[0]
    white = {f for f, col in colour.items() if col == white_mark}
    return fs, where, white


def _sign_of_symmetric_matrix(rows):
    """Signature of a symmetric integer matrix by exact congruence pivoting."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and m[i][j] != 0),
                None,
            )
            if pair is None:
                break  # remaining block is zero
            i, j = pair
            # Congruence row/col i += row/col j turns the zero diagonal
            # entry into 2*m[i][j] != 0.
            for s in range(n):
                m[i][s] += m[j][s]
            for s in range(n):
                m[s][i] += m[s][j]
            continue
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for r in list(active):
            f = m[r][piv] / d
            if f:
                for s in range(n):
                    m[r][s] -= f * m[piv][s]
                for s in range(n):
                    m[s][r] -= f * m[s][piv]
    return pos - neg


def _det_int(rows):
    """Exact integer determinant by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] / m[col][col]
            for s in range(col, n):
                m[r][s] -= f * m[col][s]
    assert det.denominator == 1
    return int(det)


def goeritz(diagram):
    """(determinant, signature) from the white-region Goeritz form.

    eta(c) is +1 when the white corners at c are the pair merged by the
    B-smoothing (corners 0 and 2) and -1 otherwise; the correction term
    subtracts eta over type II crossings, the ones whose strands run
    parallel through the white channel.  Parallel is equivalent to
    (positive and white on corners 0,2) or (negative and white on 1,3).
    """
    if diagram.free_loops and diagram.crossings:
        raise DiagramError("goeritz needs a connected diagram")
    if not diagram.crossings:
        if diagram.free_loops != 1:
            raise DiagramError("goeritz needs a connected diagram")
        return 1, 0
    if not is_connected(diagram):
        raise DiagramError("goeritz needs a connected diagram")
    if not is_planar(diagram):
        raise DiagramError("diagram is not planar")

    fs, where, white = _checkerboard(diagram)
    whites = sorted(white)
    w_index = {f: i for i, f in enumerate(whites)}
    m = len(whites)
    G = [[0] * m for _ in range(m)]
    mu = 0
    for c in diagram.crossings:
        corners = [where[(c.id, k)] for k in range(4)]
        if corners[0] in white:
            pair = (corners[0], corners[2])
            white_on_02 = True
        else:
            pair = (corners[1], corners[3])
            white_on_02 = False
        eta = 1 if white_on_02 else -1
        i, j = w_index[pair[0]], w_index[pair[1]]
        # Crossings with both white corners in one region never enter the
        # Goeritz form (only the orientation correction below sees them).
        if i != j:
            G[i][j] -= eta
            G[j][i] -= eta
            G[i][i] += eta
            G[j][j] += eta
        positive = diagram.signs[c.id] > 0
        parallel = positive == white_on_02
        if parallel:
            mu += eta
    # Discard the row/column of one white region (the first).
    reduced = [row[1:] for row in G[1:]]
    det = abs(_det_int(reduced))
    sig = _sign_of_symmetric_matrix(reduced) - mu
    return det, sig


def signature(diagram):
    return goeritz(diagram)[1]


def determinant(diagram):
    return goeritz(diagram)[0]


def arf(diagram):
    """Arf invariant of a knot: 0 iff determinant is +-1 mod 8."""
    if diagram.n_components != 1:
        raise DiagramError("arf is defined for knots only")
    det, _ = goeritz_split(diagram)
    return 0 if det % 8 in (1, 7) else 1


def goeritz_split(diagram):
    """(determinant, signature) routed through connected pieces.

    A split diagram has determinant 0; signatures add over pieces.
    """
    pieces = split_pieces(diagram)
    if not pieces:
        raise DiagramError("empty diagram")
    if len(pieces) == 1:
        return goeritz(pieces[0])
    sig = 0
    for p in pieces:
        sig += goeritz(p)[1]
    return 0, sig


# -- bounded unknot recognition ---------------------------------------------

def _simplify_neighbors(diagram):
    """Diagrams reachable by one crossing-removing or R3 rewrite."""
    out = []
    for cid in r1_sites(diagram):
        out.append(apply_r1_remove(diagram, cid))
    for c1, c2 in r2_sites(diagram):
        out.append(apply_r2_remove(diagram, c1, c2))
    for walk, e in r3_sites(diagram):
        try:
            out.append(apply_r3(diagram, walk, e))
        except DiagramError:
            pass
    return out


def reduce_diagram(diagram, budget=2000):
    """Greedy-but-complete bounded search for a small equivalent diagram.

    Breadth-first over R1-, R2- and R3 rewrites; returns the smallest
    diagram found (by crossing count).
    """
    start_key = canonical_key(diagram)
    seen = {start_key}
    queue = deque([diagram])
    best = diagram
    expanded = 0
    while queue and expanded < budget:
        d = queue.popleft()
        expanded += 1
        for nxt in _simplify_neighbors(d):
            key = canonical_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            if nxt.n_crossings < best.n_crossings:
                best = nxt
            if nxt.n_crossings == 0:
                return nxt
            queue.append(nxt)
    return best


def try_unknot(diagram, budget=2000):
    """ProvenUnknot / ProvenKnotted / Unknown for a knot diagram.

    ProvenUnknot when a bounded Reidemeister rewrite sequence reaches a
    crossing-free diagram; ProvenKnotted when the Jones polynomial differs
    from 1; otherwise Unknown.
    """
    if diagram.n_components != 1:
        raise DiagramError("try_unknot is defined for knots only")
    reduced = reduce_diagram(diagram, budget=budget)
    if reduced.n_crossings == 0:
        return PROVEN_UNKNOT
    try:
        v = jones(reduced)
    except LimitExceeded:
        return UNKNOWN
    if v != LaurentPolynomial.one():
        return PROVEN_KNOTTED
    return UNKNOWN


# -- report -------------------------------------------------------------

class InvariantReport:
    """Bundle of invariants with the determinant cross-check applied."""

    def __init__(self, jones_poly, det, sig, arf_value, unknot_status):
        self.jones = jones_poly
        self.determinant = det
        self.signature = sig
        self.arf = arf_value
        self.unknot_status = unknot_status

    def as_lines(self):
        lines = [
            "jones: %s" % format_jones(self.jones),
            "determinant: %d" % self.determinant,
            "signature: %d" % self.signature,
        ]
        lines.append("arf: %s" % ("-" if self.arf is None else self.arf))
        lines.append(
            "unknot_status: %s"
            % ("-" if self.unknot_status is None else self.unknot_status)
        )
        return lines


def invariant_report(diagram, unknot_budget=2000, limit=None):
    v = jones(diagram, limit=limit)
    det, sig = goeritz_split(diagram)
    det_check = determinant_from_jones(v)
    if det != det_check:
        raise DiagramError(
            "determinant cross-check failed: goeritz %d vs jones %d"
            % (det, det_check)
        )
    arf_value = None
    status = None
    if diagram.n_components == 1:
        arf_value = 0 if det % 8 in (1, 7) else 1
        status = try_unknot(diagram, budget=unknot_budget)
    return InvariantReport(v, det, sig, arf_value, status)
