import random

import pytest

from eqslice import data_text
from eqslice.linkdiag import (
    DiagramError,
    LinkDiagram,
    ParseError,
    apply_r1_remove,
    apply_r2_add,
    apply_r2_remove,
    apply_r3,
    canonical_key,
    connect_sum,
    crossing_change,
    faces,
    format_pd,
    is_planar,
    linking_matrix,
    mirror,
    parse_pd,
    parse_pd_file,
    r1_add_variants,
    r1_sites,
    r2_add_candidates,
    r2_sites,
    r3_sites,
    reverse,
)

TREFOIL = "PD[X(1,3,4,2), X(3,5,6,4), X(5,1,2,6)]"
HOPF = "PD[X(1,3,4,2), X(3,1,2,4)]"
FIG8 = "PD[X(4,2,5,1), X(8,6,1,5), X(6,3,7,4), X(2,7,3,8)]"


def corpus():
    names = ("trefoil_right.pd", "trefoil_left.pd", "fig8.pd",
             "hopf_pos.pd", "hopf_neg.pd", "t25.pd")
    return [parse_pd_file(data_text(n))[None] for n in names]


def test_parse_free_loop_unknot():
    d = parse_pd("PD[O]")
    assert d.n_components == 1
    assert d.n_crossings == 0
    assert format_pd(d) == "PD[O]"


def test_parse_empty():
    d = parse_pd("PD[]")
    assert d.n_components == 0


def test_parse_hopf_components():
    d = parse_pd(HOPF)
    assert d.n_components == 2
    assert all(s == 1 for s in d.signs.values())


def test_parse_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_pd("PD[X(1,2,3)]")
    assert exc.value.position is not None


def test_parse_edge_used_three_times():
    with pytest.raises(ParseError):
        parse_pd("PD[X(1,1,1,2), X(2,3,3,4), X(4,5,5,6)]")


def test_parse_named_blocks():
    entries = parse_pd_file("a: PD[O]\n# comment\nb: " + HOPF)
    assert set(entries) == {"a", "b"}
    assert entries["b"].n_components == 2


def test_mirror_involution_and_signs():
    for d in corpus():
        m = mirror(d)
        assert mirror(m) == d
        assert all(m.signs[c] == -d.signs[c] for c in d.signs)


def test_mirror_negates_linking():
    for d in corpus():
        lm = linking_matrix(d)
        lmm = linking_matrix(mirror(d))
        assert lmm == [[-x for x in row] for row in lm]


def test_crossing_change_involution():
    d = parse_pd(TREFOIL)
    for cid in d.by_id:
        assert crossing_change(crossing_change(d, cid), cid) == d
    with pytest.raises(DiagramError):
        crossing_change(d, 99)


def test_reverse_involution():
    d = parse_pd(FIG8)
    assert reverse(reverse(d)) == d
    assert reverse(d).signs == d.signs  # reversing everything keeps signs


def test_connect_sum_counts():
    h = parse_pd(HOPF)
    s = connect_sum(h, 0, h, 0)
    assert s.n_components == h.n_components * 2 - 1 == 3
    assert s.n_crossings == 4
    lm = linking_matrix(s)
    flat = sorted(abs(x) for row in lm for x in row)
    assert flat == [0, 0, 0, 0, 0, 1, 1, 1, 1]


def test_connect_sum_with_unknot_factor():
    u = parse_pd("PD[O]")
    t = parse_pd(TREFOIL)
    assert connect_sum(u, 0, t, 0).n_components == 1
    assert connect_sum(t, 0, u, 0) == t
    with pytest.raises(DiagramError):
        connect_sum(t, 3, u, 0)


def test_linking_unlink():
    d = parse_pd("PD[O, O]")
    assert linking_matrix(d) == [[0, 0], [0, 0]]


def test_faces_euler():
    t = parse_pd(TREFOIL)
    assert len(faces(t)) == 5
    assert is_planar(t)
    assert not is_planar(parse_pd("PD[X(1,2,1,2)]"))


def test_r1_machinery():
    kink = parse_pd("PD[X(1,2,2,1)]")
    assert r1_sites(kink) == [1]
    out = apply_r1_remove(kink, 1)
    assert out.n_crossings == 0 and out.free_loops == 1
    # adding kinks preserves component count and raises crossing count
    t = parse_pd(TREFOIL)
    for v in r1_add_variants(t, 1):
        assert v.n_components == 1
        assert v.n_crossings == 4
        assert len(r1_sites(v)) >= 1


def test_r2_add_then_remove():
    t = parse_pd(TREFOIL)
    cands = r2_add_candidates(t, max_results=10)
    assert cands
    bigger = apply_r2_add(t, cands[0][0], cands[0][1], x_over=True)
    assert bigger.n_crossings == 5
    assert bigger.n_components == 1
    assert is_planar(bigger)
    sites = r2_sites(bigger)
    assert sites
    back = apply_r2_remove(bigger, *sites[0])
    assert back.n_crossings in (3, 1)


def test_r3_preserves_structure():
    # the 2-braid trefoil has only two local strands and no R3 site
    assert r3_sites(parse_pd(TREFOIL)) == []
    # drive corpus diagrams through random rewrites and exercise every
    # non-degenerate R3 site encountered
    from eqslice.cli import _random_move

    rng = random.Random(11)
    applied = 0
    for d in corpus():
        cur = d
        for _ in range(60):
            cur = _random_move(cur, rng, max_crossings=9)
            for walk, edge in r3_sites(cur):
                try:
                    moved = apply_r3(cur, walk, edge)
                except DiagramError:
                    continue
                applied += 1
                assert moved.n_crossings == cur.n_crossings
                assert moved.n_components == cur.n_components
                assert is_planar(moved)
                assert sorted(moved.signs.values()) == sorted(
                    cur.signs.values()
                )
    assert applied >= 5, "too few R3 sites exercised (%d)" % applied


def test_random_moves_preserve_components(seed=4):
    rng = random.Random(seed)
    from eqslice.cli import _random_move

    for d in corpus():
        cur = d
        for _ in range(40):
            cur = _random_move(cur, rng, max_crossings=9)
            assert cur.n_components == d.n_components
            assert is_planar(cur)


def test_canonical_key_invariant_under_relabeling():
    t1 = parse_pd(TREFOIL)
    # same diagram with shifted edge labels
    t2 = parse_pd("PD[X(2,4,5,3), X(4,6,1,5), X(6,2,3,1)]")
    assert canonical_key(t1) == canonical_key(t2)
    assert canonical_key(t1) != canonical_key(mirror(t1))
