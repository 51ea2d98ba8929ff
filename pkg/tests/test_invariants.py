import os

import pytest

from eqslice import data_text
from eqslice.laurent import LaurentPolynomial
from eqslice.linkdiag import connect_sum, mirror, parse_pd, parse_pd_file
from eqslice.invariants import (
    DiagramError,
    LimitExceeded,
    PROVEN_KNOTTED,
    PROVEN_UNKNOT,
    UNKNOWN,
    arf,
    determinant_from_jones,
    goeritz,
    goeritz_split,
    invariant_report,
    jones,
    kauffman_bracket,
    try_unknot,
)

from oracles import skein_bracket

UNKNOT = parse_pd("PD[O]")
TREFOIL_R = parse_pd(data_text("trefoil_right.pd").splitlines()[-1])
TREFOIL_L = parse_pd(data_text("trefoil_left.pd").splitlines()[-1])
FIG8 = parse_pd(data_text("fig8.pd").splitlines()[-1])
HOPF_P = parse_pd(data_text("hopf_pos.pd").splitlines()[-1])
HOPF_N = parse_pd(data_text("hopf_neg.pd").splitlines()[-1])
T25 = parse_pd(data_text("t25.pd").splitlines()[-1])

CORPUS = [UNKNOT, TREFOIL_R, TREFOIL_L, FIG8, HOPF_P, HOPF_N, T25]

# Frozen Jones values (exponents count powers of t^(1/2)):
#   right trefoil: t + t^3 - t^4, figure-eight: t^-2 - t^-1 + 1 - t + t^2,
#   left (2,5) torus knot: -t^-7 + t^-6 - t^-5 + t^-4 + t^-2.
V_TREFOIL_R = LaurentPolynomial({2: 1, 6: 1, 8: -1})
V_FIG8 = LaurentPolynomial({-4: 1, -2: -1, 0: 1, 2: -1, 4: 1})
V_T25_L = LaurentPolynomial({-14: -1, -12: 1, -10: -1, -8: 1, -4: 1})


def test_bracket_normalization():
    assert kauffman_bracket(UNKNOT) == LaurentPolynomial.one()
    two_loops = parse_pd("PD[O, O]")
    assert kauffman_bracket(two_loops) == LaurentPolynomial({2: -1, -2: -1})


def test_bracket_hopf_hand_value():
    # 4-term state sum: A^2 delta + 2 + A^-2 delta = -A^4 - A^-4
    assert kauffman_bracket(HOPF_P) == LaurentPolynomial({4: -1, -4: -1})


def test_bracket_matches_skein_oracle():
    for d in CORPUS:
        assert kauffman_bracket(d) == skein_bracket(d), d


def test_jones_values():
    assert jones(UNKNOT) == LaurentPolynomial.one()
    assert jones(TREFOIL_R) == V_TREFOIL_R
    assert jones(FIG8) == V_FIG8
    assert jones(T25) == V_T25_L


def test_jones_mirror_relation():
    for d in CORPUS:
        assert jones(mirror(d)) == jones(d).substituted_inverse()


def test_jones_multiplicative_under_connect_sum():
    granny = connect_sum(TREFOIL_R, 0, TREFOIL_R, 0)
    assert jones(granny) == V_TREFOIL_R * V_TREFOIL_R
    square = connect_sum(TREFOIL_R, 0, TREFOIL_L, 0)
    assert jones(square) == V_TREFOIL_R * jones(TREFOIL_L)


def test_determinant_from_jones():
    assert determinant_from_jones(V_TREFOIL_R) == 3
    assert determinant_from_jones(V_FIG8) == 5
    assert determinant_from_jones(jones(HOPF_P)) == 2


def test_goeritz_values():
    # Hand-built data: the braid trefoil's white regions are the outer face
    # and the two column bigons; each crossing has eta = -1, giving the
    # reduced matrix [[-2, 1], [1, -2]] (det 3, signature -2) with no
    # orientation correction.
    assert goeritz(UNKNOT) == (1, 0)
    assert goeritz(TREFOIL_R) == (3, -2)
    assert goeritz(TREFOIL_L) == (3, 2)
    assert goeritz(FIG8) == (5, 0)
    assert goeritz(HOPF_P) == (2, -1)
    assert goeritz(HOPF_N) == (2, 1)
    assert goeritz(T25) == (5, 4)


def test_goeritz_kink_invariance():
    # nugatory crossings must not shift the signature (correction term)
    from eqslice.linkdiag import r1_add_variants

    for d in (TREFOIL_R, FIG8, HOPF_P):
        base = goeritz(d)
        for v in r1_add_variants(d, min(d.occ)):
            assert goeritz(v) == base


def test_goeritz_split_routing():
    assert goeritz_split(parse_pd("PD[O, O]")) == (0, 0)
    split = parse_pd(
        "PD[X(1,3,4,2), X(3,5,6,4), X(5,1,2,6), O]"
    )
    assert split.n_components == 2
    assert goeritz_split(split) == (0, -2)
    with pytest.raises(DiagramError):
        goeritz(split)


def test_signature_mirror_antisymmetry():
    for d in CORPUS:
        if d.crossings:
            s = goeritz_split(d)[1]
            sm = goeritz_split(mirror(d))[1]
            assert sm == -s


def test_arf():
    assert arf(UNKNOT) == 0
    assert arf(TREFOIL_R) == 1  # det 3
    assert arf(FIG8) == 1      # det 5
    assert arf(T25) == 1
    with pytest.raises(DiagramError):
        arf(HOPF_P)


def test_try_unknot():
    kinked = parse_pd("PD[X(1,2,2,1)]")
    assert try_unknot(kinked) == PROVEN_UNKNOT
    assert try_unknot(TREFOIL_R) == PROVEN_KNOTTED
    # exhausted budget on a crossing diagram with trivial Jones
    assert try_unknot(kinked, budget=0) == UNKNOWN


def test_try_unknot_after_crossing_change():
    from eqslice.linkdiag import crossing_change

    for cid in TREFOIL_R.by_id:
        assert try_unknot(crossing_change(TREFOIL_R, cid)) == PROVEN_UNKNOT
    for cid in FIG8.by_id:
        assert try_unknot(crossing_change(FIG8, cid)) == PROVEN_UNKNOT


def test_state_sum_limit():
    with pytest.raises(LimitExceeded):
        kauffman_bracket(TREFOIL_R, limit=2)
    os.environ["EQSLICE_STATESUM_LIMIT"] = "2"
    try:
        with pytest.raises(LimitExceeded):
            kauffman_bracket(TREFOIL_R)
    finally:
        del os.environ["EQSLICE_STATESUM_LIMIT"]


def test_invariant_report_cross_checks():
    for d in CORPUS:
        rep = invariant_report(d)
        assert rep.determinant == determinant_from_jones(rep.jones)
    rep = invariant_report(FIG8)
    assert rep.unknot_status == PROVEN_KNOTTED
    assert rep.arf == 1
    lines = rep.as_lines()
    assert lines[1] == "determinant: 5"
