from hypothesis import given, strategies as st

from eqslice.laurent import (
    LaurentPolynomial,
    format_bracket,
    format_jones,
    parse_jones,
)

polys = st.dictionaries(
    st.integers(min_value=-12, max_value=12),
    st.integers(min_value=-9, max_value=9),
    max_size=6,
).map(LaurentPolynomial)


def test_basic_arithmetic():
    p = LaurentPolynomial({2: 1, 0: -3})
    q = LaurentPolynomial({-2: 2})
    assert (p + q).coeffs == {2: 1, 0: -3, -2: 2}
    assert (p - p).is_zero()
    assert (p * q).coeffs == {0: 2, -2: -6}
    assert (p * 0).is_zero()
    assert p * LaurentPolynomial.one() == p


def test_power_and_shift():
    delta = LaurentPolynomial({2: -1, -2: -1})
    assert delta ** 0 == LaurentPolynomial.one()
    assert delta ** 2 == LaurentPolynomial({4: 1, 0: 2, -4: 1})
    assert delta.shifted(3).coeffs == {5: -1, 1: -1}


def test_substituted_inverse_involution():
    p = LaurentPolynomial({3: 2, -1: 5})
    assert p.substituted_inverse().coeffs == {-3: 2, 1: 5}
    assert p.substituted_inverse().substituted_inverse() == p


def test_evaluate_at_i():
    # 1 + t^(1/2) with t^(1/2) = i
    p = LaurentPolynomial({0: 1, 1: 1})
    assert p.evaluate_at_i() == (1, 1)
    assert LaurentPolynomial({4: 1}).evaluate_at_i() == (1, 0)
    assert LaurentPolynomial({2: 1}).evaluate_at_i() == (-1, 0)


def test_format_and_parse_roundtrip():
    p = LaurentPolynomial({8: -1, 6: 1, 2: 1})
    text = format_jones(p)
    assert text == "1*t^(2/2) + 1*t^(6/2) - 1*t^(8/2)"
    assert parse_jones(text) == p
    assert format_bracket(LaurentPolynomial({4: -1, -4: -1})) == "-1*A^-4 - 1*A^4"
    assert format_jones(LaurentPolynomial()) == "0"
    assert parse_jones("0").is_zero()


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert p + LaurentPolynomial.zero() == p


@given(polys, polys)
def test_inverse_substitution_is_multiplicative(p, q):
    assert (p * q).substituted_inverse() == (
        p.substituted_inverse() * q.substituted_inverse()
    )
