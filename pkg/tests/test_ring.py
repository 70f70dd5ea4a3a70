import math

import pytest
from hypothesis import given, strategies as st

from ybred.ring import (LaurentPoly, MultiPoly, RingError, RingMatrix, braid_permutation, embed, exact_div,
                        kronecker, qq, symmetric_projector)

SYMS = ("u", "v", "z")

coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polys(draw, laurent=False, max_terms=4):
    cls = LaurentPoly if laurent else MultiPoly
    lo = -2 if laurent else 0
    out = cls.const(0)
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(coef)
        powers = {s: draw(st.integers(lo, 3)) for s in draw(st.sets(st.sampled_from(SYMS), max_size=2))}
        out = out + cls.monomial(qq(c.numerator, c.denominator), powers)
    return out


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == MultiPoly.const(0)


@given(polys(laurent=True), polys(laurent=True))
def test_laurent_axioms(a, b):
    assert a * b == b * a
    assert (a + b) * a == a * a + b * a


@given(polys(), polys())
def test_exact_division_inverts_product(a, b):
    if not b:
        return
    assert exact_div(a * b, b) == a


@given(polys())
def test_text_round_trip(a):
    assert MultiPoly.parse(str(a)) == a


@given(polys(laurent=True))
def test_laurent_text_round_trip(a):
    assert LaurentPoly.parse(str(a)) == a


def test_rational_exponents_survive():
    q = LaurentPoly.var("q", qq(1, 2))
    assert q * q == LaurentPoly.var("q")
    assert LaurentPoly.parse(str(q)) == q


def test_exact_rational_coefficient():
    assert str(MultiPoly.const(qq(3, 2))) == "3/2"
    assert MultiPoly.parse("3/2") == MultiPoly.const(qq(3, 2))


def test_parse_error_has_position():
    with pytest.raises(RingError, match="position"):
        MultiPoly.parse("1*u + x/y*u")


def _m(rows):
    return RingMatrix([[MultiPoly.const(x) for x in r] for r in rows])


@given(st.integers(1, 3), st.integers(2, 3))
def test_symmetric_projector_is_idempotent(n, d):
    S = symmetric_projector(n, d)
    assert S @ S == S
    trace = sum(S.entries[i][i].constant_value() for i in range(S.rows))
    assert trace == math.comb(n + d - 1, n)


@given(st.integers(1, 3), st.integers(1, 3))
def test_braid_permutation_squares_to_identity(a, b):
    P = braid_permutation(a, b)
    assert braid_permutation(b, a) @ P == RingMatrix.identity(a * b)


@given(st.lists(st.lists(coef, min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.lists(coef, min_size=2, max_size=2), min_size=2, max_size=2))
def test_kronecker_mixed_product(A, B):
    A = _m([[qq(x.numerator, x.denominator) for x in r] for r in A])
    B = _m([[qq(x.numerator, x.denominator) for x in r] for r in B])
    assert kronecker(A, B) @ kronecker(B, A) == kronecker(A @ B, B @ A)


def test_embed_matches_kronecker_on_adjacent_legs():
    A = _m([[1, 2], [3, 4]])
    I = RingMatrix.identity(3)
    assert embed(A, (2, 3), (0,)) == kronecker(A, I)


def test_shape_mismatch_raises():
    with pytest.raises(RingError):
        _m([[1, 2]]) @ _m([[1, 2]])
