import pytest
from hypothesis import given, strategies as st

from ybred.opalg import DiffOp, diffop_restrict, kills_generating_function, star_triangle_int
from ybred.ring import MultiPoly

z = MultiPoly.var("z")
zb = MultiPoly.var("zb")


@st.composite
def diffops(draw):
    terms = {}
    for k in range(draw(st.integers(0, 2)) + 1):
        terms[k] = MultiPoly.const(draw(st.integers(-3, 3))) * z ** draw(st.integers(0, 3))
    return DiffOp(terms)


@given(diffops(), diffops(), st.integers(0, 6))
def test_composition_is_action_composition(A, B, k):
    p = z ** k
    assert (A * B).act(p) == A.act(B.act(p))


@given(diffops(), diffops(), diffops())
def test_composition_associative(A, B, C):
    assert (A * B) * C == A * (B * C)


def test_commutator_of_d_and_z():
    assert DiffOp.d() * DiffOp.mult(z) - DiffOp.mult(z) * DiffOp.d() == DiffOp.identity()


@pytest.mark.parametrize("a", range(1, 5))
@pytest.mark.parametrize("b", range(1, 5))
def test_integer_star_triangle(a, b):
    lhs, rhs = star_triangle_int(a, b)
    assert lhs == rhs
    assert all(lhs.act(z ** k) == rhs.act(z ** k) for k in range(11))


def test_star_triangle_negative_control():
    lhs, _ = star_triangle_int(1, 2)
    wrong = DiffOp.mult(z ** 2) * DiffOp.d(3) * DiffOp.mult(z ** 2)
    assert lhs != wrong


@pytest.mark.parametrize("n", range(7))
def test_generating_function_in_kernel(n):
    assert kills_generating_function(n)
    assert DiffOp.d(n).act((z - MultiPoly.var("x")) ** n)


def test_bivariate_generating_function_in_kernel():
    x, xb = MultiPoly.var("x"), MultiPoly.var("xb")
    for n, nb in ((1, 0), (2, 1), (3, 2)):
        g = (z - x) ** n * (zb - xb) ** nb
        img = DiffOp.d(nb + 1, "zb").act(DiffOp.d(n + 1, "z").act(g))
        assert not img


def test_restriction_of_invariant_operator():
    J = DiffOp({1: z})  # z∂ is diagonal on monomials
    M = diffop_restrict(J, 3)
    assert [M.entries[i][i].constant_value() for i in range(4)] == [0, 1, 2, 3]
