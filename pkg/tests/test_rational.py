import itertools

import pytest

from ybred.harness.checks import YbeInstance, check_ybe, compare_projective
from ybred.harness.suites import spin1_display
from ybred.rational import (braid_r, fuse_yang, fusion_reduction_agree, in_basis, lax_nonfact, lax_rational,
                            lambda_string_sl2c, reduce_sl2c, reduce_verma, signed_flip, yang_r)
from ybred.ring import MultiPoly, RingMatrix, braid_permutation, qq

u, v = MultiPoly.var("u"), MultiPoly.var("v")


def test_yang_is_u_plus_p():
    R = yang_r(u)
    assert R - RingMatrix.identity(4).scale(u) == braid_permutation(2, 2)


def test_spin_half_verma_reduction_is_printed_lax():
    R = in_basis(reduce_verma(u - qq(1, 2), 1), signed_flip(1))
    c = compare_projective(R, lax_nonfact())
    assert c.equal and str(c.scalar) == "1"


def test_unshifted_spin_half_is_not_printed_lax():
    # the printed operator needs the half shift; without it the match fails
    R = in_basis(reduce_verma(u, 1), signed_flip(1))
    assert not compare_projective(R, lax_nonfact()).equal


def test_spin_one_verma_reduction_matches_display():
    c = compare_projective(reduce_verma(u, 2), spin1_display())
    assert c.equal


def test_spin_zero_is_identity():
    R = reduce_verma(u, 0)
    assert R.rows == 1 and R.entries[0][0].order == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fusion_matches_lax(n):
    res = fuse_yang(u, n)
    assert res.agrees


@pytest.mark.parametrize("n", [1, 2, 3])
def test_fusion_equals_reduction(n):
    assert fusion_reduction_agree(n).equal


def test_sl2c_fundamental_is_yang():
    assert compare_projective(reduce_sl2c(u, (1, 0), (1, 0)), yang_r(u)).equal


def test_braid_ybe_all_spin_triples():
    spins = ((1, 0), (2, 0), (1, 1))
    for s in itertools.product(spins, repeat=3):
        dims = tuple((a + 1) * (b + 1) for a, b in s)
        inst = YbeInstance("sl2c", dims, lambda p, w, s=s: braid_r(w, s[p[0]], s[p[1]]), u, v, form="braid")
        assert check_ybe(inst).passed, s


def test_braid_ybe_negative_control():
    # leg-form operator used in the braid form must fail
    inst = YbeInstance("sl2c", (2, 2, 3), lambda p, w: reduce_sl2c(w, *[((1, 0), (1, 0), (2, 0))[i] for i in p]),
                       u, v, form="braid")
    assert not check_ybe(inst).passed


def test_lambda_strings():
    for nn in ((1, 0), (2, 1)):
        assert all(r.agrees for r in lambda_string_sl2c(u, nn))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_finite_lax_trace(n):
    L = lax_rational(u, n)
    assert L.shape == (2 * (n + 1), 2 * (n + 1))
