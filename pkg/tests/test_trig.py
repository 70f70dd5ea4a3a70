import pytest

from ybred.harness.checks import YbeInstance, check_rll, check_ybe, compare_projective
from ybred.rational import lax_rational, yang_r
from ybred.ring import qq
from ybred.trig import (CTX, compressed_string, factorized_symbol_check, fuse_q_yang, q_to_one, q_yang_r, qint,
                        reconstruct, trig_in_fundamental_basis, trig_lax, uq_gens)

U, V = CTX.U, CTX.V
mul_sub = lambda a, b: a * b.monomial_inverse()


def test_q_yang_cleared_power():
    assert q_yang_r().cleared_power == 1


def test_q_yang_ybe_leg_and_braid():
    from ybred.ring import braid_permutation
    Pm = braid_permutation(2, 2)
    assert check_ybe(YbeInstance("trig", (2, 2, 2), lambda p, w: q_yang_r(w), U, V, sub=mul_sub)).passed
    assert check_ybe(YbeInstance("trig", (2, 2, 2), lambda p, w: Pm @ q_yang_r(w), U, V, form="braid",
                                 sub=mul_sub)).passed


def test_q_yang_ybe_additive_spectral_fails():
    bad = YbeInstance("trig", (2, 2, 2), lambda p, w: q_yang_r(w), U, V, sub=lambda a, b: a * b)
    assert not check_ybe(bad).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_uq_commutator(n):
    Jp, Jm, J3 = uq_gens(n)
    comm = Jp @ Jm - Jm @ Jp
    for i in range(n + 1):
        assert comm.entries[i][i] == qint(2 * J3.entries[i][i].constant_value())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rll(n):
    assert check_rll(q_yang_r(U * V.monomial_inverse()), trig_lax(U, n), trig_lax(V, n), n + 1).passed


def test_fundamental_lax_is_shifted_q_yang():
    A = trig_in_fundamental_basis(trig_lax(U, 1), 1)
    assert compare_projective(A, q_yang_r(U * CTX.qpow(qq(-1, 2)))).equal


@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_fusion(n):
    r = fuse_q_yang(None, n)
    assert r.agrees and str(r.scalar) == "1"
    assert not r.printed_a_matches


@pytest.mark.parametrize("n", [2, 3])
def test_compression_equals_symbol_reconstruction(n):
    from ybred.rational import sym_to_monomial
    lhs = sym_to_monomial(compressed_string(U, n), n)
    rhs = reconstruct(fuse_q_yang(U, n).string, n)
    assert compare_projective(lhs, rhs).equal


def test_factorized_symbol():
    r = factorized_symbol_check()
    assert r.display_ok and r.lax_ok and r.cancellation_ok


@pytest.mark.parametrize("uv", [0, 1, 2, -3])
def test_q_to_one(uv):
    assert q_to_one(q_yang_r(), uv) == yang_r(uv)
    for n in (1, 2):
        assert q_to_one(trig_lax(None, n), uv) == lax_rational(uv, n)
