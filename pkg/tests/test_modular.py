import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ybred.harness.checks import YbeInstance, check_rll, check_ybe, compare_projective
from ybred.modular.fusion import (annihilator_residual, fuse_modular, fusion_reduction_agree,
                                  lambda_factorized_residual, lambda_op, star_triangle_shift)
from ybred.modular.qdilog import (PoleProximityError, Quasiperiods, dfun, dfun_lattice, fourier_check, gamma_zero,
                                  qdilog)
from ybred.modular.reduce import default_tests, lax_recovery, reduce_modular
from ybred.modular.shiftop import (ExpPoly, ShiftOp, as_shiftop_matrix, modular_lax, r4_trig, shift_dop)

CTX = Quasiperiods()
W, WP = CTX.omega, CTX.omega_p

small = st.complex_numbers(max_magnitude=0.45, allow_nan=False, allow_infinity=False)


def test_quasiperiod_defaults():
    assert abs(W * WP + 0.25) < 1e-15
    assert abs(CTX.q) < 1 < abs(CTX.qt)


def test_bad_quasiperiods_rejected():
    with pytest.raises(ValueError):
        Quasiperiods(0.5 + 0j)


def test_gamma_at_zero():
    assert abs(qdilog(0.0, CTX) ** 2 - cmath.exp(1j * CTX.beta)) < 1e-14
    assert abs(qdilog(0.0, CTX, "integral") ** 2 - cmath.exp(1j * CTX.beta)) < 1e-11


@given(small)
def test_gamma_difference_equations(z):
    g = lambda x: qdilog(x, CTX, guard=0)
    assert abs(g(z + WP) / g(z - WP) - (1 + cmath.exp(-1j * math.pi * z / W))) < 1e-10 * (1 + abs(g(z + WP) / g(z - WP)))
    assert abs(g(z + W) / g(z - W) - (1 + cmath.exp(-1j * math.pi * z / WP))) < 1e-10 * (1 + abs(g(z + W) / g(z - W)))


@given(small)
def test_gamma_reflection(z):
    lhs = qdilog(z, CTX, guard=0) * qdilog(-z, CTX, guard=0)
    assert abs(lhs / (cmath.exp(1j * CTX.beta) * cmath.exp(1j * math.pi * z * z)) - 1) < 1e-10


def test_integral_and_product_paths_agree():
    rng = np.random.default_rng(11)
    z = rng.uniform(-0.8, 0.8, 50) + 1j * rng.uniform(-0.5, 0.5, 50)
    a, b = qdilog(z, CTX, "integral"), qdilog(z, CTX)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-10


@pytest.mark.parametrize("nm", [(0, 0), (1, 0), (0, 1), (1, 2)])
def test_gamma_zeros(nm):
    z0 = gamma_zero(*nm, CTX)
    assert abs(qdilog(z0, CTX, guard=0)) < 1e-12 * abs(qdilog(z0 + 0.01, CTX, guard=0))
    with pytest.raises(PoleProximityError):
        qdilog(z0, CTX)


@given(small, small)
def test_dfun_reflections(a, z):
    assert abs(dfun(a, z, CTX) * dfun(-a, z, CTX) - 1) < 1e-10
    assert abs(dfun(a, z, CTX) / dfun(a, -z, CTX) - 1) < 1e-10


@given(small, small)
def test_dfun_difference_equation(a, z):
    lhs = dfun(a, z - WP, CTX) / dfun(a, z + WP, CTX)
    rhs = cmath.cos(math.pi * (z - a) / (2 * W)) / cmath.cos(math.pi * (z + a) / (2 * W))
    assert abs(lhs - rhs) < 1e-9 * (1 + abs(rhs))


def test_dfun_trivial_index():
    assert abs(dfun(0, 0.3 + 0.1j, CTX) - 1) < 1e-15


@pytest.mark.parametrize("nm", [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1)])
def test_dfun_lattice_agrees(nm):
    z = np.linspace(-0.4, 0.4, 10) + 0.07j
    assert np.max(np.abs(dfun_lattice(nm, z, CTX) - dfun(CTX.lattice(*nm), z, CTX))) < 1e-9


def test_dfun_lattice_01_closed_form():
    x = 0.23 - 0.04j
    want = cmath.exp(1j * math.pi * x / (2 * W)) + cmath.exp(-1j * math.pi * x / (2 * W))
    assert abs(dfun_lattice((0, 1), x, CTX) - want) < 1e-14


@pytest.mark.parametrize("a,z", [(0.1 - 0.3j, 0.05 + 0.1j), (-0.2 - 0.25j, 0.2 - 0.05j)])
def test_fourier_identity(a, z):
    assert fourier_check(a, z, CTX) < 1e-6


def test_fourier_outside_domain_rejected():
    with pytest.raises(ValueError):
        fourier_check(0.1 + 0.3j, 0.0, CTX)


@pytest.mark.parametrize("nm", [(0, 1), (1, 0), (2, 1)])
def test_shift_dop_acts_by_argument(nm):
    D = shift_dop(nm, CTX)
    for c, _ in default_tests()[:6]:
        assert abs(D.apply_exp(c, 0) - dfun_lattice(nm, c / (2j * math.pi), CTX)) < 1e-12 * (1 + abs(D.apply_exp(c, 0)))


def test_shift_dop_01_shifts_by_omega_prime():
    assert set(shift_dop((0, 1), CTX).terms) == {(0, 1), (0, -1)}


def test_shift_factors_commute():
    a, b = shift_dop((1, 0), CTX), shift_dop((0, 1), CTX)
    d = a * b - b * a
    assert all(abs(d.apply_exp(c, x)) < 1e-13 for c, x in default_tests())


def test_shiftop_composition_is_action_composition():
    A = ShiftOp({(0, 1): ExpPoly.mono(2, 0, CTX), (1, 0): ExpPoly.mono(0, -1, CTX, 0.5)}, CTX)
    B = ShiftOp({(0, -1): ExpPoly.mono(-1, 1, CTX)}, CTX)
    f = lambda y: np.exp(0.7j * y) * np.cos(y)
    x = 0.11 + 0.02j
    assert abs((A * B).act(f, x) - A.act(lambda y: B.act(f, y), x)) < 1e-13


def test_modular_lax_diagonal_on_exponentials():
    u, s, c, x = 0.3 + 0.1j, 0.2, 0.7 - 0.4j, 0.1
    L = modular_lax(u, s, CTX)
    eu = cmath.exp(1j * math.pi * u / W)
    want = (eu * cmath.exp(c * WP) - cmath.exp(-c * WP) / eu) * cmath.exp(c * x)
    assert abs(L[0, 0].apply_exp(c, x) - want) < 1e-14


def test_r4_trig_ybe():
    inst = YbeInstance("modular", (2, 2, 2), lambda p, w: r4_trig(w, CTX), 0.31 + 0.12j, -0.17 + 0.05j)
    assert check_ybe(inst, 1e-10).passed


def test_r4_trig_rll_and_negative_control():
    u, v, s = 0.31 + 0.12j, -0.17 + 0.05j, 0.23 - 0.11j
    tests = default_tests()
    surf = lambda op: [complex(op.apply_exp(c, x)) for c, x in tests]
    good = check_rll(as_shiftop_matrix(r4_trig(u - v, CTX), CTX), modular_lax(u, s, CTX), modular_lax(v, s, CTX),
                     1, surface=surf)
    bad = check_rll(as_shiftop_matrix(r4_trig(v - u, CTX), CTX), modular_lax(u, s, CTX), modular_lax(v, s, CTX),
                    1, surface=surf)
    assert good.residual < 1e-8 and bad.residual > 1e-3


def test_lax_recovery():
    lam, res, closure = lax_recovery(0.21 + 0.07j, 0.13 - 0.09j, CTX)
    assert res < 1e-8 and closure < 1e-8


def test_trivial_reduction_is_identity():
    M = reduce_modular(0.2 + 0.1j, (0, 0), (0, 1), CTX).matrix
    assert compare_projective(M, np.eye(2)).equal


@pytest.mark.parametrize("spins", [((0, 1),) * 3, ((0, 1), (0, 1), (1, 1)), ((0, 1), (1, 0), (0, 2))])
def test_modular_reduction_ybe(spins):
    dims = tuple((n + 1) * (m + 1) for n, m in spins)
    op = lambda p, w: reduce_modular(w, spins[p[0]], spins[p[1]], CTX).matrix
    assert check_ybe(YbeInstance("modular", dims, op, 0.21 + 0.07j, -0.11 + 0.04j), 1e-7).passed


def test_fundamental_reduction_is_r4_trig():
    u = -0.3 + 0.1j
    assert compare_projective(reduce_modular(u, (0, 1), (0, 1), CTX).matrix, r4_trig(u, CTX)).residual < 1e-10


def test_lambda_linear_in_mu():
    lam = lambda_op(0.2, 0.1, 0.05, CTX)
    assert set(lam) == {(1, 0, 0, 0), (0, 1, 0, 0)}


@pytest.mark.parametrize("nm", [(0, 2), (1, 1), (2, 0)])
def test_string_degree_bookkeeping(nm):
    string = fuse_modular(0.2 + 0.1j, nm, 0.1, 0.05, CTX)
    assert all(k[0] + k[1] == nm[1] and k[2] + k[3] == nm[0] for k in string)


def test_lambda_factorized_form():
    lam, res = lambda_factorized_residual(0.21 + 0.07j, 0.13 - 0.09j, 0.1 + 0.05j, -0.07 + 0.02j, CTX)
    assert res < 1e-8 and abs(lam - 1) < 1e-8


@pytest.mark.parametrize("nm", [(0, 1), (1, 0), (1, 1), (0, 2)])
def test_fusion_equals_reduction(nm):
    r = fusion_reduction_agree(nm, ctx=CTX)
    assert r.residual < 1e-7
    assert abs(r.scalar - r.expected_scalar) < 1e-8


def test_fusion_trivial():
    assert fusion_reduction_agree((0, 0), ctx=CTX).residual < 1e-14


@pytest.mark.parametrize("ab", [((1, 0), (0, 1)), ((2, 0), (0, 1)), ((0, 0), (0, 1))])
def test_star_triangle(ab):
    assert star_triangle_shift(ab, CTX) < 1e-9


@pytest.mark.parametrize("n", range(3))
@pytest.mark.parametrize("m", range(3))
def test_annihilator(n, m):
    assert annihilator_residual((n, m), CTX) < 1e-8
