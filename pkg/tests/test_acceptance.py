"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import itertools
import time

import numpy as np
import pytest

from ybred.harness.checks import YbeInstance, check_rll, check_ybe, compare_projective
from ybred.harness.suites import spin1_display
from ybred.modular.qdilog import Quasiperiods
from ybred.opalg import DiffOp, kills_generating_function, star_triangle_int
from ybred.rational import (braid_r, fusion_reduction_agree, fuse_yang, in_basis, lax_nonfact, lax_rational,
                            reduce_sl2c, reduce_verma, signed_flip, yang_r)
from ybred.ring import MultiPoly, braid_permutation, qq

u, v, z = MultiPoly.var("u"), MultiPoly.var("v"), MultiPoly.var("z")
CTX = Quasiperiods()


def report(n, title, ok, detail=""):
    print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title} {detail}".rstrip())
    assert ok


def test_01_printed_matrix_recovery():
    t0 = time.perf_counter()
    half = compare_projective(in_basis(reduce_verma(u - qq(1, 2), 1), signed_flip(1)), lax_nonfact())
    one = compare_projective(reduce_verma(u, 2), spin1_display())
    dt = time.perf_counter() - t0
    report(1, "printed spin 1/2 and spin 1 operators recovered exactly", half.equal and one.equal and dt < 1,
           f"({dt:.2f}s)")


def test_02_fusion_equals_reduction_rational():
    t0 = time.perf_counter()
    ok = all(fuse_yang(u, n).agrees and fusion_reduction_agree(n).equal for n in (1, 2, 3))
    dt = time.perf_counter() - t0
    report(2, "rational fusion equals reduction for n<=3", ok and dt < 10, f"({dt:.2f}s)")


def test_03_sl2c_fundamental_is_yang():
    report(3, "sl2c fundamental reduction is Yang's R", compare_projective(reduce_sl2c(u, (1, 0), (1, 0)),
                                                                          yang_r(u)).equal)


def test_04_exact_ybe():
    from ybred.trig import CTX as T, q_yang_r
    t0 = time.perf_counter()
    res = [check_ybe(YbeInstance("rational", (2, 2, 2), lambda p, w: yang_r(w), u, v)).residual,
           check_ybe(YbeInstance("trig", (2, 2, 2), lambda p, w: q_yang_r(w), T.U, T.V,
                                 sub=lambda a, b: a * b.monomial_inverse())).residual]
    Pm = braid_permutation(2, 2)
    res.append(check_ybe(YbeInstance("rational", (2, 2, 2), lambda p, w: Pm @ yang_r(w), u, v,
                                     form="braid")).residual)
    spins = ((1, 0), (2, 0), (1, 1))
    for s in itertools.product(spins, repeat=3):
        dims = tuple((a + 1) * (b + 1) for a, b in s)
        inst = YbeInstance("sl2c", dims, lambda p, w, s=s: braid_r(w, s[p[0]], s[p[1]]), u, v, form="braid")
        res.append(check_ybe(inst).residual)
    dt = time.perf_counter() - t0
    report(4, "exact YBE for yang, q_yang and 27 braid sl2c triples", all(r == 0 for r in res) and dt < 60,
           f"({len(res)} instances, {dt:.2f}s)")


def test_05_exact_rll():
    from ybred.trig import CTX as T, q_yang_r, trig_lax
    R = yang_r(u - v).map(lambda x: DiffOp.mult(x))
    R.zero = DiffOp({})
    verma = check_rll(R, lax_rational(u), lax_rational(v), 1, surface=lambda op: [op.act(z ** k) for k in range(9)])
    trig = [check_rll(q_yang_r(T.U * T.V.monomial_inverse()), trig_lax(T.U, n), trig_lax(T.V, n), n + 1)
            for n in (1, 2, 3)]
    ok = verma.exact and verma.residual == 0 and all(r.exact and r.residual == 0 for r in trig)
    report(5, "exact RLL for Verma Lax on z^0..z^8 and trig_lax n<=3", ok)


def test_06_special_functions():
    from ybred.modular.qdilog import dfun, fourier_check, qdilog
    t0 = time.perf_counter()
    w, wp = CTX.omega, CTX.omega_p
    rng = np.random.default_rng(0)
    grid = rng.uniform(-0.8, 0.8, 50) + 1j * rng.uniform(-0.5, 0.5, 50)
    a, b = qdilog(grid, CTX, "integral"), qdilog(grid, CTX, "product")
    paths = float(np.max(np.abs(a - b) / np.abs(b)))
    zz = grid[:20] * 0.5
    g = lambda x: qdilog(x, CTX)
    feq = max(np.max(np.abs(g(zz + wp) / g(zz - wp) - (1 + np.exp(-1j * np.pi * zz / w)))),
              np.max(np.abs(g(zz + w) / g(zz - w) - (1 + np.exp(-1j * np.pi * zz / wp)))),
              np.max(np.abs(g(zz) * g(-zz) / (np.exp(1j * CTX.beta) * np.exp(1j * np.pi * zz * zz)) - 1)))
    aa = grid[20:40] * 0.5
    drel = max(np.max(np.abs(dfun(aa, zz, CTX) * dfun(-aa, zz, CTX) - 1)),
               np.max(np.abs(dfun(aa, zz, CTX) / dfun(aa, -zz, CTX) - 1)),
               np.max(np.abs(dfun(aa, zz - wp, CTX) / dfun(aa, zz + wp, CTX)
                             / (np.cos(np.pi * (zz - aa) / (2 * w)) / np.cos(np.pi * (zz + aa) / (2 * w))) - 1)))
    four = max(fourier_check(a_, z_, CTX) for a_, z_ in ((0.1 - 0.3j, 0.05 + 0.1j), (-0.2 - 0.25j, 0.2 - 0.05j)))
    dt = time.perf_counter() - t0
    ok = paths < 1e-10 and feq < 1e-10 and drel < 1e-10 and four < 1e-6 and dt < 30
    report(6, "quantum dilogarithm and D-function identities", ok,
           f"(paths {paths:.1e}, gamma eqs {feq:.1e}, D eqs {drel:.1e}, Fourier {four:.1e}, {dt:.1f}s)")


def test_07_modular_lax_recovery():
    from ybred.modular.reduce import lax_recovery
    lam, res, closure = lax_recovery(0.21 + 0.07j, 0.13 - 0.09j, CTX)
    report(7, "modular Lax operator recovered from the (0,1) reduction", res < 1e-8,
           f"(residual {res:.1e}, scalar {lam:.3g})")


def test_08_modular_ybe_and_rll():
    from ybred.modular.reduce import default_tests, reduce_modular
    from ybred.modular.shiftop import as_shiftop_matrix, modular_lax, r4_trig
    t0 = time.perf_counter()
    uu, vv, s = 0.31 + 0.12j, -0.17 + 0.05j, 0.23 - 0.11j
    tests = default_tests()
    rll = check_rll(as_shiftop_matrix(r4_trig(uu - vv, CTX), CTX), modular_lax(uu, s, CTX), modular_lax(vv, s, CTX),
                    1, surface=lambda op: [complex(op.apply_exp(c, x)) for c, x in tests]).residual
    op = lambda p, w: reduce_modular(w, (0, 1), (0, 1), CTX).matrix
    ybe = check_ybe(YbeInstance("modular", (2, 2, 2), op, 0.21 + 0.07j, -0.11 + 0.04j), 1e-7).residual
    dt = time.perf_counter() - t0
    report(8, "modular RLL and 2x2x2 YBE", rll < 1e-8 and ybe < 1e-7 and dt < 120,
           f"(RLL {rll:.1e}, YBE {ybe:.1e}, {dt:.1f}s)")


def test_09_modular_fusion_equals_reduction():
    from ybred.modular.fusion import fusion_reduction_agree as agree
    res = {nm: agree(nm, ctx=CTX).residual for nm in ((0, 1), (1, 0))}
    report(9, "modular fusion equals reduction", all(r < 1e-7 for r in res.values()),
           " ".join(f"{k}:{r:.1e}" for k, r in res.items()))


def test_10_star_triangle():
    from ybred.modular.fusion import star_triangle_shift
    exact = all(l == r for a in range(1, 5) for b in range(1, 5) for l, r in [star_triangle_int(a, b)])
    mod = max(star_triangle_shift(ab, CTX) for ab in (((1, 0), (0, 1)), ((2, 0), (0, 1)), ((1, 1), (0, 2))))
    report(10, "integer star-triangle exact and modular shift form", exact and mod < 1e-9, f"(modular {mod:.1e})")


def test_11_intertwiner_kernels():
    from ybred.modular.fusion import annihilator_residual
    exact = all(kills_generating_function(n) for n in range(7))
    mod = max(annihilator_residual((n, m), CTX) for n in range(3) for m in range(3))
    report(11, "generating functions and basis monomials are annihilated", exact and mod < 1e-8,
           f"(modular {mod:.1e})")
