"""Finite-dimensional reductions of the modular-double R-operator by frequency sampling."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qdilog import Quasiperiods, dfun_lattice, gamma_lattice_ratio
from .shiftop import basis_keys, dfun_lattice_exppoly, modular_lax, shift_dop


class ConditioningError(RuntimeError):
    pass


class ClosureError(RuntimeError):
    pass


def spin_of(nm, ctx: Quasiperiods) -> complex:
    """s = -ω'' - nω - mω' for the finite-dimensional module labelled (n, m)."""
    return -ctx.opp - ctx.lattice(*nm)


def pair_product(A: complex, C: complex, y, shift, N, ctx: Quasiperiods):
    """D_A(y)·D_C(y - δ) for A + C = N (lattice) and δ = shift, as a finite expression.

    Both γ ratios differ by even lattice vectors, so the difference equations
    collapse them to finite products.
    """
    a, b = shift
    n, m = N
    if (n - a) % 2 or (m - b) % 2:
        raise ValueError("pair needs N ± δ in the even sublattice")
    if abs(A + C - ctx.lattice(n, m)) > 1e-12 * (1 + abs(A)):
        raise ValueError("pair indices do not sum to a lattice point")
    y = np.asarray(y, dtype=complex)
    d = ctx.lattice(a, b)
    pref = np.exp(-2j * math.pi * (A * y + C * (y - d)))
    g1 = gamma_lattice_ratio(y - A, (n - a) // 2, (m - b) // 2, ctx)
    g2 = gamma_lattice_ratio(y + A - d - ctx.lattice(n, m), (n + a) // 2, (m + b) // 2, ctx)
    return pref * g1 * g2


def intertwiner_rhs(u: complex, nm1, s2: complex, x1, x2, x3, phi, ctx: Quasiperiods):
    """Image of D_{N1}(x1 - x3)·Φ(x2) under the R-operator, up to normalization.

    D_{u-s1/2-s2/2}(x12) D_{-u-s1/2-s2/2-ω''}(x23) D_{N1}(p̂2)
        D_{-u-s1/2+s2/2-ω''}(x12) D_{u-s1/2+s2/2}(x23) Φ(x2),  s1 = spin of N1.
    ``phi`` is a vectorized callable of x2.
    """
    s1 = spin_of(nm1, ctx)
    w2 = ctx.opp
    A = u - s1 / 2 - s2 / 2
    C = -u - s1 / 2 + s2 / 2 - w2
    A2 = -u - s1 / 2 - s2 / 2 - w2
    C2 = u - s1 / 2 + s2 / 2
    x12 = np.asarray(x1, dtype=complex) - x2
    x23 = np.asarray(x2, dtype=complex) - x3
    out = 0
    for sh, coef in shift_dop(nm1, ctx).terms.items():
        c = coef.terms.get((0, 0), 0)
        d = ctx.lattice(*sh)
        out = out + c * pair_product(A, C, x12, sh, nm1, ctx) \
            * pair_product(A2, C2, x23, (-sh[0], -sh[1]), nm1, ctx) * phi(np.asarray(x2) + d)
    return out


# ---------------------------------------------------------------------------
# frequency sampling

def _freqs(keys, ctx, sign=1):
    return np.array([sign * 1j * math.pi * (j / (2 * ctx.omega) + k / (2 * ctx.omega_p)) for j, k in keys])


def _design(points, freqs):
    return np.exp(np.outer(points, freqs))


def sample_points(count: int, rng: np.random.Generator, box: float = 0.35):
    return rng.uniform(-box, box, count) + 1j * rng.uniform(-box, box, count)


def _fit_designs(freq_list, rng, oversample: int, cond_max: float, retries: int = 20):
    out = []
    for f in freq_list:
        for _ in range(retries):
            pts = sample_points(len(f) + oversample, rng)
            V = _design(pts, f)
            cond = np.linalg.cond(V)
            if cond < cond_max:
                out.append((pts, V, cond))
                break
        else:
            raise ConditioningError(f"no well-conditioned sample set (cond {cond:.2e})")
    return out


def _mode_solve(F: np.ndarray, designs):
    """Least-squares coefficients of a separable exponential tensor fit, plus relative residual."""
    C = F
    for axis, V in enumerate(designs):
        P = np.linalg.pinv(V)
        C = np.moveaxis(np.tensordot(P, np.moveaxis(C, axis, 0), axes=(1, 0)), 0, axis)
    G = C
    for axis, V in enumerate(designs):
        G = np.moveaxis(np.tensordot(V, np.moveaxis(G, axis, 0), axes=(1, 0)), 0, axis)
    res = float(np.max(np.abs(G - F)) / max(np.max(np.abs(F)), 1e-300))
    return C, res


@dataclass
class ModularReduction:
    matrix: np.ndarray
    nm1: tuple
    nm2: tuple
    closure: float
    cond: float
    basis1: list
    basis2: list


def reduce_modular(u: complex, nm1, nm2, ctx: Quasiperiods | None = None, seed: int = 0,
                   oversample: int = 3, closure_tol: float = 1e-8, cond_max: float = 1e8) -> ModularReduction:
    """Matrix of the R-operator on the (n1,m1)⊗(n2,m2) module in the monomial basis.

    Basis e_(k,l)(x) = X̃^{n-2k} X^{m-2l}; column (α,β) is the image of e_α(x1)e_β(x2).
    The generating functions D_N(x1-x3), D_N(x2-x4) are sampled on a tensor grid and
    the coefficients of the x3, x4 monomials are read off by least squares.
    """
    ctx = ctx or Quasiperiods()
    rng = np.random.default_rng(seed)
    k1, k2 = basis_keys(nm1), basis_keys(nm2)
    f1, f2 = _freqs(k1, ctx), _freqs(k2, ctx)
    g1 = dfun_lattice_exppoly(nm1, ctx).terms
    g2 = dfun_lattice_exppoly(nm2, ctx).terms
    c1 = np.array([g1[k] for k in k1])
    c2 = np.array([g2[k] for k in k2])
    s2 = spin_of(nm2, ctx)
    worst = 0.0
    for attempt in range(5):
        designs = _fit_designs([f1, f2, -f1, -f2], rng, oversample, cond_max)
        (p1, V1, _), (p2, V2, _), (p3, V3, _), (p4, V4, _) = designs
        x1, x2, x3, x4 = np.meshgrid(p1, p2, p3, p4, indexing="ij")
        phi = lambda y: dfun_lattice(nm2, y - x4, ctx)
        F = intertwiner_rhs(u, nm1, s2, x1, x2, x3, phi, ctx)
        C, res = _mode_solve(F, [V1, V2, V3, V4])
        worst = max(d[2] for d in designs)
        if res < closure_tol:
            break
    else:
        raise ClosureError(f"sampled image does not close on the module (residual {res:.2e})")
    # C[γ, δ, α, β] with generating-function normalization removed
    C = C / c1[None, None, :, None] / c2[None, None, None, :]
    d1, d2 = len(k1), len(k2)
    M = C.reshape(d1 * d2, d1 * d2)
    M = M / M[np.unravel_index(np.argmax(np.abs(M)), M.shape)]
    return ModularReduction(M, tuple(nm1), tuple(nm2), res, worst, k1, k2)


def reduce_modular_generic(u: complex, nm1, s: complex, tests, ctx: Quasiperiods | None = None,
                           seed: int = 0, oversample: int = 3):
    """Finite ⊗ generic: for each (c, x2) in ``tests`` the d1×d1 matrix of numbers
    [R e_α]_γ evaluated on Φ = e^{c x}, at the point x2."""
    ctx = ctx or Quasiperiods()
    rng = np.random.default_rng(seed)
    k1 = basis_keys(nm1)
    f1 = _freqs(k1, ctx)
    c1 = np.array([dfun_lattice_exppoly(nm1, ctx).terms[k] for k in k1])
    (p1, V1, _), (p3, V3, _) = _fit_designs([f1, -f1], rng, oversample, 1e8)
    out, worst = [], 0.0
    for c, x2 in tests:
        x1, x3 = np.meshgrid(p1, p3, indexing="ij")
        F = intertwiner_rhs(u, nm1, s, x1, x2, x3, lambda y: np.exp(c * y), ctx)
        C, res = _mode_solve(F, [V1, V3])
        worst = max(worst, res)
        out.append(C / c1[None, :])
    return np.array(out), worst


def lax_recovery(u: complex, s: complex, ctx: Quasiperiods | None = None, tests=None, seed: int = 0):
    """Compare the (0,1)⊗generic reduction at u - ω - ω'/2 with the Lax operator at u.

    Returns (scalar, residual, closure) of a single projective fit over all tests.
    """
    ctx = ctx or Quasiperiods()
    if tests is None:
        tests = default_tests(seed)
    got, closure = reduce_modular_generic(u - ctx.omega - ctx.omega_p / 2, (0, 1), s, tests, ctx, seed)
    L = modular_lax(u, s, ctx)
    want = np.array([[[complex(L[i, j].apply_exp(c, x)) for j in range(2)] for i in range(2)] for c, x in tests])
    # e_1 = X(x1), e_2 = X(x1)^{-1}
    lam = np.vdot(want, got) / np.vdot(want, want)
    res = float(np.max(np.abs(got - lam * want)) / np.max(np.abs(got)))
    return complex(lam), res, closure


def default_tests(seed: int = 0, count: int = 20):
    """20 fixed pseudo-random exponents |c| ≤ 2 paired with evaluation points."""
    rng = np.random.default_rng(seed + 20240)
    r = 2 * np.sqrt(rng.uniform(0, 1, count))
    c = r * np.exp(2j * math.pi * rng.uniform(0, 1, count))
    x = sample_points(count, rng, 0.3)
    return list(zip(c, x))


def similarity_to_r4(red: ModularReduction, u: complex, ctx: Quasiperiods, shifts=None) -> dict:
    """Report-only comparison of normalized spectra with the trigonometric R-matrix."""
    from .shiftop import r4_trig
    shifts = shifts if shifts is not None else {
        "0": 0, "-ω''/2": -ctx.opp / 2, "-ω-ω'/2": -ctx.omega - ctx.omega_p / 2, "-ω/2": -ctx.omega / 2}
    ev = np.sort_complex(np.linalg.eigvals(red.matrix))
    ev = ev / ev[np.argmax(np.abs(ev))]
    out = {}
    for name, sh in shifts.items():
        for label, R in (("R", r4_trig(u + sh, ctx)), ("PR", r4_trig(u + sh, ctx)[[0, 2, 1, 3]])):
            e = np.sort_complex(np.linalg.eigvals(R))
            e = e / e[np.argmax(np.abs(e))]
            out[f"{label}(u{name})"] = float(np.min([np.max(np.abs(np.sort_complex(ev) - np.sort_complex(e * ph)))
                                                     for ph in (1, -1)]))
    return out
