"""Λ-operators, fused strings and the star-triangle relation in shift-operator form."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .qdilog import Quasiperiods, dfun, dfun_lattice
from .reduce import default_tests, intertwiner_rhs, spin_of
from .shiftop import ExpPoly, ShiftOp, dfun_lattice_exppoly, modular_lax, shift_dop

# μ-monomial keys: exponents of (μ1, μ2, μ̃1, μ̃2)


def spinor(a: complex, w: complex):
    """(e^{iπa/2w}, -e^{-iπa/2w})."""
    e = cmath.exp(1j * math.pi * a / (2 * w))
    return e, -1 / e


def lambda_op(u: complex, s: complex, a: complex, ctx: Quasiperiods | None = None, tilde: bool = False) -> dict:
    """Λ(u) = λ_i L_ij μ_j with λ = λ(a) numeric and μ formal; returns {μ-key: ShiftOp}."""
    ctx = ctx or Quasiperiods()
    w = ctx.omega_p if tilde else ctx.omega
    lam = spinor(a, w)
    L = modular_lax(u, s, ctx, tilde)
    keys = [(0, 0, 1, 0), (0, 0, 0, 1)] if tilde else [(1, 0, 0, 0), (0, 1, 0, 0)]
    return {keys[j]: lam[0] * L[0, j] + lam[1] * L[1, j] for j in range(2)}


def _mul(P: dict, Q: dict) -> dict:
    out: dict = {}
    for k1, a in P.items():
        for k2, b in Q.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            p = a * b
            out[k] = out[k] + p if k in out else p
    return out


def evaluate_mu(P: dict, mu, mut=(0, 0)) -> ShiftOp:
    """Substitute numeric spinors for the formal μ, μ̃."""
    vals = (mu[0], mu[1], mut[0], mut[1])
    out = None
    for k, op in P.items():
        c = np.prod([v ** e for v, e in zip(vals, k)])
        out = c * op if out is None else out + c * op
    return out


def fuse_modular(u: complex, nm, s: complex, a: complex, ctx: Quasiperiods | None = None) -> dict:
    """Λ(u)Λ(u-ω')…Λ(u-(m-1)ω') · Λ̃(u-mω')Λ̃(u-mω'-ω)…Λ̃(u-mω'-(n-1)ω).

    Λ̃ is 2ω'-periodic in its argument, so only the parity of the ω' offset matters.
    """
    ctx = ctx or Quasiperiods()
    n, m = nm
    out = {(0, 0, 0, 0): ShiftOp.const(1, ctx)}
    for k in range(m):
        out = _mul(out, lambda_op(u - k * ctx.omega_p, s, a, ctx))
    base = u - m * ctx.omega_p
    for k in range(n):
        out = _mul(out, lambda_op(base - k * ctx.omega, s, a, ctx, tilde=True))
    return out


def mu_generating_function(nm, y, ctx: Quasiperiods) -> dict:
    """D_{nω+mω'}(b - y) written as a polynomial in μ(b), μ̃(b); values at the point y."""
    n, m = nm
    Y = cmath.exp(1j * math.pi * y / (2 * ctx.omega))
    Yt = cmath.exp(1j * math.pi * y / (2 * ctx.omega_p))
    out = {(0, 0, 0, 0): 1.0 + 0j}
    for k in range(n):
        r = (n - 1) / 2 - k
        out = _mul(out, {(0, 0, 1, 0): ctx.qtpow(r) / Yt, (0, 0, 0, 1): -(-1) ** m * ctx.qtpow(-r) * Yt})
    for p in range(m):
        r = (m - 1) / 2 - p
        out = _mul(out, {(1, 0, 0, 0): ctx.qpow(r) / Y, (0, 1, 0, 0): -(-1) ** n * ctx.qpow(-r) * Y})
    return out


def pair_with(string: dict, phi: dict, c: complex, x) -> complex:
    """R(λ, ∂_μ) Φ(μ)|_{μ=0} on Φ(μ|x) = Σ φ_α μ^α e^{cx}."""
    total = 0j
    for k, coef in phi.items():
        op = string.get(k)
        if op is None:
            continue
        total += math.prod(math.factorial(e) for e in k) * coef * complex(op.apply_exp(c, x))
    return total


@dataclass
class FusionAgreement:
    nm: tuple
    residual: float
    scalar: complex
    expected_scalar: complex


def fusion_reduction_agree(nm, u: complex = 0.21 + 0.07j, s: complex = 0.13 - 0.09j,
                           ctx: Quasiperiods | None = None, tests=None, seed: int = 0) -> FusionAgreement:
    """Fused Λ-string at u + nω/2 + mω'/2 acting on D_N(a - y)e^{cx} against the reduced intertwiner."""
    ctx = ctx or Quasiperiods()
    n, m = nm
    tests = tests or default_tests(seed)
    rng = np.random.default_rng(seed + 7)
    ws = u + n * ctx.omega / 2 + m * ctx.omega_p / 2
    lhs, rhs = [], []
    for c, x in tests:
        a, y = rng.uniform(-0.3, 0.3, 2) + 1j * rng.uniform(-0.3, 0.3, 2)
        string = fuse_modular(ws, nm, s, a, ctx)
        lhs.append(pair_with(string, mu_generating_function(nm, y, ctx), c, x))
        rhs.append(complex(intertwiner_rhs(u, nm, s, a, x, y, lambda z: np.exp(c * z), ctx)))
    lhs, rhs = np.array(lhs), np.array(rhs)
    expected = (-1j) ** (n + m) * math.factorial(n) * math.factorial(m)
    if n == m == 0:
        return FusionAgreement(tuple(nm), float(np.max(np.abs(lhs - rhs))), 1.0, expected)
    lam = np.vdot(rhs, lhs) / np.vdot(rhs, rhs)
    res = float(np.max(np.abs(lhs - lam * rhs)) / np.max(np.abs(lhs)))
    return FusionAgreement(tuple(nm), res, complex(lam), expected)


def lambda_factorized_residual(u: complex, s: complex, a: complex, b: complex,
                               ctx: Quasiperiods | None = None, tests=None) -> tuple:
    """i·Λ(u) against D_{u2+ω'}(x-a) D_{u1+ω'}(p̂) D_{ω'}(x+b) D_{-u1}(p̂) D_{-u2}(x-a).

    Tested on Φ = D_{u2}(x-a)e^{cx} so that every D(p̂) meets an exponential.
    Returns (scalar, residual) of a projective fit; the scalar should be 1.
    """
    ctx = ctx or Quasiperiods()
    tests = tests or default_tests(0)
    w, wp = ctx.omega, ctx.omega_p
    u1 = u + s / 2 + w / 2 - wp / 2
    u2 = u - s / 2 + w / 2 - wp / 2
    mu = spinor(b, w)
    Lam = evaluate_mu(lambda_op(u, s, a, ctx), mu)
    kx = 1j * math.pi / (2 * w)
    lhs, rhs = [], []
    for c, x in tests:
        lhs.append(1j * complex(Lam.act(lambda y: dfun(u2, y - a, ctx) * np.exp(c * y), x)))
        p = c / (2j * math.pi)
        val = 0j
        for coef, dc in ((mu[0], kx), (-mu[1], -kx)):
            cc = c + dc
            val += coef * dfun(-u1, p, ctx) * dfun(u1 + wp, cc / (2j * math.pi), ctx) * np.exp(cc * x)
        rhs.append(complex(dfun(u2 + wp, x - a, ctx) * val))
    lhs, rhs = np.array(lhs), np.array(rhs)
    lam = np.vdot(rhs, lhs) / np.vdot(rhs, rhs)
    return complex(lam), float(np.max(np.abs(lhs - lam * rhs)) / np.max(np.abs(lhs)))


def star_triangle_shift(ab=((1, 0), (0, 1)), ctx: Quasiperiods | None = None, tests=None) -> float:
    """D_a(p̂)D_{a+b}(x)D_b(p̂) = D_b(x)D_{a+b}(p̂)D_a(x) for lattice a, b, on e^{cx}."""
    ctx = ctx or Quasiperiods()
    tests = tests or default_tests(0)
    a, b = ab
    s = (a[0] + b[0], a[1] + b[1])
    mult = lambda nm: ShiftOp.mult(dfun_lattice_exppoly(nm, ctx))
    lhs = shift_dop(a, ctx) * mult(s) * shift_dop(b, ctx)
    rhs = mult(b) * shift_dop(s, ctx) * mult(a)
    diff = lhs - rhs
    num = max(abs(complex(diff.apply_exp(c, x))) for c, x in tests)
    den = max(abs(complex(lhs.apply_exp(c, x))) for c, x in tests)
    return num / den


def annihilator_residual(nm, ctx: Quasiperiods | None = None) -> float:
    """D_{(n+1)ω+(m+1)ω'}(p̂) applied to each basis monomial of the (n, m) module.

    The residual is relative to Σ|c_δ e(x+δ)|, the size of the terms that cancel.
    """
    ctx = ctx or Quasiperiods()
    from .shiftop import basis_keys
    D = shift_dop((nm[0] + 1, nm[1] + 1), ctx)
    xs = np.linspace(-0.3, 0.3, 7) + 0.1j
    worst = 0.0
    for key in basis_keys(nm):
        e = ExpPoly.mono(*key, ctx)
        total = sum(c(xs) * e(xs + ctx.lattice(*sh)) for sh, c in D.terms.items())
        scale = sum(np.abs(c(xs) * e(xs + ctx.lattice(*sh))) for sh, c in D.terms.items())
        worst = max(worst, float(np.max(np.abs(total) / scale)))
    return worst


__all__ = ["lambda_op", "fuse_modular", "fusion_reduction_agree", "lambda_factorized_residual",
           "star_triangle_shift", "annihilator_residual", "mu_generating_function", "spinor", "spin_of",
           "dfun_lattice"]
