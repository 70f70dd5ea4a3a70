"""Exponential polynomials in X = e^{iπx/2ω}, X̃ = e^{iπx/2ω'} and lattice shift operators."""
from __future__ import annotations

import cmath
import math

import numpy as np

from ..ring import RingMatrix
from .qdilog import Quasiperiods

Key = tuple  # (j, k): X^j X̃^k  or  (a, b): shift by aω + bω'


class ExpPoly:
    """Σ c_{jk} X^j X̃^k with complex coefficients."""

    __slots__ = ("terms", "ctx")

    def __init__(self, terms: dict | None, ctx: Quasiperiods):
        self.terms = {k: complex(v) for k, v in (terms or {}).items() if v != 0}
        self.ctx = ctx

    @classmethod
    def const(cls, c, ctx):
        return cls({(0, 0): c}, ctx)

    @classmethod
    def mono(cls, j, k, ctx, c=1.0):
        return cls({(j, k): c}, ctx)

    def freq(self, key) -> complex:
        j, k = key
        return 1j * math.pi * (j / (2 * self.ctx.omega) + k / (2 * self.ctx.omega_p))

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for key, c in self.terms.items():
            out = out + c * np.exp(self.freq(key) * x)
        return out

    def shifted(self, shift: Key) -> "ExpPoly":
        """c(x + aω + bω')."""
        d = self.ctx.lattice(*shift)
        return ExpPoly({k: c * cmath.exp(self.freq(k) * d) for k, c in self.terms.items()}, self.ctx)

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            other = ExpPoly.const(other, self.ctx)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return ExpPoly(t, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({k: -c for k, c in self.terms.items()}, self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            return ExpPoly({k: c * other for k, c in self.terms.items()}, self.ctx)
        t: dict = {}
        for (j1, k1), c1 in self.terms.items():
            for (j2, k2), c2 in other.terms.items():
                key = (j1 + j2, k1 + k2)
                t[key] = t.get(key, 0) + c1 * c2
        return ExpPoly(t, self.ctx)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return " + ".join(f"({c:.6g})X^{j}X̃^{k}" for (j, k), c in sorted(self.terms.items())) or "0"


class ShiftOp:
    """Σ c_δ(x) T_δ with (T_δ f)(x) = f(x + aω + bω') and c_δ an ExpPoly."""

    __slots__ = ("terms", "ctx")

    def __init__(self, terms: dict | None, ctx: Quasiperiods):
        self.terms = {k: v for k, v in (terms or {}).items() if v}
        self.ctx = ctx

    @classmethod
    def zero(cls, ctx):
        return cls({}, ctx)

    @classmethod
    def const(cls, c, ctx):
        return cls({(0, 0): ExpPoly.const(c, ctx)}, ctx)

    @classmethod
    def shift(cls, a, b, ctx, c=1.0):
        return cls({(a, b): ExpPoly.const(c, ctx)}, ctx)

    @classmethod
    def mult(cls, e: ExpPoly):
        return cls({(0, 0): e}, e.ctx)

    def act(self, f, x):
        """(Σ c_δ T_δ f)(x) for a vectorized callable f."""
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for sh, c in self.terms.items():
            out = out + c(x) * f(x + self.ctx.lattice(*sh))
        return out

    def apply_exp(self, c, x):
        return self.act(lambda y: np.exp(c * y), x)

    def __add__(self, other):
        if not isinstance(other, ShiftOp):
            other = ShiftOp.const(other, self.ctx)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return ShiftOp(t, self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return ShiftOp({k: -c for k, c in self.terms.items()}, self.ctx)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ShiftOp):
            if isinstance(other, ExpPoly):
                other = ShiftOp.mult(other)
            else:
                return ShiftOp({k: c * other for k, c in self.terms.items()}, self.ctx)
        t: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                p = c1 * c2.shifted((a1, b1))
                t[key] = t[key] + p if key in t else p
        return ShiftOp(t, self.ctx)

    def __rmul__(self, other):
        if isinstance(other, ExpPoly):
            return ShiftOp.mult(other) * self
        return ShiftOp({k: other * c for k, c in self.terms.items()}, self.ctx)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return " + ".join(f"[{c}]T{sh}" for sh, c in sorted(self.terms.items())) or "0"


def shiftop_matrix(entries, ctx: Quasiperiods, **kw) -> RingMatrix:
    return RingMatrix(entries, kind="shiftop", zero=ShiftOp.zero(ctx), **kw)


def as_shiftop_matrix(M: np.ndarray, ctx: Quasiperiods) -> RingMatrix:
    return shiftop_matrix([[ShiftOp.const(x, ctx) for x in row] for row in np.asarray(M)], ctx)


# ---------------------------------------------------------------------------
# lattice D-functions as coefficients and as shift operators

def dfun_lattice_exppoly(nm, ctx: Quasiperiods) -> ExpPoly:
    """D_{nω+mω'}(x) expanded in the monomials X̃^{n-2k} X^{m-2l}."""
    n, m = nm
    out = ExpPoly.const(1, ctx)
    for k in range(n):
        r = (n - 1) / 2 - k
        out = out * ExpPoly({(0, 1): ctx.qtpow(r), (0, -1): (-1) ** m * ctx.qtpow(-r)}, ctx)
    for l in range(m):
        r = (m - 1) / 2 - l
        out = out * ExpPoly({(1, 0): ctx.qpow(r), (-1, 0): (-1) ** n * ctx.qpow(-r)}, ctx)
    return out


def shift_dop(nm, ctx: Quasiperiods | None = None) -> ShiftOp:
    """D_{nω+mω'}(p̂), p̂ = (1/2πi)∂_x: e^{iπp̂/2ω} = T_{-ω'} and e^{iπp̂/2ω'} = T_{-ω}."""
    ctx = ctx or Quasiperiods()
    n, m = nm
    out = ShiftOp.const(1, ctx)
    for k in range(n):
        r = (n - 1) / 2 - k
        out = out * (ShiftOp.shift(-1, 0, ctx, ctx.qtpow(r)) + ShiftOp.shift(1, 0, ctx, (-1) ** m * ctx.qtpow(-r)))
    for l in range(m):
        r = (m - 1) / 2 - l
        out = out * (ShiftOp.shift(0, -1, ctx, ctx.qpow(r)) + ShiftOp.shift(0, 1, ctx, (-1) ** n * ctx.qpow(-r)))
    return out


def basis_keys(nm) -> list:
    """Monomial keys (X power, X̃ power) of the finite-dimensional module, (k, l) lexicographic."""
    n, m = nm
    return [(m - 2 * l, n - 2 * k) for k in range(n + 1) for l in range(m + 1)]


# ---------------------------------------------------------------------------
# Lax operator and trigonometric R-matrix

def _pick(ctx: Quasiperiods, tilde: bool):
    """(w, w', X key, shift by +w') for the untilded or tilded copy."""
    if tilde:
        return ctx.omega_p, ctx.omega, (0, 1), (1, 0)
    return ctx.omega, ctx.omega_p, (1, 0), (0, 1)


def modular_lax(u: complex, s: complex, ctx: Quasiperiods | None = None, tilde: bool = False) -> RingMatrix:
    """2×2 Lax operator with entries in K_s^{±1}, (q-q⁻¹)E_s, (q-q⁻¹)F_s.

    K = T_{+ω'}; the tilded copy swaps ω ↔ ω'.  Auxiliary index is the matrix index.
    """
    ctx = ctx or Quasiperiods()
    w, wp, xk, sh = _pick(ctx, tilde)
    K = ShiftOp.shift(*sh, ctx)
    Ki = ShiftOp.shift(-sh[0], -sh[1], ctx)
    eu = cmath.exp(1j * math.pi * u / w)
    g = cmath.exp(1j * math.pi * (s + ctx.opp) / (2 * w))
    X2 = ShiftOp.mult(ExpPoly.mono(2 * xk[0], 2 * xk[1], ctx))
    Xm2 = ShiftOp.mult(ExpPoly.mono(-2 * xk[0], -2 * xk[1], ctx))
    E = X2 * (g * K - (1 / g) * Ki)
    F = Xm2 * (g * Ki - (1 / g) * K)
    return shiftop_matrix([[eu * K - (1 / eu) * Ki, F], [E, eu * Ki - (1 / eu) * K]], ctx)


def r4_trig(u: complex, ctx: Quasiperiods | None = None, tilde: bool = False) -> np.ndarray:
    """Trigonometric 4×4 R-matrix intertwining two copies of the modular Lax operator."""
    ctx = ctx or Quasiperiods()
    w, wp, _, _ = _pick(ctx, tilde)
    a = cmath.sin(math.pi * (u + wp / 2) / w) / (2 * cmath.sin(math.pi * wp / (2 * w)))
    b = cmath.cos(math.pi * (u + wp / 2) / w) / (2 * cmath.cos(math.pi * wp / (2 * w)))
    R = np.zeros((4, 4), dtype=complex)
    R[0, 0] = R[3, 3] = a + b
    R[1, 1] = R[2, 2] = a - b
    R[1, 2] = R[2, 1] = 1.0
    return R
