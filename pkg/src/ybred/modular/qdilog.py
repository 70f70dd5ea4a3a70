"""Quasiperiods, the noncompact quantum dilogarithm γ(z) and D_a(z)."""
from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

DEFAULT_OMEGA = 0.5 * cmath.exp(1j * math.pi / 3)


class PoleProximityError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Quasiperiods:
    """ω, ω' with ωω' = -1/4 and positive imaginary parts."""
    omega: complex = DEFAULT_OMEGA
    omega_p: complex | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.omega_p is None:
            object.__setattr__(self, "omega_p", -1 / (4 * self.omega))
        w, wp = self.omega, self.omega_p
        if not (w.imag > 0 and wp.imag > 0):
            raise ValueError("quasiperiods need positive imaginary parts")
        if abs(w * wp + 0.25) > 1e-15 * 0.25 * 4:
            raise ValueError("normalization ωω' = -1/4 violated")
        if abs((wp / w).imag) <= 1e-6:
            raise ValueError("ω'/ω must not be real")

    @property
    def opp(self) -> complex:
        """ω'' = ω + ω'."""
        return self.omega + self.omega_p

    @property
    def beta(self) -> complex:
        w, wp = self.omega, self.omega_p
        return math.pi / 12 * (w / wp + wp / w)

    def qpow(self, r) -> complex:
        """q^r with q = e^{iπω'/ω}."""
        return cmath.exp(1j * math.pi * r * self.omega_p / self.omega)

    def qtpow(self, r) -> complex:
        """q̃^r with q̃ = e^{iπω/ω'}."""
        return cmath.exp(1j * math.pi * r * self.omega / self.omega_p)

    @property
    def q(self) -> complex:
        return self.qpow(1)

    @property
    def qt(self) -> complex:
        return self.qtpow(1)

    def lattice(self, a, b) -> complex:
        return a * self.omega + b * self.omega_p

    def swapped(self) -> "Quasiperiods":
        return Quasiperiods(self.omega_p, self.omega)

    def key(self):
        return (self.omega, self.omega_p)


# ---------------------------------------------------------------------------
# γ(z): product path

def _log_gamma_product_raw(z, ctx: Quasiperiods, tol: float = 1e-18):
    """log of Π(1 + e^{-iπz/ω} q^{2k+1}) / Π(1 + e^{-iπz/ω'} q̃^{-2k-1}), vectorized in z.

    Summed in log space so that large |Re z| does not overflow; the branch of
    the logarithm is irrelevant after exponentiation.
    """
    z = np.asarray(z, dtype=complex)
    w, wp = ctx.omega, ctx.omega_p
    lE = -1j * np.pi * z / w
    lEt = -1j * np.pi * z / wp
    lq, lqt = 1j * np.pi * wp / w, -1j * np.pi * w / wp
    out = np.zeros_like(z)
    ltol = math.log(tol)
    for k in range(100000):
        a = lE + (2 * k + 1) * lq
        b = lEt + (2 * k + 1) * lqt
        if np.all(a.real < ltol) and np.all(b.real < ltol):
            break
        out = out + _log1pexp(a) - _log1pexp(b)
    else:
        raise ConvergenceError("product representation did not converge")
    return out


def _log1pexp(a):
    """log(1 + e^a) without overflow."""
    big = a.real > 30
    safe = np.where(big, 0, a)
    return np.where(big, a + np.log1p(np.exp(-np.where(big, a, 0))), np.log1p(np.exp(safe)))


def log_gamma_product(z, ctx: Quasiperiods):
    """log γ(z) with γ(z) = e^{iβ/2} γ_p(z)/γ_p(0); the constant follows from γ(0)² = e^{iβ}."""
    g0 = ctx._cache.get("lgp0")
    if g0 is None:
        g0 = complex(_log_gamma_product_raw(0.0, ctx))
        with ctx._lock:
            ctx._cache["lgp0"] = g0
    return 0.5j * ctx.beta + _log_gamma_product_raw(z, ctx) - g0


def gamma_product(z, ctx: Quasiperiods):
    out = np.exp(log_gamma_product(z, ctx))
    return complex(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# γ(z): contour integral

_ARC_NODES, _ARC_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _integrand(t, z, w, wp):
    return np.exp(1j * t * z) / (t * np.sin(w * t) * np.sin(wp * t))


def gamma_integral(z: complex, ctx: Quasiperiods, radius: float = 0.1, tol: float = 1e-13) -> complex:
    """γ(z) from the contour integral, the contour passing above t = 0.

    The contour is the real line with |t| > radius, folded to (radius, ∞), plus a
    semicircle of that radius in the upper half-plane.
    """
    z = complex(z)
    w, wp = ctx.omega, ctx.omega_p
    decay = (w + wp).imag - abs(z.imag)
    if decay <= 0:
        raise ConvergenceError("integral representation needs |Im z| < Im ω''")
    # semicircle t = r e^{iθ}, θ from π to 0
    theta = 0.5 * math.pi * (_ARC_NODES + 1)
    t = radius * np.exp(1j * theta)
    arc = -np.sum(_ARC_WEIGHTS * 0.5 * math.pi * _integrand(t, z, w, wp) * 1j * t)
    # (radius, T) with e^{itz} - e^{-itz} folded
    T = radius + 40.0 / decay

    def f(s):
        return 2j * np.sin(s * z) / (s * np.sin(w * s) * np.sin(wp * s))

    re, err1 = integrate.quad(lambda s: f(s).real, radius, T, limit=800, epsabs=tol, epsrel=tol)
    im, err2 = integrate.quad(lambda s: f(s).imag, radius, T, limit=800, epsabs=tol, epsrel=tol)
    if max(err1, err2) > 1e-9:
        raise ConvergenceError(f"quadrature error estimate {max(err1, err2):.2e}")
    return cmath.exp(-0.25 * (arc + re + 1j * im))


def qdilog(z, ctx: Quasiperiods | None = None, method: str = "product", guard: float = 1e-6):
    """Noncompact quantum dilogarithm γ(z)."""
    ctx = ctx or Quasiperiods()
    if guard:
        _check_poles(z, ctx, guard)
    if method == "product":
        return gamma_product(z, ctx)
    if method == "integral":
        if np.ndim(z):
            return np.array([gamma_integral(complex(x), ctx) for x in np.ravel(z)]).reshape(np.shape(z))
        return gamma_integral(z, ctx)
    raise ValueError(f"unknown method {method}")


def _check_poles(z, ctx: Quasiperiods, guard: float):
    """Zeros at ω''+2nω+2mω' and poles at -(ω''+2nω+2mω'), n, m ≥ 0."""
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    M = np.array([[ctx.omega.real, ctx.omega_p.real], [ctx.omega.imag, ctx.omega_p.imag]])
    for sign in (1, -1):
        rel = sign * zz - ctx.opp
        coords = np.linalg.solve(M, np.vstack([rel.real, rel.imag]))
        n = np.round(coords / 2)
        ok = (n >= 0).all(axis=0)
        near = np.abs(rel - 2 * (n[0] * ctx.omega + n[1] * ctx.omega_p)) < guard
        if np.any(ok & near):
            kind = "zero" if sign == 1 else "pole"
            raise PoleProximityError(f"argument within {guard} of a {kind} of γ")


def gamma_zero(n: int, m: int, ctx: Quasiperiods) -> complex:
    return ctx.opp + 2 * n * ctx.omega + 2 * m * ctx.omega_p


# ---------------------------------------------------------------------------
# D-function

def dfun(a, z, ctx: Quasiperiods | None = None, method: str = "product"):
    """D_a(z) = e^{-2πiaz} γ(z+a)/γ(z-a)."""
    ctx = ctx or Quasiperiods()
    z = np.asarray(z, dtype=complex)
    if method == "product":
        out = np.exp(-2j * np.pi * a * z + log_gamma_product(z + a, ctx) - log_gamma_product(z - a, ctx))
    else:
        out = np.exp(-2j * np.pi * a * z) * qdilog(z + a, ctx, method, guard=0) / qdilog(z - a, ctx, method, guard=0)
    return complex(out) if np.ndim(out) == 0 else out


def gamma_lattice_ratio(z, j: int, k: int, ctx: Quasiperiods):
    """γ(z + 2jω + 2kω')/γ(z) by the two first-order difference equations."""
    z = np.asarray(z, dtype=complex)
    w, wp = ctx.omega, ctx.omega_p
    out = np.ones_like(z)
    cur = z.copy()
    step = 1 if j >= 0 else -1
    for _ in range(abs(j)):
        if step > 0:
            out = out * (1 + np.exp(-1j * np.pi * (cur + w) / wp))
            cur = cur + 2 * w
        else:
            out = out / (1 + np.exp(-1j * np.pi * (cur - w) / wp))
            cur = cur - 2 * w
    step = 1 if k >= 0 else -1
    for _ in range(abs(k)):
        if step > 0:
            out = out * (1 + np.exp(-1j * np.pi * (cur + wp) / w))
            cur = cur + 2 * wp
        else:
            out = out / (1 + np.exp(-1j * np.pi * (cur - wp) / w))
            cur = cur - 2 * wp
    return out


def dfun_lattice(nm, z, ctx: Quasiperiods | None = None, y=0.0):
    """D_{nω+mω'}(z - y) as the finite double product (no γ evaluations)."""
    ctx = ctx or Quasiperiods()
    n, m = nm
    x = np.asarray(z, dtype=complex) - y
    X = np.exp(1j * np.pi * x / (2 * ctx.omega))
    Xt = np.exp(1j * np.pi * x / (2 * ctx.omega_p))
    out = np.ones_like(x)
    for k in range(n):
        r = (n - 1) / 2 - k
        out = out * (Xt * ctx.qtpow(r) + (-1) ** m / Xt * ctx.qtpow(-r))
    for l in range(m):
        r = (m - 1) / 2 - l
        out = out * (X * ctx.qpow(r) + (-1) ** n / X * ctx.qpow(-r))
    return complex(out) if np.ndim(out) == 0 else out


def fourier_a(a: complex, ctx: Quasiperiods) -> complex:
    """A(a) = e^{iπ(2a+ω'')²/2 + iβ/2} / γ(2a+ω'')."""
    x = 2 * a + ctx.opp
    return cmath.exp(0.5j * math.pi * x * x + 0.5j * ctx.beta) / qdilog(x, ctx, guard=0)


def fourier_check(a: complex, z: complex, ctx: Quasiperiods, tmax: float | None = None) -> float:
    """|A(a)∫ e^{2πitz} D_a(t) dt - D_{-ω''-a}(z)| / |D_{-ω''-a}(z)| by real-line quadrature.

    Needs Im a < 0 and |Im z| < -Im a so that the integrand decays on both sides.
    """
    if not (a.imag < 0 and abs(z.imag) < -a.imag):
        raise ValueError("outside the documented domain Im a < 0, |Im z| < -Im a")
    rate = 2 * math.pi * (-a.imag - abs(z.imag))
    tmax = tmax or 40.0 / rate

    def f(t):
        return np.exp(2j * np.pi * t * z) * dfun(a, t, ctx)

    re, _ = integrate.quad(lambda t: f(t).real, -tmax, tmax, limit=2000, epsabs=1e-12, epsrel=1e-11)
    im, _ = integrate.quad(lambda t: f(t).imag, -tmax, tmax, limit=2000, epsabs=1e-12, epsrel=1e-11)
    lhs = fourier_a(a, ctx) * (re + 1j * im)
    rhs = dfun(-ctx.opp - a, z, ctx)
    return abs(lhs - rhs) / abs(rhs)
