"""Differential operators, the affine-exponent sandwich engine and gamma ratios."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from .ring import (MultiPoly, RatFunc, RingError, RingMatrix, falling, qq, solve_exact)


class IntegralityError(ValueError):
    """A power survives with an exponent that is not a nonnegative integer."""


class InvarianceError(ValueError):
    """An operator does not preserve the truncated polynomial space."""


def _P(x) -> MultiPoly:
    return x if isinstance(x, MultiPoly) else MultiPoly.coerce(x)


class DiffOp:
    """Normal-ordered operator Σ_k p_k ∂^k in one variable."""

    __slots__ = ("var", "terms")

    def __init__(self, terms: dict | None = None, var: str = "z"):
        self.var = var
        self.terms = {k: _P(p) for k, p in (terms or {}).items() if p}

    @classmethod
    def mult(cls, p, var: str = "z") -> "DiffOp":
        return cls({0: _P(p)}, var)

    @classmethod
    def d(cls, k: int = 1, var: str = "z") -> "DiffOp":
        return cls({k: MultiPoly.const(1)}, var)

    @classmethod
    def identity(cls, var: str = "z") -> "DiffOp":
        return cls.mult(1, var)

    @property
    def order(self) -> int:
        return max(self.terms, default=-1)

    def _coerce(self, other):
        if isinstance(other, DiffOp):
            if other.var != self.var:
                raise RingError(f"variable mismatch {self.var} vs {other.var}")
            return other
        try:
            return DiffOp.mult(_P(other), self.var)
        except RingError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, p in o.terms.items():
            out[k] = out[k] + p if k in out else p
        return DiffOp(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({k: -p for k, p in self.terms.items()}, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return diffop_compose(self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return diffop_compose(o, self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        keys = set(self.terms) | set(o.terms)
        zero = MultiPoly.const(0)
        return all(self.terms.get(k, zero) == o.terms.get(k, zero) for k in keys)

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def act(self, p) -> MultiPoly:
        return diffop_act(self, p)

    def subs(self, mapping: dict) -> "DiffOp":
        if self.var in mapping:
            raise RingError("cannot substitute the operator variable")
        return DiffOp({k: p.subs(mapping) for k, p in self.terms.items()}, self.var)

    def rename(self, new_var: str) -> "DiffOp":
        m = {self.var: MultiPoly.var(new_var)}
        return DiffOp({k: p.subs(m) for k, p in self.terms.items()}, new_var)

    def coeff(self, k: int) -> MultiPoly:
        return self.terms.get(k, MultiPoly.const(0))

    def is_multiplication(self) -> bool:
        return self.order <= 0

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            p = self.terms[k]
            if k == 0:
                parts.append(f"({p})")
            else:
                parts.append(f"({p})*d{self.var}" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)

    __repr__ = __str__


def diffop_compose(A: DiffOp, B: DiffOp) -> DiffOp:
    """Normal-ordered A∘B via (a ∂^i)(b ∂^j) = Σ_t C(i,t) a (∂^t b) ∂^{i-t+j}."""
    if A.var != B.var:
        raise RingError(f"variable mismatch {A.var} vs {B.var}")
    z = A.var
    out: dict = {}
    for i, a in A.terms.items():
        for j, b in B.terms.items():
            db = b
            for t in range(i + 1):
                if not db:
                    break
                k = i - t + j
                term = a * db * math.comb(i, t)
                out[k] = out[k] + term if k in out else term
                db = db.diff(z)
    return DiffOp(out, z)


def diffop_act(A: DiffOp, p) -> MultiPoly:
    p = _P(p)
    total = MultiPoly.const(0)
    dp = p
    for k in range(A.order + 1):
        if k in A.terms:
            total = total + A.terms[k] * dp
        dp = dp.diff(A.var)
        if not dp:
            break
    return total


def diffop_restrict(A: DiffOp, n: int) -> RingMatrix:
    """Matrix of A on span{1, z, …, z^n}, column-action convention."""
    z = A.var
    zero = MultiPoly.const(0)
    cols = []
    for k in range(n + 1):
        img = diffop_act(A, MultiPoly.var(z, k))
        parts = img.coeffs_in(z)
        bad = [d for d in parts if d > n or d < 0]
        if bad:
            raise InvarianceError(f"{A} maps {z}^{k} outside span{{1..{z}^{n}}} (degree {max(bad)})")
        cols.append([parts.get(i, zero) for i in range(n + 1)])
    rows = [[cols[j][i] for j in range(n + 1)] for i in range(n + 1)]
    return RingMatrix(rows, row_basis=[f"{z}^{i}" for i in range(n + 1)],
                      col_basis=[f"{z}^{i}" for i in range(n + 1)])


# ---------------------------------------------------------------------------
# sandwich engine

@dataclass(frozen=True)
class Base:
    """A linear base w (e.g. z2 - x) with constant derivative in the operator variable."""
    name: str
    poly: MultiPoly

    def derivative(self, var: str) -> MultiPoly:
        d = self.poly.diff(var)
        if not d.is_constant():
            raise RingError(f"base {self.name} is not linear in {var}")
        return d


def standard_bases(bar: bool = False) -> dict:
    """The declared alphabet z2-x, z12, z2-y, z-x (and barred copies)."""
    b = "b" if bar else ""
    z1, z2 = MultiPoly.var(f"z{b}1"), MultiPoly.var(f"z{b}2")
    x, y = MultiPoly.var(f"x{b}"), MultiPoly.var(f"y{b}")
    return {f"z{b}2-x{b}": Base(f"z{b}2-x{b}", z2 - x),
            f"z{b}12": Base(f"z{b}12", z1 - z2),
            f"z{b}2-y{b}": Base(f"z{b}2-y{b}", z2 - y)}


@dataclass
class PowerTerm:
    """coef · Π base^exponent · ∂^order, exponents affine in formal parameters."""
    coef: MultiPoly
    factors: tuple
    order: int = 0

    def is_integral(self) -> bool:
        return all(_int_exponent(e) is not None for _, e in self.factors)

    def to_poly(self, bases: dict) -> MultiPoly:
        out = self.coef
        for name, e in self.factors:
            k = _int_exponent(e)
            if k is None:
                raise IntegralityError(f"exponent {e} of {name} is not a nonnegative integer")
            if k:
                out = out * bases[name].poly ** k
        return out


def _int_exponent(e: MultiPoly):
    e = _P(e)
    if not e.is_constant():
        return None
    v = e.constant_value()
    if v.denominator != 1 or v < 0:
        return None
    return int(v)


def sandwich_terms(prefix: Sequence, n: int, suffix: Sequence, var: str, bases: dict) -> list:
    """Expand prefix · ∂^n · suffix into PowerTerms by generalized Leibniz.

    prefix/suffix are lists of (base name, affine exponent).  Each returned
    term carries combined exponents per base and the leftover derivative order.
    """
    r = len(suffix)
    derivs = [bases[name].derivative(var) for name, _ in suffix]
    out = []
    for js in _compositions(n, r + 1):
        k = js[-1]
        coef = MultiPoly.const(math.factorial(n) // math.prod(math.factorial(j) for j in js))
        for (name, a), d, j in zip(suffix, derivs, js[:-1]):
            if j:
                coef = coef * falling(_P(a), j) * d ** j
        if not coef:
            continue
        expo: dict = {}
        for name, a in prefix:
            expo[name] = expo.get(name, MultiPoly.const(0)) + _P(a)
        for (name, a), j in zip(suffix, js[:-1]):
            expo[name] = expo.get(name, MultiPoly.const(0)) + _P(a) - j
        factors = tuple(sorted(expo.items()))
        for name, e in factors:
            if _int_exponent(e) is None:
                raise IntegralityError(
                    f"exponent of {name} after the sandwich is {e}; not a nonnegative integer")
        out.append(PowerTerm(coef, factors, k))
    return out


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def sandwich_diffop(prefix, n, suffix, var: str, bases: dict) -> DiffOp:
    terms: dict = {}
    for t in sandwich_terms(prefix, n, suffix, var, bases):
        p = t.to_poly(bases)
        terms[t.order] = terms[t.order] + p if t.order in terms else p
    return DiffOp(terms, var)


@dataclass(frozen=True)
class GenFun:
    """Generating function (basis_var - param)^degree of a finite representation."""
    param: str
    basis_var: str
    degree: int
    sign: int = 1  # +1: (b - p)^d, -1: (p - b)^d

    def poly(self) -> MultiPoly:
        b, p = MultiPoly.var(self.basis_var), MultiPoly.var(self.param)
        return (b - p) ** self.degree if self.sign > 0 else (p - b) ** self.degree

    def table(self):
        """G[i][j] = coefficient of basis_var^i param^j."""
        g = self.poly()
        d = self.degree
        return [[g.coeff(self.basis_var, i).coeff(self.param, j).constant_value() for j in range(d + 1)]
                for i in range(d + 1)]


def decode_generating(image, gen: GenFun):
    """Given the image F(param) of the generating function, return images of basis vectors.

    image: DiffOp whose coefficients are polynomials in gen.param.
    """
    d = gen.degree
    G = gen.table()
    per_power = []
    for j in range(d + 1):
        per_power.append(DiffOp({k: p.coeff(gen.param, j) for k, p in image.terms.items()}, image.var))
    for k, p in image.terms.items():
        if p.degree(gen.param) > d:
            raise InvarianceError(f"image has degree {p.degree(gen.param)} in {gen.param} > {d}")
    # image_j = Σ_i G[i][j] X_i  →  X = (G^T)^{-1} image
    Gt = [[G[i][j] for i in range(d + 1)] for j in range(d + 1)]
    ident = [[1 if a == b else 0 for b in range(d + 1)] for a in range(d + 1)]
    inv = solve_exact(Gt, ident)
    return [sum((per_power[j] * MultiPoly.const(inv[i][j]) for j in range(d + 1) if inv[i][j]),
                DiffOp({}, image.var)) for i in range(d + 1)]


def power_sandwich(prefix, n: int, suffix, gens: Sequence[GenFun], var: str,
                   bases: dict, out_var: str | None = None) -> RingMatrix:
    """Evaluate a reduction sandwich and read it off as a matrix.

    gens lists the generating functions present on the left-hand side: the
    first is the first space (its basis variable labels output rows); a second
    one (optional) is the second space when it is finite as well, in which case
    its factor must already be part of ``suffix`` and the result entries are
    polynomials (order-0 operators).
    """
    raw = sandwich_diffop(prefix, n, suffix, var, bases)
    finite2 = len(gens) > 1
    if finite2:
        raw = DiffOp({0: raw.coeff(0)}, var)
    g1 = gens[0]
    cols1 = decode_generating(raw, g1)
    zero = MultiPoly.const(0)
    if not finite2:
        rows = [[None] * (g1.degree + 1) for _ in range(g1.degree + 1)]
        for j, img in enumerate(cols1):
            for k, p in img.terms.items():
                for i, c in p.coeffs_in(g1.basis_var).items():
                    if i > g1.degree or i < 0:
                        raise InvarianceError(f"column {j} escapes to {g1.basis_var}^{i}")
            for i in range(g1.degree + 1):
                op = DiffOp({k: p.coeff(g1.basis_var, i) for k, p in img.terms.items()}, var)
                rows[i][j] = op.rename(out_var) if out_var else op
        labels = [f"{g1.basis_var}^{i}" for i in range(g1.degree + 1)]
        return RingMatrix(rows, row_basis=labels, col_basis=labels, kind="diffop",
                          zero=DiffOp({}, out_var or var))
    g2 = gens[1]
    d1, d2 = g1.degree + 1, g2.degree + 1
    size = d1 * d2
    rows = [[zero] * size for _ in range(size)]
    for i1, img in enumerate(cols1):
        cols2 = decode_generating(img, g2)
        for i2, img2 in enumerate(cols2):
            col = i1 * d2 + i2
            p = img2.coeff(0)
            for (a, b), c in _split2(p, g1.basis_var, g2.basis_var).items():
                if not (0 <= a < d1 and 0 <= b < d2):
                    raise InvarianceError(
                        f"column {col} escapes to {g1.basis_var}^{a} {g2.basis_var}^{b}")
                rows[a * d2 + b][col] = c
    labels = [f"{g1.basis_var}^{a}*{g2.basis_var}^{b}" for a in range(d1) for b in range(d2)]
    return RingMatrix(rows, row_dims=(d1, d2), col_dims=(d1, d2), row_basis=labels, col_basis=labels)


def _split2(p: MultiPoly, v1: str, v2: str) -> dict:
    out = {}
    for a, c1 in p.coeffs_in(v1).items():
        for b, c2 in c1.coeffs_in(v2).items():
            out[(a, b)] = c2
    return out


# ---------------------------------------------------------------------------
# normalization bookkeeping

@dataclass(frozen=True)
class NormalizationToken:
    """Formal product of dropped scalar prefactors."""
    factors: tuple = field(default_factory=tuple)

    @classmethod
    def of(cls, tag: str, power: int = 1) -> "NormalizationToken":
        return cls(((tag, power),))

    def __mul__(self, other):
        if not isinstance(other, NormalizationToken):
            return NotImplemented
        acc = dict(self.factors)
        for t, p in other.factors:
            acc[t] = acc.get(t, 0) + p
        return NormalizationToken(tuple(sorted((t, p) for t, p in acc.items() if p)))

    def __str__(self):
        return "*".join(t if p == 1 else f"({t})^{p}" for t, p in self.factors) or "1"


def gamma_ratio(a_num, a_den):
    """Γ(a_num)/Γ(a_den) as an exact rational function when the arguments differ by an integer."""
    a_num, a_den = _P(a_num), _P(a_den)
    diff = a_num - a_den
    if diff.is_constant() and diff.constant_value().denominator == 1:
        k = int(diff.constant_value())
        if k >= 0:
            return RatFunc(falling(a_den + k - 1, k) if k else MultiPoly.const(1))
        return RatFunc(MultiPoly.const(1), falling(a_num - k - 1, -k))
    return NormalizationToken.of(f"Gamma({a_num})/Gamma({a_den})")


def rising(a: MultiPoly, k: int) -> MultiPoly:
    out = MultiPoly.const(1)
    for j in range(k):
        out = out * (a + j)
    return out


def star_triangle_int(a: int, b: int, var: str = "z") -> tuple:
    """Both sides of ∂^a z^{a+b} ∂^b = z^b ∂^{a+b} z^a, normal ordered."""
    z = MultiPoly.var(var)
    lhs = DiffOp.d(a, var) * DiffOp.mult(z ** (a + b), var) * DiffOp.d(b, var)
    rhs = DiffOp.mult(z ** b, var) * DiffOp.d(a + b, var) * DiffOp.mult(z ** a, var)
    return lhs, rhs


def kills_generating_function(n: int, var: str = "z", other: str = "x") -> bool:
    """∂^{n+1} (z - x)^n = 0, the finite-dimensional generating function in the kernel."""
    g = (MultiPoly.var(var) - MultiPoly.var(other)) ** n
    return not DiffOp.d(n + 1, var).act(g)
