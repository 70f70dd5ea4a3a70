"""Exact scalars, multivariate (Laurent) polynomials and dense matrices.

Coefficients are gmpy2 rationals.  Polynomials are dicts mapping exponent
tuples (aligned with a sorted symbol table) to nonzero coefficients, so equal
values always have equal representations.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from gmpy2 import mpq

QQ = mpq


class RingError(TypeError):
    pass


def qq(x, den=None) -> mpq:
    """Coerce ints, Fractions, strings like '3/2' and mpq to mpq."""
    if den is not None:
        return qq(x) / qq(den)
    if isinstance(x, str):
        return mpq(x.strip())
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise RingError("floats are not exact scalars")
    return mpq(x)


def qq_str(x: mpq) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class ExactScalar:
    """Gaussian rational re + i*im; the imaginary part is usually zero."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = qq(re)
        self.im = qq(im)

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        return x if isinstance(x, ExactScalar) else cls(x)

    @property
    def numerator(self):
        return self.re.numerator

    @property
    def denominator(self):
        return self.re.denominator

    def is_real(self) -> bool:
        return self.im == 0

    def __add__(self, o):
        o = ExactScalar.coerce(o)
        return ExactScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-ExactScalar.coerce(o))

    def __rsub__(self, o):
        return ExactScalar.coerce(o) - self

    def __mul__(self, o):
        o = ExactScalar.coerce(o)
        return ExactScalar(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = ExactScalar.coerce(o)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return self * ExactScalar(o.re / d, -o.im / d)

    def __eq__(self, o):
        try:
            o = ExactScalar.coerce(o)
        except (RingError, TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __str__(self):
        if self.im == 0:
            return qq_str(self.re)
        return f"{qq_str(self.re)}+{qq_str(self.im)}*I"

    __repr__ = __str__

    @classmethod
    def parse(cls, s: str) -> "ExactScalar":
        s = s.strip()
        if s.endswith("*I"):
            body = s[:-2]
            # split at the last sign that is not part of an exponent or at the start
            for i in range(len(body) - 1, 0, -1):
                if body[i] in "+-" and body[i - 1] != "/":
                    re = body[:i]
                    im = body[i + 1:] if body[i] == "+" else body[i:]
                    return cls(qq(re), qq(im))
            return cls(0, qq(body))
        return cls(qq(s))


def _norm_exp(e):
    if isinstance(e, type(mpq(0))):
        e = Fraction(int(e.numerator), int(e.denominator))
    if isinstance(e, Fraction):
        return e.numerator if e.denominator == 1 else e
    return int(e)


def _exp_str(e) -> str:
    if isinstance(e, Fraction):
        return f"({e.numerator}/{e.denominator})"
    return str(e)


class MultiPoly:
    """Exact polynomial with rational coefficients in named commuting symbols.

    Symbols are kept in a sorted table; binary operations merge tables.
    """

    __slots__ = ("symbols", "terms", "_hash")
    laurent = False

    def __init__(self, terms: dict | None = None, symbols: Sequence[str] = ()):
        self.symbols = tuple(symbols)
        self.terms = {} if terms is None else terms
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "MultiPoly":
        c = qq(c)
        return cls({(): c} if c else {}, ())

    @classmethod
    def var(cls, name: str, power=1) -> "MultiPoly":
        power = _norm_exp(power)
        if not cls.laurent and (not isinstance(power, int) or power < 0):
            raise RingError(f"exponent {power} not allowed in {cls.__name__}")
        if power == 0:
            return cls.const(1)
        return cls({(power,): mpq(1)}, (name,))

    @classmethod
    def monomial(cls, coef, powers: dict) -> "MultiPoly":
        powers = {k: _norm_exp(v) for k, v in powers.items() if v != 0}
        syms = tuple(sorted(powers))
        for v in powers.values():
            if not cls.laurent and (not isinstance(v, int) or v < 0):
                raise RingError(f"exponent {v} not allowed in {cls.__name__}")
        c = qq(coef)
        if not c:
            return cls({}, ())
        return cls({tuple(powers[s] for s in syms): c}, syms)

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            if x.laurent and not cls.laurent:
                raise RingError("cannot use a Laurent polynomial here")
            if isinstance(x, cls):
                return x
            return cls(dict(x.terms), x.symbols)
        if isinstance(x, ExactScalar):
            if x.im:
                raise RingError("Gaussian scalars are not polynomial coefficients")
            return cls.const(x.re)
        if isinstance(x, (int, Fraction, type(mpq(0)))):
            return cls.const(x)
        raise RingError(f"cannot coerce {type(x).__name__} to {cls.__name__}")

    def _cls_for(self, other):
        return LaurentPoly if (self.laurent or other.laurent) else MultiPoly

    # symbol alignment ---------------------------------------------------
    def extend(self, symbols: Sequence[str]) -> "MultiPoly":
        symbols = tuple(symbols)
        if symbols == self.symbols:
            return self
        idx = [symbols.index(s) for s in self.symbols]
        n = len(symbols)
        out = {}
        for e, c in self.terms.items():
            full = [0] * n
            for i, v in zip(idx, e):
                full[i] = v
            out[tuple(full)] = c
        return type(self)(out, symbols)

    def _align(self, other: "MultiPoly"):
        if self.symbols == other.symbols:
            return self, other, self.symbols
        syms = tuple(sorted(set(self.symbols) | set(other.symbols)))
        return self.extend(syms), other.extend(syms), syms

    def trim(self) -> "MultiPoly":
        """Drop symbols that no longer occur."""
        if not self.terms:
            return type(self)({}, ())
        used = [i for i in range(len(self.symbols)) if any(e[i] != 0 for e in self.terms)]
        if len(used) == len(self.symbols):
            return self
        return type(self)({tuple(e[i] for i in used): c for e, c in self.terms.items()},
                          tuple(self.symbols[i] for i in used))

    # arithmetic -------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, MultiPoly):
            return other
        try:
            return type(self).coerce(other)
        except RingError:
            return None

    def __add__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        a, b, syms = self._align(o)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._cls_for(o)(out, syms).trim()

    __radd__ = __add__

    def __neg__(self):
        return type(self)({e: -c for e, c in self.terms.items()}, self.symbols)

    def __sub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        cls = self._cls_for(o)
        if not self.terms or not o.terms:
            return cls({}, ())
        if len(o.terms) == 1 and not o.symbols:
            c = o.terms[()]
            return cls({e: v * c for e, v in self.terms.items()}, self.symbols)
        if len(self.terms) == 1 and not self.symbols:
            c = self.terms[()]
            return cls({e: v * c for e, v in o.terms.items()}, o.symbols)
        a, b, syms = self._align(o)
        out: dict = {}
        get = out.get
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                v = get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        out = {e: c for e, c in out.items() if c}
        return self._cls_for(o)(out, syms).trim()

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise RingError("integer powers only")
        if k < 0:
            inv = self.monomial_inverse()
            return inv ** (-k)
        result = type(self).const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def monomial_inverse(self) -> "MultiPoly":
        if len(self.terms) != 1:
            raise RingError("only monomials are invertible")
        (e, c), = self.terms.items()
        if any(x != 0 for x in e) and not self.laurent:
            raise RingError("negative powers need a Laurent polynomial")
        return type(self)({tuple(-x for x in e): 1 / c}, self.symbols)

    def __truediv__(self, other):
        if isinstance(other, MultiPoly):
            if other.is_constant():
                return self * (1 / other.constant_value())
            q = exact_div(self, other)
            if q is None:
                raise RingError("polynomial division is not exact")
            return q
        return self * (1 / qq(other))

    # comparisons ------------------------------------------------------
    def __eq__(self, other):
        o = self._wrap(other)
        if o is None:
            return NotImplemented
        a, b = self.trim(), o.trim()
        return a.symbols == b.symbols and a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            t = self.trim()
            self._hash = hash((t.symbols, frozenset(t.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # queries ----------------------------------------------------------
    def is_constant(self) -> bool:
        return all(all(x == 0 for x in e) for e in self.terms)

    def constant_value(self) -> mpq:
        for e, c in self.terms.items():
            if all(x == 0 for x in e):
                return c
        return mpq(0)

    def degree(self, sym: str | None = None):
        if not self.terms:
            return -1
        if sym is None:
            return max(sum(e) for e in self.terms)
        if sym not in self.symbols:
            return 0
        i = self.symbols.index(sym)
        return max(e[i] for e in self.terms)

    def min_degree(self, sym: str):
        if sym not in self.symbols or not self.terms:
            return 0
        i = self.symbols.index(sym)
        return min(e[i] for e in self.terms)

    def free_symbols(self) -> set:
        return set(self.trim().symbols)

    def coeff(self, sym: str, k) -> "MultiPoly":
        """Coefficient of sym^k (a polynomial in the other symbols)."""
        if sym not in self.symbols:
            return self if k == 0 else type(self)({}, ())
        i = self.symbols.index(sym)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return type(self)(out, self.symbols).trim()

    def coeffs_in(self, sym: str) -> dict:
        """Map power -> coefficient polynomial for one symbol."""
        if sym not in self.symbols:
            return {0: self} if self.terms else {}
        i = self.symbols.index(sym)
        buckets: dict = {}
        for e, c in self.terms.items():
            buckets.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: type(self)(v, self.symbols).trim() for k, v in buckets.items()}

    def diff(self, sym: str) -> "MultiPoly":
        if sym not in self.symbols:
            return type(self)({}, ())
        i = self.symbols.index(sym)
        out = {}
        for e, c in self.terms.items():
            if e[i] != 0:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return type(self)(out, self.symbols).trim()

    def subs(self, mapping: dict) -> "MultiPoly":
        """Substitute symbols by polynomials (or exact numbers)."""
        vals = {k: (v if isinstance(v, MultiPoly) else type(self).coerce(v)) for k, v in mapping.items()}
        if not any(s in vals for s in self.symbols):
            return self
        keep = [i for i, s in enumerate(self.symbols) if s not in vals]
        subi = [(i, vals[s]) for i, s in enumerate(self.symbols) if s in vals]
        cache: dict = {}

        def power(i, p, k):
            key = (i, k)
            if key not in cache:
                if isinstance(k, Fraction):
                    raise RingError("cannot substitute into a fractional power")
                cache[key] = p ** k
            return cache[key]

        cls = type(self)
        if any(p.laurent for _, p in subi):
            cls = LaurentPoly
        result = cls({}, ())
        groups: dict = {}
        for e, c in self.terms.items():
            key = tuple(e[i] for i, _ in subi)
            groups.setdefault(key, {})[tuple(e[i] for i in keep)] = c
        rest_syms = tuple(self.symbols[i] for i in keep)
        for key, rest in groups.items():
            term = cls(rest, rest_syms)
            for (i, p), k in zip(subi, key):
                if k != 0:
                    term = term * power(i, p, k)
            result = result + term
        return result

    def evaluate(self, values: dict):
        """Numeric evaluation with arbitrary number types."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for s, k in zip(self.symbols, e):
                if k != 0:
                    t = t * values[s] ** k
            total = total + t
        return total

    def sorted_terms(self):
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading(self):
        return self.sorted_terms()[0]

    # text form --------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            s = qq_str(c)
            for sym, k in zip(self.symbols, e):
                if k == 0:
                    continue
                s += f"*{sym}" if k == 1 else f"*{sym}^{_exp_str(k)}"
            parts.append(s)
        return " + ".join(parts)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        text = text.strip()
        if text == "0":
            return cls({}, ())
        result = cls({}, ())
        for pos, term in _split_terms(text):
            factors = term.split("*")
            try:
                coef = qq(factors[0])
            except (ValueError, TypeError) as exc:
                raise RingError(f"bad coefficient {factors[0]!r} at position {pos}") from exc
            powers: dict = {}
            for f in factors[1:]:
                if "^" in f:
                    name, k = f.split("^", 1)
                    k = k.strip("()")
                    k = Fraction(k)
                else:
                    name, k = f, 1
                if not name.isidentifier():
                    raise RingError(f"bad symbol {name!r} at position {pos}")
                powers[name] = powers.get(name, 0) + k
            result = result + cls.monomial(coef, powers)
        return result


def _split_terms(text: str):
    pos = 0
    for chunk in text.split(" + "):
        yield pos, chunk.strip()
        pos += len(chunk) + 3


class LaurentPoly(MultiPoly):
    """Polynomial allowing negative (and rational) exponents, e.g. in q, U, V."""

    __slots__ = ()
    laurent = True

    def clear_negative(self):
        """Return (monomial m, polynomial p) with self = p / m and p free of negative powers."""
        if not self.terms:
            return {}, self
        shift = {}
        for i, s in enumerate(self.symbols):
            lo = min(e[i] for e in self.terms)
            if lo < 0:
                shift[s] = -lo
        if not shift:
            return {}, self
        return shift, self * LaurentPoly.monomial(1, shift)


def exact_div(p: MultiPoly, d: MultiPoly):
    """Quotient p/d if d divides p exactly (graded-lex division), else None."""
    if not d.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.terms:
        return type(p)({}, ())
    cls = LaurentPoly if (p.laurent or d.laurent) else MultiPoly
    if cls is LaurentPoly:
        sp, pp = LaurentPoly.coerce(p).clear_negative()
        sd, dd = LaurentPoly.coerce(d).clear_negative()
        q = _poly_div(pp, dd)
        if q is None:
            return None
        corr = {k: sd.get(k, 0) - sp.get(k, 0) for k in set(sp) | set(sd)}
        return LaurentPoly.coerce(q) * LaurentPoly.monomial(1, corr)
    return _poly_div(p, d)


def _poly_div(p: MultiPoly, d: MultiPoly):
    p, d, syms = p._align(d)
    le, lc = d.leading()
    rem = p
    quotient = type(p)({}, ())
    steps = 0
    while rem.terms:
        rem = rem.extend(tuple(sorted(set(rem.symbols) | set(syms))))
        dd = d.extend(rem.symbols)
        le, lc = dd.leading()
        re_, rc = rem.leading()
        diff = tuple(a - b for a, b in zip(re_, le))
        if any(x < 0 for x in diff):
            return None
        t = type(p)({diff: rc / lc}, rem.symbols)
        quotient = quotient + t
        rem = rem - t * dd
        steps += 1
        if steps > 100000:
            return None
    return quotient


class RatFunc:
    """num/den pair of polynomials; used for recovered projective scalars."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = num if isinstance(num, MultiPoly) else MultiPoly.coerce(num)
        den = den if isinstance(den, MultiPoly) else MultiPoly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        q = exact_div(num, den)
        if q is not None:
            num, den = q, type(den).const(1)
        elif den.is_constant():
            num, den = num * (1 / den.constant_value()), type(den).const(1)
        self.num, self.den = num, den

    def __mul__(self, o):
        o = o if isinstance(o, RatFunc) else RatFunc(o)
        return RatFunc(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        o = o if isinstance(o, RatFunc) else RatFunc(o)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __eq__(self, o):
        o = o if isinstance(o, RatFunc) else RatFunc(o)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash(str(self))

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def poly(text_or_value, laurent: bool = False) -> MultiPoly:
    """Convenience constructor: poly('u'), poly(3), poly('2*u^2 + 1')."""
    cls = LaurentPoly if laurent else MultiPoly
    if isinstance(text_or_value, str):
        t = text_or_value.strip()
        if t.isidentifier():
            return cls.var(t)
        return cls.parse(t)
    return cls.coerce(text_or_value)


def falling(a: MultiPoly, k: int) -> MultiPoly:
    """a (a-1) ... (a-k+1)."""
    out = type(a).const(1) if isinstance(a, MultiPoly) else MultiPoly.const(1)
    for j in range(k):
        out = out * (a - j)
    return out


# ---------------------------------------------------------------------------
# matrices

RING_KINDS = ("rational", "multipoly", "laurent_q", "complex", "diffop")


def _is_zero(x) -> bool:
    if isinstance(x, complex) or isinstance(x, float):
        return x == 0
    return not x


class RingMatrix:
    """Dense matrix with column-action convention and basis metadata.

    ``M.entries[i][j]`` is the coefficient of basis vector ``i`` in the image of
    basis vector ``j``.
    """

    __slots__ = ("entries", "rows", "cols", "row_dims", "col_dims",
                 "row_basis", "col_basis", "kind", "cleared_power", "zero")

    def __init__(self, entries, row_dims=None, col_dims=None, row_basis=None,
                 col_basis=None, kind: str | None = None, cleared_power: int = 0, zero=None):
        self.entries = [list(r) for r in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.rows else 0
        if any(len(r) != self.cols for r in self.entries):
            raise RingError("ragged matrix")
        self.row_dims = tuple(row_dims) if row_dims else (self.rows,)
        self.col_dims = tuple(col_dims) if col_dims else (self.cols,)
        if math.prod(self.row_dims) != self.rows or math.prod(self.col_dims) != self.cols:
            raise RingError("tensor factor dims do not match matrix shape")
        self.row_basis = list(row_basis) if row_basis else [str(i) for i in range(self.rows)]
        self.col_basis = list(col_basis) if col_basis else [str(j) for j in range(self.cols)]
        self.kind = kind or _guess_kind(self.entries)
        self.cleared_power = cleared_power
        self.zero = zero if zero is not None else _zero_for(self.kind)

    # constructors -------------------------------------------------------
    @classmethod
    def identity(cls, n: int, kind="rational", one=None, zero=None, dims=None):
        one = one if one is not None else _one_for(kind)
        zero = zero if zero is not None else _zero_for(kind)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)],
                   row_dims=dims, col_dims=dims, kind=kind)

    @classmethod
    def zeros(cls, r: int, c: int, kind="rational"):
        z = _zero_for(kind)
        return cls([[z] * c for _ in range(r)], kind=kind)

    def like(self, entries, **kw):
        opts = dict(row_dims=self.row_dims, col_dims=self.col_dims, row_basis=self.row_basis,
                    col_basis=self.col_basis, kind=self.kind, cleared_power=self.cleared_power)
        opts.update(kw)
        return RingMatrix(entries, **opts)

    # access -------------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self):
        return self.rows, self.cols

    def map(self, f: Callable) -> "RingMatrix":
        return self.like([[f(x) for x in row] for row in self.entries], kind=None)

    def transpose(self) -> "RingMatrix":
        return RingMatrix([list(c) for c in zip(*self.entries)], row_dims=self.col_dims,
                          col_dims=self.row_dims, row_basis=self.col_basis,
                          col_basis=self.row_basis, kind=self.kind, cleared_power=self.cleared_power)

    T = property(transpose)

    # arithmetic ---------------------------------------------------------
    def __matmul__(self, other: "RingMatrix") -> "RingMatrix":
        if self.cols != other.rows:
            raise RingError(f"shape mismatch {self.shape} @ {other.shape}")
        brows = [[(j, x) for j, x in enumerate(r) if not _is_zero(x)] for r in other.entries]
        out = []
        for row in self.entries:
            acc: dict = {}
            for k, a in enumerate(row):
                if _is_zero(a):
                    continue
                for j, b in brows[k]:
                    p = a * b
                    if j in acc:
                        acc[j] = acc[j] + p
                    else:
                        acc[j] = p
            zero = self.zero if self.kind != "rational" or other.kind == "rational" else other.zero
            out.append([acc.get(j, zero) for j in range(other.cols)])
        kind = _combine_kind(self.kind, other.kind)
        return RingMatrix(out, row_dims=self.row_dims, col_dims=other.col_dims,
                          row_basis=self.row_basis, col_basis=other.col_basis, kind=kind,
                          cleared_power=self.cleared_power + other.cleared_power)

    def __add__(self, other: "RingMatrix") -> "RingMatrix":
        if self.shape != other.shape:
            raise RingError(f"shape mismatch {self.shape} + {other.shape}")
        return self.like([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
                         kind=_combine_kind(self.kind, other.kind))

    def __neg__(self):
        return self.like([[-a for a in r] for r in self.entries])

    def __sub__(self, other: "RingMatrix") -> "RingMatrix":
        return self + (-other)

    def scale(self, c) -> "RingMatrix":
        return self.like([[c * a for a in r] for r in self.entries], kind=None)

    def is_zero(self) -> bool:
        return all(_is_zero(x) for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix) or self.shape != other.shape:
            return False
        return all(a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))

    __hash__ = None

    def nonzero_count(self) -> int:
        return sum(1 for r in self.entries for x in r if not _is_zero(x))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "RingMatrix":
        return RingMatrix([[self.entries[i][j] for j in cols] for i in rows],
                          row_basis=[self.row_basis[i] for i in rows],
                          col_basis=[self.col_basis[j] for j in cols], kind=self.kind,
                          cleared_power=self.cleared_power)

    def subs(self, mapping: dict) -> "RingMatrix":
        return self.map(lambda x: x.subs(mapping) if hasattr(x, "subs") else x)

    def symbols(self) -> list:
        syms: set = set()
        for r in self.entries:
            for x in r:
                if isinstance(x, MultiPoly):
                    syms |= x.free_symbols()
        return sorted(syms)

    def to_numpy(self, values: dict | None = None):
        import numpy as np
        values = values or {}

        def num(x):
            if isinstance(x, MultiPoly):
                return complex(x.evaluate(values)) if x.terms else 0j
            if isinstance(x, ExactScalar):
                return complex(float(x.re), float(x.im))
            return complex(x)

        return np.array([[num(x) for x in r] for r in self.entries], dtype=complex)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries)

    __repr__ = __str__


def _guess_kind(entries) -> str:
    kinds = set()
    for r in entries:
        for x in r:
            if isinstance(x, LaurentPoly):
                kinds.add("laurent_q")
            elif isinstance(x, MultiPoly):
                if not x.is_constant():
                    kinds.add("multipoly")
            elif isinstance(x, (complex, float)):
                kinds.add("complex")
            elif hasattr(x, "act"):
                kinds.add("diffop")
    for k in ("diffop", "complex", "laurent_q", "multipoly"):
        if k in kinds:
            return k
    return "rational"


def _combine_kind(a: str, b: str) -> str:
    order = {"rational": 0, "multipoly": 1, "laurent_q": 2, "diffop": 3, "complex": 4}
    return a if order.get(a, 0) >= order.get(b, 0) else b


def _zero_for(kind):
    if kind == "complex":
        return 0j
    if kind == "laurent_q":
        return LaurentPoly.const(0)
    return MultiPoly.const(0)


def _one_for(kind):
    if kind == "complex":
        return 1 + 0j
    if kind == "laurent_q":
        return LaurentPoly.const(1)
    return MultiPoly.const(1)


def kronecker(A: RingMatrix, B: RingMatrix) -> RingMatrix:
    """(A⊗B)_{(i,k),(j,l)} = A_ij B_kl with factor dims concatenated."""
    if {A.kind, B.kind} & {"complex"} and {A.kind, B.kind} - {"complex"} - {"rational"}:
        raise RingError(f"ring mismatch: {A.kind} ⊗ {B.kind}")
    zero = A.zero if A.kind != "rational" else B.zero
    out = []
    for i in range(A.rows):
        for k in range(B.rows):
            row = []
            for j in range(A.cols):
                a = A.entries[i][j]
                if _is_zero(a):
                    row.extend([zero] * B.cols)
                    continue
                for l in range(B.cols):
                    b = B.entries[k][l]
                    row.append(zero if _is_zero(b) else a * b)
            out.append(row)
    return RingMatrix(out, row_dims=A.row_dims + B.row_dims, col_dims=A.col_dims + B.col_dims,
                      row_basis=[f"{a}|{b}" for a in A.row_basis for b in B.row_basis],
                      col_basis=[f"{a}|{b}" for a in A.col_basis for b in B.col_basis],
                      kind=_combine_kind(A.kind, B.kind), cleared_power=A.cleared_power + B.cleared_power)


def permutation_matrix(perm_of_index: Callable[[int], int], n: int, row_dims=None, col_dims=None) -> RingMatrix:
    one, zero = MultiPoly.const(1), MultiPoly.const(0)
    rows = [[zero] * n for _ in range(n)]
    for j in range(n):
        rows[perm_of_index(j)][j] = one
    return RingMatrix(rows, row_dims=row_dims, col_dims=col_dims, kind="rational")


def braid_permutation(d1: int, d2: int) -> RingMatrix:
    """P: V1⊗V2 → V2⊗V1, P(v⊗w) = w⊗v."""
    return permutation_matrix(lambda j: (j % d2) * d1 + j // d2, d1 * d2,
                              row_dims=(d2, d1), col_dims=(d1, d2))


def leg_permutation(dims: Sequence[int], perm: Sequence[int]) -> RingMatrix:
    """Move tensor leg ``k`` of V_{d_0}⊗… to position ``perm[k]``."""
    dims = tuple(dims)
    new_dims = [0] * len(dims)
    for k, p in enumerate(perm):
        new_dims[p] = dims[k]
    n = math.prod(dims)

    def f(j):
        idx = _unravel(j, dims)
        new = [0] * len(dims)
        for k, p in enumerate(perm):
            new[p] = idx[k]
        return _ravel(new, new_dims)

    return permutation_matrix(f, n, row_dims=tuple(new_dims), col_dims=dims)


def symmetric_projector(n: int, d: int) -> RingMatrix:
    """S = (1/n!) Σ_π P_π on (C^d)^{⊗n}."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    size = d ** n
    w = mpq(1, math.factorial(n))
    acc = [[mpq(0)] * size for _ in range(size)]
    for j, idx in enumerate(itertools.product(range(d), repeat=n)):
        for perm in itertools.permutations(range(n)):
            i = _ravel([idx[p] for p in perm], (d,) * n)
            acc[i][j] += w
    return RingMatrix([[MultiPoly.const(x) for x in r] for r in acc], row_dims=(d,) * n,
                      col_dims=(d,) * n, kind="rational")


def _unravel(j: int, dims: Sequence[int]):
    out = []
    for d in reversed(dims):
        out.append(j % d)
        j //= d
    return out[::-1]


def _ravel(idx: Sequence[int], dims: Sequence[int]) -> int:
    j = 0
    for i, d in zip(idx, dims):
        j = j * d + i
    return j


def embed(op: RingMatrix, dims: Sequence[int], legs: Sequence[int]) -> RingMatrix:
    """Embed an operator on tensor legs ``legs`` into V_{d_0}⊗…⊗V_{d_{k-1}}.

    ``op`` must be an endomorphism of ⊗_{l in legs} V_{d_l} (in that order).
    """
    dims = tuple(dims)
    legs = tuple(legs)
    sub = tuple(dims[l] for l in legs)
    if op.rows != math.prod(sub) or op.cols != math.prod(sub):
        raise RingError(f"operator shape {op.shape} does not fit legs {legs} of {dims}")
    rest = [k for k in range(len(dims)) if k not in legs]
    rest_dims = tuple(dims[k] for k in rest)
    n = math.prod(dims)
    zero = op.zero
    out = [[zero] * n for _ in range(n)]
    nz = [(i, j, op.entries[i][j]) for i in range(op.rows) for j in range(op.cols)
          if not _is_zero(op.entries[i][j])]
    for r in itertools.product(*[range(d) for d in rest_dims]):
        for i, j, x in nz:
            I = [0] * len(dims)
            J = [0] * len(dims)
            for k, v in zip(rest, r):
                I[k] = J[k] = v
            for k, v in zip(legs, _unravel(i, sub)):
                I[k] = v
            for k, v in zip(legs, _unravel(j, sub)):
                J[k] = v
            out[_ravel(I, dims)][_ravel(J, dims)] = x
    return RingMatrix(out, row_dims=dims, col_dims=dims, kind=op.kind, cleared_power=op.cleared_power)


def block_matrix(blocks: Sequence[Sequence[RingMatrix]]) -> RingMatrix:
    rows = []
    for brow in blocks:
        for i in range(brow[0].rows):
            r = []
            for b in brow:
                r.extend(b.entries[i])
            rows.append(r)
    return RingMatrix(rows, kind=blocks[0][0].kind)


def blocks_of(M: RingMatrix, nb: int):
    """Split an (nb·d)×(nb·d) matrix into nb×nb blocks of size d (outer index major)."""
    d = M.rows // nb
    return [[M.submatrix(range(a * d, (a + 1) * d), range(b * d, (b + 1) * d)) for b in range(nb)]
            for a in range(nb)]


def solve_exact(A: Sequence[Sequence[Any]], B: Sequence[Sequence[Any]]):
    """Solve A X = B over the rationals (A square, invertible). Returns X as lists of mpq."""
    n = len(A)
    m = len(B[0])
    M = [[qq(x) for x in A[i]] + [qq(x) for x in B[i]] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise RingError("singular system")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def rank_exact(rows: Sequence[Sequence[Any]]) -> int:
    M = [[qq(x) for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if p is None:
            continue
        M[rank], M[p] = M[p], M[rank]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank
