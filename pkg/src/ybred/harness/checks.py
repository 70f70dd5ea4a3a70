"""YBE, RLL and projective comparison engines for exact and numeric matrices."""
from __future__ import annotations

import operator
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from ..opalg import DiffOp
from ..ring import MultiPoly, RatFunc, RingError, RingMatrix, embed, kronecker


@dataclass
class CaseResult:
    case: str
    passed: bool
    exact: bool
    residual: float = 0.0
    scalar: str | None = None
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"case": self.case, "passed": self.passed, "exact": self.exact,
                "residual": self.residual, "scalar": self.scalar, "detail": self.detail,
                "seconds": round(self.seconds, 4)}


@dataclass
class Report:
    suite: str
    seed: int = 0
    config: dict = field(default_factory=dict)
    cases: list = field(default_factory=list)

    def add(self, case: CaseResult) -> CaseResult:
        self.cases.append(case)
        return case

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def merge(self, other: "Report") -> "Report":
        self.cases.extend(other.cases)
        self.cases.sort(key=lambda c: c.case)
        return self

    def as_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "config": self.config, "passed": self.passed,
                "cases": [c.as_dict() for c in self.cases]}


class timed:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# projective comparison

@dataclass
class Projective:
    scalar: Any
    residual: float
    equal: bool


def _as_poly(x):
    if isinstance(x, MultiPoly):
        return x
    return MultiPoly.coerce(x)


def _lead_coeff(x):
    if isinstance(x, DiffOp):
        k = x.order
        return x.coeff(k), k
    return _as_poly(x), 0


def _scale_left(p: MultiPoly, x):
    if isinstance(x, DiffOp):
        return DiffOp({k: p * c for k, c in x.terms.items()}, x.var)
    return p * _as_poly(x)


def compare_projective(A, B, tol: float = 1e-8) -> Projective:
    """A = c·B for a single scalar c.

    Exact entries (polynomials or DiffOps): c is read off the first nonzero
    entry pair and checked by cross-multiplication.  Numeric arrays: least
    squares c and relative max-abs residual.
    """
    if isinstance(A, np.ndarray) or isinstance(B, np.ndarray):
        return _compare_numeric(np.asarray(_np(A)), np.asarray(_np(B)), tol)
    if A.shape != B.shape:
        raise RingError(f"shape mismatch {A.shape} vs {B.shape}")
    pivot = None
    for i in range(A.rows):
        for j in range(A.cols):
            a, b = A.entries[i][j], B.entries[i][j]
            if bool(a) != bool(b):
                return Projective(None, float("inf"), False)
            if a and pivot is None:
                pivot = (a, b)
    if pivot is None:
        return Projective(RatFunc(1), 0.0, True)
    pa, ka = _lead_coeff(pivot[0])
    pb, kb = _lead_coeff(pivot[1])
    if ka != kb:
        return Projective(None, float("inf"), False)
    bad = 0
    for i in range(A.rows):
        for j in range(A.cols):
            if _scale_left(pb, A.entries[i][j]) != _scale_left(pa, B.entries[i][j]):
                bad += 1
    return Projective(RatFunc(pa, pb), float(bad), bad == 0)


def compare_projective_ops(a: DiffOp, b: DiffOp):
    pa, ka = _lead_coeff(a)
    pb, kb = _lead_coeff(b)
    if ka != kb or not pa or not pb:
        return None, False
    ok = _scale_left(pb, a) == _scale_left(pa, b)
    return RatFunc(pa, pb), ok


def _np(M):
    if isinstance(M, RingMatrix):
        return M.to_numpy()
    return M


def _compare_numeric(A: np.ndarray, B: np.ndarray, tol: float) -> Projective:
    if A.shape != B.shape:
        raise RingError(f"shape mismatch {A.shape} vs {B.shape}")
    nb = np.vdot(B, B)
    na = np.max(np.abs(A)) if A.size else 0.0
    if nb == 0 and na == 0:
        return Projective(1.0, 0.0, True)
    if nb == 0 or na == 0:
        return Projective(None, float("inf"), False)
    c = np.vdot(B, A) / nb
    res = float(np.max(np.abs(A - c * B)) / na)
    return Projective(complex(c), res, res < tol)


# ---------------------------------------------------------------------------
# generic backends

def _kron(A, B):
    if isinstance(A, np.ndarray):
        return np.kron(A, B)
    return kronecker(A, B)


def _eye(n, like):
    if isinstance(like, np.ndarray):
        return np.eye(n, dtype=complex)
    return RingMatrix.identity(n, kind="rational")


def _residual(X, Y) -> tuple:
    """(is_exact, residual) of X - Y."""
    if isinstance(X, np.ndarray):
        scale = max(np.max(np.abs(X)), np.max(np.abs(Y)), 1e-300)
        return False, float(np.max(np.abs(X - Y)) / scale)
    D = X - Y
    return True, float(D.nonzero_count())


@dataclass
class YbeInstance:
    """Three spaces and an operator family for the Yang-Baxter check.

    ``op(pair, w)`` returns the operator for spaces ``pair`` (indices into
    ``dims``) at spectral value ``w``.  For the leg form it is an endomorphism
    of V_a⊗V_b; for the braid form it maps V_a⊗V_b → V_b⊗V_a.
    """
    family: str
    dims: tuple
    op: Callable
    u: Any
    v: Any
    form: str = "leg"
    label: str = ""
    sub: Callable = operator.sub    # spectral difference; multiplicative for q^u monomials


def ybe_sides(inst: YbeInstance):
    d1, d2, d3 = inst.dims
    u, v = inst.u, inst.v
    op = inst.op
    uv = inst.sub(u, v)
    if inst.form == "leg":
        R12 = op((0, 1), uv)
        R13 = op((0, 2), u)
        R23 = op((1, 2), v)
        like = R12
        R12e = _kron(R12, _eye(d3, like))
        R23e = _kron(_eye(d1, like), R23)
        if isinstance(R13, np.ndarray):
            R13e = _embed13_np(R13, (d1, d2, d3))
        else:
            R13e = embed(R13, (d1, d2, d3), (0, 2))
        return R12e @ R13e @ R23e, R23e @ R13e @ R12e
    if inst.form == "braid":
        a, b, c = d1, d2, d3
        like = op((1, 2), v)
        lhs = _kron(_eye(c, like), op((0, 1), uv)) @ _kron(op((0, 2), u), _eye(b, like)) \
            @ _kron(_eye(a, like), op((1, 2), v))
        rhs = _kron(op((1, 2), v), _eye(a, like)) @ _kron(_eye(b, like), op((0, 2), u)) \
            @ _kron(op((0, 1), uv), _eye(c, like))
        return lhs, rhs
    raise ValueError(f"unknown YBE form {inst.form}")


def _embed13_np(R: np.ndarray, dims) -> np.ndarray:
    d1, d2, d3 = dims
    T = R.reshape(d1, d3, d1, d3)
    full = np.einsum("acbd,ef->aecbfd", T, np.eye(d2))
    return full.reshape(d1 * d2 * d3, d1 * d2 * d3)


def check_ybe(inst: YbeInstance, tol: float = 1e-8) -> CaseResult:
    with timed() as t:
        lhs, rhs = ybe_sides(inst)
        exact, res = _residual(lhs, rhs)
    passed = res == 0 if exact else res < tol
    return CaseResult(inst.label or f"ybe[{inst.family},{inst.form},{inst.dims}]", passed, exact,
                      res, detail=f"form={inst.form} dims={inst.dims}", seconds=t.seconds)


def rll_sides(R, Lu, Lv, qdim: int):
    """R(u-v) L1(u) L2(v) and L2(v) L1(u) R(u-v) on aux⊗aux⊗quantum.

    Lu, Lv are 2·qdim square with the auxiliary index outermost.
    """
    dims = (2, 2, qdim)
    if isinstance(R, np.ndarray):
        R = RingMatrix(R.tolist(), kind="complex")
    L1u = embed(Lu, dims, (0, 2))
    L2v = embed(Lv, dims, (1, 2))
    Re = embed(R, dims, (0, 1))
    return Re @ L1u @ L2v, L2v @ L1u @ Re


def check_rll(R, Lu, Lv, qdim: int = 1, surface: Callable | None = None,
              tol: float = 1e-8, label: str = "rll") -> CaseResult:
    """Residual of the RLL relation.

    Without ``surface`` the residual is an exact matrix identity.  With a
    surface, every residual entry is mapped to a list of numbers (or exact
    values) on the declared test set, e.g. monomials or exponentials.
    """
    with timed() as t:
        lhs, rhs = rll_sides(R, Lu, Lv, qdim)
        D = lhs - rhs
        vals = []
        if surface is None:
            surface = lambda x: [x]
        exact = True
        for row in D.entries:
            for x in row:
                for y in surface(x):
                    if isinstance(y, (complex, float)):
                        exact = False
                        vals.append(abs(y))
                    else:
                        vals.append(0.0 if not y else 1.0)
        res = max(vals) if vals else 0.0
        if not exact:
            scale = 1.0
            L = []
            for row in lhs.entries:
                for x in row:
                    L.extend(abs(y) for y in surface(x))
            scale = max(L) if L else 1.0
            res = res / max(scale, 1e-300)
    passed = res == 0 if exact else res < tol
    return CaseResult(label, passed, exact, float(res), seconds=t.seconds)
