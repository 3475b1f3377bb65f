"""Exact semidefiniteness at rational points and the sampling harness.

Three independent PSD tests are provided for rational symmetric matrices:

* all principal minors are >= 0 (the default, ``is_psd``);
* all coefficients of det(A + lambda*I) are >= 0 (Faddeev-LeVerrier);
* no negative eigenvalue, counted with a Sturm chain on the square-free
  factors of the characteristic polynomial.  The characteristic
  polynomial for this oracle is obtained by interpolating det(tI - A) at
  n+1 integer nodes, so it shares no code path with Faddeev-LeVerrier.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from . import _linalg
from .matpoly import MatPoly

PointQ = tuple  # tuple[Fraction, ...]


class InternalInconsistency(AssertionError):
    """Two provably equivalent criteria disagreed."""


def point(*coords) -> PointQ:
    return tuple(Fraction(c) for c in coords)


def parse_point(text: str) -> PointQ:
    text = text.strip().strip("()")
    if not text:
        return ()
    return tuple(Fraction(c.strip()) for c in text.split(","))


@dataclass(frozen=True)
class RatMat:
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(e) for e in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("RatMat must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def symmetric(self) -> bool:
        n = self.n
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n))

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def submatrix(self, idx) -> "RatMat":
        return RatMat(tuple(tuple(self.rows[i][j] for j in idx) for i in idx))

    def congruence(self, x: "RatMat") -> "RatMat":
        xt = [list(r) for r in zip(*x.rows)]
        m = _linalg.matmul(_linalg.matmul(xt, [list(r) for r in self.rows], Fraction(0)),
                           [list(r) for r in x.rows], Fraction(0))
        return RatMat(tuple(tuple(r) for r in m))

    def quadratic_form(self, v: Sequence) -> Fraction:
        return sum((Fraction(v[i]) * self.rows[i][j] * Fraction(v[j])
                    for i in range(self.n) for j in range(self.n)), Fraction(0))

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"


def eval_mat(a: MatPoly, p: PointQ) -> RatMat:
    if len(p) != len(a.vars):
        raise ValueError(f"point has dimension {len(p)}, matrix ring has {len(a.vars)} variables")
    n = a.n
    vals = {}
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if (j, i) in vals:
                row.append(vals[(j, i)])
            else:
                v = a[i, j].eval(p)
                vals[(i, j)] = v
                row.append(v)
        rows.append(tuple(row))
    return RatMat(tuple(rows))


def _require_symmetric(m: RatMat):
    if not m.symmetric:
        raise ValueError("matrix is not symmetric")


def rat_det(m: RatMat) -> Fraction:
    rows = [list(r) for r in m.rows]
    return _linalg.det_bareiss(rows, Fraction(0), Fraction(1), lambda a, b: a / b)


def principal_minors(m: RatMat) -> dict[tuple[int, ...], Fraction]:
    n = m.n
    return {s: rat_det(m.submatrix(s)) for k in range(1, n + 1) for s in combinations(range(n), k)}


def leading_minors(m: RatMat) -> list[Fraction]:
    return [rat_det(m.submatrix(range(k))) for k in range(1, m.n + 1)]


def det_plus_lambda_coeffs(m: RatMat) -> list[Fraction]:
    """Coefficients of det(A + lambda*I), low to high."""
    rows = [list(r) for r in m.rows]
    c = _linalg.faddeev_leverrier(rows, Fraction(0), Fraction(1))
    n = m.n
    return [ck if (n - k) % 2 == 0 else -ck for k, ck in enumerate(c)]


def psd_by_minors(m: RatMat) -> bool:
    return all(v >= 0 for v in principal_minors(m).values())


def psd_by_coefficients(m: RatMat) -> bool:
    return all(c >= 0 for c in det_plus_lambda_coeffs(m))


def is_psd(m: RatMat, cross_check: bool = True) -> bool:
    """All principal minors nonnegative; cross-checked against det(A + lambda*I)."""
    _require_symmetric(m)
    res = psd_by_minors(m)
    if cross_check and res != psd_by_coefficients(m):
        raise InternalInconsistency(f"minor and coefficient PSD tests disagree on {m}")
    return res


def is_pd(m: RatMat) -> bool:
    """All leading principal minors strictly positive."""
    _require_symmetric(m)
    return all(v > 0 for v in leading_minors(m))


# ---------------------------------------------------------------------------
# univariate polynomials over Q as coefficient lists, low degree first


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p: list) -> list:
    return _trim([k * p[k] for k in range(1, len(p))])


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = [Fraction(x) for x in a]
    lb = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lb
        q[shift] = c
        for k in range(len(b)):
            r[shift + k] -= c * b[k]
        r = _trim(r)
    return _trim(q), r


def _monic(p: list) -> list:
    p = _trim(p)
    return [c / p[-1] for c in p] if p else p


def _gcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    return _monic(a)


def _eval(p: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def squarefree_decomposition(p: list) -> list[tuple[list, int]]:
    """Yun's algorithm: monic(p) = prod f_i^i with f_i square-free, pairwise coprime."""
    p = _monic(p)
    out = []
    if len(p) <= 1:
        return out
    dp = _deriv(p)
    a = _gcd(p, dp)
    b = _divmod(p, a)[0]
    c = _divmod(dp, a)[0]
    d = _sub(c, _deriv(b))
    i = 1
    while len(b) > 1:
        a = _gcd(b, d)
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0]
        if len(a) > 1:
            out.append((a, i))
        d = _sub(c, _deriv(b))
        i += 1
    return out


def sturm_chain(p: list) -> list[list]:
    chain = [_trim(p), _deriv(p)]
    while chain[-1]:
        r = _divmod(chain[-2], chain[-1])[1]
        chain.append([-c for c in r])
    return chain[:-1]


def _sign_changes(values: Iterable) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_minus_inf(p: list):
    return p[-1] * (-1 if (len(p) - 1) % 2 else 1)


def count_negative_roots(p: list) -> int:
    """Distinct real roots in (-inf, 0) of a polynomial with p(0) != 0."""
    chain = sturm_chain(p)
    return _sign_changes(_sign_at_minus_inf(f) for f in chain) - _sign_changes(f[0] for f in chain)


def interpolated_charpoly(m: RatMat) -> list[Fraction]:
    """det(tI - A) via exact determinants at t = 0..n and Lagrange interpolation."""
    n = m.n
    nodes = list(range(n + 1))
    values = []
    for t in nodes:
        rows = [[(Fraction(t) if i == j else Fraction(0)) - m.rows[i][j] for j in range(n)] for i in range(n)]
        values.append(_linalg.det_bareiss(rows, Fraction(0), Fraction(1), lambda a, b: a / b))
    coeffs = [Fraction(0)] * (n + 1)
    for k, tk in enumerate(nodes):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for l, tl in enumerate(nodes):
            if l == k:
                continue
            basis = [Fraction(0)] + basis  # multiply by t
            for q in range(len(basis) - 1):
                basis[q] -= tl * basis[q + 1]
            denom *= tk - tl
        for q in range(len(basis)):
            coeffs[q] += values[k] * basis[q] / denom
    return coeffs


def sturm_negative_count(m: RatMat) -> int:
    """Number of negative eigenvalues of a symmetric rational matrix, with multiplicity."""
    _require_symmetric(m)
    p = _trim(interpolated_charpoly(m))
    while p and p[0] == 0:
        p = p[1:]
    total = 0
    for f, mult in squarefree_decomposition(p):
        total += mult * count_negative_roots(f)
    return total


def psd_by_sturm(m: RatMat) -> bool:
    return sturm_negative_count(m) == 0


# ---------------------------------------------------------------------------
# membership and sampling


def point_in_K(S: Iterable[MatPoly], p: PointQ) -> bool:
    return all(is_psd(eval_mat(g, p)) for g in S)


def scalars_nonneg(B: Iterable, p: PointQ) -> bool:
    return all(b.eval(p) >= 0 for b in B)


@dataclass(frozen=True)
class SampleSpec:
    """Grid on [lo, hi]^d with ``grid_steps`` intervals per axis, then seeded random rationals."""

    lo: Fraction = Fraction(-3)
    hi: Fraction = Fraction(3)
    grid_steps: int = 0
    random_count: int = 0
    seed: int = 0
    max_den: int = 16

    def points(self, d: int):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if self.grid_steps > 0:
            axis = [lo + (hi - lo) * k / self.grid_steps for k in range(self.grid_steps + 1)]
            for pt in product(axis, repeat=d):
                yield pt
        rng = random.Random(self.seed)
        for _ in range(self.random_count):
            coords = []
            for _ in range(d):
                q = rng.randint(1, self.max_den)
                num = rng.randint(math.ceil(lo * q), math.floor(hi * q))
                coords.append(Fraction(num, q))
            yield tuple(coords)

    def count(self, d: int) -> int:
        g = (self.grid_steps + 1) ** d if self.grid_steps > 0 else 0
        return g + self.random_count


@dataclass
class AgreementReport:
    total: int = 0
    agreements: int = 0
    disagreements: list = field(default_factory=list)
    seed: int = 0

    @property
    def ratio(self) -> float:
        return self.agreements / self.total if self.total else 1.0

    @property
    def all_agree(self) -> bool:
        return self.agreements == self.total


def regions_agree(A: Iterable[MatPoly], B: Sequence, sampler: SampleSpec, vars: Sequence[str] | None = None
                  ) -> AgreementReport:
    """Compare membership in K_A with nonnegativity of every polynomial in B."""
    A = list(A)
    if vars is None:
        if A:
            vars = A[0].vars
        elif B:
            vars = B[0].vars
        else:
            vars = ()
    d = len(vars)
    for b in B:
        if len(b.vars) != d:
            raise ValueError("scalar set and generators have different variable counts")
    rep = AgreementReport(seed=sampler.seed)
    for p in sampler.points(d):
        rep.total += 1
        lhs = point_in_K(A, p)
        rhs = scalars_nonneg(B, p)
        if lhs == rhs:
            rep.agreements += 1
        else:
            rep.disagreements.append((p, lhs, rhs))
    return rep
