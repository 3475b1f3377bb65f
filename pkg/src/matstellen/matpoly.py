"""Square matrices over Q[x]: the *-ring M_n(R) and its symmetric part S_n(R).

Indices are 0-based throughout the API.  ``MatPoly`` is immutable; the
``SymMatPoly`` subclass additionally guarantees exact symmetry.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from . import _linalg
from .polyring import Poly, RingMismatch, as_poly


class MatPoly:
    __slots__ = ("vars", "rows", "_hash")

    def __init__(self, rows: Iterable[Iterable], vars: Sequence[str]):
        self.vars = tuple(vars)
        rows = tuple(tuple(as_poly(e, self.vars) for e in r) for r in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("matrix must have positive size")
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.rows = rows
        self._hash = None
        self._validate()

    def _validate(self):
        pass

    @classmethod
    def _raw(cls, rows, vars):
        m = cls.__new__(cls)
        m.vars = vars
        m.rows = tuple(tuple(r) for r in rows)
        m._hash = None
        return m

    # ----- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int, vars: Sequence[str]) -> "MatPoly":
        return cls.scalar(1, n, vars)

    @classmethod
    def zeros(cls, n: int, vars: Sequence[str]) -> "MatPoly":
        z = Poly.zero(vars)
        return cls._raw([[z] * n for _ in range(n)], tuple(vars))

    @classmethod
    def scalar(cls, p, n: int, vars: Sequence[str]) -> "MatPoly":
        vars = tuple(vars)
        p = as_poly(p, vars)
        z = Poly.zero(vars)
        return cls._raw([[p if i == j else z for j in range(n)] for i in range(n)], vars)

    @classmethod
    def diag(cls, entries: Sequence, vars: Sequence[str]) -> "MatPoly":
        vars = tuple(vars)
        ps = [as_poly(e, vars) for e in entries]
        z = Poly.zero(vars)
        n = len(ps)
        return cls._raw([[ps[i] if i == j else z for j in range(n)] for i in range(n)], vars)

    # ----- inspection ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [e for r in self.rows for e in r]

    def is_symmetric(self) -> bool:
        n = self.n
        return all(self.rows[i][j] == self.rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_scalar(self) -> bool:
        """True iff the matrix lies in the center R*I."""
        d = self.rows[0][0]
        n = self.n
        return all(self.rows[i][j] == (d if i == j else 0) for i in range(n) for j in range(n))

    def as_sym(self) -> "SymMatPoly":
        if isinstance(self, SymMatPoly):
            return self
        return SymMatPoly(self.rows, self.vars)

    def to_lists(self):
        return [list(r) for r in self.rows]

    # ----- ring structure -----------------------------------------------

    def _check(self, other: "MatPoly"):
        if not isinstance(other, MatPoly):
            raise TypeError(f"expected MatPoly, got {type(other).__name__}")
        if other.vars != self.vars:
            raise RingMismatch(f"variable mismatch: {self.vars} vs {other.vars}")
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        rows = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        cls = SymMatPoly if isinstance(self, SymMatPoly) and isinstance(other, SymMatPoly) else MatPoly
        return cls._raw(rows, self.vars)

    def __sub__(self, other):
        self._check(other)
        rows = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        cls = SymMatPoly if isinstance(self, SymMatPoly) and isinstance(other, SymMatPoly) else MatPoly
        return cls._raw(rows, self.vars)

    def __neg__(self):
        return type(self)._raw([[-e for e in r] for r in self.rows], self.vars)

    def __matmul__(self, other):
        self._check(other)
        return MatPoly._raw(_linalg.matmul(self.rows, other.rows, Poly.zero(self.vars)), self.vars)

    def scale(self, p) -> "MatPoly":
        """Multiply every entry by the scalar ``p`` (a Poly or rational)."""
        p = as_poly(p, self.vars)
        return type(self)._raw([[p * e for e in r] for r in self.rows], self.vars)

    def __mul__(self, other):
        if isinstance(other, MatPoly):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "MatPoly":
        if k < 0:
            raise ValueError("negative matrix power")
        result = MatPoly.identity(self.n, self.vars)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        if isinstance(self, SymMatPoly):
            return SymMatPoly._raw(result.rows, self.vars)
        return result

    @property
    def T(self) -> "MatPoly":
        return type(self)._raw(list(zip(*self.rows)), self.vars)

    def transpose(self) -> "MatPoly":
        return self.T

    def __eq__(self, other):
        if not isinstance(other, MatPoly):
            return NotImplemented
        return self.vars == other.vars and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, self.rows))
        return self._hash

    # ----- determinants and characteristic polynomials --------------------

    def det(self) -> Poly:
        return det(self)

    def charpoly(self) -> list[Poly]:
        return charpoly(self)

    def submatrix(self, index: Sequence[int]) -> "MatPoly":
        rows = [[self.rows[i][j] for j in index] for i in index]
        return type(self)._raw(rows, self.vars)

    # ----- text ---------------------------------------------------------

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows) + "]"

    def __repr__(self):
        return f"{type(self).__name__}({self}, vars={self.vars})"


class SymMatPoly(MatPoly):
    """Symmetric matrix polynomial; symmetry is checked on construction."""

    __slots__ = ()

    def _validate(self):
        n = self.n
        for i in range(n):
            for j in range(i + 1, n):
                if self.rows[i][j] != self.rows[j][i]:
                    raise ValueError(
                        f"matrix is not symmetric: entry ({i},{j}) = {self.rows[i][j]} "
                        f"but ({j},{i}) = {self.rows[j][i]}"
                    )


# ---------------------------------------------------------------------------
# module-level operations


def mat_mul(a: MatPoly, b: MatPoly) -> MatPoly:
    return a @ b


def mat_add(a: MatPoly, b: MatPoly) -> MatPoly:
    return a + b


def mat_scalar_mul(p, a: MatPoly) -> MatPoly:
    return a.scale(p)


def transpose(a: MatPoly) -> MatPoly:
    return a.T


def congruence(a: MatPoly, x: MatPoly) -> SymMatPoly:
    """X^T A X.  The result is asserted to be symmetric."""
    res = x.T @ a @ x
    if not res.is_symmetric():
        raise ArithmeticError("congruence of a symmetric matrix produced an asymmetric result")
    return SymMatPoly._raw(res.rows, res.vars)


def coordinate_matrix(i: int, j: int, n: int, vars: Sequence[str]) -> MatPoly:
    """E_ij: a single 1 in row i, column j."""
    _check_index(i, n)
    _check_index(j, n)
    vars = tuple(vars)
    z, o = Poly.zero(vars), Poly.one(vars)
    return MatPoly._raw([[o if (r, c) == (i, j) else z for c in range(n)] for r in range(n)], vars)


def transposition_matrix(i: int, n: int, vars: Sequence[str]) -> MatPoly:
    """Permutation matrix of the transposition swapping indices 0 and i."""
    _check_index(i, n)
    perm = list(range(n))
    perm[0], perm[i] = perm[i], perm[0]
    vars = tuple(vars)
    z, o = Poly.zero(vars), Poly.one(vars)
    return MatPoly._raw([[o if perm[r] == c else z for c in range(n)] for r in range(n)], vars)


def shear_matrix(i: int, j: int, n: int, vars: Sequence[str], inverse: bool = False) -> MatPoly:
    """T_ij = I + E_ji for i != j, and I for i == j; ``inverse`` gives I - E_ji."""
    _check_index(i, n)
    _check_index(j, n)
    ident = MatPoly.identity(n, vars)
    if i == j:
        return ident
    e = coordinate_matrix(j, i, n, vars)
    return ident - e if inverse else ident + e


def basis_matrix(kind: str, n: int, vars: Sequence[str], i: int, j: int | None = None,
                 inverse: bool = False) -> MatPoly:
    if kind == "coordinate":
        return coordinate_matrix(i, j, n, vars)
    if kind == "permutation_transposition":
        return transposition_matrix(i, n, vars)
    if kind == "shear":
        return shear_matrix(i, j, n, vars, inverse=inverse)
    raise ValueError(f"unknown basis matrix kind {kind!r}")


def _check_index(i, n):
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for size {n}")


def det(a: MatPoly) -> Poly:
    """Exact determinant: cofactor expansion for n <= 4, fraction-free elimination above."""
    z, o = Poly.zero(a.vars), Poly.one(a.vars)
    rows = [list(r) for r in a.rows]
    if a.n <= 4:
        return _linalg.det_cofactor(rows, z, o)
    return _linalg.det_bareiss(rows, z, o, lambda p, q: p.divexact(q))


def charpoly(a: MatPoly) -> list[Poly]:
    """Coefficients c_0..c_n of det(lambda*I - A); monic."""
    return _linalg.faddeev_leverrier([list(r) for r in a.rows], Poly.zero(a.vars), Poly.one(a.vars))


def det_plus_lambda_coeffs(a: MatPoly) -> list[Poly]:
    """Coefficients d_0..d_n of det(A + lambda*I).

    With c_k the coefficients of det(lambda*I - A), d_k = (-1)^(n-k) c_k;
    d_{n-k} is the sum of the k x k principal minors.
    """
    c = charpoly(a)
    n = a.n
    return [ck if (n - k) % 2 == 0 else -ck for k, ck in enumerate(c)]


def eval_charpoly_at(coeffs: Sequence[Poly], a: MatPoly) -> MatPoly:
    """sum_k c_k A^k, the matrix substitution used for Cayley-Hamilton checks."""
    rows = _linalg.horner_matrix(list(coeffs), [list(r) for r in a.rows], Poly.zero(a.vars), Poly.one(a.vars))
    return MatPoly._raw(rows, a.vars)


def principal_minor(a: MatPoly, index: Iterable[int]) -> Poly:
    idx = sorted(set(index))
    if not idx:
        raise ValueError("principal minor needs a non-empty index subset")
    for i in idx:
        _check_index(i, a.n)
    return det(a.submatrix(idx))


def principal_minors(a: MatPoly) -> dict[tuple[int, ...], Poly]:
    return {s: principal_minor(a, s) for k in range(1, a.n + 1) for s in combinations(range(a.n), k)}


def leading_minors(a: MatPoly) -> list[Poly]:
    return [principal_minor(a, range(k)) for k in range(1, a.n + 1)]


def embed_upper_left(a: MatPoly, n: int) -> MatPoly:
    """Place ``a`` (size k <= n) in the top-left corner of an n x n zero matrix."""
    k = a.n
    if k > n:
        raise ValueError(f"cannot embed a {k}x{k} matrix into size {n}")
    z = Poly.zero(a.vars)
    rows = [[a.rows[i][j] if i < k and j < k else z for j in range(n)] for i in range(n)]
    return type(a)._raw(rows, a.vars)


def block_diag_scalar(s: Poly, b: MatPoly) -> MatPoly:
    """diag(s, B) for a scalar s and a (k-1) x (k-1) matrix B."""
    k = b.n + 1
    z = Poly.zero(b.vars)
    rows = [[z] * k for _ in range(k)]
    rows[0][0] = s
    for i in range(1, k):
        for j in range(1, k):
            rows[i][j] = b.rows[i - 1][j - 1]
    cls = SymMatPoly if isinstance(b, SymMatPoly) else MatPoly
    return cls._raw(rows, b.vars)


def shift_matrix(n: int, vars: Sequence[str]) -> MatPoly:
    """S with S^T embed(B) S = diag(0, B): ones at (r, r+1)."""
    vars = tuple(vars)
    z, o = Poly.zero(vars), Poly.one(vars)
    return MatPoly._raw([[o if c == r + 1 else z for c in range(n)] for r in range(n)], vars)


def mat(rows, vars: Sequence[str]) -> MatPoly:
    return MatPoly(rows, vars)


def sym(rows, vars: Sequence[str]) -> SymMatPoly:
    return SymMatPoly(rows, vars)
