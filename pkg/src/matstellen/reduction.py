"""Schur-complement sweep reducing symmetric matrix polynomials to scalars.

For a k x k symmetric ``a`` and each ordered pair (i, j) the sweep
conjugates ``a`` by ``T_ij P_i`` (shear then transposition of 0 and i) so
that the pivot ``a~_ij`` sits in the top-left corner::

    A_ij = (T_ij P_i)^T a (T_ij P_i) = [[a~, b], [b^T, C]]

and records

    X_-^T A_ij X_- = diag(a~^3, B_ij)           B_ij = a~ (a~ C - b^T b)
    X_+^T diag(a~^3, B_ij) X_+ = a~^4 A_ij
    a * t = sum_ij F_ij^T diag(a~^3, B_ij) F_ij,  F_ij = X_+ P_i T_ij^-1,
                                                  t = sum_ij a~_ij^4

Recursing on the (k-1) x (k-1) blocks ``B_ij`` down to size 1 yields a
finite scalar set with the same nonnegativity locus as the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import factorial
from typing import Sequence

from .matpoly import (
    MatPoly,
    SymMatPoly,
    block_diag_scalar,
    embed_upper_left,
    shear_matrix,
    shift_matrix,
    transposition_matrix,
)
from .polyring import Poly

DEFAULT_MAX_SIZE = 5
DEFAULT_MAX_GENERATORS = 8


class SizeCapExceeded(ValueError):
    def __init__(self, message: str, projected: int):
        super().__init__(message)
        self.projected = projected


@dataclass(frozen=True)
class ReductionStep:
    """One (i, j) pivot of the sweep together with its witnesses."""

    source: SymMatPoly
    i: int
    j: int
    a_tilde: Poly
    shear: MatPoly
    perm: MatPoly
    conjugated: SymMatPoly
    schur_block: SymMatPoly
    x_minus: MatPoly
    x_plus: MatPoly
    diagonal_ok: bool | None = None
    restore_ok: bool | None = None

    @property
    def cube(self) -> Poly:
        return self.a_tilde ** 3

    @property
    def diagonal(self) -> SymMatPoly:
        """diag(a~^3, B_ij)."""
        return block_diag_scalar(self.cube, self.schur_block)

    @property
    def frame(self) -> MatPoly:
        """X_+ P T^-1, the congruence frame contributing this pair to a*t."""
        n = self.source.n
        tinv = shear_matrix(self.i, self.j, n, self.source.vars, inverse=True)
        return self.x_plus @ self.perm @ tinv

    @property
    def verified(self) -> bool:
        return bool(self.diagonal_ok) and bool(self.restore_ok)

    def check_identities(self) -> tuple[bool, bool]:
        d = self.diagonal
        ok1 = self.x_minus.T @ self.conjugated @ self.x_minus == d
        ok2 = self.x_plus.T @ d @ self.x_plus == self.conjugated.scale(self.a_tilde ** 4)
        return ok1, ok2


def a_tilde(a: MatPoly, i: int, j: int) -> Poly:
    if i == j:
        return a[i, i]
    return a[i, i] + a[j, j] + a[i, j] * 2


def single_step(a: SymMatPoly, i: int, j: int, verify: bool = True) -> ReductionStep:
    """Build the (i, j) witness for ``a`` (0-based indices)."""
    k = a.n
    if k < 2:
        raise ValueError("single_step needs a matrix of size >= 2")
    if not (0 <= i < k and 0 <= j < k):
        raise IndexError(f"pair ({i},{j}) out of range for size {k}")
    vars = a.vars
    shear = shear_matrix(i, j, k, vars)
    perm = transposition_matrix(i, k, vars)
    frame = shear @ perm
    conj = frame.T @ a @ frame
    conj = SymMatPoly._raw(conj.rows, vars)
    at = conj[0, 0]
    expected = a_tilde(a, i, j)
    if at != expected:
        raise ArithmeticError(f"pivot mismatch at ({i},{j}): {at} != {expected}")
    bvec = conj.rows[0][1:]
    c = [r[1:] for r in conj.rows[1:]]
    schur = [[at * (at * c[r][s] - bvec[r] * bvec[s]) for s in range(k - 1)] for r in range(k - 1)]
    schur = SymMatPoly._raw(schur, vars)
    z = Poly.zero(vars)

    def x(sign):
        rows = [[z] * k for _ in range(k)]
        rows[0][0] = at
        for s in range(1, k):
            rows[0][s] = bvec[s - 1] if sign > 0 else -bvec[s - 1]
            rows[s][s] = at
        return MatPoly._raw(rows, vars)

    step = ReductionStep(a, i, j, at, shear, perm, conj, schur, x(-1), x(+1))
    if verify:
        ok1, ok2 = step.check_identities()
        step = replace(step, diagonal_ok=ok1, restore_ok=ok2)
    return step


def _dedup(items):
    seen = set()
    out = []
    for it in items:
        if it.is_zero() or it in seen:
            continue
        seen.add(it)
        out.append(it)
    return out


@dataclass(frozen=True)
class MatrixReduction:
    """Result of sweeping one matrix: all k^2 steps, deduplicated outputs, t."""

    source: SymMatPoly
    steps: tuple[ReductionStep, ...]
    children: tuple[SymMatPoly, ...]
    scalars: tuple[Poly, ...]
    t: Poly
    aggregate_ok: bool | None = None

    @property
    def verified(self) -> bool:
        return bool(self.aggregate_ok) and all(s.verified for s in self.steps)

    def aggregate(self) -> MatPoly:
        """Right-hand side of a*t = sum_ij F_ij^T diag(a~^3, B_ij) F_ij."""
        total = MatPoly.zeros(self.source.n, self.source.vars)
        for s in self.steps:
            f = s.frame
            total = total + f.T @ s.diagonal @ f
        return total

    def __iter__(self):
        # allows ``steps, children, scalars, t = reduce_matrix(a)``
        return iter((self.steps, self.children, self.scalars, self.t))


def reduce_matrix(a: SymMatPoly, verify: bool = True) -> MatrixReduction:
    k = a.n
    if k < 2:
        raise ValueError("reduce_matrix needs a matrix of size >= 2")
    steps = tuple(single_step(a, i, j, verify=verify) for i in range(k) for j in range(k))
    t = Poly.zero(a.vars)
    for s in steps:
        t = t + s.a_tilde ** 4
    children = tuple(_dedup(s.schur_block for s in steps))
    scalars = tuple(_dedup(s.cube for s in steps))
    red = MatrixReduction(a, steps, children, scalars, t)
    if verify:
        red = replace(red, aggregate_ok=red.aggregate() == a.scale(t))
    return red


# ---------------------------------------------------------------------------
# full recursion


@dataclass(frozen=True)
class ReductionNode:
    """A matrix met during the recursion and how it was reached.

    ``path`` is ``(generator_index, (i0, j0), (i1, j1), ...)``: the chain of
    pivot pairs whose Schur blocks lead from the root generator to here.
    """

    matrix: SymMatPoly
    path: tuple
    reduction: MatrixReduction | None = None


@dataclass
class ReductionTree:
    root_generators: list[SymMatPoly]
    levels: list[list[ReductionNode]] = field(default_factory=list)
    scalar_set: list[Poly] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    verified: bool = True
    eager: bool = True

    @property
    def t_values(self) -> list[tuple[tuple, Poly]]:
        return [(node.path, node.reduction.t) for lvl in self.levels for node in lvl if node.reduction]

    def nodes(self):
        for lvl in self.levels:
            yield from lvl


def projected_matrix_count(m: int, n: int) -> int:
    """Upper bound on matrices produced by sweeping m generators of size n."""
    return m * factorial(n) ** 2


def full_reduce(S: Sequence[SymMatPoly], max_size: int = DEFAULT_MAX_SIZE,
                max_generators: int = DEFAULT_MAX_GENERATORS, verify: bool = True) -> ReductionTree:
    """Reduce a finite generator list to its scalar set, breadth first."""
    S = [g.as_sym() for g in S]
    tree = ReductionTree(root_generators=S, eager=verify)
    if not S:
        return tree
    n = S[0].n
    vars = S[0].vars
    for g in S:
        if g.n != n:
            raise ValueError(f"all generators must have the same size; got {g.n} and {n}")
        if g.vars != vars:
            raise ValueError("all generators must share the same variables")
    if n > max_size or len(S) > max_generators:
        projected = projected_matrix_count(len(S), n)
        raise SizeCapExceeded(
            f"reduction of {len(S)} generator(s) of size {n} exceeds cap "
            f"(max size {max_size}, max generators {max_generators}); "
            f"projected matrix count {projected}",
            projected,
        )

    scalars: list[Poly] = []
    prov: dict = {}

    def add_scalar(p: Poly, path):
        if p.is_zero() or p in prov:
            return
        prov[p] = path
        scalars.append(p)

    level = [ReductionNode(g, (idx,)) for idx, g in enumerate(S)]
    while level:
        size = level[0].matrix.n
        if size == 1:
            tree.levels.append(level)
            for node in level:
                add_scalar(node.matrix[0, 0], node.path + ("leaf",))
            break
        done = []
        next_level = []
        seen_children = set()
        for node in level:
            red = reduce_matrix(node.matrix, verify=verify)
            if verify and not red.verified:
                tree.verified = False
            done.append(ReductionNode(node.matrix, node.path, red))
            for s in red.steps:
                add_scalar(s.cube, node.path + ((s.i, s.j), "cube"))
                child = s.schur_block
                if child.is_zero() or child in seen_children:
                    continue
                seen_children.add(child)
                next_level.append(ReductionNode(child, node.path + ((s.i, s.j),)))
        tree.levels.append(done)
        level = next_level

    tree.scalar_set = sorted(scalars, key=lambda p: p.sort_key())
    tree.provenance = prov
    return tree


def replay_path(S: Sequence[SymMatPoly], path: tuple) -> Poly:
    """Recompute the scalar recorded at ``path`` from the root generators."""
    m = S[path[0]].as_sym()
    rest = list(path[1:])
    tag = rest.pop()
    for idx, (i, j) in enumerate(rest):
        step = single_step(m, i, j, verify=False)
        if tag == "cube" and idx == len(rest) - 1:
            return step.cube
        m = step.schur_block
    if tag != "leaf" or m.n != 1:
        raise ValueError(f"malformed provenance path {path}")
    return m[0, 0]


def replay(tree: ReductionTree) -> list[Poly]:
    """Rebuild the scalar set from the stored provenance paths."""
    vals = [replay_path(tree.root_generators, tree.provenance[p]) for p in tree.scalar_set]
    return sorted(set(vals), key=lambda p: p.sort_key())


# ---------------------------------------------------------------------------
# strict positivity: pivot on (0, 0) only


def pd_reduce(a: SymMatPoly) -> list[Poly]:
    """Diagonal entries of the congruent diagonal form obtained by top-left pivoting.

    ``[a00^3] + pd_reduce(a00 (a00 C - b^T b))``; a 1x1 input returns its entry.
    """
    a = a.as_sym()
    out = []
    while a.n > 1:
        step = single_step(a, 0, 0, verify=False)
        out.append(step.cube)
        a = step.schur_block
    out.append(a[0, 0])
    return out


# ---------------------------------------------------------------------------
# certificate export


def step_certificate(a: SymMatPoly, verify: bool = True):
    """Express a*t as an element of the quadratic module generated by S_a.

    The generators are the nonzero cubes a~^3 and Schur blocks B_ij
    embedded in the top-left corner of size k.  Each pair contributes one
    term per nonzero generator: frame F_ij for the cube and S F_ij for the
    block, S being the down-shift with S^T embed(B) S = diag(0, B).
    ``cert_eval`` of the result equals ``a.scale(t)`` with t = sum a~_ij^4.
    """
    from .certificates import CertTerm, Certificate, GeneratorSet

    red = reduce_matrix(a, verify=verify)
    k = a.n
    vars = a.vars
    shift = shift_matrix(k, vars)
    gens: list[SymMatPoly] = []
    index: dict = {}

    def gen_index(m: SymMatPoly) -> int:
        if m not in index:
            index[m] = len(gens)
            gens.append(m)
        return index[m]

    terms = []
    for s in red.steps:
        f = s.frame
        cube = s.cube
        if not cube.is_zero():
            g = gen_index(embed_upper_left(SymMatPoly._raw([[cube]], vars), k))
            terms.append(CertTerm(f, g))
        if not s.schur_block.is_zero():
            g = gen_index(embed_upper_left(s.schur_block, k))
            terms.append(CertTerm(shift @ f, g))
    cert = Certificate(GeneratorSet(k, tuple(gens), vars), tuple(terms))
    return cert
