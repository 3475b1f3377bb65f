import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from matstellen.certificates import cert_eval, certificate_problems
from matstellen.matpoly import MatPoly, SymMatPoly, shear_matrix, transposition_matrix
from matstellen.polyring import Poly, format_poly
from matstellen.reduction import (
    SizeCapExceeded,
    full_reduce,
    pd_reduce,
    reduce_matrix,
    replay,
    single_step,
    step_certificate,
)
from matstellen.semidef import eval_mat, is_pd, point_in_K, scalars_nonneg
from matstellen.testing import random_point, random_symmat

from conftest import XY
from test_polyring import to_sympy

A = SymMatPoly([["x", 1], [1, "y"]], XY)


def p(s, vars=XY):
    return Poly.parse(s, vars)


def sym_oracle_step(a, i, j):
    """Pivot construction written directly in sympy, sharing no code with the package."""
    n = a.n
    m = sympy.Matrix([[to_sympy(e) for e in r] for r in a.rows])
    T = sympy.eye(n)
    if i != j:
        T[j, i] = 1
    P = sympy.eye(n).permute([[0, i]]) if i else sympy.eye(n)
    Aij = (T * P).T * m * (T * P)
    at = Aij[0, 0]
    b = Aij[0, 1:]
    C = Aij[1:, 1:]
    B = (at * (at * C - b.T * b)).expand()
    return sympy.expand(at), B


def as_sympy_matrix(a):
    return sympy.Matrix([[to_sympy(e) for e in r] for r in a.rows])


# ----- single_step


def test_step_example_11():
    s = single_step(A, 0, 0)
    assert s.a_tilde == p("x")
    assert s.conjugated == A
    assert s.schur_block == SymMatPoly([["x^2*y - x"]], XY)
    assert s.x_minus == MatPoly([["x", -1], [0, "x"]], XY)
    assert s.x_minus.T @ A @ s.x_minus == MatPoly.diag(["x^3", "x^2*y - x"], XY)
    assert s.diagonal_ok and s.restore_ok


def test_step_example_12():
    s = single_step(A, 0, 1)
    assert s.a_tilde == p("x + y + 2")
    assert s.shear == MatPoly([[1, 0], [1, 1]], XY)
    assert s.perm == MatPoly.identity(2, XY)
    assert s.conjugated == SymMatPoly([["x + y + 2", "1 + y"], ["1 + y", "y"]], XY)
    assert s.schur_block[0, 0] == p("x + y + 2") * p("x*y - 1")
    assert s.verified


def test_step_diagonal():
    q, r = p("x^2 + 1"), p("y - 3")
    s = single_step(SymMatPoly.diag([q, r], XY), 0, 0)
    assert s.a_tilde == q
    assert s.schur_block[0, 0] == q * q * r


def test_step_errors():
    with pytest.raises(ValueError):
        single_step(SymMatPoly([["x"]], XY), 0, 0)
    with pytest.raises(IndexError):
        single_step(A, 0, 2)


def test_step_matches_sympy_oracle(rng):
    for _ in range(15):
        n = rng.choice((2, 3))
        a = random_symmat(rng, n, XY)
        for i in range(n):
            for j in range(n):
                s = single_step(a, i, j)
                at, B = sym_oracle_step(a, i, j)
                assert sympy.expand(to_sympy(s.a_tilde) - at) == 0
                assert (as_sympy_matrix(s.schur_block) - B).expand() == sympy.zeros(n - 1)


# ----- reduce_matrix


def test_reduce_xy():
    steps, children, scalars, t = reduce_matrix(A)
    assert len(steps) == 4
    assert set(scalars) == {p("x^3"), p("y^3"), p("x + y + 2") ** 3}
    xy1 = p("x*y - 1")
    assert {c[0, 0] for c in children} == {p("x") * xy1, p("y") * xy1, p("x + y + 2") * xy1}
    assert t == p("x^4 + y^4") + p("x + y + 2") ** 4 * 2


def test_reduce_identity():
    red = reduce_matrix(SymMatPoly(MatPoly.identity(2, XY).rows, XY))
    assert [s.a_tilde.constant_value() for s in red.steps] == [1, 2, 2, 1]
    assert red.t == Poly.const(34, XY)
    assert red.aggregate_ok


def test_reduce_all_ones():
    red = reduce_matrix(SymMatPoly([[1, 1], [1, 1]], XY))
    assert [s.a_tilde.constant_value() for s in red.steps] == [1, 4, 4, 1]
    assert red.t == Poly.const(514, XY)
    assert red.aggregate_ok


def test_reduce_zero_matrix():
    red = reduce_matrix(SymMatPoly(MatPoly.zeros(3, XY).rows, XY))
    assert red.t.is_zero()
    assert red.scalars == () and red.children == ()
    assert red.aggregate_ok and red.aggregate().is_zero()


def test_literal_frame_ordering_is_not_an_identity():
    # conjugating by T P means the inverse is P T^-1; swapping the two factors breaks the sum
    I2 = SymMatPoly(MatPoly.identity(2, XY).rows, XY)
    red = reduce_matrix(I2)
    total = MatPoly.zeros(2, XY)
    for s in red.steps:
        f = s.x_plus @ shear_matrix(s.i, s.j, 2, XY, inverse=True) @ transposition_matrix(s.i, 2, XY)
        total = total + f.T @ s.diagonal @ f
    assert total != I2.scale(red.t)
    assert red.aggregate() == I2.scale(red.t)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_aggregate_ok_random(seed):
    rng = random.Random(seed)
    a = random_symmat(rng, rng.choice((2, 3)), ("x", "y", "z")[: rng.randint(1, 3)])
    red = reduce_matrix(a)
    assert red.verified


# ----- step_certificate


def test_step_certificate_xy():
    cert = step_certificate(A)
    red = reduce_matrix(A)
    assert certificate_problems(cert) == []
    assert cert_eval(cert) == A.scale(red.t)
    # two terms (cube and Schur block) for each of the four pivots
    assert len(cert.terms) == 8


def test_step_certificate_constant_matrices():
    I2 = SymMatPoly(MatPoly.identity(2, XY).rows, XY)
    assert cert_eval(step_certificate(I2)) == MatPoly.identity(2, XY).scale(34)
    J = SymMatPoly([[1, 1], [1, 1]], XY)
    assert cert_eval(step_certificate(J)) == J.scale(514)


def test_step_certificate_sign_flip_fails():
    cert = step_certificate(A)
    t0 = cert.terms[0]
    bad_gens = list(cert.generators.gens)
    bad_gens[t0.core] = SymMatPoly((-bad_gens[t0.core]).rows, XY)
    from matstellen.certificates import Certificate, GeneratorSet

    mutated = Certificate(GeneratorSet(2, tuple(bad_gens), XY), cert.terms)
    assert cert_eval(mutated) != A.scale(reduce_matrix(A).t)


def test_step_certificate_generators_are_embedded_outputs():
    cert = step_certificate(A)
    red = reduce_matrix(A)
    tops = {g[0, 0] for g in cert.generators}
    assert tops == set(red.scalars) | {c[0, 0] for c in red.children}
    assert all(g[0, 1].is_zero() and g[1, 1].is_zero() for g in cert.generators)


# ----- full_reduce


XY_SCALARS = ["x^3", "y^3", "x^3 + 3*x^2*y + 3*x*y^2 + y^3 + 6*x^2 + 12*x*y + 6*y^2 + 12*x + 12*y + 8",
              "x^2*y - x", "x*y^2 - y", "x^2*y + x*y^2 + 2*x*y - x - y - 2"]


def test_full_reduce_xy():
    tree = full_reduce([A])
    assert set(tree.scalar_set) == {p(s) for s in XY_SCALARS}
    assert len(tree.scalar_set) == 6
    assert tree.verified
    assert tree.scalar_set == sorted(tree.scalar_set, key=lambda q: q.sort_key())
    assert replay(tree) == tree.scalar_set


def test_full_reduce_constant():
    tree = full_reduce([SymMatPoly(MatPoly.identity(3, XY).scale(5).rows, XY)])
    assert tree.scalar_set and all(q.is_constant() and q.constant_value() >= 0 for q in tree.scalar_set)


def test_full_reduce_empty():
    tree = full_reduce([])
    assert tree.scalar_set == [] and tree.levels == []


def test_full_reduce_one_by_one():
    tree = full_reduce([SymMatPoly([["x - y"]], XY), SymMatPoly([[0]], XY)])
    assert tree.scalar_set == [p("x - y")]


def test_full_reduce_size_cap():
    big = SymMatPoly(MatPoly.identity(6, XY).rows, XY)
    with pytest.raises(SizeCapExceeded) as e:
        full_reduce([big])
    assert e.value.projected == 518400
    assert "518400" in str(e.value)
    with pytest.raises(SizeCapExceeded):
        full_reduce([A] * 9)
    with pytest.raises(SizeCapExceeded):
        full_reduce([SymMatPoly(MatPoly.identity(3, XY).rows, XY)], max_size=2)


def test_full_reduce_mixed_sizes():
    with pytest.raises(ValueError):
        full_reduce([A, SymMatPoly([["x"]], XY)])


def test_provenance_paths_replay(rng):
    b = random_symmat(rng, 2, XY, deg=1, coeff=3, max_terms=2)
    tree = full_reduce([A, b])
    assert replay(tree) == tree.scalar_set
    for q in tree.scalar_set:
        path = tree.provenance[q]
        assert path[-1] in ("cube", "leaf") and path[0] in (0, 1)


def test_full_reduce_three_by_three_sampling(rng):
    a = SymMatPoly([["x", 1, 0], [1, "y", "x"], [0, "x", 1]], XY)
    tree = full_reduce([a])
    assert tree.verified
    assert replay(tree) == tree.scalar_set
    for _ in range(150):
        pt = random_point(rng, 2)
        assert point_in_K([a], pt) == scalars_nonneg(tree.scalar_set, pt), pt


def test_sampling_soundness_random_generators():
    rng = random.Random(77)
    cases = []
    for _ in range(5):
        gens = [random_symmat(rng, 2, XY, deg=1, coeff=3, max_terms=3) for _ in range(rng.randint(1, 2))]
        cases.append((gens, full_reduce(gens).scalar_set))
    checked = 0
    for gens, scalars in cases:
        for _ in range(100):
            pt = random_point(rng, 2)
            assert point_in_K(gens, pt) == scalars_nonneg(scalars, pt), (gens, pt)
            checked += 1
    assert checked >= 500


# ----- pd_reduce


def test_pd_reduce_examples():
    assert pd_reduce(A) == [p("x^3"), p("x^2*y - x")]
    assert pd_reduce(SymMatPoly([["x^2 + 1"]], XY)) == [p("x^2 + 1")]
    assert pd_reduce(SymMatPoly(MatPoly.identity(2, XY).rows, XY)) == [Poly.one(XY)] * 2


def test_pd_reduce_consistency(rng):
    mats = [A, SymMatPoly([["x", 1, 0], [1, "y", 1], [0, 1, "x + y"]], XY)]
    for a in mats:
        outs = pd_reduce(a)
        for _ in range(200):
            pt = random_point(rng, 2)
            pos = all(q.eval(pt) > 0 for q in outs)
            assert pos == is_pd(eval_mat(a, pt)), (format_poly(outs[-1]), pt)
