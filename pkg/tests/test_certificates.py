import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matstellen.certificates import (
    CertTerm,
    Certificate,
    GeneratorSet,
    IdealTerm,
    MalformedCertificate,
    ScalarFactor,
    cert_eval,
    membership_witness_minusI,
    scalar_identity_cert,
    verify_null_cert,
    verify_pd_cert,
    verify_psd_cert,
    verify_real_null_cert,
)
from matstellen.matpoly import MatPoly, SymMatPoly
from matstellen.polyring import Poly
from matstellen.semidef import eval_mat, is_psd, point_in_K
from matstellen.testing import mutate, random_mat, random_point, random_poly, random_symmat, standard_fixtures

from conftest import XY

X = ("x",)
x = Poly.var("x", X)
I2 = MatPoly.identity(2, X)


def S_(*gens, vars=X):
    return GeneratorSet(2, tuple(SymMatPoly(g.rows, vars) for g in gens), vars)


def term(frame=None, core=None, factors=()):
    return CertTerm(I2 if frame is None else frame, core, tuple(factors))


def cert(S, *terms):
    return Certificate(S, tuple(terms))


EMPTY = S_()
F_sym = lambda m: SymMatPoly(m.rows, X)  # noqa: E731


# ----- cert_eval


def test_cert_eval_examples():
    assert cert_eval(cert(EMPTY, term())) == I2
    A = MatPoly([["x", 1], [0, "x^2"]], X)
    assert cert_eval(cert(EMPTY, term(A))) == A.T @ A
    assert cert_eval(cert(EMPTY)).is_zero()


def test_cert_eval_rejects_bad_index():
    with pytest.raises(MalformedCertificate):
        cert_eval(cert(EMPTY, term(core=0)))
    with pytest.raises(MalformedCertificate):
        cert_eval(cert(S_(I2), term(factors=[ScalarFactor(0, (x,))])))


def test_cert_eval_scalar_factor():
    S = S_(I2.scale(x))
    v = (Poly.one(X), x)
    c = cert(S, term(core=None, factors=[ScalarFactor(0, v)]))
    assert cert_eval(c) == I2.scale(x + x**3)


def test_generator_set_checks():
    with pytest.raises(ValueError):
        GeneratorSet(2, (SymMatPoly([[1]], X),), X)


# ----- scalar_identity_cert


def test_scalar_identity_examples():
    S = GeneratorSet(2, (SymMatPoly([["x", 1], [1, "y"]], XY),), XY)
    o, z = Poly.one(XY), Poly.zero(XY)
    c1 = scalar_identity_cert(0, [o, z], S)
    assert len(c1.terms) == 2
    assert cert_eval(c1) == MatPoly.identity(2, XY).scale(Poly.parse("x", XY))
    assert cert_eval(scalar_identity_cert(0, [z, o], S)) == MatPoly.identity(2, XY).scale(Poly.parse("y", XY))
    assert cert_eval(scalar_identity_cert(0, [z, z], S)).is_zero()
    with pytest.raises(IndexError):
        scalar_identity_cert(1, [o, z], S)
    with pytest.raises(ValueError):
        scalar_identity_cert(0, [o], S)


def test_scalar_identity_round_trip_random():
    rng = random.Random(5)
    for _ in range(100):
        n = rng.randint(1, 3)
        g = random_symmat(rng, n, XY)
        v = [random_poly(rng, XY, deg=1) for _ in range(n)]
        S = GeneratorSet(n, (g,), XY)
        q = Poly.zero(XY)
        for i in range(n):
            for j in range(n):
                q = q + v[i] * g[i, j] * v[j]
        assert cert_eval(scalar_identity_cert(0, v, S)) == MatPoly.identity(n, XY).scale(q)


# ----- verifiers on the documented fixtures


def test_pd_examples():
    assert verify_pd_cert(F_sym(I2), cert(EMPTY, term()), cert(EMPTY)).verdict
    half = I2.scale(Fraction(1, 2))
    assert verify_pd_cert(F_sym(I2.scale(4)), cert(EMPTY, term(half)), cert(EMPTY)).verdict
    # 2I has no certificate with beta = frame (1/2)I: 2 * 1/4 = 1/2, not 1
    assert not verify_pd_cert(F_sym(I2.scale(2)), cert(EMPTY, term(half)), cert(EMPTY)).verdict


def test_pd_sign_flip_reports_residual():
    S = S_(I2.scale(x), -I2)
    F = F_sym(I2.scale(1 + x**2))
    good = verify_pd_cert(F, cert(S, term()), cert(S, term(I2.scale(x))))
    assert good.verdict and good.info["beta_central"]
    # a frame sign does not survive A^T A, so the flip goes through the core -I: c = -x^2 I
    bad = verify_pd_cert(F, cert(S, term()), cert(S, term(I2.scale(x), core=1)))
    assert not bad.verdict
    assert bad.residuals["left"] == I2.scale(2 * x**2)


def test_psd_examples():
    assert verify_psd_cert(F_sym(I2), 1, cert(EMPTY, term()), cert(EMPTY)).verdict
    S = S_(I2.scale(x**3))
    rep = verify_psd_cert(F_sym(I2.scale(x)), 2, cert(S, term(core=0)), cert(S))
    assert rep.verdict and rep.info["beta_central"]
    with pytest.raises(ValueError):
        verify_psd_cert(F_sym(I2), 0, cert(EMPTY, term()), cert(EMPTY))


def test_psd_noncentral_beta_is_reported():
    S = S_(I2.scale(x**3))
    E11 = MatPoly([[1, 0], [0, 0]], X)
    E22 = MatPoly([[0, 0], [0, 1]], X)
    F = F_sym(MatPoly.diag([x, 1], X))
    rep = verify_psd_cert(F, 2, cert(S, term(E11, 0), term(E22)), cert(S))
    assert rep.verdict
    assert rep.info["beta_central"] is False


def test_null_examples():
    S = S_(-I2)
    for k in (1, 2, 3):
        assert verify_null_cert(F_sym(I2), k, cert(S, term(core=0))).verdict
    assert verify_null_cert(F_sym(MatPoly.zeros(2, X)), 1, cert(S)).verdict
    # c = +F^2 instead of -F^2
    F = F_sym(I2.scale(x))
    rep = verify_null_cert(F, 1, cert(S, term(I2.scale(x))))
    assert not rep.verdict and not rep.residuals["identity"].is_zero()


def test_realnull_examples():
    S = S_(I2)
    assert verify_real_null_cert(I2, 1, cert(S), [IdealTerm(-I2, 0, I2)]).verdict
    Sx = S_(I2.scale(x))
    assert verify_real_null_cert(I2.scale(x), 1, cert(Sx), [IdealTerm(I2.scale(-x), 0, I2)]).verdict


def test_realnull_asymmetric_ideal_sum():
    S = S_(I2)
    U = MatPoly([[-1, 1], [0, -1]], X)
    rep = verify_real_null_cert(I2, 1, cert(S), [IdealTerm(U, 0, I2)])
    assert not rep.verdict
    assert rep.checks["ideal_symmetric"] is False


def test_realnull_rejects_non_sos_part():
    S = S_(I2)
    with pytest.raises(MalformedCertificate):
        verify_real_null_cert(I2, 1, cert(S, term(core=0)), [])


def test_emptiness_examples():
    assert membership_witness_minusI(S_(-I2), cert(S_(-I2), term(core=0))).verdict
    S = S_(I2.scale(x), I2.scale(-x - 1))
    assert membership_witness_minusI(S, cert(S, term(core=0), term(core=1))).verdict
    S1 = S_(I2)
    rep = membership_witness_minusI(S1, cert(S1, term(core=0)))
    assert not rep.verdict
    assert rep.residuals["identity"] == I2.scale(2)


def test_malformed_certificate_is_a_verdict():
    S = S_(-I2)
    rep = membership_witness_minusI(S, cert(S, term(core=3)))
    assert not rep.verdict and rep.checks["well_formed"] is False and rep.problems


# ----- properties


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_cert_value_is_psd_on_K(seed):
    rng = random.Random(seed)
    gens = (SymMatPoly([["x", 1], [1, "y"]], XY), random_symmat(rng, 2, XY, deg=1))
    S = GeneratorSet(2, gens, XY)
    terms = []
    for _ in range(rng.randint(1, 3)):
        core = rng.choice((None, 0, 1))
        factors = tuple(ScalarFactor(rng.randrange(2), (random_poly(rng, XY, deg=1), random_poly(rng, XY, deg=1)))
                        for _ in range(rng.randint(0, 2)))
        terms.append(CertTerm(random_mat(rng, 2, XY, deg=1), core, factors))
    val = cert_eval(Certificate(S, tuple(terms)))
    assert val.is_symmetric()
    hits = 0
    for _ in range(40):
        pt = random_point(rng, 2, lo=0, hi=4)
        if point_in_K(gens, pt):
            hits += 1
            assert is_psd(eval_mat(val, pt))


def test_fixtures_pass_and_mutants_fail():
    rng = random.Random(11)
    for fx in standard_fixtures():
        assert fx.verify().verdict, fx.name
        for _ in range(10):
            mutant, site = mutate(fx, rng)
            rep = mutant.verify()
            assert not rep.verdict, (fx.name, site)
            assert any(not r.is_zero() for r in rep.residuals.values()), (fx.name, site)
