"""Seeded random corpora and certificate mutation, shared by tests and scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations_with_replacement

from . import certificates as C
from .matpoly import MatPoly, SymMatPoly
from .polyring import Poly
from .semidef import RatMat

VARS = ("x", "y", "z")


def monomials_upto(d: int, deg: int) -> list[tuple]:
    out = []
    for k in range(deg + 1):
        for combo in combinations_with_replacement(range(d), k):
            m = [0] * d
            for v in combo:
                m[v] += 1
            out.append(tuple(m))
    return out


def random_poly(rng: random.Random, vars, deg: int = 2, coeff: int = 5, max_terms: int = 3) -> Poly:
    mons = monomials_upto(len(vars), deg)
    k = rng.randint(0, max_terms)
    terms = {}
    for m in rng.sample(mons, min(k, len(mons))):
        c = rng.randint(-coeff, coeff)
        if c:
            terms[m] = c
    return Poly(vars, terms)


def random_symmat(rng: random.Random, n: int, vars, **kw) -> SymMatPoly:
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            p = random_poly(rng, vars, **kw)
            rows[i][j] = rows[j][i] = p
    return SymMatPoly(rows, vars)


def random_mat(rng: random.Random, n: int, vars, **kw) -> MatPoly:
    return MatPoly([[random_poly(rng, vars, **kw) for _ in range(n)] for _ in range(n)], vars)


def identity_corpus(count: int = 200, seed: int = 0):
    """Symmetric matrices with n in {2,3,4}, d <= 3, entry degree <= 2, coefficients in [-5, 5]."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.choice((2, 3, 4))
        d = rng.randint(1, 3)
        out.append(random_symmat(rng, n, VARS[:d], deg=2, coeff=5, max_terms=3))
    return out


def random_rational(rng: random.Random, height: int = 100) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_ratmat(rng: random.Random, n: int, height: int = 100, kind: str = "mixed") -> RatMat:
    """Random symmetric rational matrix.

    ``kind="mixed"`` draws an arbitrary symmetric matrix a third of the time
    and otherwise a Gram matrix (PSD, often singular), so both verdicts
    occur with useful frequency.
    """
    if kind == "mixed":
        kind = rng.choice(("any", "gram", "gram"))
    if kind == "any":
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = random_rational(rng, height)
        return RatMat(tuple(tuple(r) for r in rows))
    rank = rng.randint(0, n)
    vecs = [[Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)] for _ in range(rank)]
    rows = [[sum((v[i] * v[j] for v in vecs), Fraction(0)) for j in range(n)] for i in range(n)]
    if rng.random() < 0.5 and n > 1:
        # small perturbation on one diagonal entry flips many Gram matrices to indefinite
        i = rng.randrange(n)
        rows[i][i] -= Fraction(1, rng.randint(1, 50))
    return RatMat(tuple(tuple(r) for r in rows))


def random_point(rng: random.Random, d: int, lo: int = -3, hi: int = 3, max_den: int = 12) -> tuple:
    coords = []
    for _ in range(d):
        q = rng.randint(1, max_den)
        coords.append(Fraction(rng.randint(lo * q, hi * q), q))
    return tuple(coords)


# ---------------------------------------------------------------------------
# certificate fixtures and mutation


@dataclass
class CertFixture:
    """Everything a verifier needs, kept in one mutable bundle."""

    name: str
    kind: str
    generators: C.GeneratorSet
    target: MatPoly | None = None
    power: int = 1
    parts: dict = field(default_factory=dict)  # name -> tuple[CertTerm]
    ideal_terms: tuple = ()

    def cert(self, part: str) -> C.Certificate:
        return C.Certificate(self.generators, tuple(self.parts.get(part, ())))

    def verify(self) -> C.VerifyReport:
        if self.kind == "pd":
            return C.verify_pd_cert(self.target, self.cert("beta"), self.cert("c"))
        if self.kind == "psd":
            return C.verify_psd_cert(self.target, self.power, self.cert("beta"), self.cert("c"))
        if self.kind == "null":
            return C.verify_null_cert(self.target, self.power, self.cert("c"))
        if self.kind == "realnull":
            return C.verify_real_null_cert(self.target, self.power, self.cert("sos"), self.ideal_terms)
        if self.kind == "emptiness":
            return C.membership_witness_minusI(self.generators, self.cert("c"))
        raise ValueError(self.kind)


def _prime_delta(rng: random.Random) -> Fraction:
    # denominators are primes no fixture uses, so a mutated coefficient never cancels by accident
    q = rng.choice((7, 11, 13, 17, 19, 23))
    p = rng.choice([k for k in range(-20, 21) if k % q])
    return Fraction(p, q)


def _bump(rng: random.Random, p: Poly, delta: Fraction) -> Poly:
    mons = p.monomials()
    if mons and rng.random() < 0.5:
        m = rng.choice(mons)
    else:
        m = rng.choice(monomials_upto(len(p.vars), 2))
    return p + Poly(p.vars, {m: delta})


def _bump_matrix(rng, a: MatPoly, i: int, j: int, delta, symmetric: bool) -> MatPoly:
    rows = a.to_lists()
    new = _bump(rng, rows[i][j], delta)
    bumped = new - rows[i][j]
    rows[i][j] = new
    if symmetric and i != j:
        rows[j][i] = rows[j][i] + bumped
    cls = SymMatPoly if symmetric else MatPoly
    return cls(rows, a.vars)


def mutation_sites(fx: CertFixture) -> list[tuple]:
    sites = []
    n = fx.generators.n
    if fx.target is not None:
        sym = fx.kind != "realnull"
        sites += [("target", i, j) for i in range(n) for j in range(n) if not sym or j >= i]
    for part, terms in fx.parts.items():
        for t, term in enumerate(terms):
            sites += [("frame", part, t, i, j) for i in range(n) for j in range(n)]
            for f, fac in enumerate(term.factors):
                sites += [("factor", part, t, f, r) for r in range(n)]
    for t in range(len(fx.ideal_terms)):
        for side in ("left", "right"):
            sites += [("ideal", t, side, i, j) for i in range(n) for j in range(n)]
    return sites


def mutate(fx: CertFixture, rng: random.Random) -> tuple[CertFixture, tuple]:
    """Change exactly one coefficient somewhere in the fixture."""
    site = rng.choice(mutation_sites(fx))
    delta = _prime_delta(rng)
    kind = site[0]
    if kind == "target":
        _, i, j = site
        sym = fx.kind != "realnull"
        return replace(fx, target=_bump_matrix(rng, fx.target, i, j, delta, sym)), site
    if kind == "frame":
        _, part, t, i, j = site
        terms = list(fx.parts[part])
        terms[t] = replace(terms[t], frame=_bump_matrix(rng, terms[t].frame, i, j, delta, False))
        return replace(fx, parts={**fx.parts, part: tuple(terms)}), site
    if kind == "factor":
        _, part, t, f, r = site
        terms = list(fx.parts[part])
        facs = list(terms[t].factors)
        vec = list(facs[f].vector)
        vec[r] = _bump(rng, vec[r], delta)
        facs[f] = replace(facs[f], vector=tuple(vec))
        terms[t] = replace(terms[t], factors=tuple(facs))
        return replace(fx, parts={**fx.parts, part: tuple(terms)}), site
    _, t, side, i, j = site
    its = list(fx.ideal_terms)
    its[t] = replace(its[t], **{side: _bump_matrix(rng, getattr(its[t], side), i, j, delta, False)})
    return replace(fx, ideal_terms=tuple(its)), site


def standard_fixtures() -> list[CertFixture]:
    """Passing certificates, at least two per verifier kind."""
    X = ("x",)
    x = Poly.var("x", X)
    I2 = MatPoly.identity(2, X)
    e = C.GeneratorSet(2, (), X)

    def T(frame=None, core=None, factors=()):
        return C.CertTerm(frame if frame is not None else I2, core, tuple(factors))

    half = I2.scale(Fraction(1, 2))
    minus_i = C.GeneratorSet(2, (SymMatPoly((-I2).rows, X),), X)
    x_cube = C.GeneratorSet(2, (SymMatPoly(I2.scale(x**3).rows, X),), X)
    x_pair = C.GeneratorSet(2, (SymMatPoly(I2.scale(x).rows, X), SymMatPoly(I2.scale(-x - 1).rows, X)), X)
    x_only = C.GeneratorSet(2, (SymMatPoly(I2.scale(x).rows, X),), X)
    ident = C.GeneratorSet(2, (SymMatPoly(I2.rows, X),), X)
    E11 = MatPoly([[1, 0], [0, 0]], X)
    E22 = MatPoly([[0, 0], [0, 1]], X)
    sym = lambda m: SymMatPoly(m.rows, X)  # noqa: E731

    return [
        CertFixture("pd-identity", "pd", e, sym(I2), parts={"beta": (T(),), "c": ()}),
        CertFixture("pd-four", "pd", e, sym(I2.scale(4)), parts={"beta": (T(half),), "c": ()}),
        CertFixture("pd-one-plus-square", "pd", x_only, sym(I2.scale(1 + x**2)),
                    parts={"beta": (T(),), "c": (T(I2.scale(x)),)}),
        CertFixture("psd-identity", "psd", e, sym(I2), 1, parts={"beta": (T(),), "c": ()}),
        CertFixture("psd-cube", "psd", x_cube, sym(I2.scale(x)), 2, parts={"beta": (T(core=0),), "c": ()}),
        CertFixture("psd-noncentral", "psd", x_cube, sym(MatPoly.diag([x, 1], X)), 2,
                    parts={"beta": (T(E11, 0), T(E22)), "c": ()}),
        CertFixture("null-minus-identity", "null", minus_i, sym(I2), 1, parts={"c": (T(core=0),)}),
        CertFixture("null-zero", "null", minus_i, sym(MatPoly.zeros(2, X)), 1, parts={"c": ()}),
        CertFixture("null-product", "null", x_pair, sym(I2.scale(x)), 1,
                    parts={"c": (T(core=0, factors=[C.ScalarFactor(1, (Poly.one(X), Poly.zero(X)))]),
                                 T(core=0))}),
        CertFixture("realnull-identity", "realnull", ident, I2, 1, parts={"sos": ()},
                    ideal_terms=(C.IdealTerm(-I2, 0, I2),)),
        CertFixture("realnull-x", "realnull", x_only, I2.scale(x), 1, parts={"sos": ()},
                    ideal_terms=(C.IdealTerm(I2.scale(-x), 0, I2),)),
        CertFixture("emptiness-minus-identity", "emptiness", minus_i, parts={"c": (T(core=0),)}),
        CertFixture("emptiness-pair", "emptiness", x_pair, parts={"c": (T(core=0), T(core=1))}),
    ]
