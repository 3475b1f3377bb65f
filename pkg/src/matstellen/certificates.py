"""Certificates of membership in matrix quadratic modules and preorderings.

A certificate is a formal sum of terms

    (prod_k v_k^T g_k v_k) * A^T G A

where ``G`` is the identity or a generator and each scalar factor
``v^T g v`` is stored structurally as ``(generator index, v)``.  Terms with
no scalar factors span the quadratic module generated by the generators;
scalar factors supply the products needed for the preordering.  Rational
weights are folded into the frame ``A`` (so only squares of rationals are
expressible per term; sums of terms cover positive integers).

The verifiers check the identities of the matrix Stellensaetze exactly:

    pd        F*beta = beta*F = I + c
    psd       F*beta = beta*F = F^(2k) + c
    null      c = -F^(2k)
    realnull  -(F^T F)^l = sos + sum U_i g_i V_i
    emptiness c = -I

They never search for a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .matpoly import MatPoly, SymMatPoly
from .polyring import Poly, as_poly


class MalformedCertificate(ValueError):
    """Certificate does not have the shape required by the verifier."""


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    gens: tuple[SymMatPoly, ...]
    vars: tuple[str, ...] = ()

    def __post_init__(self):
        gens = tuple(g.as_sym() for g in self.gens)
        object.__setattr__(self, "gens", gens)
        if gens and not self.vars:
            object.__setattr__(self, "vars", gens[0].vars)
        object.__setattr__(self, "vars", tuple(self.vars))
        for k, g in enumerate(gens):
            if g.n != self.n:
                raise ValueError(f"generator g{k} has size {g.n}, expected {self.n}")
            if g.vars != self.vars:
                raise ValueError(f"generator g{k} has variables {g.vars}, expected {self.vars}")

    def __len__(self):
        return len(self.gens)

    def __getitem__(self, k) -> SymMatPoly:
        return self.gens[k]

    def __iter__(self):
        return iter(self.gens)


@dataclass(frozen=True)
class ScalarFactor:
    gen_index: int
    vector: tuple[Poly, ...]

    def value(self, S: GeneratorSet) -> Poly:
        g = S[self.gen_index]
        v = self.vector
        total = Poly.zero(S.vars)
        for r in range(S.n):
            if not v[r]:
                continue
            for c in range(S.n):
                if v[c] and g[r, c]:
                    total = total + v[r] * g[r, c] * v[c]
        return total


@dataclass(frozen=True)
class CertTerm:
    frame: MatPoly
    core: int | None = None  # None is the identity
    factors: tuple[ScalarFactor, ...] = ()


@dataclass(frozen=True)
class Certificate:
    generators: GeneratorSet
    terms: tuple[CertTerm, ...] = ()

    def mapped(self, terms) -> "Certificate":
        return Certificate(self.generators, tuple(terms))


@dataclass(frozen=True)
class IdealTerm:
    left: MatPoly
    gen_index: int
    right: MatPoly


@dataclass
class VerifyReport:
    kind: str
    checks: dict[str, bool] = field(default_factory=dict)
    residuals: dict[str, MatPoly] = field(default_factory=dict)
    problems: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def __bool__(self):
        return self.verdict


# ---------------------------------------------------------------------------
# well-formedness and evaluation


def certificate_problems(c: Certificate) -> list[str]:
    """Structural defects that prevent evaluation; empty when well formed."""
    S = c.generators
    out = []
    for t, term in enumerate(c.terms):
        if not isinstance(term.frame, MatPoly) or term.frame.n != S.n:
            out.append(f"term {t}: frame must be {S.n}x{S.n}")
        elif term.frame.vars != S.vars:
            out.append(f"term {t}: frame variables {term.frame.vars} differ from {S.vars}")
        if term.core is not None and not 0 <= term.core < len(S):
            out.append(f"term {t}: core g{term.core} out of range ({len(S)} generators)")
        for f in term.factors:
            if not 0 <= f.gen_index < len(S):
                out.append(f"term {t}: factor generator g{f.gen_index} out of range")
            if len(f.vector) != S.n:
                out.append(f"term {t}: factor vector has length {len(f.vector)}, expected {S.n}")
            elif any(getattr(p, "vars", None) != S.vars for p in f.vector):
                out.append(f"term {t}: factor vector over the wrong variables")
    return out


def term_value(term: CertTerm, S: GeneratorSet) -> SymMatPoly:
    a = term.frame
    if term.core is None:
        v = a.T @ a
    else:
        v = a.T @ S[term.core] @ a
    scale = Poly.one(S.vars)
    for f in term.factors:
        scale = scale * f.value(S)
    if scale != 1:
        v = v.scale(scale)
    return SymMatPoly._raw(v.rows, v.vars)


def cert_eval(c: Certificate) -> SymMatPoly:
    """Expand a certificate to the symmetric matrix it denotes."""
    problems = certificate_problems(c)
    if problems:
        raise MalformedCertificate("; ".join(problems))
    S = c.generators
    total = MatPoly.zeros(S.n, S.vars)
    for term in c.terms:
        total = total + term_value(term, S)
    if not total.is_symmetric():
        raise ArithmeticError("certificate value is not symmetric")
    return SymMatPoly._raw(total.rows, total.vars)


def scalar_identity_cert(gen_index: int, v: Sequence, S: GeneratorSet) -> Certificate:
    """Certificate for (v^T g v) * I as sum_i (v e_i^T)^T g (v e_i^T)."""
    if not 0 <= gen_index < len(S):
        raise IndexError(f"generator index {gen_index} out of range")
    if len(v) != S.n:
        raise ValueError(f"vector has length {len(v)}, expected {S.n}")
    v = [as_poly(e, S.vars) for e in v]
    z = Poly.zero(S.vars)
    if all(e.is_zero() for e in v):
        return Certificate(S, ())
    terms = []
    for i in range(S.n):
        rows = [[v[r] if c == i else z for c in range(S.n)] for r in range(S.n)]
        terms.append(CertTerm(MatPoly._raw(rows, S.vars), gen_index))
    return Certificate(S, tuple(terms))


# ---------------------------------------------------------------------------
# verifiers


def _check_target(F: MatPoly, S: GeneratorSet):
    if F.n != S.n:
        raise ValueError(f"target has size {F.n}, generators have size {S.n}")
    if S.vars and F.vars != S.vars:
        raise ValueError(f"target variables {F.vars} differ from generator variables {S.vars}")


def _same_generators(*certs: Certificate):
    first = certs[0].generators
    for c in certs[1:]:
        if c.generators != first:
            raise ValueError("certificates must share one generator set")


def _evaluate(report: VerifyReport, certs: dict[str, Certificate]):
    values = {}
    problems = []
    for name, c in certs.items():
        p = certificate_problems(c)
        problems += [f"{name}: {msg}" for msg in p]
        if not p:
            values[name] = cert_eval(c)
    report.checks["well_formed"] = not problems
    report.problems += problems
    return values if not problems else None


def _compare(report: VerifyReport, name: str, lhs: MatPoly, rhs: MatPoly):
    diff = lhs - rhs
    ok = diff.is_zero()
    report.checks[name] = ok
    if not ok:
        report.residuals[name] = diff


def verify_pd_cert(F: SymMatPoly, beta: Certificate, c: Certificate) -> VerifyReport:
    """F*beta = beta*F = I + c."""
    _same_generators(beta, c)
    S = beta.generators
    _check_target(F, S)
    report = VerifyReport("pd")
    vals = _evaluate(report, {"beta": beta, "c": c})
    if vals is None:
        return report
    b = vals["beta"]
    rhs = MatPoly.identity(S.n, F.vars) + vals["c"]
    _compare(report, "left", F @ b, rhs)
    _compare(report, "right", b @ F, rhs)
    report.info["beta_central"] = b.is_scalar()
    return report


def verify_psd_cert(F: SymMatPoly, k: int, beta: Certificate, c: Certificate) -> VerifyReport:
    """F*beta = beta*F = F^(2k) + c; reports whether beta is central."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    _same_generators(beta, c)
    S = beta.generators
    _check_target(F, S)
    report = VerifyReport("psd")
    vals = _evaluate(report, {"beta": beta, "c": c})
    if vals is None:
        return report
    b = vals["beta"]
    rhs = F ** (2 * k) + vals["c"]
    _compare(report, "left", F @ b, rhs)
    _compare(report, "right", b @ F, rhs)
    report.info["beta_central"] = b.is_scalar()
    return report


def verify_null_cert(F: SymMatPoly, k: int, c: Certificate) -> VerifyReport:
    """c = -F^(2k)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    S = c.generators
    _check_target(F, S)
    report = VerifyReport("null")
    vals = _evaluate(report, {"c": c})
    if vals is None:
        return report
    _compare(report, "identity", vals["c"], -(F ** (2 * k)))
    return report


def _is_pure_sos(c: Certificate) -> bool:
    return all(t.core is None and not t.factors for t in c.terms)


def verify_real_null_cert(F: MatPoly, l: int, sos: Certificate,
                          ideal_terms: Sequence[IdealTerm]) -> VerifyReport:
    """-(F^T F)^l = sos + sum U_i g_i V_i, with sos a plain sum of A^T A."""
    if l < 1:
        raise ValueError("l must be a positive integer")
    if not _is_pure_sos(sos):
        raise MalformedCertificate("sum-of-squares part may only contain identity-core terms without factors")
    S = sos.generators
    _check_target(F, S)
    report = VerifyReport("realnull")
    vals = _evaluate(report, {"sos": sos})
    bad = []
    for t, it in enumerate(ideal_terms):
        if not 0 <= it.gen_index < len(S):
            bad.append(f"ideal term {t}: generator g{it.gen_index} out of range")
        for side in (it.left, it.right):
            if side.n != S.n or side.vars != S.vars:
                bad.append(f"ideal term {t}: factor matrices must be {S.n}x{S.n} over {S.vars}")
    if bad:
        report.checks["well_formed"] = False
        report.problems += bad
        return report
    if vals is None:
        return report
    ideal = MatPoly.zeros(S.n, S.vars)
    for it in ideal_terms:
        ideal = ideal + it.left @ S[it.gen_index] @ it.right
    report.checks["ideal_symmetric"] = ideal.is_symmetric()
    if not report.checks["ideal_symmetric"]:
        report.residuals["ideal_symmetric"] = ideal - ideal.T
    lhs = -((F.T @ F) ** l)
    _compare(report, "identity", lhs, vals["sos"] + ideal)
    return report


def membership_witness_minusI(S: GeneratorSet, c: Certificate) -> VerifyReport:
    """c = -I: the empty-locus certificate."""
    if c.generators != S:
        raise ValueError("certificate is over a different generator set")
    report = VerifyReport("emptiness")
    vals = _evaluate(report, {"c": c})
    if vals is None:
        return report
    _compare(report, "identity", vals["c"], -MatPoly.identity(S.n, S.vars))
    return report


verify_emptiness_cert = membership_witness_minusI
