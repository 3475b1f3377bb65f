import random
import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from matstellen.polyring import Poly
from matstellen.testing import monomials_upto

XY = ("x", "y")
XYZ = ("x", "y", "z")


@pytest.fixture
def rng():
    return random.Random(20240611)


small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def polys(draw, vars=XY, max_deg=3, max_terms=5):
    mons = monomials_upto(len(vars), max_deg)
    chosen = draw(st.lists(st.sampled_from(mons), max_size=max_terms, unique=True))
    coeffs = draw(st.lists(small_rationals, min_size=len(chosen), max_size=len(chosen)))
    return Poly(vars, dict(zip(chosen, coeffs)))


@st.composite
def points(draw, d=2):
    return tuple(draw(st.lists(small_rationals, min_size=d, max_size=d)))


@st.composite
def rat_vectors(draw, n):
    return [Fraction(v) for v in draw(st.lists(small_rationals, min_size=n, max_size=n))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
