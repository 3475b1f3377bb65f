"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`Poly` is an immutable mapping from exponent tuples to nonzero
rational coefficients over a fixed tuple of variable names.  Coefficients
are stored as ``int`` whenever they are integral (a fast path for the
integer-heavy reduction corpus) and as :class:`fractions.Fraction`
otherwise; :meth:`Poly.coeff` always hands back a ``Fraction``.

Printing uses graded lexicographic order with the declared variable order.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Monomial = tuple  # tuple[int, ...], one exponent per variable
Rat = Fraction


class PolySyntaxError(ValueError):
    """Raised when polynomial text does not match the grammar."""

    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class RingMismatch(ValueError):
    pass


def _norm(c):
    # canonical scalar: int if integral, else Fraction
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


def grlex_key(m: Monomial):
    return (sum(m), m)


# Monomials are stored packed into one int, _BITS bits per exponent, so that
# multiplying monomials is integer addition.
_BITS = 32
_MASK = (1 << _BITS) - 1


def _pack(m) -> int:
    key = 0
    for k, e in enumerate(m):
        if e < 0:
            raise ValueError(f"negative exponent in {tuple(m)}")
        if e > _MASK:
            raise OverflowError("exponent too large")
        key |= e << (_BITS * k)
    return key


def _unpack(key: int, d: int) -> Monomial:
    return tuple((key >> (_BITS * k)) & _MASK for k in range(d))


class Poly:
    """Element of Q[x_1..x_d].  Immutable; hashable; structural equality."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.vars = tuple(vars)
        d = len(self.vars)
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != d:
                    raise RingMismatch(f"monomial {m} has {len(m)} exponents, ring has {d} variables")
                c = _norm(c)
                key = _pack(m)
                s = clean.get(key, 0) + c
                if s:
                    clean[key] = _norm(s)
                else:
                    clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars: tuple, terms: dict) -> "Poly":
        # trusted constructor: packed keys, nonzero canonical coefficients
        p = cls.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # ----- constructors -------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "Poly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, c, vars: Sequence[str]) -> "Poly":
        c = _norm(c)
        return cls._raw(tuple(vars), {0: c} if c else {})

    @classmethod
    def one(cls, vars: Sequence[str]) -> "Poly":
        return cls.const(1, vars)

    @classmethod
    def var(cls, name: str, vars: Sequence[str]) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise ValueError(f"unknown variable {name!r}; ring variables are {vars}")
        return cls._raw(vars, {1 << (_BITS * vars.index(name)): 1})

    @classmethod
    def gens(cls, vars: Sequence[str]) -> tuple["Poly", ...]:
        return tuple(cls.var(v, vars) for v in vars)

    @classmethod
    def parse(cls, text: str, vars: Sequence[str]) -> "Poly":
        return parse_poly(text, vars)

    # ----- inspection ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def _items(self):
        d = len(self.vars)
        return [(_unpack(k, d), c) for k, c in self._terms.items()]

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order."""
        return [(m, Fraction(c)) for m, c in sorted(self._items(), key=lambda t: grlex_key(t[0]), reverse=True)]

    def monomials(self) -> list[Monomial]:
        d = len(self.vars)
        return [_unpack(k, d) for k in self._terms]

    def coeff(self, m: Monomial) -> Fraction:
        return Fraction(self._terms.get(_pack(m), 0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.monomials()), default=-1)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self._terms.get(0, 0))

    def leading_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m, c = max(self._items(), key=lambda t: grlex_key(t[0]))
        return m, Fraction(c)

    def sort_key(self):
        """Deterministic total order used for canonical listings."""
        ts = self.terms()
        return (self.degree(), len(ts), tuple((grlex_key(m), c) for m, c in ts))

    # ----- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise RingMismatch(f"variable mismatch: {self.vars} vs {other.vars}")
            return other
        if isinstance(other, Rational):
            return Poly.const(other, self.vars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _norm(s) if type(s) is Fraction else s
            else:
                del out[m]
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _norm(other)
            if not c:
                return Poly._raw(self.vars, {})
            if c == 1:
                return self
            out = {}
            for m, a in self._terms.items():
                v = a * c
                out[m] = _norm(v) if type(v) is Fraction else v
            return Poly._raw(self.vars, out)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return Poly._raw(self.vars, {})
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        bitems = list(b.items())
        for m1, c1 in a.items():
            for m2, c2 in bitems:
                m = m1 + m2
                out[m] = get(m, 0) + c1 * c2
        res = {}
        for m, c in out.items():
            if c:
                res[m] = _norm(c) if type(c) is Fraction else c
        return Poly._raw(self.vars, res)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero rational scalar; exact division for a Poly divisor."""
        if isinstance(other, Poly):
            if not other.is_constant():
                return self.divexact(other)
            other = other.constant_value()
        if not isinstance(other, Rational):
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return self * (Fraction(1) / Fraction(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.one(self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divexact(self, other: "Poly") -> "Poly":
        """Quotient ``self / other`` when the division is exact.

        Plain multivariate long division under graded-lex order; raises
        ``ArithmeticError`` if a nonzero remainder appears.
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = other.leading_term()
        q: dict = {}
        r = self
        while not r.is_zero():
            m, c = r.leading_term()
            diff = tuple(x - y for x, y in zip(m, lm))
            if any(e < 0 for e in diff):
                raise ArithmeticError(f"{other} does not divide {self}")
            qc = _norm(c / lc)
            key = _pack(diff)
            q[key] = qc
            r = r - Poly._raw(self.vars, {key: qc}) * other
        return Poly._raw(self.vars, q)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self._terms == other._terms
        if isinstance(other, Rational):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # ----- evaluation ---------------------------------------------------

    def __call__(self, point: Sequence) -> Fraction:
        return self.eval(point)

    def eval(self, point: Sequence) -> Fraction:
        """Exact value at a rational point (one coordinate per variable)."""
        if len(point) != len(self.vars):
            raise ValueError(f"point has dimension {len(point)}, ring has {len(self.vars)} variables")
        pt = [_norm(Fraction(c)) for c in point]
        total = 0
        for m, c in self._items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = v * x**e
            total += v
        return Fraction(total)

    def substitute(self, values: Mapping[str, "Poly"]) -> "Poly":
        """Replace every variable by a polynomial of a (possibly other) ring."""
        target_vars = next((v.vars for v in values.values()), None)
        if target_vars is None:
            return self
        result = Poly.zero(target_vars)
        for m, c in self._items():
            term = Poly.const(c, target_vars)
            for name, e in zip(self.vars, m):
                if e:
                    term = term * values[name] ** e
            result = result + term
        return result

    # ----- text ---------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, vars={self.vars})"


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_pow(p: Poly, k: int) -> Poly:
    return p**k


def poly_eval(p: Poly, point: Sequence) -> Fraction:
    return p.eval(point)


# ---------------------------------------------------------------------------
# text format
#
#   expr   := term (('+'|'-') term)*       (leading sign allowed)
#   term   := coeff ('*' factor)* | factor ('*' factor)*
#   factor := var ('^' nat)?
#   coeff  := int ('/' posint)?

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^]))")


def _tokenize(text: str):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            # locate first non-space character for the error position
            k = pos
            while k < n and text[k].isspace():
                k += 1
            raise PolySyntaxError(f"unexpected character {text[k]!r}", text, k)
        kind = mt.lastgroup
        start = mt.start(kind)
        out.append((kind, mt.group(kind), start))
        pos = mt.end()
    out.append(("end", "", len(text)))
    return out


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse ``text`` into a polynomial over ``vars``."""
    vars = tuple(vars)
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def nat():
        kind, val, pos = take()
        if kind != "num":
            raise PolySyntaxError("expected integer", text, pos)
        return int(val)

    def factor():
        kind, val, pos = take()
        if kind != "name":
            raise PolySyntaxError("expected variable", text, pos)
        if val not in vars:
            raise PolySyntaxError(f"unknown variable {val!r}", text, pos)
        e = 1
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            e = nat()
        return Poly.var(val, vars) ** e

    def term():
        kind, val, pos = peek()
        if kind == "num":
            take()
            c = Fraction(int(val))
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                den_pos = peek()[2]
                den = nat()
                if den == 0:
                    raise PolySyntaxError("zero denominator", text, den_pos)
                c = c / den
            acc = Poly.const(c, vars)
        elif kind == "name":
            acc = factor()
        else:
            raise PolySyntaxError("expected coefficient or variable", text, pos)
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            acc = acc * factor()
        return acc

    if peek()[0] == "end":
        raise PolySyntaxError("empty expression", text, 0)
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    result = term() * sign
    while True:
        kind, val, pos = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            take()
            t = term()
            result = result + t if val == "+" else result - t
        else:
            raise PolySyntaxError(f"unexpected token {val!r}", text, pos)
    return result


def _fmt_coeff(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for idx, (m, c) in enumerate(p.terms()):
        neg = c < 0
        a = -c if neg else c
        factors = []
        for name, e in zip(p.vars, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if not factors:
            body = _fmt_coeff(a)
        elif a == 1:
            body = "*".join(factors)
        else:
            body = _fmt_coeff(a) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_format(p: Poly) -> str:
    return format_poly(p)


def as_poly(value, vars: Sequence[str]) -> Poly:
    """Coerce an int, Fraction, string or Poly into a Poly over ``vars``."""
    if isinstance(value, Poly):
        if value.vars != tuple(vars):
            raise RingMismatch(f"variable mismatch: {value.vars} vs {tuple(vars)}")
        return value
    if isinstance(value, str):
        return parse_poly(value, vars)
    return Poly.const(value, vars)


def polys(texts: Iterable[str], vars: Sequence[str]) -> list[Poly]:
    return [parse_poly(t, vars) for t in texts]
