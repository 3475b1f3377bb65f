"""Line-oriented problem files.

::

    # comment
    vars x y
    use other.prob                 # load vars and blocks from another file first
    matrix A 2                     # symmetric; n rows follow
    x 1
    1 y
    general U 2                    # arbitrary square matrix
    scalar s x^3                   # embedded as s * I_n
    generators A s                 # optional; default: every block not a target
    targets F
    sampler grid -3 3 20
    sampler random 500 7
    cert c1 psd target=F k=2
    part beta
    term frame=[[1,0],[0,0]] core=g0 factors=[(g0, [1, 0])]
    part c
    iterm left=I gen=g0 right=[[x,0],[0,x]]
    end

Row entries are separated by whitespace, or by commas when the row
contains one (so that entries may contain spaces).  Matrix literals are
``[[..],[..]]``, ``I``, ``0``, or the name of a block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .certificates import CertTerm, Certificate, GeneratorSet, IdealTerm, ScalarFactor
from .matpoly import MatPoly, SymMatPoly
from .polyring import PolySyntaxError, parse_poly
from .semidef import SampleSpec

DEFAULT_SEED = 1729
CERT_KINDS = ("pd", "psd", "null", "realnull", "emptiness")
CERT_PARTS = {"pd": ("beta", "c"), "psd": ("beta", "c"), "null": ("c",),
              "realnull": ("sos",), "emptiness": ("c",)}


class ProblemError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None, path=None):
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"{line}:"
            if col is not None:
                loc += f"{col}:"
        super().__init__(f"{loc} {message}" if loc else message)
        self.line = line
        self.col = col


@dataclass
class CertBlock:
    name: str
    kind: str
    target: str | None
    power: int = 1
    parts: dict = field(default_factory=dict)  # part name -> list[CertTerm]
    ideal_terms: list = field(default_factory=list)
    line: int = 0


@dataclass
class ProblemFile:
    vars: tuple = ()
    matrices: dict = field(default_factory=dict)   # name -> MatPoly (symmetric or general)
    scalars: dict = field(default_factory=dict)    # name -> Poly
    order: list = field(default_factory=list)      # declaration order of block names
    generator_names: list | None = None
    target_names: list = field(default_factory=list)
    certs: list = field(default_factory=list)
    grid: tuple | None = None
    random: tuple | None = None
    path: str | None = None

    @property
    def size(self) -> int:
        sizes = {m.n for m in self.matrices.values()}
        return sizes.pop() if sizes else 1

    def block(self, name: str) -> MatPoly:
        if name in self.matrices:
            return self.matrices[name]
        if name in self.scalars:
            return SymMatPoly._raw(MatPoly.scalar(self.scalars[name], self.size, self.vars).rows, self.vars)
        raise KeyError(name)

    def generators(self) -> list[str]:
        if self.generator_names is not None:
            return list(self.generator_names)
        excluded = set(self.target_names) | {c.target for c in self.certs if c.target}
        return [n for n in self.order if n not in excluded and isinstance(self.block(n), SymMatPoly)]

    def generator_set(self) -> GeneratorSet:
        return GeneratorSet(self.size, tuple(self.block(n).as_sym() for n in self.generators()), self.vars)

    def targets(self) -> list[str]:
        names = list(self.target_names)
        for c in self.certs:
            if c.target and c.target not in names:
                names.append(c.target)
        return names

    def sampler(self, seed=None, **overrides) -> SampleSpec:
        spec = dict(lo=Fraction(-3), hi=Fraction(3), grid_steps=0, random_count=0, seed=DEFAULT_SEED)
        if self.grid:
            spec.update(lo=self.grid[0], hi=self.grid[1], grid_steps=self.grid[2])
        if self.random:
            spec.update(random_count=self.random[0], seed=self.random[1])
        if not self.grid and not self.random:
            spec.update(grid_steps=10, random_count=500)
        spec.update({k: v for k, v in overrides.items() if v is not None})
        if seed is not None:
            spec["seed"] = seed
        return SampleSpec(**spec)

    def certificate(self, block: CertBlock, part: str) -> Certificate:
        return Certificate(self.generator_set(), tuple(block.parts.get(part, ())))


# ---------------------------------------------------------------------------
# bracket-aware helpers


def split_top(text: str, sep: str | None = None) -> list[tuple[str, int]]:
    """Split at bracket depth 0 on ``sep`` (default: runs of whitespace).

    Returns ``(piece, offset)`` pairs; with an explicit separator pieces are
    stripped and empty pieces are kept.
    """
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced bracket at offset {i}")
        elif depth == 0 and (ch.isspace() if sep is None else ch == sep):
            out.append((text[start:i], start))
            start = i + 1
    if depth != 0:
        raise ValueError("unbalanced bracket")
    out.append((text[start:], start))
    res = []
    for piece, off in out:
        stripped = piece.strip()
        if sep is None and not stripped:
            continue
        res.append((stripped, off + len(piece) - len(piece.lstrip())))
    return res


class _Parser:
    def __init__(self, path=None, base_dir: Path | None = None):
        self.path = path
        self.base_dir = base_dir or Path(".")
        self.prob = ProblemFile(path=str(path) if path else None)

    def error(self, msg, line, col=None):
        raise ProblemError(msg, line, col, self.path)

    def poly(self, text, line, col):
        try:
            return parse_poly(text, self.prob.vars)
        except PolySyntaxError as e:
            self.error(str(e), line, col + e.pos + 1)

    def matrix_literal(self, text, line, col, symmetric=False) -> MatPoly:
        text = text.strip()
        n = self.prob.size
        V = self.prob.vars
        if text == "I":
            return MatPoly.identity(n, V)
        if text == "0":
            return MatPoly.zeros(n, V)
        if text in self.prob.matrices or text in self.prob.scalars:
            return self.prob.block(text)
        if not (text.startswith("[") and text.endswith("]")):
            self.error(f"expected matrix literal, got {text!r}", line, col)
        rows = []
        for rtext, roff in split_top(text[1:-1], ","):
            if not (rtext.startswith("[") and rtext.endswith("]")):
                self.error("expected matrix row '[...]'", line, col + roff + 1)
            row = [self.poly(e, line, col + roff + 1 + eoff + 1) for e, eoff in split_top(rtext[1:-1], ",")]
            rows.append(row)
        try:
            return SymMatPoly(rows, V) if symmetric else MatPoly(rows, V)
        except ValueError as e:
            self.error(str(e), line, col)

    def vector_literal(self, text, line, col) -> tuple:
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            self.error("expected vector literal '[...]'", line, col)
        return tuple(self.poly(e, line, col + off + 1) for e, off in split_top(text[1:-1], ","))

    def gen_ref(self, text, line, col) -> int:
        if not (text.startswith("g") and text[1:].isdigit()):
            self.error(f"expected generator reference g<k>, got {text!r}", line, col)
        return int(text[1:])

    def keyvals(self, text, line, col) -> dict:
        out = {}
        try:
            pieces = split_top(text)
        except ValueError as e:
            self.error(str(e), line, col)
        for piece, off in pieces:
            if "=" not in piece:
                self.error(f"expected key=value, got {piece!r}", line, col + off)
            k, v = piece.split("=", 1)
            out[k] = (v, col + off + len(k) + 1)
        return out

    def term(self, text, line, col) -> CertTerm:
        kv = self.keyvals(text, line, col)
        unknown = set(kv) - {"frame", "core", "factors"}
        if unknown:
            self.error(f"unknown term field(s) {sorted(unknown)}", line, col)
        if "frame" in kv:
            frame = self.matrix_literal(kv["frame"][0], line, kv["frame"][1])
        else:
            frame = MatPoly.identity(self.prob.size, self.prob.vars)
        core = None
        if "core" in kv:
            ctext, ccol = kv["core"]
            core = None if ctext == "I" else self.gen_ref(ctext, line, ccol)
        factors = []
        if "factors" in kv:
            ftext, fcol = kv["factors"]
            if not (ftext.startswith("[") and ftext.endswith("]")):
                self.error("factors must be a list '[(g<k>, [..]), ...]'", line, fcol)
            for item, off in split_top(ftext[1:-1], ","):
                if not item:
                    continue
                if not (item.startswith("(") and item.endswith(")")):
                    self.error("factor must be '(g<k>, [..])'", line, fcol + off)
                parts = split_top(item[1:-1], ",")
                if len(parts) != 2:
                    self.error("factor must be '(g<k>, [..])'", line, fcol + off)
                g = self.gen_ref(parts[0][0], line, fcol + off)
                v = self.vector_literal(parts[1][0], line, fcol + off + 1 + parts[1][1])
                factors.append(ScalarFactor(g, v))
        return CertTerm(frame, core, tuple(factors))

    def iterm(self, text, line, col) -> IdealTerm:
        kv = self.keyvals(text, line, col)
        for key in ("left", "gen", "right"):
            if key not in kv:
                self.error(f"iterm needs {key}=", line, col)
        left = self.matrix_literal(kv["left"][0], line, kv["left"][1])
        right = self.matrix_literal(kv["right"][0], line, kv["right"][1])
        return IdealTerm(left, self.gen_ref(kv["gen"][0], line, kv["gen"][1]), right)

    def parse(self, text: str) -> ProblemFile:
        lines = text.splitlines()
        prob = self.prob
        i = 0
        cert: CertBlock | None = None
        part = None

        def strip_comment(s):
            k = s.find("#")
            return s if k < 0 else s[:k]

        while i < len(lines):
            lineno = i + 1
            raw = strip_comment(lines[i])
            i += 1
            if not raw.strip():
                continue
            indent = len(raw) - len(raw.lstrip())
            words = raw.split()
            kw = words[0]
            rest_col = indent + len(kw) + 1
            rest = raw[indent + len(kw):]
            rest_off = rest_col + (len(rest) - len(rest.lstrip())) - 1
            rest = rest.strip()

            if cert is not None:
                if kw == "end":
                    prob.certs.append(cert)
                    cert = None
                elif kw == "part":
                    if len(words) != 2 or words[1] not in CERT_PARTS[cert.kind]:
                        self.error(f"part must be one of {CERT_PARTS[cert.kind]} for kind {cert.kind}", lineno)
                    part = words[1]
                    cert.parts.setdefault(part, [])
                elif kw == "term":
                    if part is None:
                        self.error("term outside a 'part' section", lineno)
                    cert.parts[part].append(self.term(rest, lineno, rest_off + 1))
                elif kw == "iterm":
                    if cert.kind != "realnull":
                        self.error("iterm only allowed in realnull certificates", lineno)
                    cert.ideal_terms.append(self.iterm(rest, lineno, rest_off + 1))
                else:
                    self.error(f"unexpected {kw!r} inside cert block", lineno, indent + 1)
                continue

            if kw == "vars":
                if prob.matrices or prob.scalars:
                    self.error("vars must precede all blocks", lineno)
                names = tuple(words[1:])
                if len(set(names)) != len(names):
                    self.error("duplicate variable name", lineno)
                if prob.vars and prob.vars != names:
                    self.error(f"vars {names} conflict with included {prob.vars}", lineno)
                prob.vars = names
            elif kw == "use":
                if len(words) != 2:
                    self.error("use needs one path", lineno)
                other = load_problem(self.base_dir / words[1])
                if prob.vars and other.vars != prob.vars:
                    self.error("included file declares different vars", lineno)
                prob.vars = other.vars
                for name in other.order:
                    self._define(name, other.matrices.get(name), other.scalars.get(name), lineno)
                if other.generator_names is not None:
                    prob.generator_names = list(other.generator_names)
                prob.target_names += [t for t in other.target_names if t not in prob.target_names]
            elif kw in ("matrix", "general"):
                if len(words) != 3 or not words[2].isdigit() or int(words[2]) < 1:
                    self.error(f"expected '{kw} <name> <n>'", lineno)
                name, n = words[1], int(words[2])
                rows = []
                row_lines = []
                for r in range(n):
                    if i >= len(lines):
                        self.error(f"matrix {name}: expected {n} rows", lineno + r + 1)
                    rline = strip_comment(lines[i])
                    rno = i + 1
                    i += 1
                    if "," in rline:
                        pieces = [(p, off) for p, off in split_top(rline, ",")]
                    else:
                        pieces = split_top(rline)
                    if len(pieces) != n:
                        self.error(f"matrix {name}: row {r + 1} has {len(pieces)} entries, expected {n}", rno)
                    rows.append([self.poly(p, rno, off + 1) for p, off in pieces])
                    row_lines.append(rno)
                if kw == "matrix":
                    for r in range(n):
                        for s in range(r):
                            if rows[r][s] != rows[s][r]:
                                self.error(f"matrix {name} is not symmetric: entry ({r + 1},{s + 1}) = "
                                           f"{rows[r][s]} but ({s + 1},{r + 1}) = {rows[s][r]}", row_lines[r])
                try:
                    m = SymMatPoly(rows, prob.vars) if kw == "matrix" else MatPoly(rows, prob.vars)
                except ValueError as e:
                    self.error(f"matrix {name}: {e}", lineno)
                self._define(name, m, None, lineno)
            elif kw == "scalar":
                if len(words) < 3:
                    self.error("expected 'scalar <name> <expr>'", lineno)
                name = words[1]
                expr_start = raw.index(name, indent + len(kw)) + len(name)
                expr = raw[expr_start:]
                self._define(name, None, self.poly(expr, lineno, expr_start), lineno)
            elif kw == "generators":
                prob.generator_names = words[1:]
            elif kw == "targets":
                prob.target_names += [w for w in words[1:] if w not in prob.target_names]
            elif kw == "sampler":
                self._sampler(words, lineno)
            elif kw == "cert":
                cert = self._cert_header(words, lineno)
                part = None
            else:
                self.error(f"unknown keyword {kw!r}", lineno, indent + 1)

        if cert is not None:
            self.error(f"cert block {cert.name!r} not closed with 'end'", cert.line)
        self._resolve()
        return prob

    def _define(self, name, m, s, lineno):
        prob = self.prob
        if name in prob.matrices or name in prob.scalars:
            self.error(f"duplicate block name {name!r}", lineno)
        if m is not None:
            if prob.matrices and m.n != prob.size:
                self.error(f"matrix {name} has size {m.n}, file uses size {prob.size}", lineno)
            prob.matrices[name] = m
        else:
            prob.scalars[name] = s
        prob.order.append(name)

    def _sampler(self, words, lineno):
        try:
            if len(words) == 5 and words[1] == "grid":
                self.prob.grid = (Fraction(words[2]), Fraction(words[3]), int(words[4]))
                if self.prob.grid[0] > self.prob.grid[1] or self.prob.grid[2] < 1:
                    raise ValueError
                return
            if len(words) == 4 and words[1] == "random":
                self.prob.random = (int(words[2]), int(words[3]))
                return
        except ValueError:
            pass
        self.error("expected 'sampler grid <lo> <hi> <steps>' or 'sampler random <count> <seed>'", lineno)

    def _cert_header(self, words, lineno) -> CertBlock:
        if len(words) < 3 or words[2] not in CERT_KINDS:
            self.error(f"expected 'cert <name> <kind> ...' with kind in {CERT_KINDS}", lineno)
        block = CertBlock(words[1], words[2], None, line=lineno)
        for w in words[3:]:
            if "=" not in w:
                self.error(f"expected key=value in cert header, got {w!r}", lineno)
            k, v = w.split("=", 1)
            if k == "target":
                block.target = v
            elif k in ("k", "l"):
                if not v.isdigit() or int(v) < 1:
                    self.error(f"{k} must be a positive integer", lineno)
                block.power = int(v)
            else:
                self.error(f"unknown cert header field {k!r}", lineno)
        if block.kind != "emptiness" and block.target is None:
            self.error(f"{block.kind} certificate needs target=<name>", lineno)
        return block

    def _resolve(self):
        prob = self.prob
        names = set(prob.matrices) | set(prob.scalars)
        for n in (prob.generator_names or []) + prob.target_names:
            if n not in names:
                self.error(f"unresolved block reference {n!r}", None)
        for c in prob.certs:
            if c.target is not None and c.target not in names:
                self.error(f"cert {c.name}: unresolved target {c.target!r}", c.line)
        gens = prob.generators()
        for n in gens:
            if not isinstance(prob.block(n), SymMatPoly):
                self.error(f"generator {n!r} is not symmetric", None)
        ng = len(gens)
        for c in prob.certs:
            refs = [t.core for ts in c.parts.values() for t in ts if t.core is not None]
            refs += [f.gen_index for ts in c.parts.values() for t in ts for f in t.factors]
            refs += [it.gen_index for it in c.ideal_terms]
            for r in refs:
                if r >= ng:
                    self.error(f"cert {c.name}: generator reference g{r} unresolved ({ng} generators)", c.line)


def parse_problem(text: str, path=None, base_dir=None) -> ProblemFile:
    return _Parser(path, Path(base_dir) if base_dir else None).parse(text)


def load_problem(path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ProblemError(f"cannot read {path}: {e.strerror}") from e
    return _Parser(path, path.parent).parse(text)
