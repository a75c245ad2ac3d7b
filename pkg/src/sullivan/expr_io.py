"""Parsing and canonical printing of elements and model documents.

Expression grammar::

    expr  := term (("+" | "-") term)*
    term  := unary ("*" unary)*
    unary := ("+" | "-") unary | power
    power := atom ("^" INT)?
    atom  := INT ["/" INT] | NAME | "(" expr ")"

Multiplication is always explicit.  Model documents are stored as JSON, or
in a line-oriented text form (see :func:`document_to_text`).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from sullivan.algebra import Element, Generator, GradedAlgebra


class ParseError(ValueError):
    """Syntax or semantic error in an expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int | None = None, kind: str = "syntax"):
        self.position = position
        self.kind = kind
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class ModelValidationError(ValueError):
    pass


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(src: str):
    pos = 0
    tokens = []
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if not m:
            start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(f"unexpected character {src[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src: str, algebra: GradedAlgebra):
        self.src = src
        self.alg = algebra
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Element:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return e

    def expr(self):
        e = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                e = e + rhs if val == "+" else e - rhs
            else:
                return e

    def term(self):
        e = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                e = e * self.unary()
            else:
                return e

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            e = self.unary()
            return -e if val == "-" else e
        return self.power()

    def power(self):
        start = self.peek()
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or "/" in val:
                raise ParseError("exponent must be a positive integer literal", pos)
            k = int(val)
            if k <= 0:
                raise ParseError("exponent must be a positive integer", pos, kind="semantic")
            if start[0] == "name" and k > 1 and self.alg.generator(start[1]).is_odd:
                raise ParseError(
                    f"odd generator {start[1]} raised to power {k} (write 0 for the zero element)",
                    start[2],
                    kind="semantic",
                )
            return base**k
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            if "/" in val:
                p, q = (int(s) for s in val.split("/"))
                if q == 0:
                    raise ParseError("zero denominator", pos, kind="semantic")
                return self.alg.scalar(Fraction(p, q))
            return self.alg.scalar(int(val))
        if kind == "name":
            if val not in self.alg:
                raise ParseError(f"unknown generator {val!r}", pos, kind="unknown generator")
            return self.alg.gen(val)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(f"unexpected token {val or 'end of input'!r}", pos)


def _algebra_of(generators) -> GradedAlgebra:
    if isinstance(generators, GradedAlgebra):
        return generators
    return GradedAlgebra(generators)


def parse_element(src: str, generators) -> Element:
    """Parse ``src`` into a canonical element over ``generators``.

    ``generators`` is a :class:`GradedAlgebra` or an iterable of
    :class:`Generator` / ``(name, degree)`` pairs.
    """
    return _Parser(src, _algebra_of(generators)).parse()


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(algebra: GradedAlgebra, m) -> str:
    parts = []
    for g, e in algebra.mono_factors(m):
        parts.append(g.name if e == 1 else f"{g.name}^{e}")
    return "*".join(parts)


def print_element(e: Element) -> str:
    """Canonical text: terms by ascending degree, then larger leading exponents first."""
    if not e.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(e.sorted_terms()):
        mono = format_monomial(e.algebra, m)
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if c < 0 else body)
        else:
            out.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(out)


# -- model documents ------------------------------------------------------------


@dataclass
class ModelDocument:
    generators: list[tuple[str, int]]
    differentials: dict[str, str]
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "generators": [[n, d] for n, d in self.generators],
            "differentials": dict(self.differentials),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ModelDocument:
        if not isinstance(data, dict):
            raise ModelValidationError("model document must be a JSON object")
        try:
            gens = [(str(n), int(d)) for n, d in data["generators"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelValidationError(f"malformed generator list: {exc}") from None
        diffs = data.get("differentials", {})
        if not isinstance(diffs, dict):
            raise ModelValidationError("differentials must be an object mapping names to expressions")
        meta = data.get("metadata", {}) or {}
        return cls(gens, {str(k): str(v) for k, v in diffs.items()}, dict(meta))


def save_model(c, metadata: dict | None = None) -> ModelDocument:
    """Document with canonical differential strings; zero differentials are omitted."""
    meta = dict(getattr(c, "metadata", {}) or {})
    if metadata:
        meta.update(metadata)
    gens = [(g.name, g.degree) for g in c.algebra.generators]
    diffs = {g.name: print_element(c.d(g.name)) for g in c.algebra.generators if c.d(g.name)}
    return ModelDocument(gens, diffs, meta)


def load_model(doc: ModelDocument):
    """Build and validate a :class:`~sullivan.cdga.FreeCdga` from a document."""
    from sullivan.cdga import DifferentialError, FreeCdga

    try:
        gens = [Generator(n, d) for n, d in doc.generators]
        alg = GradedAlgebra(gens)
    except ValueError as exc:
        raise ModelValidationError(str(exc)) from None
    differential = {}
    for name, src in doc.differentials.items():
        if name not in alg:
            raise ModelValidationError(f"differential given for unknown generator {name!r}")
        try:
            img = parse_element(src, alg)
        except ParseError as exc:
            raise ModelValidationError(f"d({name}): {exc}") from None
        want = alg.generator(name).degree + 1
        if not img.is_homogeneous(want):
            got = sorted(img.degrees())
            raise ModelValidationError(
                f"d({name}) must be homogeneous of degree {want}, found degree(s) {got}"
            )
        differential[name] = img
    try:
        return FreeCdga(alg, differential, metadata=dict(doc.metadata))
    except DifferentialError as exc:
        raise ModelValidationError(str(exc)) from None


def document_to_json(doc: ModelDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, sort_keys=False) + "\n"


def document_from_json(text: str) -> ModelDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelValidationError(f"invalid JSON: {exc}") from None
    return ModelDocument.from_dict(data)


def document_to_text(doc: ModelDocument) -> str:
    """Line format: ``# key: value`` metadata, one ``generators:`` line, ``d(x) = ...`` lines."""
    lines = [f"# {k}: {v}" for k, v in doc.metadata.items()]
    lines.append("generators: " + " ".join(f"{n}:{d}" for n, d in doc.generators))
    for n, _ in doc.generators:
        if n in doc.differentials:
            lines.append(f"d({n}) = {doc.differentials[n]}")
    return "\n".join(lines) + "\n"


_D_LINE = re.compile(r"d\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)\s*=\s*(.*)\Z")


def document_from_text(text: str) -> ModelDocument:
    gens = None
    diffs: dict[str, str] = {}
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, val = line[1:].partition(":")
            if sep:
                val = val.strip()
                meta[key.strip()] = int(val) if re.fullmatch(r"-?\d+", val) else val
            continue
        if line.startswith("generators:"):
            gens = []
            for item in line[len("generators:"):].split():
                name, sep, deg = item.partition(":")
                if not sep or not deg.isdigit():
                    raise ModelValidationError(f"line {lineno}: bad generator entry {item!r}")
                gens.append((name, int(deg)))
            continue
        m = _D_LINE.match(line)
        if not m:
            raise ModelValidationError(f"line {lineno}: cannot parse {raw!r}")
        if m.group(1) in diffs:
            raise ModelValidationError(f"line {lineno}: duplicate differential for {m.group(1)}")
        diffs[m.group(1)] = m.group(2).strip()
    if gens is None:
        raise ModelValidationError("missing 'generators:' line")
    return ModelDocument(gens, diffs, meta)


def read_document(path) -> ModelDocument:
    """Read a model file, JSON or text form (detected from the content)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return document_from_json(text)
    return document_from_text(text)


def write_document(doc: ModelDocument, path, fmt: str = "json"):
    text = document_to_json(doc) if fmt in ("json", "structured") else document_to_text(doc)
    Path(path).write_text(text)


def parse_elements(sources: Iterable[str], generators) -> list[Element]:
    alg = _algebra_of(generators)
    return [parse_element(s, alg) for s in sources]
