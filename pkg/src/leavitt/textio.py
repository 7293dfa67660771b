"""The digraph text format and the canonical element grammar.

Graph documents are line oriented::

    # digraph-format 1
    # name: toeplitz
    vertices: v w
    arrow e: v -> v
    arrow f: v -> w

Comments start with ``#``; the recognized directives ``# digraph-format``,
``# name:`` and ``# tag:`` carry metadata, everything else after ``#`` is
ignored.  Parallel arrows are separate ``arrow`` lines.  Serialization is
canonical (sorted, LF line endings), so parse then serialize is idempotent
and canonical documents round-trip byte for byte.

Elements render as ``coefficient·factors`` joined by `` + ``, factors
dotted: ``3/2·e1.e2.(c1.c2)^-3.f1*``.  A bare vertex name stands for the
length-0 paths; ``(...)^n`` is a cycle power; a trailing ``*`` marks a dual
arrow.  Factor names are matched longest-first against the graph's names,
so names containing dots (reduction-made arrows) parse correctly.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .digraph import NAME_PATTERN, Arrow, Digraph, GraphError
from .lpalgebra import (
    ARROW,
    DUAL,
    VERTEX,
    AlgebraElement,
    LeavittAlgebra,
    Letter,
    NormalTerm,
)

FORMAT_VERSION = 1


class ParseError(Exception):
    """A syntax or validation error with a position: str(err) names both."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class GraphDocument:
    graph: Digraph
    name: Optional[str] = None
    tag: Optional[str] = None
    version: int = FORMAT_VERSION


_ARROW_LINE = re.compile(r"arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")


def parse_document(text: str) -> GraphDocument:
    lines = text.split("\n")
    name: Optional[str] = None
    tag: Optional[str] = None
    version = FORMAT_VERSION
    vertex_entries: list[tuple[str, int, int]] = []
    arrow_entries: list[tuple[str, str, str, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            body = line.lstrip()[1:].strip()
            if body.startswith("digraph-format"):
                try:
                    version = int(body.split()[1])
                except (IndexError, ValueError):
                    raise ParseError("malformed format directive", lineno)
                if version != FORMAT_VERSION:
                    raise ParseError(f"unsupported format version {version}", lineno)
            elif body.startswith("name:"):
                name = body[len("name:"):].strip() or None
            elif body.startswith("tag:"):
                tag = body[len("tag:"):].strip() or None
            continue
        stripped = line.strip()
        if stripped.startswith("vertices:"):
            rest = stripped[len("vertices:"):]
            names = rest.split()
            if not names:
                raise ParseError("empty vertex list", lineno, line.find("vertices:") + 1)
            for v in names:
                col = raw.find(v) + 1
                if not NAME_PATTERN.match(v):
                    raise ParseError(f"invalid vertex name {v!r}", lineno, col)
                vertex_entries.append((v, lineno, col))
        elif stripped.startswith("arrow"):
            m = _ARROW_LINE.match(stripped)
            if not m:
                raise ParseError(
                    "malformed arrow line (expected `arrow NAME: SRC -> TGT`)", lineno
                )
            aname, src, tgt = m.groups()
            for part in (aname, src, tgt):
                if not NAME_PATTERN.match(part):
                    raise ParseError(
                        f"invalid name {part!r}", lineno, raw.find(part) + 1
                    )
            arrow_entries.append((aname, src, tgt, lineno))
        else:
            raise ParseError(f"unrecognized line {stripped!r}", lineno)
    if not vertex_entries:
        raise ParseError("no vertices declared", max(1, len(lines)))
    seen: dict[str, int] = {}
    for v, lineno, col in vertex_entries:
        if v in seen:
            raise ParseError(
                f"duplicate vertex {v!r} (first declared on line {seen[v]})",
                lineno,
                col,
            )
        seen[v] = lineno
    arrow_seen: dict[str, int] = {}
    arrows = []
    for aname, src, tgt, lineno in arrow_entries:
        if aname in arrow_seen:
            raise ParseError(
                f"duplicate arrow {aname!r} (first declared on line {arrow_seen[aname]})",
                lineno,
            )
        arrow_seen[aname] = lineno
        for endpoint in (src, tgt):
            if endpoint not in seen:
                raise ParseError(f"unknown vertex {endpoint!r}", lineno)
        arrows.append(Arrow(aname, src, tgt))
    return GraphDocument(Digraph(list(seen), arrows), name=name, tag=tag, version=version)


def parse_graph(text: str) -> Digraph:
    return parse_document(text).graph


def serialize_document(doc: GraphDocument) -> str:
    out = [f"# digraph-format {doc.version}"]
    if doc.name:
        out.append(f"# name: {doc.name}")
    if doc.tag:
        out.append(f"# tag: {doc.tag}")
    g = doc.graph
    out.append("vertices: " + " ".join(g.vertices))
    for a in g.arrows:
        out.append(f"arrow {a.name}: {a.source} -> {a.target}")
    return "\n".join(out) + "\n"


def serialize_graph(g: Digraph, name: Optional[str] = None) -> str:
    return serialize_document(GraphDocument(g, name=name))


# -- elements ------------------------------------------------------------------


def render_term(term: NormalTerm) -> str:
    parts = list(term.left.names())
    if term.cycle is not None and term.power != 0:
        parts.append(f"({'.'.join(a.name for a in term.cycle.arrows)})^{term.power}")
    parts.extend(a.name + "*" for a in reversed(term.right.arrows))
    return ".".join(parts) if parts else term.tip


def render_element(el: AlgebraElement) -> str:
    if el.is_zero():
        return "0"
    return " + ".join(f"{c}·{render_term(t)}" for t, c in el.items())


class _FactorScanner:
    """Greedy longest-name-first tokenizer for dotted factor strings."""

    def __init__(self, alg: LeavittAlgebra, text: str):
        self.alg = alg
        self.text = text
        self.pos = 0
        names = set(alg.graph.vertices) | {a.name for a in alg.graph.arrows}
        self.names = sorted(names, key=len, reverse=True)

    def fail(self, message: str):
        raise GraphError(f"cannot parse element at ...{self.text[self.pos:]!r}: {message}")

    def match_name(self) -> str:
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return name
        self.fail("expected a vertex or arrow name")

    def letters(self) -> list[Letter]:
        out: list[Letter] = []
        while True:
            if self.pos < len(self.text) and self.text[self.pos] == "(":
                out.extend(self.cycle_power())
            else:
                name = self.match_name()
                if self.pos < len(self.text) and self.text[self.pos] == "*":
                    self.pos += 1
                    if not self.alg.graph.has_arrow(name):
                        self.fail(f"{name!r} is not an arrow")
                    out.append(Letter(DUAL, name))
                elif self.alg.graph.has_arrow(name):
                    out.append(Letter(ARROW, name))
                else:
                    out.append(Letter(VERTEX, name))
            if self.pos < len(self.text) and self.text[self.pos] == ".":
                self.pos += 1
                continue
            if self.pos != len(self.text):
                self.fail("trailing characters")
            return out

    def cycle_power(self) -> list[Letter]:
        close = self.text.find(")^", self.pos)
        if close < 0:
            self.fail("unterminated cycle power")
        inner = self.text[self.pos + 1 : close]
        rest = self.text[close + 2 :]
        m = re.match(r"-?\d+", rest)
        if not m:
            self.fail("missing cycle exponent")
        power = int(m.group(0))
        self.pos = close + 2 + len(m.group(0))
        arrow_names: list[str] = []
        i = 0
        while i < len(inner):
            hit = next(
                (
                    nm
                    for nm in self.names
                    if inner.startswith(nm, i) and self.alg.graph.has_arrow(nm)
                ),
                None,
            )
            if hit is None:
                self.fail(f"bad cycle spelling {inner!r}")
            arrow_names.append(hit)
            i += len(hit)
            if i < len(inner):
                if inner[i] != ".":
                    self.fail(f"bad cycle spelling {inner!r}")
                i += 1
        if power == 0:
            self.fail("cycle power 0 is spelled as the bare vertex")
        reps = arrow_names * abs(power)
        if power > 0:
            return [Letter(ARROW, nm) for nm in reps]
        return [Letter(DUAL, nm) for nm in reversed(reps)]


def parse_element(alg: LeavittAlgebra, text: str) -> AlgebraElement:
    """Parse and normalize an element; exact inverse of render_element on
    canonical output whenever no name spells a dotted join of other names."""
    text = text.strip()
    if text == "0":
        return alg.zero()
    total = alg.zero()
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if "·" in chunk:
            coeff_text, factors = chunk.split("·", 1)
            try:
                coeff = Fraction(coeff_text)
            except (ValueError, ZeroDivisionError):
                raise GraphError(f"bad coefficient {coeff_text!r}") from None
        else:
            coeff, factors = Fraction(1), chunk
        letters = _FactorScanner(alg, factors).letters()
        total = total + alg.normal_form(tuple(letters)).scale(coeff)
    return total
