"""Exact symbolic arithmetic in the Leavitt path algebra of a digraph.

Only graphs whose cycles are pairwise disjoint are supported: exactly then
every element rewrites to a unique finite combination of canonical basis
terms p q* (tip at a sink) and p C^n q* (tip at a cycle base, p and q not
ending with the cycle).  Coefficients are exact rationals throughout.

The rewriting engine works in two stages.  A word over vertices, arrows
and dual arrows first collapses left to right into a single pair p q*
(dual-arrow/arrow adjacencies vanish or contract, vertices are absorbed).
The pair is then pushed to basis form: tips that are neither sinks nor
cycle bases expand along all outgoing arrows until each branch lands on
one, and powers C^a (C*)^b contract through the cached expansion
C C* = v_C - sum of d d* over the exit paths d of C.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Union

from .config import DEFAULT_LIMITS, Limits
from .digraph import (
    Arrow,
    Cycle,
    Digraph,
    GraphError,
    LimitExceeded,
    Path,
    enumerate_cycles,
    require_disjoint_cycles,
)

VERTEX = "vertex"
ARROW = "arrow"
DUAL = "dual"


@dataclass(frozen=True)
class Letter:
    kind: str  # vertex | arrow | dual
    name: str

    def __repr__(self) -> str:
        if self.kind == DUAL:
            return f"{self.name}*"
        return self.name


Word = tuple[Letter, ...]


@dataclass(frozen=True)
class NormalTerm:
    """One canonical basis element: p q* over a sink, or p C^n q*."""

    left: Path
    cycle: Optional[Cycle]
    power: int
    right: Path

    @property
    def tip(self) -> str:
        return self.left.target

    @property
    def is_sink_term(self) -> bool:
        return self.cycle is None

    @property
    def letter_length(self) -> int:
        extra = abs(self.power) * len(self.cycle) if self.cycle else 0
        return len(self.left) + len(self.right) + extra

    @property
    def grade(self) -> int:
        shift = self.power * len(self.cycle) if self.cycle else 0
        return len(self.left) - len(self.right) + shift

    def star(self) -> "NormalTerm":
        return NormalTerm(self.right, self.cycle, -self.power, self.left)

    def sort_key(self) -> tuple:
        return (
            self.tip,
            0 if self.cycle is None else 1,
            self.letter_length,
            self.left.names(),
            self.power,
            self.right.names(),
        )

    def __repr__(self) -> str:
        mid = ""
        if self.cycle is not None and self.power != 0:
            mid = f"({'.'.join(a.name for a in self.cycle.arrows)})^{self.power}"
        parts = list(self.left.names()) + ([mid] if mid else []) + [
            f"{a.name}*" for a in reversed(self.right.arrows)
        ]
        return ".".join(parts) if parts else self.tip


def grade(term: NormalTerm) -> int:
    return term.grade


class AlgebraElement:
    """A finite rational combination of normal terms, always in basis form."""

    __slots__ = ("algebra", "_terms")

    def __init__(self, algebra: "LeavittAlgebra", terms: dict[NormalTerm, Fraction]):
        self.algebra = algebra
        self._terms = {t: c for t, c in terms.items() if c != 0}

    def items(self) -> list[tuple[NormalTerm, Fraction]]:
        return sorted(self._terms.items(), key=lambda tc: tc[0].sort_key())

    def terms(self) -> list[NormalTerm]:
        return [t for t, _ in self.items()]

    def coefficient(self, term: NormalTerm) -> Fraction:
        return self._terms.get(term, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def grades(self) -> frozenset[int]:
        return frozenset(t.grade for t in self._terms)

    def is_homogeneous(self) -> bool:
        return len(self.grades()) <= 1

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {t.star(): c for t, c in self._terms.items()})

    def _check_peer(self, other: "AlgebraElement") -> None:
        if self.algebra.graph != other.algebra.graph:
            raise GraphError("elements live over different digraphs")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check_peer(other)
        out = dict(self._terms)
        for t, c in other._terms.items():
            out[t] = out.get(t, Fraction(0)) + c
        return AlgebraElement(self.algebra, out)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, {t: -c for t, c in self._terms.items()})

    def scale(self, scalar: Union[int, Fraction]) -> "AlgebraElement":
        s = Fraction(scalar)
        return AlgebraElement(self.algebra, {t: c * s for t, c in self._terms.items()})

    def __mul__(self, other: "AlgebraElement | int | Fraction") -> "AlgebraElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_peer(other)
        return self.algebra._product(self, other)

    def __rmul__(self, scalar: Union[int, Fraction]) -> "AlgebraElement":
        return self.scale(scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.graph == other.algebra.graph and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.algebra.graph, tuple(self.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}·{t!r}" for t, c in self.items())


class LeavittAlgebra:
    """Rewriting context for one digraph with pairwise disjoint cycles.

    Holds the write-once caches: the cycle list, per-vertex tip expansions
    and the per-cycle C C* expansions.  All public values are immutable.
    """

    def __init__(self, graph: Digraph, limits: Limits = DEFAULT_LIMITS):
        require_disjoint_cycles(graph)
        self.graph = graph
        self.limits = limits
        self.cycles = enumerate_cycles(graph, limits)
        self.cycle_at_base = {c.base_vertex: c for c in self.cycles}
        self.cycle_through = {v: c for c in self.cycles for v in c.vertices}
        self._expansions: dict[str, tuple[Path, ...]] = {}
        self._defects: dict[str, tuple[Path, ...]] = {}
        self._product_cache: dict[tuple[NormalTerm, NormalTerm], dict[NormalTerm, Fraction]] = {}

    # -- element constructors ------------------------------------------

    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def vertex(self, v: str) -> AlgebraElement:
        self.graph.require_vertex(v)
        return self.normal_form((Letter(VERTEX, v),))

    def one(self) -> AlgebraElement:
        out = self.zero()
        for v in self.graph.vertices:
            out = out + self.vertex(v)
        return out

    def arrow_element(self, name: str) -> AlgebraElement:
        self.graph.arrow(name)
        return self.normal_form((Letter(ARROW, name),))

    def dual_element(self, name: str) -> AlgebraElement:
        self.graph.arrow(name)
        return self.normal_form((Letter(DUAL, name),))

    def word(self, tokens: Iterable[Union[str, Letter]]) -> Word:
        """Build a word from tokens: "e" is an arrow (else a vertex), "e*" a dual."""
        letters: list[Letter] = []
        for tok in tokens:
            if isinstance(tok, Letter):
                letters.append(tok)
                continue
            if tok.endswith("*"):
                name = tok[:-1]
                self.graph.arrow(name)
                letters.append(Letter(DUAL, name))
            elif self.graph.has_arrow(tok):
                letters.append(Letter(ARROW, tok))
            elif self.graph.has_vertex(tok):
                letters.append(Letter(VERTEX, tok))
            else:
                raise GraphError(f"unknown generator {tok!r}")
        return tuple(letters)

    def path_element(self, p: Path) -> AlgebraElement:
        return self.normal_form(self.path_word(p))

    # -- words -----------------------------------------------------------

    def path_word(self, p: Path, dual: bool = False) -> Word:
        if not p.arrows:
            return (Letter(VERTEX, p.source),)
        if dual:
            return tuple(Letter(DUAL, a.name) for a in reversed(p.arrows))
        return tuple(Letter(ARROW, a.name) for a in p.arrows)

    def term_word(self, term: NormalTerm) -> Word:
        letters: list[Letter] = [
            Letter(ARROW, a.name) for a in term.left.arrows
        ]
        if term.cycle is not None and term.power != 0:
            reps = term.cycle.arrows * abs(term.power)
            if term.power > 0:
                letters += [Letter(ARROW, a.name) for a in reps]
            else:
                letters += [Letter(DUAL, a.name) for a in reversed(reps)]
        letters += [Letter(DUAL, a.name) for a in reversed(term.right.arrows)]
        if not letters:
            return (Letter(VERTEX, term.tip),)
        return tuple(letters)

    def _validate_word(self, word: Word) -> Word:
        if not word:
            raise GraphError("empty word")
        for letter in word:
            if letter.kind == VERTEX:
                self.graph.require_vertex(letter.name)
            elif letter.kind in (ARROW, DUAL):
                self.graph.arrow(letter.name)
            else:
                raise GraphError(f"malformed letter kind {letter.kind!r}")
        return word

    # -- normal form -----------------------------------------------------

    def normal_form(self, word: Iterable[Union[str, Letter]]) -> AlgebraElement:
        word = self.word(word)
        self._validate_word(word)
        pair = self._word_to_pair(word)
        if pair is None:
            return self.zero()
        out: dict[NormalTerm, Fraction] = {}
        budget = [0]
        self._push_pair(pair[0], pair[1], Fraction(1), out, budget)
        return AlgebraElement(self, out)

    def _word_to_pair(self, word: Word) -> Optional[tuple[Path, Path]]:
        """Collapse a word to p q* using the local relations; None means 0."""
        left: list[Arrow] = []
        stars: list[Arrow] = []
        anchor: Optional[str] = None
        end: Optional[str] = None
        for letter in word:
            if letter.kind == VERTEX:
                if end is None:
                    anchor = end = letter.name
                elif end != letter.name:
                    return None
            elif letter.kind == ARROW:
                a = self.graph.arrow(letter.name)
                if stars:
                    if stars[-1].name != a.name:
                        return None
                    stars.pop()
                    end = a.target
                else:
                    if end is None:
                        anchor = a.source
                    elif end != a.source:
                        return None
                    left.append(a)
                    end = a.target
            else:  # dual
                a = self.graph.arrow(letter.name)
                if end is None:
                    anchor = a.target
                elif end != a.target:
                    return None
                stars.append(a)
                end = a.source
        p = Path(tuple(left)) if left else Path((), anchor=anchor)
        q_arrows = tuple(reversed(stars))
        q = Path(q_arrows) if q_arrows else Path((), anchor=p.target)
        return p, q

    def _charge(self, budget: list[int]) -> None:
        budget[0] += 1
        if budget[0] > self.limits.max_terms:
            raise LimitExceeded(
                f"normalization exceeded {self.limits.max_terms} intermediate terms"
            )

    def _push_pair(
        self,
        p: Path,
        q: Path,
        coeff: Fraction,
        out: dict[NormalTerm, Fraction],
        budget: list[int],
    ) -> None:
        self._charge(budget)
        u = p.target
        if self.graph.is_sink(u):
            term = NormalTerm(p, None, 0, q)
            out[term] = out.get(term, Fraction(0)) + coeff
            return
        cyc = self.cycle_at_base.get(u)
        if cyc is None:
            for s in self._tip_expansion(u):
                self._push_pair(p + s, q + s, coeff, out, budget)
            return
        p0, a = self._strip(p, cyc)
        q0, b = self._strip(q, cyc)
        while a > 0 and b > 0:
            pa = p0 + cyc.as_path(a - 1)
            qb = q0 + cyc.as_path(b - 1)
            for d in self._cc_star_defect(cyc):
                self._push_pair(pa + d, qb + d, -coeff, out, budget)
            a -= 1
            b -= 1
        term = NormalTerm(p0, cyc, a - b, q0)
        out[term] = out.get(term, Fraction(0)) + coeff

    @staticmethod
    def _strip(p: Path, cyc: Cycle) -> tuple[Path, int]:
        arrows = p.arrows
        k = len(cyc.arrows)
        n = 0
        while len(arrows) >= k and arrows[-k:] == cyc.arrows:
            arrows = arrows[:-k]
            n += 1
        p0 = Path(arrows) if arrows else Path((), anchor=p.source)
        return p0, n

    def _tip_expansion(self, u: str) -> tuple[Path, ...]:
        """Suffix paths from a non-sink, non-base vertex to the first sink or base."""
        cached = self._expansions.get(u)
        if cached is not None:
            return cached
        result: list[Path] = []
        stack = [Path((a,)) for a in self.graph.out_arrows(u)]
        while stack:
            s = stack.pop()
            if len(result) + len(stack) > self.limits.max_terms:
                raise LimitExceeded("tip expansion exceeded the term cap")
            t = s.target
            if self.graph.is_sink(t) or t in self.cycle_at_base:
                result.append(s)
            else:
                stack.extend(s + a for a in self.graph.out_arrows(t))
        result.sort(key=Path.names)
        self._expansions[u] = tuple(result)
        return self._expansions[u]

    def _cc_star_defect(self, cyc: Cycle) -> tuple[Path, ...]:
        """The exit paths d with C C* = v_C - sum over d of d d*.

        Derived once per cycle by cascading the vertex expansion at the base
        along the cycle; the lone branch that completes the cycle is the
        C C* term, every other branch stops at a sink or another base.
        """
        base = cyc.base_vertex
        cached = self._defects.get(base)
        if cached is not None:
            return cached
        result: list[Path] = []
        stack = [Path((a,)) for a in self.graph.out_arrows(base)]
        while stack:
            s = stack.pop()
            if len(result) + len(stack) > self.limits.max_terms:
                raise LimitExceeded("cycle expansion exceeded the term cap")
            if s.arrows == cyc.arrows:
                continue
            t = s.target
            if t == base:
                raise GraphError(
                    f"second closed path at {base}; cycles are not pairwise disjoint"
                )
            if self.graph.is_sink(t) or t in self.cycle_at_base:
                result.append(s)
            else:
                stack.extend(s + a for a in self.graph.out_arrows(t))
        result.sort(key=Path.names)
        self._defects[base] = tuple(result)
        return self._defects[base]

    # -- multiplication ----------------------------------------------------

    def _product(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        out: dict[NormalTerm, Fraction] = {}
        for t1, c1 in a._terms.items():
            for t2, c2 in b._terms.items():
                for t, c in self._term_product(t1, t2).items():
                    out[t] = out.get(t, Fraction(0)) + c1 * c2 * c
        return AlgebraElement(self, out)

    def _term_product(self, t1: NormalTerm, t2: NormalTerm) -> dict[NormalTerm, Fraction]:
        key = (t1, t2)
        cached = self._product_cache.get(key)
        if cached is not None:
            return cached
        word = self.term_word(t1) + self.term_word(t2)
        result = self.normal_form(word)._terms
        if len(self._product_cache) > 65536:
            self._product_cache.clear()
        self._product_cache[key] = result
        return result

    # -- term constructors with validation ---------------------------------

    def sink_term(self, p: Path, q: Path) -> NormalTerm:
        if p.target != q.target or not self.graph.is_sink(p.target):
            raise GraphError("both paths must end at the same sink")
        return NormalTerm(p, None, 0, q)

    def cycle_term(self, p: Path, cyc: Cycle, power: int, q: Path) -> NormalTerm:
        base = cyc.base_vertex
        if self.cycle_at_base.get(base) != cyc:
            raise GraphError("not a cycle of this digraph")
        if p.target != base or q.target != base:
            raise GraphError("both paths must end at the cycle base")
        if p.ends_with(cyc.arrows) or q.ends_with(cyc.arrows):
            raise GraphError("paths of a cycle term must not end with the cycle")
        return NormalTerm(p, cyc, power, q)

    # -- basis enumeration ---------------------------------------------------

    def paths_into(
        self, v: str, max_len: int, exclude_trailing: Optional[Cycle] = None
    ) -> list[Path]:
        """All paths of length <= max_len ending at v, sorted; optionally
        excluding paths that end with a full copy of the given cycle."""
        self.graph.require_vertex(v)
        found: list[Path] = []
        stack: list[Path] = [Path((), anchor=v)]
        while stack:
            s = stack.pop()
            if len(found) + len(stack) > self.limits.max_terms:
                raise LimitExceeded("path enumeration exceeded the term cap")
            if exclude_trailing is None or not s.ends_with(exclude_trailing.arrows):
                found.append(s)
            if len(s) < max_len:
                for a in self.graph.in_arrows(s.source):
                    extended = Path((a,) + s.arrows) if s.arrows else Path((a,))
                    stack.append(extended)
        found.sort(key=lambda p: (len(p), p.names()))
        return found

    def all_paths(self, max_len: int) -> list[Path]:
        """Every path of the graph of length <= max_len, sorted."""
        found: list[Path] = [Path((), anchor=v) for v in self.graph.vertices]
        frontier = list(found)
        for _ in range(max_len):
            nxt: list[Path] = []
            for p in frontier:
                for a in self.graph.out_arrows(p.target):
                    nxt.append(p + a)
            if len(found) + len(nxt) > self.limits.max_terms:
                raise LimitExceeded("path enumeration exceeded the term cap")
            found.extend(nxt)
            frontier = nxt
        found.sort(key=lambda p: (len(p), p.source, p.names()))
        return found

    def basis(self, max_len: int, source: Optional[str] = None) -> list[NormalTerm]:
        """All basis terms of total letter length <= max_len, sorted."""
        if max_len < 0:
            raise GraphError("max_len must be >= 0")
        if source is not None:
            self.graph.require_vertex(source)
        terms: list[NormalTerm] = []
        for w in self.graph.sinks():
            paths = self.paths_into(w, max_len)
            for p in paths:
                if source is not None and p.source != source:
                    continue
                for q in paths:
                    if len(p) + len(q) <= max_len:
                        terms.append(NormalTerm(p, None, 0, q))
        for cyc in self.cycles:
            k = len(cyc.arrows)
            paths = self.paths_into(cyc.base_vertex, max_len, exclude_trailing=cyc)
            for p in paths:
                if source is not None and p.source != source:
                    continue
                for q in paths:
                    room = max_len - len(p) - len(q)
                    if room < 0:
                        continue
                    terms.append(NormalTerm(p, cyc, 0, q))
                    n = 1
                    while n * k <= room:
                        terms.append(NormalTerm(p, cyc, n, q))
                        terms.append(NormalTerm(p, cyc, -n, q))
                        n += 1
        if len(terms) > self.limits.max_terms:
            raise LimitExceeded("basis enumeration exceeded the term cap")
        terms.sort(key=NormalTerm.sort_key)
        return terms

    # -- the exit identity -----------------------------------------------

    def exit_paths(self, p: Path) -> list[Path]:
        """The branch paths X_p: follow p part way, then leave it."""
        out: list[Path] = []
        for k, ek in enumerate(p.arrows):
            prefix = p.arrows[:k]
            for f in self.graph.out_arrows(ek.source):
                if f.name != ek.name:
                    out.append(Path(prefix + (f,)))
        out.sort(key=Path.names)
        return out

    def exit_identity(self, p: Path) -> tuple[AlgebraElement, AlgebraElement]:
        """Both sides of sp - p p* = sum over the exit paths d of d d*."""
        lhs = self.vertex(p.source) - self.normal_form(
            self.path_word(p) + self.path_word(p, dual=True)
        )
        rhs = self.zero()
        for d in self.exit_paths(p):
            rhs = rhs + self.normal_form(self.path_word(d) + self.path_word(d, dual=True))
        return lhs, rhs


@lru_cache(maxsize=64)
def algebra_over(g: Digraph) -> LeavittAlgebra:
    """A cached rewriting context for the graph."""
    return LeavittAlgebra(g)


# -- spec-level convenience wrappers ---------------------------------------


def normal_form(g: Digraph, word: Iterable[Union[str, Letter]]) -> AlgebraElement:
    return algebra_over(g).normal_form(word)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a * b


def involution(a: AlgebraElement) -> AlgebraElement:
    return a.star()


def enumerate_basis(g: Digraph, max_len: int, source: Optional[str] = None) -> list[NormalTerm]:
    return algebra_over(g).basis(max_len, source)


def exit_identity_check(g: Digraph, p: Path) -> tuple[AlgebraElement, AlgebraElement]:
    return algebra_over(g).exit_identity(p)
