"""Symbolic Leavitt path algebras over the integers.

Every element is an integer combination of monomials ``alpha beta*`` with
``r(alpha) = r(beta)``; a vertex ``v`` is ``v v*`` on empty paths.  The
product of monomials is

    (alpha beta*)(gamma delta*) = (alpha gamma') delta*   if gamma = beta gamma'
                                = alpha (delta beta')*    if beta = gamma beta'
                                = 0                       otherwise,

which encodes ``uv = delta_{u,v} v``, ``s(f) f = f = f r(f)`` and the
Cuntz-Krieger relation CK1 ``f* f' = delta_{f,f'} r(f)``.  CK2,
``sum_{s(f)=v} f f* = v``, is used as a rewrite: each finitely-emitting non-sink vertex ``w`` gets a
*special* edge (its least out-edge by id), and a monomial whose ``alpha`` and
``beta`` both end in the same special edge ``e`` is replaced by

    alpha0 beta0* - sum_{f != e, s(f) = s(e)} (alpha0 f)(beta0 f)*.

Monomials without that shape form a basis, so reduced forms are canonical.
The grading is ``deg(alpha beta*) = |alpha| - |beta|``.
"""

from __future__ import annotations

import random
import re
import warnings
from typing import Iterable, Mapping, NamedTuple

from .graph_model import FiniteGraph, GraphError
from .path_analysis import Path, PathError


class Monomial(NamedTuple):
    alpha: Path
    beta: Path

    @property
    def degree(self) -> int:
        return len(self.alpha) - len(self.beta)

    @property
    def is_vertex(self) -> bool:
        return not self.alpha.edges and not self.beta.edges

    def star(self) -> Monomial:
        return Monomial(self.beta, self.alpha)

    def __str__(self) -> str:
        if self.is_vertex:
            return self.alpha.start
        return f"({self.alpha}|{self.beta})"


def mono_key(m: Monomial) -> tuple:
    """Total order: total length, then alpha, then beta (lexicographic by edge ids)."""
    a, b = m
    return (len(a) + len(b), a.edges, a.start, b.edges, b.start)


def mono_product(x: Monomial, y: Monomial) -> Monomial | None:
    alpha, beta = x
    gamma, delta = y
    if gamma.startswith(beta):
        return Monomial(alpha + gamma.after(beta), delta)
    if beta.startswith(gamma):
        return Monomial(alpha, delta + beta.after(gamma))
    return None


class Element:
    """An integer combination of monomials; immutable.

    Arithmetic results are always in normal form.  Build elements through a
    :class:`LeavittPathAlgebra`.
    """

    __slots__ = ("algebra", "terms", "_normal")

    def __init__(self, algebra: LeavittPathAlgebra, terms: Mapping[Monomial, int], normal: bool = False):
        self.algebra = algebra
        self.terms = {m: c for m, c in sorted(terms.items(), key=lambda t: mono_key(t[0])) if c}
        self._normal = normal

    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.algebra is not self.algebra:
                raise ValueError("elements belong to different algebras")
            return other
        if other == 0:
            return self.algebra.zero()
        return NotImplemented

    def _linear(self, other: Element, sign: int) -> Element:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + sign * c
        return self.algebra.normal_form(out)

    def __add__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else self._linear(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else self._linear(other, -1)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __neg__(self) -> Element:
        return Element(self.algebra, {m: -c for m, c in self.terms.items()}, self._normal)

    def __mul__(self, other):
        if isinstance(other, int):
            return Element(self.algebra, {m: c * other for m, c in self.terms.items()}, self._normal)
        other = self._coerce(other)
        return NotImplemented if other is NotImplemented else self.algebra.multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def normalized(self) -> Element:
        return self if self._normal else self.algebra.normal_form(self.terms)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.normalized().terms == other.normalized().terms

    def __hash__(self) -> int:
        return hash(tuple(self.normalized().terms.items()))

    def __bool__(self) -> bool:
        return bool(self.normalized().terms)

    def is_zero(self) -> bool:
        return not self

    def star(self) -> Element:
        """The involution ``(alpha beta*)* = beta alpha*``; coefficients are fixed."""
        return self.algebra.normal_form({m.star(): c for m, c in self.terms.items()})

    def degree_component(self, n: int) -> Element:
        x = self.normalized()
        return Element(self.algebra, {m: c for m, c in x.terms.items() if m.degree == n}, True)

    def degrees(self) -> set[int]:
        return {m.degree for m in self.normalized().terms}

    def is_homogeneous(self) -> int | None:
        """The common degree of all terms, or None (the zero element is not assigned one)."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.terms.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(m) if mag == 1 else f"{mag}*{m}"
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Element({self})"


class ElementParseError(ValueError):
    pass


_ELEMENT_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*(?:\[\d+\])?)|(?P<punct>[()|@+\-*]))"
)


class LeavittPathAlgebra:
    """``L_Z(E)`` for a finite graph ``E`` (a ladder is handled through a finite window)."""

    def __init__(self, graph: FiniteGraph):
        self.graph = graph
        self._special: dict[str, str] = {}
        for v in graph.vertices:
            out = graph.out_edges(v)
            if out and not any(e.infinite_family for e in out):
                self._special[v] = out[0].id

    # -- construction ----------------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {}, True)

    def mono(self, alpha: Path, beta: Path) -> Element:
        """``alpha beta*``, or zero when the ranges differ."""
        for p in (alpha, beta):
            Path.of(self.graph, p.edges, p.start)
        if alpha.end != beta.end:
            return self.zero()
        return self.normal_form({Monomial(alpha, beta): 1})

    def vertex(self, v: str) -> Element:
        p = Path.of(self.graph, (), v)
        return Element(self, {Monomial(p, p): 1}, True)

    def path(self, p: Path) -> Element:
        return self.mono(p, Path.trivial(p.end))

    def ghost_path(self, p: Path) -> Element:
        return self.mono(Path.trivial(p.end), p)

    def edge(self, eid: str) -> Element:
        return self.path(Path.of(self.graph, [eid]))

    def ghost(self, eid: str) -> Element:
        return self.ghost_path(Path.of(self.graph, [eid]))

    def element(self, terms: Mapping[Monomial, int]) -> Element:
        return self.normal_form(terms)

    def special_edge(self, v: str) -> str | None:
        return self._special.get(v)

    # -- rewriting ----------------------------------------------------------

    def rewrite_once(self, m: Monomial) -> list[tuple[Monomial, int]] | None:
        """One application of the CK2 rule to ``m``, or None if ``m`` is reduced."""
        alpha, beta = m
        if not alpha.edges or not beta.edges or alpha.edges[-1] != beta.edges[-1]:
            return None
        e = alpha.edges[-1]
        w = self.graph.edge(e).src
        if self._special.get(w) != e:
            return None
        a0 = Path(alpha.edges[:-1], alpha.start, w)
        b0 = Path(beta.edges[:-1], beta.start, w)
        out = [(Monomial(a0, b0), 1)]
        for f in self.graph.out_edges(w):
            if f.id != e:
                out.append((Monomial(a0.extend(f), b0.extend(f)), -1))
        return out

    def normal_form(self, x: Element | Mapping[Monomial, int], rng: random.Random | None = None) -> Element:
        """Reduce to the canonical basis.

        Reducible terms are rewritten from a work list, most recent first, or in
        random order when ``rng`` is given; the result does not depend on the order.
        """
        terms = x.terms if isinstance(x, Element) else x
        work = [(m, c) for m, c in terms.items() if c]
        out: dict[Monomial, int] = {}
        while work:
            i = rng.randrange(len(work)) if rng is not None else len(work) - 1
            work[i], work[-1] = work[-1], work[i]
            m, c = work.pop()
            if m.alpha.end != m.beta.end:
                raise PathError(f"monomial {m} has mismatched ranges")
            red = self.rewrite_once(m)
            if red is None:
                out[m] = out.get(m, 0) + c
            else:
                work.extend((m2, c * c2) for m2, c2 in red)
        return Element(self, out, True)

    def normal_form_by_monomial(self, x: Element | Mapping[Monomial, int]) -> Element:
        """Second normalizer: fully reduce each monomial recursively, then add up."""
        terms = x.terms if isinstance(x, Element) else x
        memo: dict[Monomial, dict[Monomial, int]] = {}

        def reduce(m: Monomial) -> dict[Monomial, int]:
            if m not in memo:
                red = self.rewrite_once(m)
                if red is None:
                    memo[m] = {m: 1}
                else:
                    acc: dict[Monomial, int] = {}
                    for m2, c2 in red:
                        for m3, c3 in reduce(m2).items():
                            acc[m3] = acc.get(m3, 0) + c2 * c3
                    memo[m] = acc
            return memo[m]

        out: dict[Monomial, int] = {}
        for m, c in terms.items():
            for m2, c2 in reduce(m).items():
                out[m2] = out.get(m2, 0) + c * c2
        return Element(self, out, True)

    def is_reduced(self, m: Monomial) -> bool:
        return self.rewrite_once(m) is None

    # -- arithmetic ----------------------------------------------------------

    def multiply(self, x: Element, y: Element) -> Element:
        out: dict[Monomial, int] = {}
        for m1, c1 in x.terms.items():
            for m2, c2 in y.terms.items():
                p = mono_product(m1, m2)
                if p is not None:
                    out[p] = out.get(p, 0) + c1 * c2
        return self.normal_form(out)

    def product(self, factors: Iterable[Element]) -> Element:
        it = iter(factors)
        acc = next(it)
        for f in it:
            acc = acc * f
        return acc

    def sum(self, xs: Iterable[Element]) -> Element:
        out: dict[Monomial, int] = {}
        for x in xs:
            for m, c in x.terms.items():
                out[m] = out.get(m, 0) + c
        return self.normal_form(out)

    def is_zero(self, x: Element) -> bool:
        return not self.normal_form(x).terms

    def equals(self, x: Element, y: Element) -> bool:
        return self.is_zero(x - y)

    # -- parsing -----------------------------------------------------------

    def parse_element(self, text: str) -> Element:
        """Parse ``3*(a b|c d) - v + (e|@w) + e f*``.

        ``(p|q)`` is ``p q*``; ``@v`` is the empty path at ``v``; a bare vertex
        name is that vertex, a bare edge name ``e`` is ``e`` and ``e*`` its ghost.
        Factors written side by side are multiplied.
        """
        toks = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _ELEMENT_TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ElementParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
            kind = m.lastgroup
            toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        toks.append(("eof", "", len(text)))
        i = 0

        def peek(kind=None, val=None):
            k, v, _ = toks[i]
            return (kind is None or k == kind) and (val is None or v == val)

        def expect(kind, val=None, what=""):
            nonlocal i
            k, v, p = toks[i]
            if k != kind or (val is not None and v != val):
                raise ElementParseError(f"expected {what or val or kind} at offset {p}, got {v or 'end of input'!r}")
            i += 1
            return v

        def pathseq() -> Path:
            nonlocal i
            if peek("punct", "@"):
                i += 1
                v = expect("id", what="a vertex name")
                try:
                    return Path.of(self.graph, (), v)
                except GraphError as exc:
                    raise ElementParseError(str(exc)) from None
            ids = [expect("id", what="an edge name")]
            while peek("id"):
                ids.append(expect("id"))
            try:
                return Path.of(self.graph, ids)
            except GraphError as exc:
                raise ElementParseError(str(exc)) from None

        def mono() -> dict[Monomial, int]:
            nonlocal i
            if peek("punct", "("):
                i += 1
                a = pathseq()
                expect("punct", "|")
                b = pathseq()
                expect("punct", ")")
                if a.end != b.end:
                    warnings.warn(f"({a}|{b}) has r({a}) != r({b}); it is zero", stacklevel=5)
                    return {}
                return {Monomial(a, b): 1}
            name = expect("id", what="a vertex, an edge or '('")
            ghost = False
            if peek("punct", "*"):  # a coefficient is only ever an integer, so this is a ghost
                i += 1
                ghost = True
            if self.graph.has_vertex(name):
                p = Path.trivial(name)
                return {Monomial(p, p): 1}
            try:
                p = Path.of(self.graph, [name])
            except GraphError:
                raise ElementParseError(f"unknown vertex or edge {name!r}") from None
            t = Path.trivial(p.end)
            return {Monomial(t, p) if ghost else Monomial(p, t): 1}

        def term(sign: int) -> dict[Monomial, int]:
            nonlocal i
            coeff = 1
            if peek("int"):
                coeff = int(expect("int"))
                if peek("eof") or peek("punct", "+") or peek("punct", "-"):
                    if coeff != 0:
                        raise ElementParseError("integer constants other than 0 are not elements")
                    return {}
                expect("punct", "*")
            acc = mono()
            while peek("id") or peek("punct", "("):  # juxtaposition is multiplication
                nxt = mono()
                prod: dict[Monomial, int] = {}
                for m1, c1 in acc.items():
                    for m2, c2 in nxt.items():
                        m3 = mono_product(m1, m2)
                        if m3 is not None:
                            prod[m3] = prod.get(m3, 0) + c1 * c2
                acc = prod
            return {m: sign * coeff * c for m, c in acc.items()}

        out: dict[Monomial, int] = {}

        def add(d):
            for m, c in d.items():
                out[m] = out.get(m, 0) + c

        sign = 1
        if peek("punct", "-"):
            i += 1
            sign = -1
        elif peek("punct", "+"):
            i += 1
        add(term(sign))
        while not peek("eof"):
            op = expect("punct", what="'+' or '-'")
            if op not in "+-":
                raise ElementParseError(f"expected '+' or '-', got {op!r}")
            add(term(1 if op == "+" else -1))
        return self.normal_form(out)


def check_defining_relations(alg: LeavittPathAlgebra) -> list[str]:
    """Exhaustively test the defining relations on all generators; returns the violations.

    Violations are labelled ``vertex``, ``incidence``, ``CK1`` or ``CK2``.
    """
    g = alg.graph
    bad: list[str] = []
    verts = {v: alg.vertex(v) for v in g.vertices}
    real = [e for e in g.edges if not e.infinite_family]
    edges = {e.id: alg.edge(e.id) for e in real}
    ghosts = {e.id: alg.ghost(e.id) for e in real}
    for u, xu in verts.items():
        for v, xv in verts.items():
            want = xv if u == v else alg.zero()
            if xu * xv != want:
                bad.append(f"vertex: {u} {v}")
    for e in real:
        f, fs = edges[e.id], ghosts[e.id]
        s, r = verts[e.src], verts[e.dst]
        if s * f != f or f * r != f:
            bad.append(f"incidence: s(f)f = f = fr(f) for {e.id}")
        if r * fs != fs or fs * s != fs:
            bad.append(f"incidence: r(f)f* = f* = f*s(f) for {e.id}")
        for e2 in real:
            want = r if e.id == e2.id else alg.zero()
            if fs * edges[e2.id] != want:
                bad.append(f"CK1: {e.id}* {e2.id}")
    for v in g.vertices:
        out = g.out_edges(v)
        if out and not any(e.infinite_family for e in out):
            total = alg.sum(edges[e.id] * ghosts[e.id] for e in out)
            if total != verts[v]:
                bad.append(f"CK2: at {v}")
    return bad
