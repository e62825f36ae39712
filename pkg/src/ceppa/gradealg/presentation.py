"""Finitely presented graded algebras over the vertex ring R = Q^I.

Composition convention: a path ``x`` is ``e_head(x) * x * e_tail(x)`` and the
word ``(g1, g2, ..., gk)`` denotes the product ``g1 g2 ... gk``; it is
composable when ``tail(g_m) == head(g_{m+1})``.  A presentation has at most
one central generator (``z``), kept out of words and recorded as ``zpow``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from ceppa.errors import IncomposableRelation, IrregularWeight
from ceppa.rootsys import CartanDatum, Weight, build_root_system, is_regular


@dataclass(frozen=True)
class Generator:
    name: str
    tail: Optional[int]
    head: Optional[int]
    degree: int
    central: bool = False


class Monomial(NamedTuple):
    head: int
    tail: int
    word: tuple[int, ...]
    zpow: int
    degree: int

    def key(self) -> tuple:
        """Sort key of the elimination order; larger keys are rewritten first.

        Within a degree, fewer factors of ``z`` is larger, then words compare
        lexicographically.  Monomials rich in ``z`` therefore survive as basis
        elements, e.g. ``a a* = z e_i`` keeps ``z e_i``.
        """
        return (self.degree, -self.zpow, self.word, self.head, self.tail)


@dataclass(frozen=True)
class Relation:
    head: int
    tail: int
    degree: int
    terms: tuple[tuple[Fraction, Monomial], ...]


@dataclass
class Presentation:
    vertices: list[str]
    generators: list[Generator]
    relations: list[Relation] = field(default_factory=list)
    name: str = ""
    datum: Optional[CartanDatum] = None
    mu: Optional[Weight] = None
    # (a, a*) generator indices for the arrows of Q
    arrow_pairs: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        central = [k for k, g in enumerate(self.generators) if g.central]
        if len(central) > 1:
            raise ValueError("at most one central generator is supported")
        self.central_index = central[0] if central else None
        for g in self.generators:
            if g.degree <= 0:
                raise ValueError(f"generator {g.name} must have positive degree")

    @property
    def zdeg(self) -> Optional[int]:
        return None if self.central_index is None else self.generators[self.central_index].degree

    @property
    def letters(self) -> list[int]:
        return [k for k, g in enumerate(self.generators) if not g.central]

    @property
    def max_generator_degree(self) -> int:
        return max(g.degree for g in self.generators)

    def gen_index(self, name: str) -> int:
        for k, g in enumerate(self.generators):
            if g.name == name:
                return k
        raise KeyError(name)

    def monomial(self, word: Sequence[int], zpow: int = 0, vertex: Optional[int] = None) -> Monomial:
        """Build a monomial, checking composability; ``vertex`` is required for empty words."""
        word = tuple(word)
        gens = self.generators
        for a, b in zip(word, word[1:]):
            if gens[a].tail != gens[b].head:
                raise IncomposableRelation(f"{gens[a].name}.{gens[b].name} is not composable")
        if zpow and self.central_index is None:
            raise ValueError("presentation has no central generator")
        deg = sum(gens[g].degree for g in word) + (zpow * self.zdeg if zpow else 0)
        if word:
            head, tail = gens[word[0]].head, gens[word[-1]].tail
        else:
            if vertex is None:
                raise ValueError("empty word needs a vertex")
            head = tail = vertex
        return Monomial(head, tail, word, zpow, deg)

    def relation(self, terms: Sequence[tuple]) -> Relation:
        """Build a relation from ``(coef, monomial)`` pairs, checking homogeneity."""
        terms = tuple((Fraction(c), m) for c, m in terms if c)
        if not terms:
            raise ValueError("empty relation")
        blocks = {(m.head, m.tail, m.degree) for _, m in terms}
        if len(blocks) != 1:
            raise IncomposableRelation(f"relation mixes blocks/degrees: {sorted(blocks)}")
        head, tail, deg = blocks.pop()
        return Relation(head, tail, deg, terms)

    def validate(self) -> None:
        for rel in self.relations:
            for _, m in rel.terms:
                self.monomial(m.word, m.zpow, m.head)
                if (m.head, m.tail, m.degree) != (rel.head, rel.tail, rel.degree):
                    raise IncomposableRelation("relation is not homogeneous")

    # text serialization -------------------------------------------------

    def format_monomial(self, m: Monomial) -> str:
        parts = [self.generators[g].name for g in m.word]
        if m.zpow:
            zname = self.generators[self.central_index].name
            parts.append(zname if m.zpow == 1 else f"{zname}^{m.zpow}")
        return ".".join(parts) if parts else "e"

    def to_text(self) -> str:
        lines = ["# ceppa presentation v1"]
        if self.name:
            lines.append(f"name {self.name}")
        lines += [f"vertex {v}" for v in self.vertices]
        for g in self.generators:
            if g.central:
                lines.append(f"central {g.name} {g.degree}")
            else:
                lines.append(
                    f"generator {g.name} {self.vertices[g.tail]} {self.vertices[g.head]} {g.degree}"
                )
        for rel in self.relations:
            body = []
            for c, m in rel.terms:
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                coef = "" if mag == 1 else f"{mag}*"
                body.append(f"{sign} {coef}{self.format_monomial(m)}")
            lines.append(
                f"relation {self.vertices[rel.head]} {self.vertices[rel.tail]} : " + " ".join(body)
            )
        return "\n".join(lines) + "\n"


_TERM = re.compile(r"^(?:(?P<coef>[0-9]+(?:/[0-9]+)?)\*)?(?P<mono>.+)$")


def parse_presentation(text: str) -> Presentation:
    """Parse the line-based presentation format (see README for the grammar)."""
    vertices: list[str] = []
    gens: list[Generator] = []
    rel_lines: list[tuple[int, str]] = []
    name = ""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, _, rest = line.partition(" ")
        args = rest.split()
        if kw == "name":
            name = rest.strip()
        elif kw == "vertex":
            vertices.extend(args)
        elif kw == "generator":
            if len(args) != 4:
                raise ValueError(f"line {lineno}: generator NAME TAIL HEAD DEGREE")
            g, t, h, d = args
            gens.append(Generator(g, vertices.index(t), vertices.index(h), int(d)))
        elif kw == "central":
            if len(args) != 2:
                raise ValueError(f"line {lineno}: central NAME DEGREE")
            gens.append(Generator(args[0], None, None, int(args[1]), central=True))
        elif kw == "relation":
            rel_lines.append((lineno, rest))
        else:
            raise ValueError(f"line {lineno}: unknown keyword {kw!r}")
    p = Presentation(vertices, gens, name=name)
    by_name = {g.name: k for k, g in enumerate(gens)}
    for lineno, rest in rel_lines:
        header, sep, body = rest.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: relation HEAD TAIL : TERMS")
        hv, tv = header.split()
        head, tail = vertices.index(hv), vertices.index(tv)
        tokens = body.replace("+", " + ").replace("-", " - ").split()
        terms = []
        sign = 1
        for tok in tokens:
            if tok in "+-":
                sign = -1 if tok == "-" else 1
                continue
            mt = _TERM.match(tok)
            coef = Fraction(mt.group("coef") or 1) * sign
            word: list[int] = []
            zpow = 0
            mono = mt.group("mono")
            if mono != "e":
                for part in mono.split("."):
                    base, _, exp = part.partition("^")
                    k = by_name[base]
                    if gens[k].central:
                        zpow += int(exp or 1)
                    else:
                        word.extend([k] * int(exp or 1))
            m = p.monomial(word, zpow, head)
            if (m.head, m.tail) != (head, tail):
                raise IncomposableRelation(f"line {lineno}: term {tok} is not in block {hv},{tv}")
            terms.append((coef, m))
            sign = 1
        p.relations.append(p.relation(terms))
    return p


def preprojective_presentation(
    datum: CartanDatum,
    mu: Optional[Weight] = None,
    include_z: bool = True,
    reverse: Sequence[int] = (),
) -> Presentation:
    """Presentation of A^mu (``include_z``) or of A_0 (no ``z``).

    Edge ``k`` of the Dynkin diagram is oriented from lower to higher vertex
    unless ``k`` is listed in ``reverse``.  At vertex ``i`` the relation reads
    ``sum_{head(a)=i} a a* - sum_{tail(a)=i} a* a - mu_i z e_i = 0``.
    """
    r = datum.rank
    if include_z:
        if mu is None:
            mu = Weight(tuple(Fraction(1) for _ in range(r)))
        if not is_regular(mu, build_root_system(datum)):
            raise IrregularWeight(f"mu = ({mu}) is not regular")
    gens: list[Generator] = []
    pairs = []
    for k, (i, j) in enumerate(datum.edges):
        tail, head = (j, i) if k in reverse else (i, j)
        gens.append(Generator(f"a{k + 1}", tail, head, 1))
        gens.append(Generator(f"a{k + 1}*", head, tail, 1))
        pairs.append((2 * k, 2 * k + 1))
    if include_z:
        gens.append(Generator("z", None, None, 2, central=True))
    p = Presentation(
        vertices=[str(i + 1) for i in range(r)],
        generators=gens,
        name=f"{'A' if include_z else 'A0'}[{datum.name}]",
        datum=datum,
        mu=mu if include_z else None,
        arrow_pairs=pairs,
    )
    for i in range(r):
        terms = []
        for a, astar in pairs:
            if gens[a].head == i:
                terms.append((1, p.monomial((a, astar))))
            if gens[a].tail == i:
                terms.append((-1, p.monomial((astar, a))))
        if include_z:
            terms.append((-mu.coords[i], p.monomial((), 1, i)))
        if terms:  # A_0 of type A_1 has no arrows and no relation
            p.relations.append(p.relation(terms))
    return p


def _poly_from_roots(roots: Sequence[int]) -> list[int]:
    """Coefficients (constant first) of prod (x + c) over ``roots``."""
    coeffs = [1]
    for c in roots:
        nxt = [0] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            nxt[k] += a * c
            nxt[k + 1] += a
        coeffs = nxt
    return coeffs


def _words(letters: Sequence[int], length: int):
    if length == 0:
        yield ()
        return
    for w in _words(letters, length - 1):
        for g in letters:
            yield w + (g,)


def b_presentation(legs: Sequence[int], eliminate: bool = False) -> Presentation:
    """The algebra e_* A e_* at mu = rho, presented by U_1, U_2, U_3 and central z.

    Relations: ``U_1 + U_2 + U_3 = z`` and ``prod_{m=0}^{l_i} (U_i + m z) = 0``.
    With ``eliminate`` the generator U_3 is replaced by ``z - U_1 - U_2``.
    """
    gens = [Generator("U1", 0, 0, 2), Generator("U2", 0, 0, 2)]
    if not eliminate:
        gens.append(Generator("U3", 0, 0, 2))
    gens.append(Generator("z", None, None, 2, central=True))
    p = Presentation(["*"], gens, name=f"B{tuple(legs)}{'-elim' if eliminate else ''}")
    if not eliminate:
        p.relations.append(p.relation([
            (1, p.monomial((0,))), (1, p.monomial((1,))), (1, p.monomial((2,))),
            (-1, p.monomial((), 1, 0)),
        ]))
    for i, ell in enumerate(legs):
        if i < 2 or not eliminate:
            # prod_{m=0}^{ell} (U + m z) = sum_k c_k U^k z^{ell+1-k}
            coeffs = _poly_from_roots(range(ell + 1))
            terms = [(c, p.monomial((i,) * k, ell + 1 - k, 0)) for k, c in enumerate(coeffs) if c]
        else:
            # U_3 = z - S with S = U1 + U2: prod_m ((m+1) z - S) = sum_k d_k S^k z^{ell+1-k}
            coeffs = _poly_from_roots([-(m + 1) for m in range(ell + 1)])
            sign = (-1) ** (ell + 1)  # prod (c - S) = (-1)^{n} prod (S - c)
            terms = []
            for k, c in enumerate(coeffs):
                if c:
                    for w in _words((0, 1), k):
                        terms.append((sign * c, p.monomial(w, ell + 1 - k, 0)))
        p.relations.append(p.relation(terms))
    return p
