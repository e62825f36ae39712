"""Simply-laced (ADE) root systems: Cartan data, positive roots, exponents.

Vertices are indexed ``0..r-1`` internally and printed as ``1..r``.
Numbering conventions:

* ``A_n``: along the line, edges ``(i, i+1)``.
* ``D_n``: the two short legs are vertices 1 and 2, the long leg runs
  3, 4, ..., n-1 towards the node, and the nodal vertex is n.
* ``E_n``: Bourbaki, i.e. the chain 1-3-4-5-...-n with vertex 2 attached to 4.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ceppa.errors import NoNodalVertex, RankMismatch, UnsupportedType


@dataclass(frozen=True)
class CartanDatum:
    family: str
    rank: int
    edges: tuple[tuple[int, int], ...]
    cartan: tuple[tuple[int, ...], ...]
    adjacency: tuple[tuple[int, ...], ...]
    epsilon: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(self.rank) if self.adjacency[i][j]]

    def degree(self, i: int) -> int:
        return sum(self.adjacency[i])


def _ade_edges(family: str, rank: int) -> list[tuple[int, int]]:
    if family == "A" and rank >= 1:
        return [(i, i + 1) for i in range(rank - 1)]
    if family == "D" and rank >= 4:
        node = rank - 1
        edges = [(0, node), (1, node), (rank - 2, node)]
        edges += [(k, k + 1) for k in range(2, rank - 2)]
        return sorted(edges)
    if family == "E" and rank in (6, 7, 8):
        # Bourbaki 1-3-4-5-..., 2-4 (printed labels)
        edges = [(0, 2), (1, 3)] + [(k, k + 1) for k in range(2, rank - 1)]
        return sorted(edges)
    raise UnsupportedType(f"unsupported Dynkin type {family}{rank}")


def build_cartan(family: str, rank: int) -> CartanDatum:
    family = family.upper()
    edges = _ade_edges(family, rank)
    adj = [[0] * rank for _ in range(rank)]
    for i, j in edges:
        adj[i][j] = adj[j][i] = 1
    cartan = tuple(
        tuple(2 * (i == j) - adj[i][j] for j in range(rank)) for i in range(rank)
    )
    # proper 2-colouring, +1 at the first vertex
    eps = [0] * rank
    eps[0] = 1
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j in range(rank):
            if adj[i][j] and eps[j] == 0:
                eps[j] = -eps[i]
                queue.append(j)
    return CartanDatum(
        family=family,
        rank=rank,
        edges=tuple(edges),
        cartan=cartan,
        adjacency=tuple(tuple(row) for row in adj),
        epsilon=tuple(eps),
    )


@dataclass(frozen=True, order=True)
class Root:
    coords: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coords)

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Root") -> "Root":
        return Root(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __str__(self) -> str:
        return "".join(str(c) for c in self.coords)


def simple_root(rank: int, i: int) -> Root:
    return Root(tuple(int(k == i) for k in range(rank)))


@dataclass(frozen=True)
class Weight:
    """Rational vector in the basis of fundamental weights."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coords)


def rho(rank: int) -> Weight:
    return Weight(tuple(Fraction(1) for _ in range(rank)))


def parse_weight(text: str, rank: int) -> Weight:
    """Parse ``"rho"`` or comma-separated rationals such as ``"3/2,1,5"``."""
    text = text.strip()
    if text == "rho":
        return rho(rank)
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != rank:
        raise RankMismatch(f"expected {rank} coordinates, got {len(parts)}")
    return Weight(tuple(Fraction(p.strip()) for p in parts))


@dataclass(frozen=True)
class RootSystem:
    datum: CartanDatum
    positive_roots: tuple[Root, ...]
    h: int
    exponents: tuple[int, ...]
    nodal_vertex: Optional[int]
    legs: Optional[tuple[int, int, int]]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def N(self) -> int:
        return len(self.positive_roots)

    @property
    def theta(self) -> Root:
        return self.positive_roots[-1]

    @property
    def epsilon(self) -> tuple[int, ...]:
        return self.datum.epsilon

    def index(self, alpha: Root) -> int:
        return self._index[alpha]

    def is_root(self, alpha: Root) -> bool:
        return alpha in self._index

    def by_height(self, k: int) -> list[Root]:
        return [a for a in self.positive_roots if a.height == k]

    def simple(self, i: int) -> Root:
        return simple_root(self.rank, i)

    def pairing(self, alpha: Root, beta: Root) -> int:
        """Symmetric form with (alpha_i, alpha_i) = 2."""
        c = self.datum.cartan
        return sum(
            alpha.coords[i] * c[i][j] * beta.coords[j]
            for i in range(self.rank)
            for j in range(self.rank)
            if alpha.coords[i] and beta.coords[j]
        )


def _root_closure(datum: CartanDatum, seed: Sequence[Root]) -> set[Root]:
    r = datum.rank
    cartan = datum.cartan
    found = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for alpha in frontier:
            for j in range(r):
                # (alpha, alpha_j) = sum_k alpha_k C_kj
                ip = sum(alpha.coords[k] * cartan[k][j] for k in range(r))
                if ip == -1:
                    beta = alpha + simple_root(r, j)
                    if beta not in found:
                        found.add(beta)
                        nxt.append(beta)
        frontier = nxt
    return found


def _legs(datum: CartanDatum) -> tuple[Optional[int], Optional[tuple[int, int, int]]]:
    nodes = [i for i in range(datum.rank) if datum.degree(i) == 3]
    if not nodes:
        return None, None
    node = nodes[0]
    lengths = []
    for start in datum.neighbours(node):
        length, prev, cur = 1, node, start
        while True:
            nxt = [j for j in datum.neighbours(cur) if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        lengths.append(length)
    return node, tuple(sorted(lengths))


def build_root_system(datum: CartanDatum) -> RootSystem:
    r = datum.rank
    simples = [simple_root(r, i) for i in range(r)]
    roots = sorted(_root_closure(datum, simples), key=lambda a: (a.height, a.coords))
    h = roots[-1].height + 1
    counts = [0] * h
    for a in roots:
        counts[a.height] += 1
    by_height = counts[1:]
    # conjugate partition of the height distribution
    exponents = tuple(sorted(sum(1 for c in by_height if c >= i) for i in range(1, r + 1)))
    node, legs = _legs(datum)
    rs = RootSystem(
        datum=datum,
        positive_roots=tuple(roots),
        h=h,
        exponents=exponents,
        nodal_vertex=node,
        legs=legs,
    )
    rs._index.update({a: k for k, a in enumerate(roots)})
    return rs


def root_system(family: str, rank: int) -> RootSystem:
    return build_root_system(build_cartan(family, rank))


def inner(x: Weight, alpha: Root) -> Fraction:
    """(x, alpha) for x in the fundamental-weight basis; (omega_i, alpha_j) = delta_ij."""
    if len(x.coords) != len(alpha.coords):
        raise RankMismatch(f"weight of rank {len(x.coords)} vs root of rank {len(alpha.coords)}")
    return sum((c * a for c, a in zip(x.coords, alpha.coords) if a), Fraction(0))


def is_regular(mu: Weight, rs: RootSystem) -> bool:
    if mu.rank != rs.rank:
        raise RankMismatch(f"weight of rank {mu.rank} vs root system of rank {rs.rank}")
    return all(inner(mu, a) != 0 for a in rs.positive_roots)


def root_counts(rs: RootSystem, nodal: bool = False) -> tuple[list[int], Optional[list[int]]]:
    """Return ``(N_p, N'_p)`` for ``p = 0 .. h-2``.

    ``N_p`` counts roots of height ``p+1``; ``N'_p`` counts those whose
    coefficient at the nodal simple root is positive. ``N'`` is only
    computed when ``nodal`` is set.
    """
    n = [0] * (rs.h - 1)
    for a in rs.positive_roots:
        n[a.height - 1] += 1
    if not nodal:
        return n, None
    if rs.nodal_vertex is None:
        raise NoNodalVertex(f"{rs.datum.name} has no nodal vertex")
    star = rs.nodal_vertex
    nprime = [0] * (rs.h - 1)
    for a in rs.positive_roots:
        if a.coords[star] > 0:
            nprime[a.height - 1] += 1
    for p in range(rs.h - 1):
        expected = n[p] - sum(max(l - p, 0) for l in rs.legs)
        assert nprime[p] == expected, (p, nprime[p], expected)
    return n, nprime


def random_regular_weight(rs: RootSystem, seed: int, lo: int = 1, hi: int = 100) -> Weight:
    """Integer weight with coordinates drawn uniformly from ``[lo, hi]``."""
    rng = random.Random(seed)
    while True:
        mu = Weight(tuple(Fraction(rng.randint(lo, hi)) for _ in range(rs.rank)))
        if is_regular(mu, rs):
            return mu


SUPPORTED_TYPES: tuple[tuple[str, int], ...] = (
    tuple(("A", n) for n in range(1, 9))
    + tuple(("D", n) for n in range(4, 9))
    + (("E", 6), ("E", 7), ("E", 8))
)
