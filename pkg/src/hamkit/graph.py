"""Digraphs, parsing, the cycle-to-path vertex split, independent partitions.

Vertices are 0-based ids. Arcs are ordered pairs without self-loops and
without duplicates. The text format is a header line "n m" followed by m
lines "tail head"; lines that are blank or start with '#' are skipped.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .errors import ParseError


@dataclass(frozen=True)
class Digraph:
    """Immutable digraph with adjacency indexes derived at construction."""

    n: int
    arcs: frozenset[tuple[int, int]]
    out_adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    in_adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    out_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)
    in_mask: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("digraph needs at least one vertex")
        outs: list[list[int]] = [[] for _ in range(self.n)]
        ins: list[list[int]] = [[] for _ in range(self.n)]
        omask = [0] * self.n
        imask = [0] * self.n
        for tail, head in self.arcs:
            if tail == head:
                raise ValueError(f"self-loop {tail}->{head} not allowed")
            if not (0 <= tail < self.n and 0 <= head < self.n):
                raise ValueError(f"arc {tail}->{head} out of range for n={self.n}")
            outs[tail].append(head)
            ins[head].append(tail)
            omask[tail] |= 1 << head
            imask[head] |= 1 << tail
        object.__setattr__(self, "out_adj", tuple(tuple(sorted(a)) for a in outs))
        object.__setattr__(self, "in_adj", tuple(tuple(sorted(a)) for a in ins))
        object.__setattr__(self, "out_mask", tuple(omask))
        object.__setattr__(self, "in_mask", tuple(imask))

    @property
    def m(self) -> int:
        return len(self.arcs)

    def has_arc(self, tail: int, head: int) -> bool:
        return (tail, head) in self.arcs

    def undirected_neighbor_masks(self) -> list[int]:
        """Neighbor bitmasks of the underlying undirected graph."""
        return [self.out_mask[v] | self.in_mask[v] for v in range(self.n)]

    def is_underlying_connected(self) -> bool:
        if self.n == 1:
            return True
        nbr = self.undirected_neighbor_masks()
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            v = 0
            f = frontier
            while f:
                if f & 1:
                    nxt |= nbr[v]
                f >>= 1
                v += 1
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self.n) - 1


def make_digraph(n: int, arcs) -> Digraph:
    return Digraph(n, frozenset((int(a), int(b)) for a, b in arcs))


def parse_digraph(text: str) -> Digraph:
    """Parse the "n m" / "tail head" text format.

    Duplicate arcs are collapsed with a warning. Malformed lines raise
    ParseError naming the 1-based line number.
    """
    header: tuple[int, int] | None = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: header must be 'n m'")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(f"line {lineno}: header must be two integers") from exc
            if n < 1:
                raise ParseError(f"line {lineno}: vertex count must be positive")
            if m < 0:
                raise ParseError(f"line {lineno}: arc count must be non-negative")
            header = (n, m)
            continue
        n, m = header
        if len(arcs) + duplicates >= m:
            raise ParseError(f"line {lineno}: more than {m} arc lines")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: arc line must be 'tail head'")
        try:
            tail, head = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: arc line must be two integers") from exc
        if tail == head:
            raise ParseError(f"line {lineno}: self-loop {tail}->{head}")
        if not (0 <= tail < n and 0 <= head < n):
            raise ParseError(f"line {lineno}: vertex id out of range [0, {n})")
        if (tail, head) in seen:
            duplicates += 1
            continue
        seen.add((tail, head))
        arcs.append((tail, head))
    if header is None:
        raise ParseError("empty input: missing 'n m' header")
    n, m = header
    if len(arcs) + duplicates != m:
        raise ParseError(f"expected {m} arc lines, found {len(arcs) + duplicates}")
    if duplicates:
        warnings.warn(f"{duplicates} duplicate arc(s) collapsed", stacklevel=2)
    return Digraph(n, frozenset(arcs))


def format_digraph(g: Digraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{a} {b}" for a, b in sorted(g.arcs))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexSplit:
    """A digraph with one vertex pulled apart into a source and a sink.

    The source s keeps the out-arcs of the origin vertex, the new sink t
    receives its in-arcs. Hamiltonian s-to-t paths of the split graph are in
    bijection with Hamiltonian cycles of the original through the origin.
    """

    graph: Digraph
    s: int
    t: int
    origin: int


def split_vertex(g: Digraph, u: int) -> VertexSplit:
    if not (0 <= u < g.n):
        raise ValueError(f"vertex {u} out of range")
    t = g.n
    arcs = [(a, t) if b == u else (a, b) for a, b in g.arcs]
    split = Digraph(g.n + 1, frozenset(arcs))
    assert not split.out_adj[t], "sink acquired out-arcs"
    assert not split.in_adj[u], "source kept in-arcs"
    return VertexSplit(graph=split, s=u, t=t, origin=u)


@dataclass(frozen=True)
class IndependentPartition:
    """Vertex bipartition: yellow is independent in the underlying graph."""

    blue: frozenset[int]
    yellow: frozenset[int]


def greedy_maximal_matching(g: Digraph) -> list[tuple[int, int]]:
    """Maximal matching of the underlying undirected graph, greedy in id order."""
    nbr = g.undirected_neighbor_masks()
    used = 0
    matching = []
    for u in range(g.n):
        if used & (1 << u):
            continue
        cand = nbr[u] & ~used & ~((1 << (u + 1)) - 1)
        if cand:
            v = (cand & -cand).bit_length() - 1
            matching.append((u, v))
            used |= (1 << u) | (1 << v)
    return matching


def _popcount(x: int) -> int:
    return x.bit_count()


def mis_branch_and_bound(g: Digraph) -> int:
    """Maximum independent set of the underlying graph, as a bitmask."""
    nbr = g.undirected_neighbor_masks()
    best = 0
    best_size = -1

    def rec(remaining: int, chosen: int, size: int) -> None:
        nonlocal best, best_size
        if size + _popcount(remaining) <= best_size:
            return
        if not remaining:
            if size > best_size:
                best, best_size = chosen, size
            return
        # pick the remaining vertex with the most remaining neighbors
        pick = -1
        pick_deg = -1
        r = remaining
        while r:
            v = (r & -r).bit_length() - 1
            r &= r - 1
            deg = _popcount(nbr[v] & remaining)
            if deg > pick_deg:
                pick, pick_deg = v, deg
        if pick_deg == 0:
            # everything left is pairwise non-adjacent, take it all
            if size + _popcount(remaining) > best_size:
                best = chosen | remaining
                best_size = size + _popcount(remaining)
            return
        bit = 1 << pick
        rec(remaining & ~bit & ~nbr[pick], chosen | bit, size + 1)
        rec(remaining & ~bit, chosen, size)

    rec((1 << g.n) - 1, 0, 0)
    return best


def mis_via_matching(g: Digraph) -> int:
    """Maximum independent set found by 3-way enumeration over a maximal matching.

    Vertices left unmatched by a maximal matching are pairwise non-adjacent,
    so it suffices to try, for every matched pair, keeping either endpoint or
    neither, and then absorb all compatible unmatched vertices.
    """
    nbr = g.undirected_neighbor_masks()
    matching = greedy_maximal_matching(g)
    matched_mask = 0
    for u, v in matching:
        matched_mask |= (1 << u) | (1 << v)
    unmatched = ((1 << g.n) - 1) & ~matched_mask

    best = 0
    best_size = -1
    choices = [0] * len(matching)
    while True:
        chosen = 0
        ok = True
        for (u, v), c in zip(matching, choices):
            if c == 0:
                continue
            w = u if c == 1 else v
            if nbr[w] & chosen:
                ok = False
                break
            chosen |= 1 << w
        if ok:
            ext = chosen
            r = unmatched
            while r:
                x = (r & -r).bit_length() - 1
                r &= r - 1
                if not (nbr[x] & ext):
                    ext |= 1 << x
            if _popcount(ext) > best_size:
                best, best_size = ext, _popcount(ext)
        # next 3-ary choice vector
        i = 0
        while i < len(choices) and choices[i] == 2:
            choices[i] = 0
            i += 1
        if i == len(choices):
            break
        choices[i] += 1
    return best


def find_independent_partition(g: Digraph, engine: str = "branch_and_bound") -> IndependentPartition:
    """Split the vertex set into blue and a maximum independent yellow set."""
    if engine == "branch_and_bound":
        mask = mis_branch_and_bound(g)
    elif engine == "matching":
        mask = mis_via_matching(g)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    yellow = frozenset(v for v in range(g.n) if mask & (1 << v))
    blue = frozenset(range(g.n)) - yellow
    nbr = g.undirected_neighbor_masks()
    for v in yellow:
        assert not (nbr[v] & mask & ~(1 << v)), "yellow set not independent"
    return IndependentPartition(blue=blue, yellow=yellow)
