"""Shared graph builders for the test suite."""

import random

from hamkit.graph import Digraph, make_digraph


def directed_cycle(n: int) -> Digraph:
    return make_digraph(n, [(i, (i + 1) % n) for i in range(n)])


def directed_path(n: int) -> Digraph:
    return make_digraph(n, [(i, i + 1) for i in range(n - 1)])


def out_star(n: int) -> Digraph:
    return make_digraph(n, [(0, v) for v in range(1, n)])


def complete_digraph(n: int) -> Digraph:
    return make_digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def acyclic_tournament(n: int) -> Digraph:
    return make_digraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def random_digraph(rnd: random.Random, n: int, density: float) -> Digraph:
    arcs = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rnd.random() < density
    ]
    return make_digraph(n, arcs)


def random_out_degree_graph(rnd: random.Random, n: int, d: int) -> Digraph:
    """Every vertex gets exactly d out-neighbors (or fewer when n-1 < d)."""
    arcs = []
    for u in range(n):
        others = [v for v in range(n) if v != u]
        for v in rnd.sample(others, min(d, len(others))):
            arcs.append((u, v))
    return make_digraph(n, arcs)
