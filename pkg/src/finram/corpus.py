"""Deterministic corpora of small structures, enumerated up to
isomorphism by the package's own isomorphism test.

Families: chains (sizes 1..n), graphs and tournaments (sizes 0..n, one
representative per isomorphism class, edge/arc sets in lexicographic
order so the chosen representatives are reproducible), and ordered
graphs (every edge set over the natural order; orders are rigid, so
these are pairwise non-isomorphic already).
"""

from __future__ import annotations

import itertools

from .errors import InputError, check_guard
from .structures import (
    GRAPH_SIG,
    TOURNAMENT_SIG,
    Structure,
    are_isomorphic,
    chain,
    graph_from_edges,
)
from .expansion import _with_order

FAMILIES = ("chains", "graphs", "tournaments", "ordered-graphs")


def _iso_filter(candidates: list[Structure]) -> list[Structure]:
    kept: list[Structure] = []
    for s in candidates:
        if not any(are_isomorphic(s, t)[0] for t in kept):
            kept.append(s)
    return kept


def graphs_up_to(n: int) -> list[Structure]:
    """One representative per isomorphism class, sizes 0..n."""
    out: list[Structure] = []
    for size in range(n + 1):
        pairs = list(itertools.combinations(range(size), 2))
        check_guard(2 ** len(pairs), f"graph edge sets on {size} vertices")
        candidates = []
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = [p for p, b in zip(pairs, bits) if b]
            candidates.append(graph_from_edges(size, edges))
        out.extend(_iso_filter(candidates))
    return out


def tournaments_up_to(n: int) -> list[Structure]:
    out: list[Structure] = []
    for size in range(n + 1):
        pairs = list(itertools.combinations(range(size), 2))
        check_guard(2 ** len(pairs), f"tournament orientations on {size} vertices")
        candidates = []
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            arcs = [(i, j) if b else (j, i) for (i, j), b in zip(pairs, bits)]
            candidates.append(Structure.make(TOURNAMENT_SIG, size, {"->": arcs}))
        out.extend(_iso_filter(candidates))
    return out


def chains_up_to(n: int) -> list[Structure]:
    return [chain(i) for i in range(1, n + 1)]


def ordered_graphs_up_to(n: int) -> list[Structure]:
    out: list[Structure] = []
    for size in range(n + 1):
        pairs = list(itertools.combinations(range(size), 2))
        check_guard(2 ** len(pairs), f"ordered graphs on {size} vertices")
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = [p for p, b in zip(pairs, bits) if b]
            out.append(_with_order(graph_from_edges(size, edges), range(size)))
    return out


def generate_family(family: str, size: int) -> list[tuple[str, Structure]]:
    """Named structures of the family, deterministic order and names."""
    if family == "chains":
        structs = chains_up_to(size)
        return [(f"chain{s.size}", s) for s in structs]
    if family == "graphs":
        structs = graphs_up_to(size)
    elif family == "tournaments":
        structs = tournaments_up_to(size)
    elif family == "ordered-graphs":
        structs = ordered_graphs_up_to(size)
    else:
        raise InputError(f"unknown family {family!r}; known: {FAMILIES}")
    named = []
    counter: dict[int, int] = {}
    for s in structs:
        i = counter.get(s.size, 0)
        counter[s.size] = i + 1
        prefix = {"graphs": "g", "tournaments": "t", "ordered-graphs": "og"}[family]
        named.append((f"{prefix}{s.size}_{i}", s))
    return named


# Named pools accepted by the verify runner and the CLI.
BUILTIN_POOLS = {
    "chains_le4": lambda: generate_family("chains", 4),
    "chains_le6": lambda: generate_family("chains", 6),
    "graphs_le2": lambda: generate_family("graphs", 2),
    "graphs_le3": lambda: generate_family("graphs", 3),
    "graphs_le4": lambda: generate_family("graphs", 4),
    "tournaments_le3": lambda: generate_family("tournaments", 3),
    "ordered_graphs_le3": lambda: generate_family("ordered-graphs", 3),
}
