"""Canonical labelling of node-coloured, edge-labelled hypergraphs.

Individualisation/refinement: colour refinement to an equitable partition,
then branch on the first non-singleton cell and keep the lexicographically
smallest leaf encoding. Cells are pruned with transposition automorphisms,
which is enough for the twin-heavy graphs produced by rewriting.
"""
from __future__ import annotations

from typing import Hashable, Sequence

Key = tuple


def _refine(col: dict[str, int], inc: dict[str, list[tuple[str, int, tuple[str, ...]]]]) -> dict[str, int]:
    while True:
        sig = {
            v: (col[v], tuple(sorted((lab, pos, tuple(col[u] for u in tent)) for lab, pos, tent in inc[v])))
            for v in col
        }
        rank = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new = {v: rank[sig[v]] for v in col}
        if len(rank) == len(set(col.values())):
            return new
        col = new


def _swap_is_automorphism(a: str, b: str, edge_set: list[tuple[str, tuple[str, ...]]]) -> bool:
    def sw(x: str) -> str:
        return b if x == a else a if x == b else x

    swapped = sorted((lab, tuple(sw(x) for x in tent)) for lab, tent in edge_set)
    return swapped == edge_set


def canonical_labelling(
    colours: dict[str, Hashable],
    edges: Sequence[tuple[str, tuple[str, ...]]],
) -> tuple[Key, list[str]]:
    """Return ``(key, order)``: equal keys iff the structures are isomorphic.

    ``colours`` maps every node to a colour (compared via ``str``); ``edges``
    lists ``(label, tentacles)`` pairs. ``order`` is a node order realising
    the key.
    """
    nodes = sorted(colours)
    base = {v: str(colours[v]) for v in nodes}
    ranks = {c: i for i, c in enumerate(sorted(set(base.values())))}
    inc: dict[str, list[tuple[str, int, tuple[str, ...]]]] = {v: [] for v in nodes}
    for lab, tent in edges:
        for pos, v in enumerate(tent):
            inc[v].append((lab, pos, tent))
    edge_set = sorted((lab, tuple(tent)) for lab, tent in edges)

    best: list = [None, None]

    def leaf(col: dict[str, int]) -> None:
        order = sorted(nodes, key=lambda v: col[v])
        pos = {v: i for i, v in enumerate(order)}
        key = (
            tuple(ranks[base[v]] for v in order),
            tuple(sorted((lab, tuple(pos[u] for u in tent)) for lab, tent in edge_set)),
        )
        if best[0] is None or key < best[0]:
            best[0], best[1] = key, order

    def search(col: dict[str, int]) -> None:
        col = _refine(col, inc)
        cells: dict[int, list[str]] = {}
        for v in nodes:
            cells.setdefault(col[v], []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            leaf(col)
            return
        tried: list[str] = []
        for v in target:
            if any(_swap_is_automorphism(v, t, edge_set) for t in tried):
                continue
            tried.append(v)
            nxt = {x: 2 * c + 1 for x, c in col.items()}
            nxt[v] = 2 * col[v]
            search(nxt)

    if not nodes:
        return ((), tuple(edge_set)), []
    search({v: ranks[base[v]] for v in nodes})
    return best[0], best[1]
