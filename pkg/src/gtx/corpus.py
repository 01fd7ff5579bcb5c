"""Shipped example systems and deterministic generators of small states."""
from __future__ import annotations

import itertools
from importlib import resources

from .bclts import State, state_key
from .gts import GTS
from .hypergraph import Edge, Hypergraph, degree, iso_canonical
from .spec_format import SpecDocument, parse_spec

SHIPPED = ("triad", "ccs", "lafont")


def shipped_text(name: str) -> str:
    return resources.files("gtx").joinpath("data", f"{name}.gts").read_text(encoding="utf-8")


def load_shipped(name: str) -> SpecDocument:
    return parse_spec(shipped_text(name))


def lhs_labels(s: GTS) -> dict[str, int]:
    used = {e.label for r in s.rules for e in r.left.edges.values()}
    return {a: n for a, n in s.alphabet.items() if a in used}


def _is_connected(g: Hypergraph) -> bool:
    if not g.nodes:
        return True
    seen, todo = set(), [min(g.nodes)]
    while todo:
        v = todo.pop()
        if v in seen:
            continue
        seen.add(v)
        for e in g.incident_edges(v):
            todo.extend(g.edges[e].tentacles)
    return seen == g.nodes


def generated_graphs(labels: dict[str, int], max_edges: int, connected: bool = False) -> list[Hypergraph]:
    """Graphs with 1..max_edges edges and no isolated node, one per isomorphism class.

    No edge visits a node twice; with ``connected`` only connected graphs are kept.
    """
    found: dict[Hypergraph, None] = {}
    frontier = [Hypergraph()]
    for k in range(max_edges):
        nxt = []
        for g in frontier:
            n = len(g.nodes)
            for lab, ar in sorted(labels.items()):
                # each tentacle picks an existing node or one of ``ar`` new ones
                pool = [f"n{i}" for i in range(n + ar)]
                for tent in itertools.permutations(pool, ar):
                    new = [v for v in tent if v not in g.nodes]
                    if new != [f"n{i}" for i in range(n, n + len(new))]:
                        continue  # fresh nodes appear in order
                    h = Hypergraph(g.nodes | set(tent), {**g.edges, f"e{k}": Edge(lab, tent)})
                    c = iso_canonical(h)
                    if c not in found:
                        found[c] = None
                        nxt.append(c)
        frontier = nxt
    out = [g for g in found if g.edges and (not connected or _is_connected(g))]
    return sorted(out, key=lambda g: (len(g.edges), len(g.nodes), repr(g)))


def interfaces(g: Hypergraph, lafont: bool = False) -> list[Hypergraph]:
    """Empty, single-node and all-node interfaces (free nodes only for ``lafont``)."""
    pool = sorted(v for v in g.nodes if not lafont or degree(g, v) == 1)
    cands = [set()] + [{v} for v in pool] + [set(pool)]
    return [g.restrict(c, ()) for c in cands]


def dedup_states(states: list[State]) -> list[State]:
    seen: dict[tuple, State] = {}
    for st in states:
        seen.setdefault(state_key(st), st)
    return list(seen.values())


def generated_states(s: GTS, max_edges: int = 2, lafont: bool = False, connected: bool = False) -> list[State]:
    graphs = generated_graphs(lhs_labels(s), max_edges, connected)
    if lafont:
        graphs = [g for g in graphs if all(degree(g, v) <= 2 for v in g.nodes)]
    return dedup_states([State(j, g) for g in graphs for j in interfaces(g, lafont)])


def corpus(name: str, max_edges: int = 2) -> tuple[GTS, list[State]]:
    """A shipped system with its generated states plus the states shipped in its file."""
    doc = load_shipped(name)
    s = doc.gts()
    lafont = name in ("lafont", "ccs")
    states = generated_states(s, max_edges, lafont=lafont) + list(doc.states.values())
    return s, dedup_states(states)
