"""Labelled hypergraphs, morphisms and inclusions."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .canon import canonical_labelling

LabelAlphabet = Mapping[str, int]


@dataclass(frozen=True, order=True)
class Edge:
    label: str
    tentacles: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.label}({' '.join(self.tentacles)})"


class Hypergraph:
    """Immutable hypergraph with opaque string identifiers.

    The constructor does not enforce that tentacles are nodes; use
    :func:`validate` for that. All operations in this package only ever
    produce valid graphs.
    """

    __slots__ = ("nodes", "edges", "_hash")

    def __init__(self, nodes: Iterable[str] = (), edges: Mapping[str, Edge | tuple] | None = None):
        es = {}
        for eid, e in (edges or {}).items():
            if not isinstance(e, Edge):
                label, tent = e
                e = Edge(label, tuple(tent))
            es[eid] = e
        object.__setattr__(self, "nodes", frozenset(nodes))
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(es.items()))))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Hypergraph is immutable")

    @classmethod
    def of(cls, *edges: str, nodes: Iterable[str] = ()) -> Hypergraph:
        """Shorthand: ``Hypergraph.of("e:α(u v)", "g:γ(v)", nodes=["z"])``."""
        es: dict[str, Edge] = {}
        ns = set(nodes)
        for spec in edges:
            eid, rest = spec.split(":", 1)
            label, args = rest.rstrip(")").split("(", 1)
            tent = tuple(args.split())
            es[eid.strip()] = Edge(label.strip(), tent)
            ns.update(tent)
        return cls(ns, es)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.nodes == other.nodes and dict(self.edges) == dict(other.edges)

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.nodes, tuple(self.edges.items()))))
        return self._hash

    def __repr__(self) -> str:
        es = ", ".join(f"{k}:{v}" for k, v in self.edges.items())
        return f"Hypergraph(nodes=[{' '.join(sorted(self.nodes))}], edges=[{es}])"

    def __len__(self) -> int:
        return len(self.nodes) + len(self.edges)

    def is_empty(self) -> bool:
        return not self.nodes and not self.edges

    def label(self, e: str) -> str:
        return self.edges[e].label

    def tentacles(self, e: str) -> tuple[str, ...]:
        return self.edges[e].tentacles

    def incident_edges(self, v: str) -> list[str]:
        return [eid for eid, e in self.edges.items() if v in e.tentacles]

    def ids(self) -> set[str]:
        return set(self.nodes) | set(self.edges)

    def restrict(self, nodes: Iterable[str], edges: Iterable[str]) -> Hypergraph:
        edges = set(edges)
        return Hypergraph(nodes, {e: self.edges[e] for e in edges})

    def sub_from_edges(self, edges: Iterable[str], extra_nodes: Iterable[str] = ()) -> Hypergraph:
        """The subgraph spanned by ``edges`` and their incident nodes, plus ``extra_nodes``."""
        edges = set(edges)
        ns = set(extra_nodes)
        for e in edges:
            ns.update(self.edges[e].tentacles)
        return self.restrict(ns, edges)

    def union(self, other: Hypergraph) -> Hypergraph:
        es = dict(other.edges)
        es.update(self.edges)
        return Hypergraph(self.nodes | other.nodes, es)

    def intersection(self, other: Hypergraph) -> Hypergraph:
        shared = set(self.edges) & set(other.edges)
        return Hypergraph(self.nodes & other.nodes, {e: other.edges[e] for e in shared})

    def without(self, other: Hypergraph) -> tuple[set[str], set[str]]:
        """Node and edge ids of ``self`` that are not in ``other``."""
        return set(self.nodes) - other.nodes, set(self.edges) - set(other.edges)

    def rename(self, node_map: Mapping[str, str], edge_map: Mapping[str, str]) -> Hypergraph:
        """Apply identifier maps (missing keys map to themselves)."""
        nm = lambda v: node_map.get(v, v)  # noqa: E731
        return Hypergraph(
            (nm(v) for v in self.nodes),
            {edge_map.get(e, e): Edge(x.label, tuple(nm(v) for v in x.tentacles)) for e, x in self.edges.items()},
        )


EMPTY = Hypergraph()


def is_inclusion(sub: Hypergraph, sup: Hypergraph) -> bool:
    if not sub.nodes <= sup.nodes:
        return False
    return all(sup.edges.get(e) == x for e, x in sub.edges.items())


def validate(g: Hypergraph, alphabet: LabelAlphabet) -> list[str]:
    """Return a list of violations (empty when the graph is valid)."""
    out = []
    for eid, e in g.edges.items():
        if e.label not in alphabet:
            out.append(f"unknown label {e.label!r} at {eid}")
        elif len(e.tentacles) != alphabet[e.label]:
            out.append(f"arity mismatch at {eid}")
        for v in e.tentacles:
            if v not in g.nodes:
                out.append(f"tentacle node {v!r} of {eid} is not a node")
    if set(g.nodes) & set(g.edges):
        for x in sorted(set(g.nodes) & set(g.edges)):
            out.append(f"identifier {x!r} used for both a node and an edge")
    return out


def validate_alphabet(alphabet: LabelAlphabet) -> list[str]:
    return [f"negative arity for {lab!r}" for lab, ar in alphabet.items() if ar < 0]


def degree(g: Hypergraph, v: str) -> int:
    if v not in g.nodes:
        raise KeyError(f"unknown node {v!r}")
    return sum(1 for e in g.edges.values() if v in e.tentacles)


@dataclass(frozen=True)
class Morphism:
    source: Hypergraph
    target: Hypergraph
    node_map: Mapping[str, str]
    edge_map: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "node_map", MappingProxyType(dict(self.node_map)))
        object.__setattr__(self, "edge_map", MappingProxyType(dict(self.edge_map)))
        assert set(self.node_map) == set(self.source.nodes), "node map must be total"
        assert set(self.edge_map) == set(self.source.edges), "edge map must be total"
        for e, x in self.source.edges.items():
            y = self.target.edges[self.edge_map[e]]
            assert y.label == x.label, f"label not preserved at {e}"
            assert y.tentacles == tuple(self.node_map[v] for v in x.tentacles), f"tentacles do not commute at {e}"
        for v in self.node_map.values():
            assert v in self.target.nodes

    def is_injective(self) -> bool:
        return len(set(self.node_map.values())) == len(self.node_map) and len(set(self.edge_map.values())) == len(
            self.edge_map
        )

    def image(self) -> Hypergraph:
        return self.target.restrict(self.node_map.values(), self.edge_map.values())

    def apply(self, g: Hypergraph) -> Hypergraph:
        """Image of a subgraph ``g`` of the source."""
        return Hypergraph(
            (self.node_map[v] for v in g.nodes),
            {self.edge_map[e]: self.target.edges[self.edge_map[e]] for e in g.edges},
        )

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.node_map.items())), tuple(sorted(self.edge_map.items())))

    @classmethod
    def inclusion(cls, sub: Hypergraph, sup: Hypergraph) -> Morphism:
        return cls(sub, sup, {v: v for v in sub.nodes}, {e: e for e in sub.edges})


@dataclass(frozen=True)
class Inclusion:
    sub: Hypergraph
    sup: Hypergraph

    def __post_init__(self):
        if not is_inclusion(self.sub, self.sup):
            raise ValueError("not an inclusion")

    def as_morphism(self) -> Morphism:
        return Morphism.inclusion(self.sub, self.sup)


def _homs(
    pattern: Hypergraph,
    host: Hypergraph,
    injective: bool,
    fixed: Mapping[str, str] | None = None,
) -> Iterator[tuple[dict[str, str], dict[str, str]]]:
    p_edges = sorted(pattern.edges)
    by_label: dict[str, list[str]] = {}
    for eid, e in host.edges.items():
        by_label.setdefault(e.label, []).append(eid)
    p_nodes = sorted(pattern.nodes)
    host_nodes = sorted(host.nodes)
    nmap: dict[str, str] = dict(fixed or {})
    used_nodes = set(nmap.values())
    emap: dict[str, str] = {}
    used_edges: set[str] = set()

    def edge_step(i: int):
        if i == len(p_edges):
            yield from node_step(0)
            return
        pe = p_edges[i]
        pt = pattern.edges[pe].tentacles
        for he in by_label.get(pattern.edges[pe].label, ()):
            if injective and he in used_edges:
                continue
            ht = host.edges[he].tentacles
            added = []
            ok = True
            for pv, hv in zip(pt, ht):
                cur = nmap.get(pv)
                if cur is None:
                    if injective and hv in used_nodes:
                        ok = False
                        break
                    nmap[pv] = hv
                    used_nodes.add(hv)
                    added.append(pv)
                elif cur != hv:
                    ok = False
                    break
            if ok:
                emap[pe] = he
                used_edges.add(he)
                yield from edge_step(i + 1)
                del emap[pe]
                used_edges.discard(he)
            for pv in added:
                used_nodes.discard(nmap.pop(pv))

    def node_step(j: int):
        while j < len(p_nodes) and p_nodes[j] in nmap:
            j += 1
        if j == len(p_nodes):
            yield dict(nmap), dict(emap)
            return
        pv = p_nodes[j]
        for hv in host_nodes:
            if injective and hv in used_nodes:
                continue
            nmap[pv] = hv
            used_nodes.add(hv)
            yield from node_step(j + 1)
            del nmap[pv]
            used_nodes.discard(hv)

    yield from edge_step(0)


def find_monos(pattern: Hypergraph, host: Hypergraph, fixed: Mapping[str, str] | None = None) -> list[Morphism]:
    """All injective morphisms ``pattern -> host``, deterministically ordered.

    ``fixed`` optionally pins some pattern nodes to host nodes.
    """
    out = [Morphism(pattern, host, n, e) for n, e in _homs(pattern, host, True, fixed)]
    out.sort(key=Morphism.sort_key)
    return out


def find_homs(pattern: Hypergraph, host: Hypergraph) -> list[Morphism]:
    """All (not necessarily injective) morphisms; used by the colimit oracles."""
    out = [Morphism(pattern, host, n, e) for n, e in _homs(pattern, host, False)]
    out.sort(key=Morphism.sort_key)
    return out


def embeds(pattern: Hypergraph, host: Hypergraph) -> bool:
    return next(_homs(pattern, host, True), None) is not None


def canonical_key(g: Hypergraph, node_colour: Mapping[str, str] | None = None) -> tuple:
    node_colour = node_colour or {}
    key, _ = canonical_labelling(
        {v: node_colour.get(v, "") for v in g.nodes},
        [(e.label, e.tentacles) for e in g.edges.values()],
    )
    return key


def iso_canonical(g: Hypergraph) -> Hypergraph:
    """Isomorphic copy with identifiers ``n0..`` and ``e0..``; equal iff isomorphic."""
    (_, edges), order = canonical_labelling(
        {v: "" for v in g.nodes}, [(e.label, e.tentacles) for e in g.edges.values()]
    )
    return Hypergraph(
        (f"n{i}" for i in range(len(order))),
        {f"e{k}": Edge(lab, tuple(f"n{i}" for i in tent)) for k, (lab, tent) in enumerate(edges)},
    )


def is_isomorphic(g: Hypergraph, h: Hypergraph) -> bool:
    return iso_canonical(g) == iso_canonical(h)


def subgraphs(g: Hypergraph) -> list[Hypergraph]:
    """All subgraphs: every edge subset with every admissible superset of its incident nodes."""
    out = []
    edge_ids = sorted(g.edges)
    for r in range(len(edge_ids) + 1):
        for es in itertools.combinations(edge_ids, r):
            base = g.sub_from_edges(es)
            rest = sorted(g.nodes - base.nodes)
            for k in range(len(rest) + 1):
                for extra in itertools.combinations(rest, k):
                    out.append(g.restrict(base.nodes | set(extra), es))
    return out


def subgraphs_between(lower: Hypergraph, upper: Hypergraph, max_extra: int | None = None) -> list[Hypergraph]:
    """Subgraphs ``S`` with ``lower <= S <= upper`` adding at most ``max_extra`` edges+nodes."""
    free_edges = sorted(set(upper.edges) - set(lower.edges))
    out = []
    limit = len(free_edges) if max_extra is None else min(max_extra, len(free_edges))
    for r in range(limit + 1):
        for es in itertools.combinations(free_edges, r):
            base = upper.sub_from_edges(set(lower.edges) | set(es), lower.nodes)
            rest = sorted(upper.nodes - base.nodes)
            budget = len(rest) if max_extra is None else max_extra - r
            for k in range(min(budget, len(rest)) + 1):
                for extra in itertools.combinations(rest, k):
                    out.append(upper.restrict(base.nodes | set(extra), base.edges))
    return out


def fresh_namer(taken: Iterable[str]):
    """Return ``fresh(base) -> str`` giving deterministic ids not in ``taken``."""
    used = set(taken)

    def fresh(base: str) -> str:
        name = base
        k = 0
        while name in used:
            k += 1
            name = f"{base}_{k}"
        used.add(name)
        return name

    return fresh


def is_simply_wired(g: Hypergraph) -> bool:
    return all(degree(g, v) <= 2 for v in g.nodes)
