"""Pullbacks, pushouts, pushout complements and initial pushouts of inclusions.

All constructions are set-theoretic (intersection, union, difference) on
shared identifiers, and each result is re-checked before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .errors import DanglingError, OverlapError
from .hypergraph import Hypergraph, Inclusion, Morphism, fresh_namer, is_inclusion, subgraphs


@dataclass(frozen=True)
class Span:
    left: Inclusion  # G0 -> G1
    right: Inclusion  # G0 -> G2

    def __post_init__(self):
        if self.left.sub != self.right.sub:
            raise ValueError("span legs must share their source")

    @classmethod
    def of(cls, g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> Span:
        return cls(Inclusion(g0, g1), Inclusion(g0, g2))


@dataclass(frozen=True)
class Cospan:
    left: Inclusion  # G1 -> G3
    right: Inclusion  # G2 -> G3

    def __post_init__(self):
        if self.left.sup != self.right.sup:
            raise ValueError("cospan legs must share their target")

    @classmethod
    def of(cls, g1: Hypergraph, g3: Hypergraph, g2: Hypergraph) -> Cospan:
        return cls(Inclusion(g1, g3), Inclusion(g2, g3))


def is_pushout_square(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph, g3: Hypergraph) -> bool:
    """Square of inclusions g0->g1, g0->g2, g1->g3, g2->g3 is a pushout.

    For monos in hypergraphs this is: g3 is the union and g0 the intersection.
    """
    return g1.union(g2) == g3 and g1.intersection(g2) == g0 and _included(g0, g1, g2) and _included(g1, g3) and _included(g2, g3)


def is_pullback_square(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph, g3: Hypergraph) -> bool:
    return g1.intersection(g2) == g0 and _included(g1, g3) and _included(g2, g3)


def _included(sub: Hypergraph, *sups: Hypergraph) -> bool:
    return all(is_inclusion(sub, s) for s in sups)


def non_overlapping(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> bool:
    return set(g1.edges) & set(g2.edges) <= set(g0.edges) and g1.nodes & g2.nodes <= g0.nodes


def intersection(c: Cospan) -> Span:
    g1, g2 = c.left.sub, c.right.sub
    g0 = g1.intersection(g2)
    assert is_pullback_square(g0, g1, g2, c.left.sup)
    return Span(Inclusion(g0, g1), Inclusion(g0, g2))


def glue(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> Hypergraph:
    """Pushout object of ``g1 <- g0 -> g2``; raises :class:`OverlapError`."""
    if not non_overlapping(g0, g1, g2):
        clash = sorted((set(g1.edges) & set(g2.edges) - set(g0.edges)) | (g1.nodes & g2.nodes - g0.nodes))
        raise OverlapError(f"inclusions overlap outside the common part: {', '.join(clash)}")
    for e in set(g1.edges) & set(g2.edges):
        if g1.edges[e] != g2.edges[e]:
            raise OverlapError(f"edge {e!r} differs between the two graphs")
    out = g1.union(g2)
    assert is_pushout_square(g0, g1, g2, out)
    return out


def pushout(s: Span) -> Cospan:
    g = glue(s.left.sub, s.left.sup, s.right.sup)
    return Cospan(Inclusion(s.left.sup, g), Inclusion(s.right.sup, g))


def check_dangling(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> None:
    """Raise :class:`DanglingError` if removing g1 - g0 from g2 leaves a dangling edge."""
    removed = g1.nodes - g0.nodes
    for eid in sorted(set(g2.edges) - set(g1.edges)):
        for v in g2.edges[eid].tentacles:
            if v in removed:
                raise DanglingError(v, eid)


def complement(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> Hypergraph:
    """Pushout complement object D of ``g0 -> g1 -> g2``."""
    check_dangling(g0, g1, g2)
    dn, de = g1.without(g0)
    d = g2.restrict(g2.nodes - dn, set(g2.edges) - de)
    assert is_pushout_square(g0, g1, d, g2)
    return d


def pushout_complement(g0_to_g1: Inclusion, g1_to_g2: Inclusion) -> tuple[Inclusion, Inclusion]:
    """Return ``(D -> G2, G0 -> D)``."""
    if g0_to_g1.sup != g1_to_g2.sub:
        raise ValueError("inclusions are not composable")
    g0, g1, g2 = g0_to_g1.sub, g0_to_g1.sup, g1_to_g2.sup
    d = complement(g0, g1, g2)
    return Inclusion(d, g2), Inclusion(g0, d)


def complement_candidates(g0: Hypergraph, g1: Hypergraph, g2: Hypergraph) -> list[Hypergraph]:
    """Brute force: every subgraph D of g2 completing the square to a pushout."""
    return [d for d in subgraphs(g2) if is_pushout_square(g0, g1, d, g2)]


class InitialPushout(NamedTuple):
    complement: Inclusion  # D^ -> L
    minimal_interface: Hypergraph  # J, with J -> D and J -> D^


def complement_in(d: Hypergraph, l: Hypergraph) -> Hypergraph:
    """Smallest subgraph of ``l`` whose union with ``d`` is ``l``."""
    edges = set(l.edges) - set(d.edges)
    return l.sub_from_edges(edges, l.nodes - d.nodes)


def initial_pushout(d_in_l: Inclusion, check_minimal: bool = True) -> InitialPushout:
    d, l = d_in_l.sub, d_in_l.sup
    if d == l:
        raise ValueError("initial pushout needs a proper subgraph")
    dh = complement_in(d, l)
    j = d.intersection(dh)
    assert is_pushout_square(j, d, dh, l)
    if check_minimal:
        assert not any(
            s != dh and is_pushout_square(d.intersection(s), d, s, l) for s in subgraphs(dh)
        ), "complement is not minimal"
    return InitialPushout(Inclusion(dh, l), j)


def rename_apart(g: Hypergraph, avoid: Hypergraph, keep: Hypergraph) -> tuple[Hypergraph, Morphism]:
    """Isomorphic copy of ``g`` whose identifiers outside ``keep`` avoid those of ``avoid``."""
    if not keep.nodes <= g.nodes or not set(keep.edges) <= set(g.edges):
        raise ValueError("keep must be a subgraph of g")
    fresh = fresh_namer(avoid.ids() | keep.ids())
    nmap = {v: v if v in keep.nodes else fresh(v) for v in sorted(g.nodes)}
    emap = {e: e if e in keep.edges else fresh(e) for e in sorted(g.edges)}
    copy = g.rename(nmap, emap)
    return copy, Morphism(g, copy, nmap, emap)
