"""Rules, graph transformation systems and DPO rewriting along injective matches."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .colimit import complement, glue, is_pushout_square
from .errors import DanglingError, MatchError
from .hypergraph import (
    Hypergraph,
    LabelAlphabet,
    Morphism,
    find_monos,
    fresh_namer,
    is_inclusion,
    validate,
)


@dataclass(frozen=True)
class Rule:
    name: str
    left: Hypergraph
    interface: Hypergraph
    right: Hypergraph


@dataclass(frozen=True)
class GTS:
    alphabet: Mapping[str, int]
    rules: tuple[Rule, ...] = ()

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(f"unknown rule {name!r}")


def validate_rule(r: Rule, alphabet: LabelAlphabet) -> list[str]:
    out = []
    for part, g in (("left", r.left), ("interface", r.interface), ("right", r.right)):
        out += [f"{r.name}.{part}: {msg}" for msg in validate(g, alphabet)]
    if not is_inclusion(r.interface, r.left):
        out.append(f"{r.name}: interface is not included in left")
    if not is_inclusion(r.interface, r.right):
        out.append(f"{r.name}: interface is not included in right")
    shared_e = set(r.left.edges) & set(r.right.edges) - set(r.interface.edges)
    shared_n = r.left.nodes & r.right.nodes - r.interface.nodes
    for x in sorted(shared_e | shared_n):
        out.append(f"{r.name}: {x!r} occurs in left and right but not in interface")
    return out


def validate_gts(s: GTS) -> list[str]:
    out = []
    names = [r.name for r in s.rules]
    for n in sorted({n for n in names if names.count(n) > 1}):
        out.append(f"duplicate rule name {n!r}")
    for r in s.rules:
        out += validate_rule(r, s.alphabet)
    return out


@dataclass(frozen=True)
class RuleInstance:
    """A rule renamed into some host namespace.

    ``node_map``/``edge_map`` send identifiers of the rule's left and right
    graphs to their instance identifiers.
    """

    rule: Rule
    left: Hypergraph
    interface: Hypergraph
    right: Hypergraph
    node_map: Mapping[str, str] = field(repr=False)
    edge_map: Mapping[str, str] = field(repr=False)

    def image(self, g: Hypergraph) -> Hypergraph:
        """Instance image of a subgraph of the rule's left or right graph."""
        return g.rename(self.node_map, self.edge_map)


def instantiate(rule: Rule, fixed_nodes: Mapping[str, str], fixed_edges: Mapping[str, str], avoid: set[str]) -> RuleInstance:
    """Rename ``rule`` so that pinned left-hand identifiers take the given values
    and every other identifier is fresh with respect to ``avoid``."""
    fresh = fresh_namer(avoid | set(fixed_nodes.values()) | set(fixed_edges.values()))
    nmap = dict(fixed_nodes)
    emap = dict(fixed_edges)
    for v in sorted(rule.left.nodes | rule.right.nodes):
        if v not in nmap:
            nmap[v] = fresh(v)
    for e in sorted(set(rule.left.edges) | set(rule.right.edges)):
        if e not in emap:
            emap[e] = fresh(e)
    return RuleInstance(
        rule,
        rule.left.rename(nmap, emap),
        rule.interface.rename(nmap, emap),
        rule.right.rename(nmap, emap),
        nmap,
        emap,
    )


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    match: Morphism
    intermediate: Hypergraph
    result: Hypergraph
    instance: RuleInstance = field(repr=False)

    def verify(self, host: Hypergraph) -> bool:
        inst = self.instance
        return is_pushout_square(inst.interface, inst.left, self.intermediate, host) and is_pushout_square(
            inst.interface, inst.right, self.intermediate, self.result
        )


def rewrite(s: GTS, a: Hypergraph, rule: str, m: Morphism) -> RewriteStep:
    r = s.rule(rule)
    if m.source != r.left or m.target != a:
        raise MatchError("match must go from the rule's left-hand side into the host")
    if not m.is_injective():
        raise MatchError("match is not injective")
    inst = instantiate(r, {v: m.node_map[v] for v in r.left.nodes}, {e: m.edge_map[e] for e in r.left.edges}, a.ids())
    d = complement(inst.interface, inst.left, a)
    b = glue(inst.interface, d, inst.right)
    step = RewriteStep(rule, m, d, b, inst)
    assert step.verify(a)
    return step


def enumerate_rewrites(s: GTS, a: Hypergraph) -> list[RewriteStep]:
    out = []
    for r in s.rules:
        for m in find_monos(r.left, a):
            try:
                out.append(rewrite(s, a, r.name, m))
            except DanglingError:
                continue
    return out
