"""Borrowed-context transitions: states, labels, diagrams and exhaustive enumeration."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .canon import canonical_labelling
from .colimit import complement, glue, initial_pushout, is_pullback_square, is_pushout_square
from .errors import DanglingError, IncompatibleDiagrams, OverlapError
from .gts import GTS, Rule, RuleInstance, instantiate
from .hypergraph import Hypergraph, Inclusion, find_monos, fresh_namer, is_inclusion, subgraphs


@dataclass(frozen=True)
class State:
    interface: Hypergraph
    graph: Hypergraph

    def __post_init__(self):
        if not is_inclusion(self.interface, self.graph):
            raise ValueError("state interface is not a subgraph of the state graph")

    @property
    def witness(self) -> Inclusion:
        return Inclusion(self.interface, self.graph)


@dataclass(frozen=True)
class BCLabel:
    j: Hypergraph
    f: Hypergraph
    k: Hypergraph

    def __post_init__(self):
        if not (is_inclusion(self.j, self.f) and is_inclusion(self.k, self.f)):
            raise ValueError("label legs must be inclusions into F")

    @property
    def left(self) -> Inclusion:
        return Inclusion(self.j, self.f)

    @property
    def right(self) -> Inclusion:
        return Inclusion(self.k, self.f)

    def is_silent(self) -> bool:
        return self.j == self.f == self.k


@dataclass(frozen=True)
class BCDiagram:
    rule: str
    d_rule: Hypergraph  # partial match as a subgraph of the rule's left-hand side
    d: Hypergraph  # the same partial match inside G
    g: Hypergraph
    gc: Hypergraph
    c: Hypergraph
    h: Hypergraph
    j: Hypergraph
    f: Hypergraph
    k: Hypergraph
    instance: RuleInstance = field(repr=False)

    def failures(self) -> list[str]:
        """Names of the squares that do not verify (empty for a valid diagram)."""
        inst = self.instance
        checks = {
            "partial-match pushout": is_pushout_square(self.d, self.g, inst.left, self.gc),
            "borrow pushout": is_pushout_square(self.j, self.g, self.f, self.gc),
            "deletion pushout": is_pushout_square(inst.interface, inst.left, self.c, self.gc),
            "addition pushout": is_pushout_square(inst.interface, inst.right, self.c, self.h),
            "interface pullback": is_pullback_square(self.k, self.f, self.c, self.gc),
            "partial match is G ∩ L": self.g.intersection(inst.left) == self.d,
            "J -> G": is_inclusion(self.j, self.g),
            "K -> H": is_inclusion(self.k, self.h),
        }
        return [name for name, ok in checks.items() if not ok]


@dataclass(frozen=True)
class Transition:
    source: State
    label: BCLabel
    target: State
    witnesses: tuple[BCDiagram, ...] = ()

    def __post_init__(self):
        assert self.label.j == self.source.interface, "label must start at the source interface"
        assert self.label.k == self.target.interface, "label must end at the target interface"

    @property
    def witness(self) -> BCDiagram | None:
        return self.witnesses[0] if self.witnesses else None

    @property
    def rules(self) -> list[str]:
        return sorted({w.rule for w in self.witnesses})


def is_silent(t: Transition) -> bool:
    return t.label.is_silent()


def state_key(st: State) -> tuple:
    j, g = st.interface, st.graph
    key, _ = canonical_labelling(
        {v: "J" if v in j.nodes else "" for v in g.nodes},
        [(f"{e.label}|{int(eid in j.edges)}", e.tentacles) for eid, e in g.edges.items()],
    )
    return key


def transition_key(t: Transition) -> tuple:
    """Isomorphism invariant of the whole triple (G ⊇ J ⊆ F ⊇ K ⊆ H)."""
    g, h = t.source.graph, t.target.graph
    j, f, k = t.label.j, t.label.f, t.label.k

    def node(part: str, v: str) -> str:
        if part == "G" and v in j.nodes:
            part = "F"
        if part == "F" and v in k.nodes:
            part = "H"
        return f"{part}:{v}"

    colours: dict[str, str] = {}
    for part, graph in (("G", g), ("F", f), ("H", h)):
        for v in graph.nodes:
            n = node(part, v)
            colours[n] = colours.get(n, "") + part
    edges = []
    for eid, e in g.edges.items():
        edges.append((f"G|{e.label}|{int(eid in j.edges)}", tuple(node("G", v) for v in e.tentacles)))
    for eid, e in f.edges.items():
        edges.append((f"F|{e.label}|{int(eid in j.edges)}{int(eid in k.edges)}", tuple(node("F", v) for v in e.tentacles)))
    for eid, e in h.edges.items():
        edges.append((f"H|{e.label}|{int(eid in k.edges)}", tuple(node("H", v) for v in e.tentacles)))
    key, _ = canonical_labelling({n: "".join(sorted(set(c))) for n, c in colours.items()}, edges)
    return key


class BCFailure(Exception):
    """Internal: a candidate (rule, partial match) does not yield a BC diagram."""


def build_bc_diagram(
    rule: Rule,
    st: State,
    d_rule: Hypergraph,
    node_map: Mapping[str, str],
    edge_map: Mapping[str, str],
) -> BCDiagram:
    """Construct the BC diagram for a partial match ``d_rule -> G`` given by the maps.

    Raises :class:`BCFailure` naming the square that cannot be completed.
    """
    g, j = st.graph, st.interface
    inst = instantiate(rule, node_map, edge_map, g.ids())
    d = inst.image(d_rule)
    if g.intersection(inst.left) != d:
        raise BCFailure("partial match is not the pullback of G and L")
    gc = glue(d, g, inst.left)
    new_edges = set(inst.left.edges) - set(g.edges)
    new_nodes = inst.left.nodes - g.nodes
    attach = {v for e in new_edges for v in inst.left.edges[e].tentacles} & g.nodes
    outside = sorted(attach - j.nodes)
    if outside:
        raise BCFailure(f"borrow pushout: borrowed edge attaches at non-interface node {outside[0]}")
    f = gc.restrict(j.nodes | new_nodes | attach, set(j.edges) | new_edges)
    if not is_pushout_square(j, g, f, gc):
        raise BCFailure("borrow pushout")
    try:
        c = complement(inst.interface, inst.left, gc)
    except DanglingError as exc:
        raise BCFailure(f"deletion pushout: {exc}") from exc
    k = f.intersection(c)
    h = glue(inst.interface, c, inst.right)
    diagram = BCDiagram(rule.name, d_rule, d, g, gc, c, h, j, f, k, inst)
    bad = diagram.failures()
    assert not bad, bad
    return diagram


def diagram_transition(diagram: BCDiagram, source: State) -> Transition:
    return Transition(source, BCLabel(diagram.j, diagram.f, diagram.k), State(diagram.k, diagram.h), (diagram,))


def admitted_partial_match(d_rule: Hypergraph, left: Hypergraph, allow_node_only: bool) -> bool:
    return allow_node_only or d_rule == left or bool(d_rule.edges)


def bc_diagrams(
    s: GTS,
    st: State,
    allow_node_only: bool = False,
    skips: list[str] | None = None,
) -> list[BCDiagram]:
    """Every BC diagram for ``st`` (before deduplication)."""
    out = []
    for rule in s.rules:
        for d_rule in subgraphs(rule.left):
            if not admitted_partial_match(d_rule, rule.left, allow_node_only):
                continue
            for m in find_monos(d_rule, st.graph):
                try:
                    out.append(build_bc_diagram(rule, st, d_rule, m.node_map, m.edge_map))
                except BCFailure as exc:
                    if skips is not None:
                        skips.append(f"{rule.name} {sorted(m.node_map.items())} {sorted(m.edge_map.items())}: {exc}")
    return out


def dedup(transitions: list[Transition]) -> list[Transition]:
    """Merge transitions that agree up to isomorphism; keep every witness; canonical order."""
    groups: dict[tuple, Transition] = {}
    for t in transitions:
        key = transition_key(t)
        if key in groups:
            old = groups[key]
            groups[key] = Transition(old.source, old.label, old.target, old.witnesses + t.witnesses)
        else:
            groups[key] = t
    return [groups[k] for k in sorted(groups)]


def enumerate_bc_transitions(
    s: GTS,
    st: State,
    allow_node_only: bool = False,
    skips: list[str] | None = None,
) -> list[Transition]:
    return dedup([diagram_transition(d, st) for d in bc_diagrams(s, st, allow_node_only, skips)])


def compose_bc_diagrams(d1: BCDiagram, d2: BCDiagram, s: GTS) -> BCDiagram:
    """Glue the states of two diagrams with the same rule along the minimal
    interface of the first partial match and build the diagram for the union
    of both partial matches."""
    if d1.rule != d2.rule:
        raise IncompatibleDiagrams(f"different rules {d1.rule!r} and {d2.rule!r}")
    rule = s.rule(d1.rule)
    if d1.d_rule == rule.left:
        raise IncompatibleDiagrams("first partial match is the whole left-hand side")
    jmin = initial_pushout(Inclusion(d1.d_rule, rule.left)).minimal_interface
    img1 = d1.instance.image(jmin)
    img2 = d2.instance.image(jmin)
    if not is_inclusion(img1, d1.j) or not is_inclusion(img2, d2.j):
        raise IncompatibleDiagrams("minimal interface is not routed through both state interfaces")

    glue_n = {d2.instance.node_map[v]: d1.instance.node_map[v] for v in jmin.nodes}
    glue_e = {d2.instance.edge_map[e]: d1.instance.edge_map[e] for e in jmin.edges}
    fresh = fresh_namer(d1.g.ids() | d1.j.ids())
    rn = {v: glue_n.get(v) or fresh(v) for v in sorted(d2.g.nodes)}
    re_ = {e: glue_e.get(e) or fresh(e) for e in sorted(d2.g.edges)}
    g2 = d2.g.rename(rn, re_)
    j2 = d2.j.rename(rn, re_)
    try:
        gbar = glue(img1, d1.g, g2)
        jbar = glue(img1, d1.j, j2)
    except OverlapError as exc:
        raise IncompatibleDiagrams(str(exc)) from exc

    nmap: dict[str, str] = {}
    emap: dict[str, str] = {}
    for d, inst, n_ren, e_ren in ((d1, d1.instance, {}, {}), (d2, d2.instance, rn, re_)):
        for v in d.d_rule.nodes:
            img = inst.node_map[v]
            img = n_ren.get(img, img)
            if nmap.setdefault(v, img) != img:
                raise IncompatibleDiagrams(f"partial matches disagree on node {v!r}")
        for e in d.d_rule.edges:
            img = inst.edge_map[e]
            img = e_ren.get(img, img)
            if emap.setdefault(e, img) != img:
                raise IncompatibleDiagrams(f"partial matches disagree on edge {e!r}")
    if len(set(nmap.values())) != len(nmap) or len(set(emap.values())) != len(emap):
        raise IncompatibleDiagrams("combined partial match is not injective")
    dbar = d1.d_rule.union(d2.d_rule)
    try:
        return build_bc_diagram(rule, State(jbar, gbar), dbar, nmap, emap)
    except BCFailure as exc:
        raise IncompatibleDiagrams(str(exc)) from exc
