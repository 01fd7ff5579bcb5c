"""Active pairs, admissible rules and the composition of interactions.

A transition that borrows part of a left-hand side can be paired with a
transition that borrows the complementary part. When one rule explains both,
gluing the two states along the minimal interface yields a state with a silent
transition; under the right side conditions its target is the gluing of the
two targets along the rule's right-hand side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .bclts import BCDiagram, BCLabel, State, Transition, enumerate_bc_transitions, is_silent, transition_key
from .canon import canonical_labelling
from .colimit import complement_in, glue, initial_pushout, is_pushout_square, rename_apart
from .errors import NotTauCompatible, NotUnique, OverlapError, PreconditionViolated, ValidationFailed
from .gts import GTS, Rule
from .hypergraph import (
    Hypergraph,
    Inclusion,
    Morphism,
    degree,
    find_monos,
    fresh_namer,
    is_inclusion,
    is_isomorphic,
    is_simply_wired,
    subgraphs,
)


@dataclass(frozen=True)
class ActivePair:
    rule: str
    d: Hypergraph
    d_hat: Hypergraph
    minimal_interface: Hypergraph

    def flipped(self) -> ActivePair:
        return ActivePair(self.rule, self.d_hat, self.d, self.minimal_interface)


def is_active_side(d: Hypergraph, left: Hypergraph) -> bool:
    return bool(d.edges) and d != left and all(degree(d, v) > 0 for v in d.nodes)


def rule_active_sides(r: Rule) -> list[ActivePair]:
    """Every ordered pair (D, D̂) of the rule, one entry per admissible side D."""
    out = []
    for d in subgraphs(r.left):
        if is_active_side(d, r.left):
            ip = initial_pushout(Inclusion(d, r.left), check_minimal=False)
            out.append(ActivePair(r.name, d, ip.complement.sub, ip.minimal_interface))
    return out


def _pair_key(left: Hypergraph, d: Hypergraph, d_hat: Hypergraph) -> tuple:
    def marked(a: Hypergraph, b: Hypergraph) -> tuple:
        colours = {v: ("A" if v in a.nodes else "") + ("B" if v in b.nodes else "") for v in left.nodes}
        edges = [(f"{e.label}|{'A' if eid in a.edges else 'B'}", e.tentacles) for eid, e in left.edges.items()]
        return canonical_labelling(colours, edges)[0]

    return min(marked(d, d_hat), marked(d_hat, d))


def active_pairs(s: GTS) -> list[ActivePair]:
    """Unordered active pairs of all rules, deduplicated up to isomorphism."""
    seen: dict[tuple, ActivePair] = {}
    for r in s.rules:
        for p in rule_active_sides(r):
            seen.setdefault(_pair_key(r.left, p.d, p.d_hat), p)
    return [seen[k] for k in sorted(seen)]


def is_active_pair(s: GTS, rule: str, d: Hypergraph, d_hat: Hypergraph) -> bool:
    """Whether ``{d, d_hat}`` is an active pair of ``rule`` (as subgraphs of its left-hand side)."""
    r = s.rule(rule)
    return is_active_side(d, r.left) and is_active_side(d_hat, r.left) and complement_in(d, r.left) == d_hat


@dataclass(frozen=True)
class Admissibility:
    rule: str
    addition: Hypergraph  # D, in rule coordinates: the part supplied by the borrow
    complement: Hypergraph  # D̂, in rule coordinates: the part found in the state
    minimal_interface: Hypergraph  # J_D^L, in rule coordinates
    match: Morphism  # L -> G_c
    gc: Hypergraph = field(repr=False)

    def routing(self) -> dict[str, str]:
        """Where the minimal interface lands inside the state interface."""
        return {x: self.match.node_map[x] for x in self.minimal_interface.nodes} | {
            e: self.match.edge_map[e] for e in self.minimal_interface.edges
        }


def _borrow_graph(st: State, borrow: Inclusion) -> Hypergraph:
    if borrow.sub != st.interface:
        raise ValueError("borrow must start at the state interface")
    f = borrow.sup
    if not is_inclusion(st.interface, f) or (f.ids() - st.interface.ids()) & st.graph.ids():
        f, _ = rename_apart(f, st.graph, st.interface)
    return f


def found_part(m: Morphism, g: Hypergraph) -> Hypergraph:
    """The part of the matched left-hand side already present in ``g``."""
    img = m.image()
    return img.restrict(img.nodes & g.nodes, set(img.edges) & set(g.edges))


def admissible_rules(s: GTS, st: State, borrow: Inclusion) -> list[Admissibility]:
    """Every (rule, addition, match) explaining the borrow ``J -> F`` at ``st``.

    The state must hold exactly the complement of the addition: ``G`` and ``L``
    pushed out over ``D̂`` give ``G_c``. A match that also pins extra interface
    nodes of ``G`` is not an acceptable partial match and admits nothing.
    """
    g, j = st.graph, st.interface
    f = _borrow_graph(st, borrow)
    gc = glue(j, g, f)
    out = []
    for r in s.rules:
        sides = rule_active_sides(r)
        if not sides:
            continue
        for m in find_monos(r.left, gc):
            image = m.image()
            if is_inclusion(image, g):
                continue  # the whole left-hand side is already present
            for p in sides:
                if (
                    is_inclusion(m.apply(p.d), f)
                    and is_inclusion(m.apply(p.minimal_interface), j)
                    and found_part(m, g) == m.apply(p.d_hat)
                ):
                    assert is_pushout_square(j, g, f, gc)
                    out.append(Admissibility(r.name, p.d, p.d_hat, p.minimal_interface, m, gc))
    return out


def acceptable_witnesses(s: GTS, t: Transition) -> list[BCDiagram]:
    """Witnesses of ``t`` whose partial match is one side of an active pair."""
    return [w for w in t.witnesses if is_active_side(w.d_rule, s.rule(w.rule).left)]


def admissible_for(s: GTS, t: Transition) -> list[Admissibility]:
    return admissible_rules(s, t.source, t.label.left)


class TauWitness(NamedTuple):
    rule: str
    first: Admissibility
    second: Admissibility


class TauVerdict(NamedTuple):
    compatible: bool
    witnesses: list[TauWitness]
    reason: str


def is_tau_compatible(t1: Transition, t2: Transition, s: GTS) -> TauVerdict:
    if is_silent(t1) or is_silent(t2):
        return TauVerdict(False, [], "silent transitions have no rule addition")
    a1, a2 = admissible_for(s, t1), admissible_for(s, t2)
    wit = [
        TauWitness(x.rule, x, y)
        for x in a1
        for y in a2
        if x.rule == y.rule and y.addition == x.complement and is_active_pair(s, x.rule, x.addition, y.addition)
    ]
    if not wit:
        return TauVerdict(False, [], "no rule is admissible for both with complementary additions")
    return TauVerdict(True, wit, "")


# --- classification -------------------------------------------------------


class Flag(NamedTuple):
    value: bool
    reason: str

    def __bool__(self) -> bool:
        return self.value


@dataclass(frozen=True)
class SystemClass:
    interaction_system: Flag
    simply_wired_states: Flag
    lafont: Flag
    partitioned: Flag
    unique_partners: Flag
    complementarity_of_actions: Flag
    single_wire_interfaces: Flag
    corpus_size: int

    def flags(self) -> dict[str, Flag]:
        return {
            "interaction_system": self.interaction_system,
            "simply_wired_states": self.simply_wired_states,
            "lafont": self.lafont,
            "partitioned": self.partitioned,
            "unique_partners": self.unique_partners,
            "complementarity_of_actions": self.complementarity_of_actions,
            "single_wire_interfaces": self.single_wire_interfaces,
        }

    def composable(self) -> bool:
        """Side condition under which compositionality is guaranteed."""
        return bool(self.lafont and self.partitioned) or bool(self.unique_partners)


def activated_pair(left: Hypergraph) -> tuple[str, int, str, int, str] | None:
    """``(label1, port1, label2, port2, node)`` if ``left`` is two edges meeting once."""
    if len(left.edges) != 2:
        return None
    (_, e1), (_, e2) = left.edges.items()
    shared = set(e1.tentacles) & set(e2.tentacles)
    if len(shared) != 1:
        return None
    (v,) = shared
    if e1.tentacles.count(v) != 1 or e2.tentacles.count(v) != 1:
        return None
    if left.nodes != set(e1.tentacles) | set(e2.tentacles):
        return None
    return e1.label, e1.tentacles.index(v), e2.label, e2.tentacles.index(v), v


def _interaction_system(s: GTS) -> Flag:
    for r in s.rules:
        if activated_pair(r.left) is None:
            return Flag(False, f"rule {r.name}: left-hand side is not an activated pair")
        if not r.left.nodes <= r.interface.nodes:
            return Flag(False, f"rule {r.name}: deletes a node")
    return Flag(True, f"all {len(s.rules)} left-hand sides are activated pairs and no rule deletes nodes")


def _is_lafont_state(st: State) -> str | None:
    if not is_simply_wired(st.graph):
        return "graph is not simply wired"
    if st.interface.edges:
        return "interface contains edges"
    bad = sorted(v for v in st.interface.nodes if degree(st.graph, v) != 1)
    if bad:
        return f"interface node {bad[0]} is not free"
    return None


def _partitioned(s: GTS) -> Flag:
    rs = s.rules
    for i, r1 in enumerate(rs):
        for r2 in rs[i + 1 :]:
            if is_isomorphic(r1.left, r2.left):
                continue
            common = {e.label for e in r1.left.edges.values()} & {e.label for e in r2.left.edges.values()}
            if common:
                return Flag(False, f"rules {r1.name} and {r2.name} overlap on label {sorted(common)[0]}")
    return Flag(True, "left-hand sides are pairwise isomorphic or share no label")


def partner_index(s: GTS) -> dict[tuple[str, int], set[tuple[str, int]]]:
    idx: dict[tuple[str, int], set[tuple[str, int]]] = {(a, i): set() for a, n in s.alphabet.items() for i in range(n)}
    for r in s.rules:
        ap = activated_pair(r.left)
        if ap is None:
            continue
        a, i, b, j, _ = ap
        idx.setdefault((a, i), set()).add((b, j))
        idx.setdefault((b, j), set()).add((a, i))
    return idx


def _unique_partners(s: GTS, interaction: Flag) -> Flag:
    if not interaction:
        return Flag(False, f"not an interaction system: {interaction.reason}")
    for (a, i), partners in sorted(partner_index(s).items()):
        if len(partners) != 1:
            return Flag(False, f"port {a}.{i} has {len(partners)} partners")
    return Flag(True, "every label port has exactly one partner")


def classify(s: GTS, corpus_states: Iterable[State] = ()) -> SystemClass:
    states = list(corpus_states)
    inter = _interaction_system(s)

    wired = Flag(True, f"all {len(states)} corpus states are Lafont interaction graphs")
    for k, st in enumerate(states):
        why = _is_lafont_state(st)
        if why:
            wired = Flag(False, f"corpus state {k}: {why}")
            break

    lafont = inter
    if inter:
        lafont = Flag(True, "interaction system over simply wired graphs")
        for r in s.rules:
            for part, g in (("left", r.left), ("interface", r.interface), ("right", r.right)):
                if not is_simply_wired(g):
                    lafont = Flag(False, f"rule {r.name}: {part} is not simply wired")
        if lafont and not wired:
            lafont = Flag(False, wired.reason)

    comp = Flag(True, f"checked over {len(states)} corpus states")
    for k, st in enumerate(states):
        for t in enumerate_bc_transitions(s, st):
            if len(t.rules) != 1:
                comp = Flag(False, f"corpus state {k}: a transition is justified by rules {', '.join(t.rules)}")
                break
        if not comp:
            break

    single = Flag(True, "every active pair meets in a single node")
    for p in active_pairs(s):
        mi = p.minimal_interface
        if len(mi.nodes) != 1 or mi.edges:
            single = Flag(False, f"rule {p.rule}: minimal interface has {len(mi.nodes)} nodes")
            break

    return SystemClass(inter, wired, lafont, _partitioned(s), _unique_partners(s, inter), comp, single, len(states))


def unique_admissible_rule(s: GTS, t: Transition) -> Rule:
    if is_silent(t):
        raise PreconditionViolated("silent transitions have no admissible rule")
    names = sorted({a.rule for a in admissible_for(s, t)})
    if len(names) != 1:
        raise NotUnique(names)
    return s.rule(names[0])


# --- composition ----------------------------------------------------------


@dataclass(frozen=True)
class Composition:
    transition: Transition
    witness: TauWitness
    gbar: Hypergraph
    jbar: Hypergraph
    hbar: Hypergraph
    found: Transition | None = None  # the oracle's matching BC transition


def _rename_second(
    first_ids: set[str], second_ids: set[str], pinned: dict[str, str]
) -> dict[str, str]:
    fresh = fresh_namer(first_ids | set(pinned.values()))
    return {x: pinned[x] if x in pinned else fresh(x) for x in sorted(second_ids)}


def _apply(g: Hypergraph, ren: dict[str, str]) -> Hypergraph:
    return g.rename(ren, ren)


def glue_states(w: TauWitness, st1: State, st2: State) -> tuple[Hypergraph, Hypergraph, dict[str, str]]:
    """``(Ḡ, J̄, φ)``: the two states glued along the routed minimal interface.

    ``φ`` renames identifiers of the second state.
    """
    pinned = {w.second.routing()[x]: w.first.routing()[x] for x in w.first.minimal_interface.ids()}
    phi = _rename_second(st1.graph.ids(), st2.graph.ids(), pinned)
    g2, j2 = _apply(st2.graph, phi), _apply(st2.interface, phi)
    common = st1.graph.intersection(g2)
    routed = w.first.match.apply(w.first.minimal_interface)
    if common != routed:
        raise ValidationFailed("glued states overlap outside the minimal interface")
    return glue(common, st1.graph, g2), glue(st1.interface.intersection(j2), st1.interface, j2), phi


def naive_target(w: TauWitness, t1: Transition, t2: Transition) -> Hypergraph:
    """The two targets glued along the surviving images of the minimal interface.

    This is the candidate composite whenever the transitions were witnessed by
    rules other than the one they are compatible through.
    """
    pinned = {w.second.routing()[x]: w.first.routing()[x] for x in w.first.minimal_interface.ids()}
    h1, h2 = t1.target.graph, t2.target.graph
    pinned = {a: b for a, b in pinned.items() if a in h2.ids() and b in h1.ids()}
    phi = _rename_second(h1.ids(), h2.ids(), pinned)
    h2r = _apply(h2, phi)
    return glue(h1.intersection(h2r), h1, h2r)


def _rule_witness(t: Transition, a: Admissibility) -> BCDiagram | None:
    """A BC witness of ``t`` by ``a.rule`` whose partial match is exactly ``a.complement``."""
    for w in t.witnesses:
        if w.rule != a.rule or w.d_rule != a.complement:
            continue
        if all(w.instance.node_map[v] == a.match.node_map[v] for v in a.complement.nodes) and all(
            w.instance.edge_map[e] == a.match.edge_map[e] for e in a.complement.edges
        ):
            return w
    return None


def _compose_one(s: GTS, t1: Transition, t2: Transition, w: TauWitness) -> Composition:
    d1, d2 = _rule_witness(t1, w.first), _rule_witness(t2, w.second)
    if d1 is None or d2 is None:
        raise PreconditionViolated(f"a transition is not witnessed by {w.rule} along an active pair")
    i1, i2 = d1.instance, d2.instance
    rule = s.rule(w.rule)
    # Identify every rule element of the second instance with the first; the
    # rest of the second side is renamed apart.
    pinned: dict[str, str] = {}
    for x in rule.left.nodes | rule.right.nodes:
        pinned[i2.node_map[x]] = i1.node_map[x]
    for e in set(rule.left.edges) | set(rule.right.edges):
        pinned[i2.edge_map[e]] = i1.edge_map[e]
    first_ids = t1.source.graph.ids() | t1.label.f.ids() | t1.target.graph.ids()
    second_ids = t2.source.graph.ids() | t2.label.f.ids() | t2.target.graph.ids()
    phi = _rename_second(first_ids, second_ids, pinned)
    g1, g2 = t1.source.graph, _apply(t2.source.graph, phi)
    j2 = _apply(t2.source.interface, phi)
    routed = i1.image(w.first.minimal_interface)
    try:
        if g1.intersection(g2) != routed:
            raise ValidationFailed("states overlap outside the minimal interface")
        gbar = glue(routed, g1, g2)
        jbar = glue(t1.source.interface.intersection(j2), t1.source.interface, j2)
        h1, h2 = t1.target.graph, _apply(t2.target.graph, phi)
        if h1.intersection(h2) != i1.right:
            raise ValidationFailed("targets overlap outside the right-hand side")
        hbar = glue(i1.right, h1, h2)
    except OverlapError as exc:
        raise ValidationFailed(str(exc)) from exc
    if not is_inclusion(jbar, hbar):
        raise ValidationFailed("composite interface does not survive in the composite target")
    composed = Transition(State(jbar, gbar), BCLabel(jbar, jbar, jbar), State(jbar, hbar))
    key = transition_key(composed)
    for t in enumerate_bc_transitions(s, State(jbar, gbar)):
        if is_silent(t) and w.rule in t.rules and transition_key(t) == key:
            return Composition(
                Transition(composed.source, composed.label, composed.target, t.witnesses), w, gbar, jbar, hbar, t
            )
    raise ValidationFailed(f"no silent {w.rule} transition of the composite state matches")


def compose_tau_all(
    t1: Transition,
    t2: Transition,
    s: GTS,
    states: Iterable[State] | None = None,
    system_class: SystemClass | None = None,
) -> list[Composition]:
    """Compose along every witnessing rule; each result is checked by the enumeration oracle.

    The side condition is checked on ``system_class`` when given, otherwise by
    classifying ``s`` over ``states`` (default: the two source states).
    """
    cls = system_class or classify(s, [t1.source, t2.source] if states is None else states)
    if not cls.composable():
        raise PreconditionViolated(
            "composition needs a partitioned Lafont system or unique partners: "
            f"lafont={cls.lafont.reason}; partitioned={cls.partitioned.reason}; unique_partners={cls.unique_partners.reason}"
        )
    verdict = is_tau_compatible(t1, t2, s)
    if not verdict.compatible:
        raise PreconditionViolated(verdict.reason)
    return [_compose_one(s, t1, t2, w) for w in verdict.witnesses]


def compose_tau(t1: Transition, t2: Transition, s: GTS) -> Transition:
    return compose_tau_all(t1, t2, s)[0].transition


def communication_rule(t1: Transition, t2: Transition, s: GTS):
    """Derived communication step with its one-node derivation tree."""
    from .sosbc import DerivationTree

    if not is_tau_compatible(t1, t2, s).compatible:
        raise NotTauCompatible("transitions are not τ-compatible")
    comp = compose_tau_all(t1, t2, s)[0]
    return comp.transition, DerivationTree(comp.transition, "communication", (), (t1, t2, comp.witness))
