"""Three-layer SOS presentation of borrowed-context transitions.

Basic actions come from partial left-hand sides; compatible contextualization
embeds a transition into a monotone context; interface narrowing hides
interface elements. Every BC transition is derivable as one axiom, one
contextualization and one narrowing, which is what :func:`derive_all`
searches.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple

from .bclts import BCLabel, State, Transition, admitted_partial_match, enumerate_bc_transitions, transition_key
from .colimit import complement, glue, is_pullback_square, is_pushout_square, non_overlapping, rename_apart
from .errors import DanglingError, NarrowingImpossible, NotCombinable, OverlapError
from .gts import GTS, Rule, RuleInstance, instantiate
from .hypergraph import Hypergraph, find_monos, fresh_namer, is_inclusion, subgraphs, subgraphs_between


@dataclass(frozen=True)
class Context:
    j: Hypergraph
    e: Hypergraph
    j2: Hypergraph

    def __post_init__(self):
        if not (is_inclusion(self.j, self.e) and is_inclusion(self.j2, self.e)):
            raise ValueError("context legs must be inclusions into E")

    @classmethod
    def identity(cls, j: Hypergraph) -> Context:
        return cls(j, j, j)

    @classmethod
    def narrowing(cls, j: Hypergraph, j2: Hypergraph) -> Context:
        return cls(j, j, j2)

    def is_narrowing(self) -> bool:
        return self.e == self.j

    def is_monotone(self) -> bool:
        return is_inclusion(self.j, self.j2)


@dataclass(frozen=True)
class DerivationTree:
    conclusion: Transition
    rule_used: str  # "axiom" | "contextualization" | "narrowing" | "communication"
    premises: tuple[DerivationTree, ...] = ()
    side_data: Any = field(default=None, repr=False)


def basic_action(inst: RuleInstance, d: Hypergraph) -> Transition:
    """Axiom ``(D -> D) --(D -> L <- I)--> (I -> R)`` for a rule instance."""
    return Transition(State(d, d), BCLabel(d, inst.left, inst.interface), State(inst.interface, inst.right))


def basic_actions(r: Rule) -> list[Transition]:
    ident = instantiate(r, {v: v for v in r.left.nodes | r.right.nodes}, {e: e for e in set(r.left.edges) | set(r.right.edges)}, set())
    return [basic_action(ident, d) for d in subgraphs(r.left)]


def apply_context_to_state(c: Context, st: State, rename: bool = True) -> State:
    if c.j != st.interface:
        raise ValueError("context and state must share the interface")
    g = st.graph
    if not non_overlapping(c.j, c.e, g):
        if not rename:
            raise OverlapError("state graph overlaps the context outside the interface")
        g, _ = rename_apart(g, c.e, c.j)
    return State(c.j2, glue(c.j, c.e, g))


def narrow_label(c: Context, lbl: BCLabel) -> BCLabel:
    if not c.is_narrowing() or c.j != lbl.j:
        raise ValueError("expected a narrowing context J -> J <- J' on the label's J")
    try:
        f2 = complement(c.j2, c.j, lbl.f)
    except DanglingError as exc:
        raise NarrowingImpossible(exc) from exc
    k2 = f2.intersection(lbl.k)
    assert is_pushout_square(c.j2, c.j, f2, lbl.f) and is_pullback_square(k2, f2, lbl.k, lbl.f)
    return BCLabel(c.j2, f2, k2)


def apply_narrowing(c: Context, t: Transition) -> Transition:
    lbl = narrow_label(c, t.label)
    return Transition(State(c.j2, t.source.graph), lbl, State(lbl.k, t.target.graph))


class Compatibility(NamedTuple):
    compatible: bool
    monotone: bool
    non_inhibiting: bool
    e1: Hypergraph | None
    e_prime: Hypergraph | None
    reason: str


def _rename_transition_apart(t: Transition, avoid: Hypergraph) -> Transition:
    """Rename everything outside the source interface so it avoids ``avoid``."""
    j = t.source.interface
    ids = t.source.graph.ids() | t.label.f.ids() | t.target.graph.ids()
    clash = (ids - j.ids()) & avoid.ids()
    if not clash:
        return t
    fresh = fresh_namer(ids | avoid.ids())
    ren = {x: fresh(x) for x in sorted(ids - j.ids())}
    r = lambda g: g.rename(ren, ren)  # noqa: E731
    return Transition(
        State(j, r(t.source.graph)),
        BCLabel(j, r(t.label.f), r(t.label.k)),
        State(r(t.target.interface), r(t.target.graph)),
        t.witnesses,
    )


def _rename_label_apart(lbl: BCLabel, avoid: Hypergraph) -> BCLabel:
    fresh = fresh_namer(lbl.f.ids() | avoid.ids())
    ren = {x: fresh(x) for x in sorted(lbl.f.ids() - lbl.j.ids()) if x in avoid.ids()}
    return BCLabel(lbl.j, lbl.f.rename(ren, ren), lbl.k.rename(ren, ren))


def is_compatible(c: Context, lbl: BCLabel) -> Compatibility:
    if c.j != lbl.j:
        return Compatibility(False, False, False, None, None, "context and label start at different interfaces")
    monotone = c.is_monotone()
    if not non_overlapping(c.j, c.e, lbl.f):
        lbl = _rename_label_apart(lbl, c.e)
    e1 = glue(c.j, c.e, lbl.f)
    try:
        e_prime = complement(lbl.k, lbl.f, e1)
    except DanglingError as exc:
        return Compatibility(False, monotone, False, e1, None, f"context inhibits the reaction: {exc}")
    reason = "" if monotone else "context is not monotone"
    return Compatibility(monotone, monotone, True, e1, e_prime, reason)


class Combination(NamedTuple):
    label: BCLabel
    e1: Hypergraph
    e_prime: Hypergraph


def _combine(outer: Context, lbl: BCLabel) -> Combination:
    if not non_overlapping(outer.j, outer.e, lbl.f):
        lbl = _rename_label_apart(lbl, outer.e)
    comp = is_compatible(outer, lbl)
    if not comp.non_inhibiting:
        raise NotCombinable(comp.reason)
    try:
        fbar = complement(outer.j2, outer.e, comp.e1)
    except DanglingError as exc:
        raise NotCombinable(f"no pushout complement for the new interface: {exc}") from exc
    kbar = fbar.intersection(comp.e_prime)
    assert is_pushout_square(outer.j2, outer.e, fbar, comp.e1)
    assert is_pullback_square(kbar, fbar, comp.e_prime, comp.e1)
    return Combination(BCLabel(outer.j2, fbar, kbar), comp.e1, comp.e_prime)


def combine_cospans(outer: Context, lbl: BCLabel) -> BCLabel:
    return _combine(outer, lbl).label


def split_holds(c: Context, lbl: BCLabel) -> bool:
    """Check both halves of the context split for a compatible context."""
    comb = _combine(c, lbl)
    fbar_direct = glue(lbl.j, c.j2, lbl.f) if non_overlapping(lbl.j, c.j2, lbl.f) else None
    return (
        fbar_direct is not None
        and fbar_direct == comb.label.f
        and lbl.f.intersection(comb.label.k) == lbl.k
        and is_pushout_square(c.j2, c.e, comb.label.f, comb.e1)
    )


def apply_contextualization(c: Context, t: Transition) -> Transition:
    comp = is_compatible(c, t.label)
    if not comp.compatible:
        raise NotCombinable(comp.reason)
    t = _rename_transition_apart(t, c.e)
    comb = _combine(c, t.label)
    source = apply_context_to_state(c, t.source)
    derived = Context(t.label.k, comb.e_prime, comb.label.k)
    target = apply_context_to_state(derived, t.target)
    return Transition(source, comb.label, target)


def derive_all(
    s: GTS,
    st: State,
    bound: int = 0,
    allow_node_only: bool = False,
) -> list[tuple[Transition, DerivationTree]]:
    """All transitions of ``st`` derivable as axiom, contextualization, narrowing.

    The contextualization glues a renamed basic action into ``st.graph`` along
    its partial left-hand side; the intermediate interface ranges over
    subgraphs between ``J ∪ D`` and ``G`` adding at most ``bound`` elements.
    ``J ∪ D`` itself already suffices for completeness, hence the default.
    """
    g, j = st.graph, st.interface
    found: dict[tuple, tuple[Transition, DerivationTree]] = {}
    for rule in s.rules:
        for d_rule in subgraphs(rule.left):
            if not admitted_partial_match(d_rule, rule.left, allow_node_only):
                continue
            for m in find_monos(d_rule, g):
                inst = instantiate(rule, m.node_map, m.edge_map, g.ids())
                d = inst.image(d_rule)
                axiom = basic_action(inst, d)
                ax_tree = DerivationTree(axiom, "axiom", (), (rule.name, inst, d))
                for jbar in subgraphs_between(j.union(d), g, bound):
                    ctx = Context(d, g, jbar)
                    try:
                        t1 = apply_contextualization(ctx, axiom)
                        nar = Context.narrowing(jbar, j)
                        t2 = apply_narrowing(nar, t1)
                    except (NotCombinable, NarrowingImpossible):
                        continue
                    tree = DerivationTree(
                        t2, "narrowing", (DerivationTree(t1, "contextualization", (ax_tree,), ctx),), nar
                    )
                    found.setdefault(transition_key(t2), (t2, tree))
    return [found[k] for k in sorted(found)]


def replay(tree: DerivationTree) -> Transition:
    """Recompute a derivation bottom-up from its side data."""
    if tree.rule_used == "axiom":
        _, inst, d = tree.side_data
        return basic_action(inst, d)
    (premise,) = tree.premises
    t = replay(premise)
    if tree.rule_used == "contextualization":
        return apply_contextualization(tree.side_data, t)
    if tree.rule_used == "narrowing":
        return apply_narrowing(tree.side_data, t)
    raise ValueError(f"cannot replay {tree.rule_used!r}")


@dataclass
class EquivalenceReport:
    bc: list[Transition]
    sos: list[Transition]
    missing: list[Transition]  # BC transitions without a derivation
    extra: list[Transition]  # derivations that are not BC transitions

    @property
    def equal(self) -> bool:
        return not self.missing and not self.extra

    def summary(self) -> str:
        if self.equal:
            return f"EQUAL n={len(self.bc)}"
        return f"DIFFERENT bc={len(self.bc)} sos={len(self.sos)} missing={len(self.missing)} extra={len(self.extra)}"


def check_equivalence(
    s: GTS,
    st: State,
    allow_node_only: bool = False,
    bound: int = 0,
    derive: Callable[..., list[tuple[Transition, DerivationTree]]] = derive_all,
) -> EquivalenceReport:
    bc = enumerate_bc_transitions(s, st, allow_node_only)
    sos = [t for t, _ in derive(s, st, bound=bound, allow_node_only=allow_node_only)]
    bc_keys = {transition_key(t): t for t in bc}
    sos_keys = {transition_key(t): t for t in sos}
    missing = [bc_keys[k] for k in sorted(bc_keys.keys() - sos_keys.keys())]
    extra = [sos_keys[k] for k in sorted(sos_keys.keys() - bc_keys.keys())]
    return EquivalenceReport(bc, sos, missing, extra)
