from __future__ import annotations

import pytest

from gtx.bclts import BCLabel, State, Transition, enumerate_bc_transitions, transition_key
from gtx.errors import NarrowingImpossible, NotCombinable
from gtx.gts import instantiate
from gtx.hypergraph import EMPTY, Hypergraph
from gtx.sosbc import (
    Context,
    DerivationTree,
    apply_context_to_state,
    apply_contextualization,
    apply_narrowing,
    basic_action,
    basic_actions,
    check_equivalence,
    combine_cospans,
    derive_all,
    is_compatible,
    narrow_label,
    replay,
    split_holds,
)

H = Hypergraph.of
V = Hypergraph(["v"])
VW = Hypergraph(["v", "w"])


def test_basic_actions_cover_every_subgraph(triad):
    r = triad.rules["α/β"]
    acts = basic_actions(r)
    full = [t for t in acts if t.source.graph == r.left]
    assert len(full) == 1 and full[0].label.f == r.left and full[0].target.graph == r.right
    empty = [t for t in acts if t.source.graph == EMPTY]
    assert len(empty) == 1 and empty[0].label.k == r.interface
    alpha = [t for t in acts if t.source.graph == H("a:α(u v)")]
    assert alpha and alpha[0].label.f == r.left


def test_apply_context_to_state_examples():
    st = State(V, H("a:α(u v)"))
    assert apply_context_to_state(Context.identity(V), st) == st
    c = Context(V, V.union(H("z:γ(q)")), V)
    assert apply_context_to_state(c, st).graph == H("a:α(u v)", "z:γ(q)")
    c = Context(V, H("c:γ(v)"), V)
    assert apply_context_to_state(c, st) == State(V, H("a:α(u v)", "c:γ(v)"))


def test_apply_context_renames_clashing_state():
    st = State(V, H("a:α(u v)"))
    c = Context(V, H("a:γ(v)"), V)  # the context reuses the edge id 'a'
    out = apply_context_to_state(c, st)
    assert len(out.graph.edges) == 2


def test_narrow_label_examples():
    lbl = BCLabel(VW, VW, VW)
    assert narrow_label(Context.narrowing(VW, VW), lbl) == lbl
    assert narrow_label(Context.narrowing(VW, V), lbl) == BCLabel(V, V, V)
    f = VW.union(H("c:γ(w)"))
    with pytest.raises(NarrowingImpossible) as info:
        narrow_label(Context.narrowing(VW, V), BCLabel(VW, f, f))
    assert info.value.node == "w"


def test_is_compatible_examples():
    lbl = BCLabel(V, V.union(H("c:γ(v)")), V)
    assert is_compatible(Context.identity(V), lbl).compatible
    dropping = Context(VW, VW, V)
    assert not is_compatible(dropping, BCLabel(VW, VW, VW)).monotone
    # the reaction deletes v while the context hangs an α on it
    inhibit = is_compatible(Context(V, H("a:α(u v)"), V), BCLabel(V, V.union(H("c:γ(v)")), EMPTY))
    assert inhibit.monotone and not inhibit.non_inhibiting and not inhibit.compatible


def test_combine_cospans_examples():
    lbl = BCLabel(V, V.union(H("c:γ(v)")), V)
    assert combine_cospans(Context.identity(V), lbl) == lbl
    f = VW.union(H("c:γ(w)"))
    with pytest.raises(NotCombinable):
        combine_cospans(Context(VW, VW, V), BCLabel(VW, f, f))


def _alpha_axiom(triad, g):
    r = triad.rules["α/β"]
    inst = instantiate(r, {"u": "u", "v": "v"}, {"a": "a"}, g.ids())
    return basic_action(inst, H("a:α(u v)"))


def test_contextualize_then_narrow_reaches_bc_transition(triad):
    g = H("a:α(u v)", "c:γ(v)")
    axiom = _alpha_axiom(triad, g)
    jbar = H("a:α(u v)")
    t1 = apply_contextualization(Context(H("a:α(u v)"), g, jbar), axiom)
    t2 = apply_narrowing(Context.narrowing(jbar, V), t1)
    bc = {transition_key(t) for t in enumerate_bc_transitions(triad.gts(), State(V, g))}
    assert transition_key(t2) in bc
    assert sorted(e.label for e in t2.label.f.edges.values()) == ["β"]


def test_identity_context_leaves_transition_unchanged(triad):
    axiom = _alpha_axiom(triad, H("a:α(u v)"))
    t = apply_contextualization(Context.identity(axiom.source.interface), axiom)
    assert transition_key(t) == transition_key(axiom)


def test_non_monotone_context_is_refused(triad):
    axiom = _alpha_axiom(triad, H("a:α(u v)"))
    with pytest.raises(NotCombinable):
        apply_contextualization(Context(H("a:α(u v)"), H("a:α(u v)"), V), axiom)


def test_split_on_derivations(triad):
    s = triad.gts()
    checked = 0
    for name in ("alpha_beta", "alpha_gamma", "beta_gamma"):
        for _, tree in derive_all(s, triad.states[name]):
            ctx_node = tree.premises[0]
            axiom = ctx_node.premises[0].conclusion
            assert split_holds(ctx_node.side_data, axiom.label)
            checked += 1
    assert checked > 10


def test_derive_all_examples(triad):
    s = triad.gts()
    r = triad.rules["α/β"]
    d = H("a:α(u v)")
    derived = {transition_key(t) for t, _ in derive_all(s, State(d, d))}
    assert transition_key(basic_actions(r)[[t.source.graph for t in basic_actions(r)].index(d)]) in derived
    assert derive_all(s, State(V, Hypergraph(["v", "w"]))) == []


@pytest.mark.parametrize("bound", [0, 1, 2])
def test_equivalence_is_independent_of_the_search_bound(triad, bound):
    s = triad.gts()
    for st in (State(V, H("a:α(u v)")), triad.states["alpha_beta"], triad.states["closed"]):
        assert check_equivalence(s, st, bound=bound).equal


def test_equivalence_with_node_only_matches(triad, lafont):
    for doc in (triad, lafont):
        s = doc.gts()
        for st in doc.states.values():
            assert check_equivalence(s, st, allow_node_only=True).equal


def test_empty_state_is_equal(triad):
    rep = check_equivalence(triad.gts(), State(EMPTY, EMPTY))
    assert rep.equal and rep.summary() == "EQUAL n=0"


def test_mutant_derivation_is_detected(triad):
    def without_narrowing(s, st, bound=0, allow_node_only=False):
        out = []
        for t, tree in derive_all(s, st, bound, allow_node_only):
            premise = tree.premises[0]
            out.append((premise.conclusion, premise))  # skip the narrowing step
        return out

    rep = check_equivalence(triad.gts(), triad.states["alpha_beta"], derive=without_narrowing)
    assert rep.missing and not rep.equal


def test_replay_reproduces_conclusions(triad, ccs):
    for doc in (triad, ccs):
        s = doc.gts()
        for st in doc.states.values():
            for t, tree in derive_all(s, st):
                again = replay(tree)
                assert again == t
                assert [n.rule_used for n in _spine(tree)] == ["narrowing", "contextualization", "axiom"]


def _spine(tree: DerivationTree):
    while True:
        yield tree
        if not tree.premises:
            return
        tree = tree.premises[0]


def test_derived_transitions_are_well_formed(triad):
    for t, _ in derive_all(triad.gts(), triad.states["alpha_gamma"]):
        assert isinstance(t, Transition)
        assert t.label.j == t.source.interface and t.label.k == t.target.interface
