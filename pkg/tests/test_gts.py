from __future__ import annotations

import pytest

from gtx.errors import MatchError
from gtx.gts import GTS, Rule, enumerate_rewrites, instantiate, rewrite, validate_gts, validate_rule
from gtx.hypergraph import Hypergraph, Morphism, find_monos, is_isomorphic, iso_canonical

H = Hypergraph.of
ALPHA = {"α": 2, "β": 3, "γ": 1, "R_ab": 4}


def identity_rule() -> Rule:
    g = H("a:α(u v)")
    return Rule("id", g, g, g)


def test_validate_rule_examples(triad):
    assert validate_rule(identity_rule(), ALPHA) == []
    l = H("a:α(u v)")
    bad = Rule("bad", l, Hypergraph(["u", "v"]), H("a:α(v u)"))
    assert validate_rule(bad, ALPHA)
    assert validate_rule(triad.rules["α/β"], triad.alphabet) == []


def test_validate_gts_reports_duplicate_names():
    r = identity_rule()
    assert validate_gts(GTS(ALPHA, (r, r))) == ["duplicate rule name 'id'"]


def test_identity_rule_rewrites_to_isomorphic_graph():
    s = GTS(ALPHA, (identity_rule(),))
    a = H("x:α(p q)", "c:γ(q)")
    (step,) = enumerate_rewrites(s, a)
    assert is_isomorphic(step.result, a) and step.verify(a)


def test_rewrite_exact_lhs_gives_rhs(triad):
    s = triad.gts()
    r = s.rule("α/β")
    m = Morphism.inclusion(r.left, r.left)
    assert is_isomorphic(rewrite(s, r.left, "α/β", m).result, r.right)


def test_rewrite_keeps_context(triad):
    s = triad.gts()
    r = s.rule("α/β")
    a = r.left.union(H("g:γ(w2)"))
    (m,) = find_monos(r.left, a)
    out = rewrite(s, a, "α/β", m).result
    assert is_isomorphic(out, r.right.union(H("g:γ(w2)")))


def test_rewrite_rejects_bad_matches(triad):
    s = triad.gts()
    r = s.rule("α/γ")
    host = H("a:α(u v)", "c:γ(v)")
    squash = Morphism(r.left, H("a:α(v v)", "c:γ(v)"), {"u": "v", "v": "v"}, {"a": "a", "c": "c"})
    with pytest.raises(MatchError):
        rewrite(s, squash.target, "α/γ", squash)
    with pytest.raises(MatchError):
        rewrite(s, H("c:γ(v)"), "α/γ", Morphism.inclusion(r.left, host))


def test_enumerate_rewrites_on_shared_node(triad):
    s = triad.gts()
    # β meets the shared node at its first port, which fits α/β, α/γ and β/γ;
    # α/β/γ needs the shared node at β's second port
    a = H("a:α(u v)", "b:β(v w x)", "c:γ(v)")
    assert sorted(st.rule for st in enumerate_rewrites(s, a)) == ["α/β", "α/γ", "β/γ"]
    a2 = H("a:α(u v)", "b:β(w v x)", "c:γ(v)")
    assert sorted(st.rule for st in enumerate_rewrites(s, a2)) == ["α/β/γ", "α/γ"]


def test_enumerate_rewrites_empty_cases(triad):
    s = triad.gts()
    assert enumerate_rewrites(s, H("c:γ(v)")) == []
    assert enumerate_rewrites(s, H("a:α(u v)", "d:α(v w)")) == []


def test_dangling_matches_are_skipped():
    # rule deletes its node; a second edge on that node blocks the step
    r = Rule("del", H("c:γ(v)"), Hypergraph(), Hypergraph())
    s = GTS(ALPHA, (r,))
    assert len(enumerate_rewrites(s, H("c:γ(v)"))) == 1
    assert enumerate_rewrites(s, H("c:γ(v)", "a:α(u v)")) == []


def test_rewrite_is_stable_under_renaming(triad):
    s = triad.gts()
    a = H("a:α(u v)", "b:β(v w x)", "c:γ(v)")
    b = a.rename({"u": "n1", "v": "n2", "w": "n3", "x": "n4"}, {"a": "E1", "b": "E2", "c": "E3"})
    ra = sorted(repr(iso_canonical(st.result)) for st in enumerate_rewrites(s, a))
    rb = sorted(repr(iso_canonical(st.result)) for st in enumerate_rewrites(s, b))
    assert ra == rb


def test_instantiate_pins_and_freshens(triad):
    r = triad.rules["α/γ"]
    inst = instantiate(r, {"v": "q"}, {}, {"u", "q", "r", "a"})
    assert inst.node_map["v"] == "q"
    assert inst.node_map["u"] not in {"u", "q"} and inst.edge_map["r"] != "r"
    assert inst.left.rename({}, {}) == inst.left
