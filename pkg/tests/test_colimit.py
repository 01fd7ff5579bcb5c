from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtx.colimit import (
    Cospan,
    Span,
    check_dangling,
    complement,
    complement_candidates,
    complement_in,
    glue,
    initial_pushout,
    intersection,
    is_pullback_square,
    is_pushout_square,
    pushout,
    pushout_complement,
    rename_apart,
)
from gtx.errors import DanglingError, OverlapError
from gtx.hypergraph import EMPTY, Hypergraph, Inclusion, is_inclusion, iso_canonical, subgraphs

from oracles import dangling_hypothesis_fails, pullback_universal, pushout_universal, random_graph, random_subgraph

H = Hypergraph.of


def test_intersection_examples():
    g = H("a:α(u v)")
    assert intersection(Cospan.of(g, g, g)).left.sub == g
    g3 = H("a:α(u v)", "c:γ(w)")
    assert intersection(Cospan.of(H("a:α(u v)"), g3, H("c:γ(w)"))).left.sub == EMPTY
    g1, g2 = H("a:α(u v)"), H("b:β(u w x)")
    assert intersection(Cospan.of(g1, g1.union(g2), g2)).left.sub == Hypergraph(["u"])


def test_pushout_examples():
    g1, g2 = H("a:α(u v)"), H("c:γ(w)")
    assert pushout(Span.of(EMPTY, g1, g2)).left.sup == g1.union(g2)
    g2 = H("a:α(u v)", "c:γ(v)")
    assert pushout(Span.of(g1, g1, g2)).left.sup == g2
    assert glue(Hypergraph(["v"]), H("a:α(u v)"), H("c:γ(v)")) == H("a:α(u v)", "c:γ(v)")


def test_glue_rejects_overlap_outside_common_part():
    with pytest.raises(OverlapError):
        glue(EMPTY, H("a:α(u v)"), H("c:γ(v)"))


def test_pushout_complement_examples():
    g2 = H("a:α(u v)", "c:γ(v)")
    d, _ = pushout_complement(Inclusion(g2, g2), Inclusion(g2, g2))
    assert d.sub == g2
    d, g0_to_d = pushout_complement(Inclusion(Hypergraph(["v"]), H("a:α(u v)")), Inclusion(H("a:α(u v)"), g2))
    assert d.sub == H("c:γ(v)")
    assert is_pushout_square(Hypergraph(["v"]), H("a:α(u v)"), d.sub, g2)
    with pytest.raises(DanglingError) as info:
        complement(Hypergraph(["v"]), H("a:α(u v)"), H("a:α(u v)", "b:β(u y z)"))
    assert (info.value.node, info.value.edge) == ("u", "b")


def test_pushout_complement_needs_composable_inclusions():
    with pytest.raises(ValueError):
        pushout_complement(Inclusion(EMPTY, H("c:γ(v)")), Inclusion(H("a:α(u v)"), H("a:α(u v)")))


def test_initial_pushout_examples():
    l = H("a:α(u v)", "b:β(w v x)")
    ip = initial_pushout(Inclusion(H("a:α(u v)"), l))
    assert ip.complement.sub == H("b:β(w v x)")
    assert ip.minimal_interface == Hypergraph(["v"])
    back = initial_pushout(Inclusion(ip.complement.sub, l))
    assert back.complement.sub == H("a:α(u v)") and back.minimal_interface == ip.minimal_interface

    lz = H("a:α(u v)", nodes=["z"])
    ip = initial_pushout(Inclusion(H("a:α(u v)"), lz))
    assert ip.complement.sub == Hypergraph(["z"]) and ip.minimal_interface == EMPTY


def test_initial_pushout_of_whole_graph_is_rejected():
    with pytest.raises(ValueError):
        initial_pushout(Inclusion(H("c:γ(v)"), H("c:γ(v)")))


def test_rename_apart_examples():
    g = H("r:α(u v)")
    copy, m = rename_apart(g, H("c:γ(w)"), EMPTY)
    assert m.is_injective() and iso_canonical(copy) == iso_canonical(g)
    host = H("a:α(u q)", "c:γ(q)")
    copy, _ = rename_apart(g, host, Hypergraph(["u"]))
    assert copy.ids() & host.ids() == {"u"}
    again, _ = rename_apart(g, host, Hypergraph(["u"]))
    assert iso_canonical(again) == iso_canonical(copy)


@st.composite
def chains(draw):
    """Inclusion chains g0 <= g1 <= g2 over small random graphs."""
    rng = random.Random(draw(st.integers(0, 100_000)))
    g2 = random_graph(rng, 4)
    g1 = random_subgraph(rng, g2)
    g0 = random_subgraph(rng, g1)
    return g0, g1, g2


@settings(max_examples=120, deadline=None)
@given(chains())
def test_complement_exists_iff_dangling_hypothesis_holds(chain):
    g0, g1, g2 = chain
    cands = complement_candidates(g0, g1, g2)
    if dangling_hypothesis_fails(g0, g1, g2):
        assert cands == []
        with pytest.raises(DanglingError):
            complement(g0, g1, g2)
    else:
        d = complement(g0, g1, g2)
        assert cands == [d]
        assert glue(g0, g1, d) == g2  # pushing back out reproduces g2 exactly


@settings(max_examples=80, deadline=None)
@given(chains())
def test_intersection_then_pushout_reproduces_union(chain):
    _, g1, g3 = chain
    rng = random.Random(len(g3.ids()))
    g2 = random_subgraph(rng, g3)
    span = intersection(Cospan.of(g1, g3, g2))
    assert is_pullback_square(span.left.sub, g1, g2, g3)
    assert pushout(span).left.sup == g1.union(g2)


@settings(max_examples=60, deadline=None)
@given(chains())
def test_initial_pushout_minimal_and_involutive(chain):
    _, d, l = chain
    if d == l:
        return
    ip = initial_pushout(Inclusion(d, l))  # asserts minimality by enumeration
    dh = ip.complement.sub
    for s in subgraphs(dh):
        if s != dh:
            assert not is_pushout_square(d.intersection(s), d, s, l)
    loose = {v for v in d.nodes if all(v not in e.tentacles for e in d.edges.values())}
    if not loose & dh.nodes:
        assert complement_in(dh, l) == d


@pytest.mark.parametrize("seed", range(12))
def test_pushout_universal_property(seed):
    rng = random.Random(seed)
    g3 = random_graph(rng, 3, 4)
    g1, g2 = random_subgraph(rng, g3), random_subgraph(rng, g3)
    g0 = g1.intersection(g2)
    out = glue(g0, g1, g2)
    probes = [out, out.union(H("zz:γ(zv)"))]
    assert pushout_universal(g0, g1, g2, out, probes)
    assert pullback_universal(g0, g1, g2, [g0, g1, g2])


def test_universal_property_oracle_rejects_a_non_pushout():
    g1, g2 = H("a:α(u v)"), H("c:γ(v)")
    too_big = H("a:α(u v)", "c:γ(v)", "z:γ(u)")
    assert not pushout_universal(Hypergraph(["v"]), g1, g2, too_big, [g1.union(g2)])


def test_check_dangling_reports_edge():
    with pytest.raises(DanglingError):
        check_dangling(EMPTY, Hypergraph(["v"]), H("c:γ(v)"))
    assert is_inclusion(EMPTY, H("c:γ(v)"))
