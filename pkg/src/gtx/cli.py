"""``gtx`` command line: exit 0 on success, 1 on domain errors, 2 on usage errors."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from .bclts import State, Transition, enumerate_bc_transitions, state_key
from .composition import (
    Admissibility,
    active_pairs,
    admissible_rules,
    classify,
    compose_tau_all,
)
from .errors import GtxError, SpecError
from .gts import enumerate_rewrites
from .hypergraph import Hypergraph, Inclusion
from .sosbc import check_equivalence
from .spec_format import SpecDocument, object_dot, parse_spec


class UsageError(Exception):
    pass


def fmt_graph(g: Hypergraph) -> str:
    edges = ", ".join(f"{eid}:{e.label}({' '.join(e.tentacles)})" for eid, e in g.edges.items())
    nodes = " ".join(sorted(g.nodes))
    return f"{{{nodes}; {edges}}}" if edges else f"{{{nodes}}}"


def graph_json(g: Hypergraph) -> dict[str, Any]:
    return {
        "nodes": sorted(g.nodes),
        "edges": {eid: {"label": e.label, "tentacles": list(e.tentacles)} for eid, e in g.edges.items()},
    }


def transition_json(t: Transition) -> dict[str, Any]:
    return {
        "source": {"interface": graph_json(t.source.interface), "graph": graph_json(t.source.graph)},
        "label": {"j": graph_json(t.label.j), "f": graph_json(t.label.f), "k": graph_json(t.label.k)},
        "target": {"interface": graph_json(t.target.interface), "graph": graph_json(t.target.graph)},
        "silent": t.label.is_silent(),
        "rules": t.rules,
    }


def fmt_transition(t: Transition) -> str:
    tau = " tau" if t.label.is_silent() else ""
    return (
        f"J={fmt_graph(t.label.j)} F={fmt_graph(t.label.f)} K={fmt_graph(t.label.k)}"
        f" H={fmt_graph(t.target.graph)} rules={','.join(t.rules)}{tau}"
    )


class Out:
    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def line(self, text: str = "") -> None:
        print(text, file=self.stream)

    def json(self, obj: Any) -> None:
        print(json.dumps(obj, ensure_ascii=False, sort_keys=True), file=self.stream)


def load(path: str) -> SpecDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GtxError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_spec(text)


def _needs(fmt: str, allowed: tuple[str, ...], cmd: str) -> None:
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not supported by {cmd}")


def cmd_validate(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "validate")
    counts = {"labels": len(doc.alphabet), "graphs": len(doc.graphs), "rules": len(doc.rules), "states": len(doc.states)}
    if out.fmt == "json":
        out.json({"valid": True, **counts})
    else:
        out.line("OK " + " ".join(f"{k}={v}" for k, v in counts.items()))
    return 0


def cmd_rewrite(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "rewrite")
    s = doc.gts()
    if a.rule is not None and a.rule not in doc.rules:
        raise SpecError(f"unknown rule {a.rule!r}")
    steps = [st for st in enumerate_rewrites(s, doc.graph(a.graph)) if a.rule in (None, st.rule)]
    for i, st in enumerate(steps):
        match = {**st.match.node_map, **st.match.edge_map}
        if out.fmt == "json":
            out.json({"index": i, "rule": st.rule, "match": dict(sorted(match.items())), "result": graph_json(st.result)})
        else:
            m = " ".join(f"{k}->{v}" for k, v in sorted(match.items()))
            out.line(f"[{i}] {st.rule} match {m} result {fmt_graph(st.result)}")
    if out.fmt == "text":
        out.line(f"{len(steps)} rewrite(s)")
    return 0


def explore(doc: SpecDocument, start: State, depth: int, allow_node_only: bool):
    """Breadth-first LTS exploration; states are numbered in discovery order up to isomorphism."""
    s = doc.gts()
    ids: dict[tuple, int] = {state_key(start): 0}
    states = [start]
    edges: list[tuple[int, int, Transition]] = []
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for i in frontier:
            for t in enumerate_bc_transitions(s, states[i], allow_node_only):
                k = state_key(t.target)
                if k not in ids:
                    ids[k] = len(states)
                    states.append(t.target)
                    nxt.append(ids[k])
                edges.append((i, ids[k], t))
        frontier = nxt
    return states, edges


def cmd_lts(a, out: Out) -> int:
    doc = load(a.file)
    if a.depth < 0:
        raise UsageError("--depth must be non-negative")
    states, edges = explore(doc, doc.state(a.state), a.depth, a.allow_node_only_matches)
    if out.fmt == "json":
        for i, st in enumerate(states):
            out.json({"state": i, "interface": graph_json(st.interface), "graph": graph_json(st.graph)})
        for src, dst, t in edges:
            out.json({"from": src, "to": dst, **transition_json(t)})
    elif out.fmt == "dot":
        out.line("digraph lts {")
        for i, st in enumerate(states):
            label = f"s{i}: J={fmt_graph(st.interface)} G={fmt_graph(st.graph)}"
            out.line(f"  s{i} [shape=box, label={json.dumps(label, ensure_ascii=False)}];")
        for src, dst, t in edges:
            lab = "tau" if t.label.is_silent() else f"F={fmt_graph(t.label.f)} K={fmt_graph(t.label.k)}"
            out.line(f"  s{src} -> s{dst} [label={json.dumps(lab + ' ' + ','.join(t.rules), ensure_ascii=False)}];")
        out.line("}")
    else:
        for i, st in enumerate(states):
            out.line(f"s{i}: J={fmt_graph(st.interface)} G={fmt_graph(st.graph)}")
        per_source: dict[int, int] = {}
        for src, dst, t in edges:
            n = per_source.get(src, 0)
            per_source[src] = n + 1
            out.line(f"s{src}:{n} -> s{dst} {fmt_transition(t)}")
        out.line(f"{len(states)} state(s), {len(edges)} transition(s)")
    return 0


def cmd_equiv(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "equiv")
    rep = check_equivalence(doc.gts(), doc.state(a.state), a.allow_node_only_matches)
    if out.fmt == "json":
        out.json({"equal": rep.equal, "n": len(rep.bc), "sos": len(rep.sos), "missing": len(rep.missing), "extra": len(rep.extra)})
    else:
        out.line(rep.summary())
    return 0 if rep.equal else 1


def cmd_active_pairs(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "active-pairs")
    pairs = active_pairs(doc.gts())
    for p in pairs:
        if out.fmt == "json":
            out.json({"rule": p.rule, "d": graph_json(p.d), "d_hat": graph_json(p.d_hat), "minimal_interface": graph_json(p.minimal_interface)})
        else:
            out.line(f"{p.rule}: D={fmt_graph(p.d)} D^={fmt_graph(p.d_hat)} J={fmt_graph(p.minimal_interface)}")
    if out.fmt == "text":
        out.line(f"{len(pairs)} active pair(s)")
    return 0


def cmd_classify(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "classify")
    names = a.states.split(",") if a.states else list(doc.states)
    cls = classify(doc.gts(), [doc.state(n) for n in names if n])
    if out.fmt == "json":
        out.json({k: {"value": f.value, "reason": f.reason} for k, f in cls.flags().items()} | {"corpus_size": cls.corpus_size})
    else:
        for k, f in cls.flags().items():
            out.line(f"{k}={str(f.value).lower()}  # {f.reason}")
        out.line(f"corpus_size={cls.corpus_size}")
    return 0


def _adm_text(x: Admissibility) -> str:
    return f"{x.rule}: addition {fmt_graph(x.addition)} complement {fmt_graph(x.complement)} via {fmt_graph(x.match.image())}"


def cmd_admissible(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "admissible")
    st = doc.state(a.state)
    f = doc.graph(a.borrow)
    try:
        borrow = Inclusion(st.interface, f)
    except ValueError:
        raise GtxError(f"graph {a.borrow!r} does not contain the interface of {a.state!r}") from None
    adm = admissible_rules(doc.gts(), st, borrow)
    for x in adm:
        if out.fmt == "json":
            out.json({"rule": x.rule, "addition": graph_json(x.addition), "complement": graph_json(x.complement)})
        else:
            out.line(_adm_text(x))
    if out.fmt == "text":
        out.line(f"{len({x.rule for x in adm})} admissible rule(s): {', '.join(sorted({x.rule for x in adm}))}")
    return 0


def _pick(doc: SpecDocument, ref: str, allow_node_only: bool) -> Transition:
    name, sep, idx = ref.rpartition(":")
    if not sep or not idx.isdigit():
        raise UsageError(f"transition reference {ref!r} must look like STATE:INDEX")
    ts = enumerate_bc_transitions(doc.gts(), doc.state(name), allow_node_only)
    if int(idx) >= len(ts):
        raise GtxError(f"state {name!r} has only {len(ts)} transition(s)")
    return ts[int(idx)]


def cmd_compose(a, out: Out) -> int:
    doc = load(a.file)
    _needs(out.fmt, ("text", "json"), "compose")
    t1 = _pick(doc, a.t1, False)
    t2 = _pick(doc, a.t2, False)
    for c in compose_tau_all(t1, t2, doc.gts(), list(doc.states.values())):
        if out.fmt == "json":
            out.json({"rule": c.witness.rule, **transition_json(c.transition)})
        else:
            out.line(f"{c.witness.rule}: G={fmt_graph(c.gbar)} J={fmt_graph(c.jbar)} tau-> H={fmt_graph(c.hbar)} (validated)")
    return 0


def cmd_export_dot(a, out: Out) -> int:
    doc = load(a.file)
    text = object_dot(doc, a.object)
    if a.output in (None, "-"):
        out.stream.write(text)
    else:
        Path(a.output).write_text(text, encoding="utf-8")
    return 0


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "rewrite": cmd_rewrite,
    "lts": cmd_lts,
    "equiv": cmd_equiv,
    "active-pairs": cmd_active_pairs,
    "classify": cmd_classify,
    "admissible": cmd_admissible,
    "compose": cmd_compose,
    "export-dot": cmd_export_dot,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "dot"], default=argparse.SUPPRESS)
    p = _Parser(prog="gtx", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, help: str):
        q = sub.add_parser(name, help=help, parents=[common])
        q.add_argument("file")
        return q

    add("validate", "parse and validate a .gts file")
    q = add("rewrite", "DPO rewrite steps of a graph")
    q.add_argument("--graph", required=True)
    q.add_argument("--rule")
    q = add("lts", "borrowed-context transitions from a state")
    q.add_argument("--state", required=True)
    q.add_argument("--depth", type=int, default=1)
    q.add_argument("--allow-node-only-matches", action="store_true")
    q = add("equiv", "compare SOS derivations with BC enumeration")
    q.add_argument("--state", required=True)
    q.add_argument("--allow-node-only-matches", action="store_true")
    add("active-pairs", "list active pairs of all rules")
    q = add("classify", "classify the system")
    q.add_argument("--states", help="comma-separated state names (default: all)")
    q = add("admissible", "rules admissible for a borrow")
    q.add_argument("--state", required=True)
    q.add_argument("--borrow", required=True, help="graph F containing the state interface")
    q = add("compose", "compose two tau-compatible transitions")
    q.add_argument("--t1", required=True, help="STATE:INDEX as listed by lts")
    q.add_argument("--t2", required=True, help="STATE:INDEX as listed by lts")
    q = add("export-dot", "write a graph, state or rule as DOT")
    q.add_argument("--object", required=True)
    q.add_argument("-o", dest="output")
    return p


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    fmt = "json" if "json" in argv and "--format" in argv else "text"

    def diag(kind: str, exc: Exception) -> None:
        if fmt == "json":
            d = {"level": "error", "kind": kind, "message": getattr(exc, "message", str(exc))}
            if isinstance(exc, SpecError) and exc.line:
                d |= {"line": exc.line, "col": exc.col}
            print(json.dumps(d, ensure_ascii=False, sort_keys=True), file=stderr)
        else:
            print(f"gtx: {kind}: {exc}", file=stderr)

    try:
        a = build_parser().parse_args(argv)
        fmt = getattr(a, "format", "text")
        if fmt == "dot" and a.command not in ("lts", "export-dot"):
            raise UsageError(f"--format dot is not supported by {a.command}")
        return COMMANDS[a.command](a, Out(fmt, stdout))
    except UsageError as exc:
        diag("usage", exc)
        return 2
    except GtxError as exc:
        diag(type(exc).__name__, exc)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
