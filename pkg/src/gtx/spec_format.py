"""The ``.gts`` text format: parser with positioned diagnostics, canonical printer, DOT export."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .bclts import State
from .errors import SpecError
from .gts import GTS, Rule, validate_rule
from .hypergraph import Edge, Hypergraph, is_inclusion, validate, validate_alphabet

_TOKEN = re.compile(r"(?P<ws>\s+)|(?P<comment>#[^\n]*)|(?P<punct>[{}();:=])|(?P<word>[^\s{}();:=#]+)")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the word class accepts everything else
            raise SpecError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        if m.lastgroup in ("punct", "word"):
            out.append(Token(m.group(), line, pos - line_start + 1))
        chunk = m.group()
        if "\n" in chunk:
            line += chunk.count("\n")
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    return out


@dataclass
class SpecDocument:
    alphabet: dict[str, int] = field(default_factory=dict)
    graphs: dict[str, Hypergraph] = field(default_factory=dict)
    rules: dict[str, Rule] = field(default_factory=dict)
    states: dict[str, State] = field(default_factory=dict)
    state_graphs: dict[str, str] = field(default_factory=dict)  # state name -> graph name

    def gts(self) -> GTS:
        return GTS(dict(self.alphabet), tuple(self.rules.values()))

    def state(self, name: str) -> State:
        try:
            return self.states[name]
        except KeyError:
            raise SpecError(f"unknown state {name!r}") from None

    def graph(self, name: str) -> Hypergraph:
        try:
            return self.graphs[name]
        except KeyError:
            raise SpecError(f"unknown graph {name!r}") from None


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.doc = SpecDocument()

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str = "token") -> Token:
        t = self.peek()
        if t is None:
            last = self.toks[-1] if self.toks else Token("", 1, 1)
            raise SpecError(f"unexpected end of input, expected {what}", last.line, last.col)
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next(repr(text))
        if t.text != text:
            raise SpecError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return t

    def name(self) -> Token:
        t = self.next("a name")
        if len(t.text) == 1 and t.text in "{}();:=":
            raise SpecError(f"expected a name, found {t.text!r}", t.line, t.col)
        return t

    def names_until(self, stop: str) -> list[Token]:
        out = []
        while (t := self.peek()) is not None and t.text != stop:
            out.append(self.name())
        self.expect(stop)
        return out

    def parse(self) -> SpecDocument:
        while (t := self.peek()) is not None:
            if t.text == "labels":
                self.labels()
            elif t.text == "graph":
                self.next()
                n = self.name()
                self._fresh(n, self.doc.graphs, "graph")
                self.doc.graphs[n.text] = self.graphbody(n.text)
            elif t.text == "rule":
                self.rule()
            elif t.text == "state":
                self.state()
            else:
                raise SpecError(f"expected a section keyword, found {t.text!r}", t.line, t.col)
        return self.doc

    def _fresh(self, n: Token, table: dict, kind: str) -> None:
        if n.text in table:
            raise SpecError(f"duplicate {kind} {n.text!r}", n.line, n.col)

    def labels(self) -> None:
        self.expect("labels")
        self.expect("{")
        while (t := self.peek()) is not None and t.text != "}":
            n = self.name()
            self.expect(":")
            k = self.next("an arity")
            if not k.text.isdigit():
                raise SpecError(f"expected an arity, found {k.text!r}", k.line, k.col)
            if n.text in self.doc.alphabet:
                raise SpecError(f"duplicate label {n.text!r}", n.line, n.col)
            self.doc.alphabet[n.text] = int(k.text)
        self.expect("}")

    def graphbody(self, where: str) -> Hypergraph:
        start = self.expect("{")
        self.expect("nodes")
        nodes = [t.text for t in self.names_until(";")]
        edges: dict[str, Edge] = {}
        while (t := self.peek()) is not None and t.text == "edge":
            self.next()
            eid = self.name()
            self.expect("=")
            lab = self.name()
            self.expect("(")
            tent = self.names_until(")")
            self.expect(";")
            if eid.text in edges:
                raise SpecError(f"duplicate edge {eid.text!r} in {where}", eid.line, eid.col)
            if lab.text not in self.doc.alphabet:
                raise SpecError(f"unknown label {lab.text!r}", lab.line, lab.col)
            if len(tent) != self.doc.alphabet[lab.text]:
                raise SpecError(
                    f"arity mismatch for {lab.text!r}: expected {self.doc.alphabet[lab.text]}, got {len(tent)}",
                    lab.line,
                    lab.col,
                )
            missing = [v for v in tent if v.text not in nodes]
            if missing:
                v = missing[0]
                raise SpecError(f"edge {eid.text!r} attaches to undeclared node {v.text!r}", v.line, v.col)
            edges[eid.text] = Edge(lab.text, tuple(v.text for v in tent))
        self.expect("}")
        try:
            g = Hypergraph(nodes, edges)
        except ValueError as exc:
            raise SpecError(f"{where}: {exc}", start.line, start.col) from exc
        problems = validate(g, self.doc.alphabet)
        if problems:
            raise SpecError(f"{where}: {problems[0]}", start.line, start.col)
        return g

    def rule(self) -> None:
        self.expect("rule")
        n = self.name()
        self._fresh(n, self.doc.rules, "rule")
        self.expect("{")
        self.expect("left")
        left = self.graphbody(f"{n.text}.left")
        self.expect("interface")
        interface = self.graphbody(f"{n.text}.interface")
        self.expect("right")
        right = self.graphbody(f"{n.text}.right")
        self.expect("}")
        r = Rule(n.text, left, interface, right)
        problems = validate_rule(r, self.doc.alphabet)
        if problems:
            raise SpecError(problems[0], n.line, n.col)
        self.doc.rules[n.text] = r

    def state(self) -> None:
        self.expect("state")
        n = self.name()
        self._fresh(n, self.doc.states, "state")
        self.expect("{")
        self.expect("graph")
        gname = self.name()
        self.expect(";")
        if gname.text not in self.doc.graphs:
            raise SpecError(f"unresolved graph reference {gname.text!r}", gname.line, gname.col)
        g = self.doc.graphs[gname.text]
        self.expect("interface")
        self.expect("{")
        self.expect("nodes")
        nodes = self.names_until(";")
        edges: list[Token] = []
        if (t := self.peek()) is not None and t.text == "edges":
            self.next()
            edges = self.names_until(";")
        self.expect("}")
        self.expect("}")
        for tok in nodes:
            if tok.text not in g.nodes:
                raise SpecError(f"interface node {tok.text!r} is not in graph {gname.text!r}", tok.line, tok.col)
        for tok in edges:
            if tok.text not in g.edges:
                raise SpecError(f"interface edge {tok.text!r} is not in graph {gname.text!r}", tok.line, tok.col)
        try:
            j = g.restrict({t.text for t in nodes}, {t.text for t in edges})
        except (KeyError, ValueError) as exc:
            raise SpecError(f"state {n.text!r}: {exc}", n.line, n.col) from exc
        if not is_inclusion(j, g) or j.nodes != {t.text for t in nodes}:
            raise SpecError(f"state {n.text!r}: interface edges need their nodes in the interface", n.line, n.col)
        self.doc.states[n.text] = State(j, g)
        self.doc.state_graphs[n.text] = gname.text


def parse_spec(text: str) -> SpecDocument:
    doc = _Parser(text).parse()
    problems = validate_alphabet(doc.alphabet)
    if problems:
        raise SpecError(problems[0])
    return doc


def _graphbody(g: Hypergraph, indent: str) -> list[str]:
    out = [f"{indent}  nodes {' '.join(sorted(g.nodes))};".replace("nodes ;", "nodes;")]
    for eid, e in g.edges.items():
        out.append(f"{indent}  edge {eid} = {e.label}({' '.join(e.tentacles)});")
    out.append(f"{indent}}}")
    return out


def print_spec(doc: SpecDocument) -> str:
    """Canonical rendering; ``parse_spec(print_spec(d))`` reproduces ``d``."""
    out = ["labels {"]
    out += [f"  {a}:{n}" for a, n in doc.alphabet.items()]
    out.append("}")
    for name, g in doc.graphs.items():
        out.append("")
        out.append(f"graph {name} {{")
        out += _graphbody(g, "")
    for name, r in doc.rules.items():
        out.append("")
        out.append(f"rule {name} {{")
        for part, g in (("left", r.left), ("interface", r.interface), ("right", r.right)):
            out.append(f"  {part} {{")
            out += _graphbody(g, "  ")
        out.append("}")
    for name, st in doc.states.items():
        out.append("")
        out.append(f"state {name} {{")
        out.append(f"  graph {doc.state_graphs[name]};")
        out.append("  interface {")
        out.append(f"    nodes {' '.join(sorted(st.interface.nodes))};".replace("nodes ;", "nodes;"))
        if st.interface.edges:
            out.append(f"    edges {' '.join(st.interface.edges)};")
        out.append("  }")
        out.append("}")
    return "\n".join(out) + "\n"


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_dot_lines(g: Hypergraph, prefix: str = "", interface: Hypergraph | None = None) -> list[str]:
    j = interface if interface is not None else Hypergraph()
    out = []
    for v in sorted(g.nodes):
        extra = ", peripheries=2" if v in j.nodes else ""
        out.append(f"  {_dot_id(prefix + v)} [shape=circle, label={_dot_id(v)}{extra}];")
    for eid, e in g.edges.items():
        extra = ", peripheries=2" if eid in j.edges else ""
        out.append(f"  {_dot_id(prefix + eid)} [shape=box, label={_dot_id(f'{eid}: {e.label}')}{extra}];")
        for i, v in enumerate(e.tentacles):
            out.append(f"  {_dot_id(prefix + eid)} -> {_dot_id(prefix + v)} [label=\"{i}\"];")
    return out


def to_dot(name: str, g: Hypergraph, interface: Hypergraph | None = None) -> str:
    return "\n".join([f"digraph {_dot_id(name)} {{", *graph_dot_lines(g, "", interface), "}"]) + "\n"


def rule_dot(r: Rule) -> str:
    out = [f"digraph {_dot_id(r.name)} {{"]
    for part, g in (("left", r.left), ("interface", r.interface), ("right", r.right)):
        out.append(f"  subgraph {_dot_id('cluster_' + part)} {{")
        out.append(f"  label={_dot_id(part)};")
        out += graph_dot_lines(g, part + ":", r.interface if part != "interface" else None)
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


def object_dot(doc: SpecDocument, name: str) -> str:
    if name in doc.states:
        st = doc.states[name]
        return to_dot(name, st.graph, st.interface)
    if name in doc.graphs:
        return to_dot(name, doc.graphs[name])
    if name in doc.rules:
        return rule_dot(doc.rules[name])
    raise SpecError(f"unknown object {name!r}")
