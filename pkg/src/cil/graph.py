"""Concept-graphs of CIL terms and their DOT rendering.

A graph is built inductively.  Every open wire is the list of edge sources
that end on it: fusing wires (link, and the wire join of &) merges lists,
per reorders them and dum inserts empty (loose) wires.  Plugging an
argument into a comb position draws edges from that wire's sources to the
argument's root; the argument wires that comb does not export become
folded nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .seqcomb import STAR, wire_map
from .terms import Comb, Conj, Dum, Ex, Link, Neg, Per, Prim, PseudoVar


@dataclass
class ConceptGraph:
    nodes: list = field(default_factory=list)   # (id, kind, label)
    edges: list = field(default_factory=list)   # (src, dst, label)
    root: str = ""
    wires: list = field(default_factory=list)   # list of source lists, left to right

    @property
    def open_edges(self) -> int:
        return len(self.wires)


class _Builder:
    def __init__(self):
        self.g = ConceptGraph()
        self.count = 0

    def node(self, kind: str, label: str) -> str:
        self.count += 1
        nid = f"n{self.count}"
        self.g.nodes.append((nid, kind, label))
        return nid

    def edge(self, src: str, dst: str, label: str = "") -> None:
        self.g.edges.append((src, dst, label))

    def build(self, t) -> tuple[str, list]:
        if isinstance(t, Prim):
            if t.sort < 0:
                return self.node("individual", t.name), []
            r = self.node("root", t.name)
            return r, [[(r, str(i))] for i in range(1, t.sort + 1)]
        if isinstance(t, PseudoVar):
            return self.node("variable", "?" + t.name), []
        if isinstance(t, (Link, Per, Dum)):
            kind = {Link: "link", Per: "per", Dum: "dum"}[type(t)]
            root, wires = self.build(t.body)
            f, k = wire_map(kind, t.seq)
            out: list = [[] for _ in range(k)]
            for j, w in enumerate(wires):
                out[f[j] - 1].extend(w)
            return root, out
        if isinstance(t, Neg):
            root, wires = self.build(t.body)
            r = self.node("root", "¬")
            self.edge(r, root)
            if not wires:
                return r, []
            bar = self.node("bar", str(len(wires)))
            out = []
            for i, w in enumerate(wires, 1):
                for src, _ in w:
                    self.edge(src, f"{bar}:w{i}")
                out.append([(f"{bar}:w{i}", "")])
            return r, out
        if isinstance(t, Conj):
            ra, wa = self.build(t.left)
            rb, wb = self.build(t.right)
            r = self.node("root", "&")
            self.edge(r, ra)
            self.edge(r, rb)
            return r, [a + b for a, b in zip(wa, wb)]
        if isinstance(t, Ex):
            root, wires = self.build(t.body)
            out = []
            for m, w in zip(t.mask, wires):
                if m:
                    q = self.node("exists", "∃")
                    for src, _ in w:
                        self.edge(src, q)
                else:
                    out.append(w)
            return root, out
        if isinstance(t, Comb):
            root, wires = self.build(t.head)
            args = iter(t.args)
            out = []
            for entry, w in zip(t.seq.entries, wires):
                if entry == STAR:
                    out.append(w)
                    continue
                a = next(args)
                ar, aw = self.build(a)
                for src, _ in w:
                    self.edge(src, ar)
                keep = len(aw) - entry
                for fw in aw[:keep]:
                    folded = self.node("folded", "")
                    for src, _ in fw:
                        self.edge(src, folded)
                out.extend(aw[keep:])
            return root, out
        raise TypeError(f"not a CIL term: {t!r}")


def concept_graph(t) -> ConceptGraph:
    b = _Builder()
    root, wires = b.build(t)
    b.g.root = root
    b.g.wires = wires
    return b.g


_STYLE = {
    "root": 'shape=ellipse',
    "individual": 'shape=box, style=rounded',
    "variable": 'shape=plaintext',
    "exists": 'shape=circle, width=0.3, fixedsize=true',
    "folded": 'shape=point, style=filled, width=0.12',
    "anchor": 'shape=point, style=invis, width=0.01',
    "loose": 'shape=point, width=0.05',
}


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def dot_export(t, name: str = "cil") -> str:
    """Deterministic DOT text for the concept-graph of ``t``."""
    g = concept_graph(t)
    lines = [f"digraph {_q(name)} {{", "  ordering=out;", "  node [fontname=Helvetica];"]
    for nid, kind, label in g.nodes:
        if kind == "bar":
            ports = "|".join(f"<w{i}>" for i in range(1, int(label) + 1))
            lines.append(f'  {nid} [shape=record, height=0.1, style=filled, fillcolor=black, label="{ports}"];')
            continue
        extra = ", peripheries=2" if nid == g.root else ""
        lines.append(f"  {nid} [label={_q(label)}, {_STYLE[kind]}{extra}];")
    for src, dst, label in g.edges:
        attr = f" [label={_q(label)}]" if label else ""
        lines.append(f"  {src} -> {dst}{attr};")
    anchors = []
    for i, w in enumerate(g.wires, 1):
        a = f"o{i}"
        anchors.append(a)
        lines.append(f"  {a} [label={_q(str(i))}, {_STYLE['anchor']}, xlabel={_q(str(i))}];")
        if not w:
            loose = f"l{i}"
            lines.append(f"  {loose} [label=\"\", {_STYLE['loose']}];")
            lines.append(f"  {loose} -> {a} [arrowhead=none];")
        for src, label in w:
            attr = f" [taillabel={_q(label)}]" if label and len(w) == 1 else ""
            lines.append(f"  {src} -> {a}{attr};")
    if anchors:
        lines.append("  { rank=sink; " + " -> ".join(anchors) + " [style=invis]; }"
                     if len(anchors) > 1 else "  { rank=sink; o1; }")
    lines.append("}")
    return "\n".join(lines) + "\n"
