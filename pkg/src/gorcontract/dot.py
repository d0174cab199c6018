"""Graphviz DOT text for the target tree, the cover graph and Pbar.

Ramified edges and branch legs are drawn blue; cover vertices carry their
genus.  Output is plain undirected DOT with a fixed statement order.
"""
from __future__ import annotations

from .cover import CoverGraph, TropCover


def _q(s: str) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def target_dot(T: TropCover, name: str = "T") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in T.vertices:
        lines.append(f"  {_q(v.id)} [label={_q(f'{v.id} b={v.branch_count}')}];")
        for j in range(v.branch_count):
            leg = f"{v.id}#b{j + 1}"
            lines.append(f"  {_q(leg)} [shape=point, color=blue];")
            lines.append(f"  {_q(v.id)} -- {_q(leg)} [color=blue];")
        for m in v.markings:
            leg = f"{v.id}#{m.id}"
            lines.append(f"  {_q(leg)} [shape=plaintext, label={_q(f'{m.id}:{m.zero_order}')}];")
            lines.append(f"  {_q(v.id)} -- {_q(leg)};")
    for e in T.edges:
        style = " [color=blue]" if e.ramified else ""
        lines.append(f"  {_q(e.ends[0])} -- {_q(e.ends[1])}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cover_dot(T: TropCover, G: CoverGraph, name: str = "Gamma") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in G.vertices:
        lines.append(f"  {_q(v.id)} [label={_q(f'g={v.genus}')}, xlabel={_q(v.id)}];")
    for leg in G.legs:
        lid = f"{leg.vertex}#{leg.id}"
        if leg.kind == "ramification":
            lines.append(f"  {_q(lid)} [shape=point, color=blue];")
            lines.append(f"  {_q(leg.vertex)} -- {_q(lid)} [color=blue];")
        else:
            lines.append(f"  {_q(lid)} [shape=plaintext, label={_q(leg.id)}];")
            lines.append(f"  {_q(leg.vertex)} -- {_q(lid)};")
    for e in G.edges:
        style = " [color=blue]" if T.edge(e.base).ramified else ""
        lines.append(f"  {_q(e.ends[0])} -- {_q(e.ends[1])}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def pbar_dot(T: TropCover, outcome, name: str = "Pbar") -> str:
    """Contracted components become single fused vertices (doublecircles)."""
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    ribbon = {v for r in outcome.ribbons for v in r.vertices}
    for v in outcome.pbar.vertices:
        extra = ", style=dashed" if v in ribbon else ""
        lines.append(f"  {_q(v)} [label={_q(f'{v} b={T.b(v)}')}{extra}];")
    charts = {c.id: c for c in outcome.charts}
    for pid, verts in outcome.pbar.points.items():
        chart = charts[pid]
        label = f"{pid} l={chart.ell} [{'+'.join(verts)}]"
        lines.append(f"  {_q(pid)} [shape=doublecircle, label={_q(label)}];")
    for eid, a, b in outcome.pbar.edges:
        style = " [color=blue]" if T.edge(eid).ramified else ""
        lines.append(f"  {_q(a)} -- {_q(b)}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
