"""Brute-force checks that share as little code as possible with the pipeline.

* :func:`enumerate_data` walks every assignment of twice-slopes within a bound
  and keeps the strict and the lax contraction data.
* :func:`genus_two_ways` recomputes the arithmetic genus of the contraction
  with delta invariants taken from conductor lengths, not from subcurve genera.
* :func:`semigroup_delta` counts gaps of ``<2, e>``.
* :func:`decorated_trees` lists small target trees up to isomorphism.
"""
from __future__ import annotations

import csv
import hashlib
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import networkx as nx

from .clfunc import CLFunction
from .cover import Edge, Marking, TropCover, Vertex, build_cover_graph
from .halfint import HalfInt

CANDIDATE_LIMIT = 10 ** 7


class EnumerationOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class EnumerationSpec:
    max_twice_slope: int = 4
    support: tuple[str, ...] | None = None  # None: every support
    limit: int = CANDIDATE_LIMIT
    nonnegative: bool = False  # prune strict data with deg_L < 0 off the support


@dataclass(frozen=True)
class Enumeration:
    strict: tuple[CLFunction, ...]
    lax: tuple[CLFunction, ...]
    candidates: int
    spec: EnumerationSpec

    tree: TropCover | None = None

    @property
    def contractible_strict(self) -> tuple[CLFunction, ...]:
        """Strict data whose multidegree is also non-negative off the support."""
        T = self.tree
        out = []
        for f in self.strict:
            twice = {v: _twice_base(T, v) for v in T.vertex_ids}
            for e in T.edges:
                a, b = e.ends
                twice[a] += f.edge_slopes[e.id].twice
                twice[b] -= f.edge_slopes[e.id].twice
            if min(twice.values()) >= 0:
                out.append(f)
        return tuple(out)


def _twice_base(T: TropCover, v: str) -> int:
    # 2 * (val - 2 + b/2), kept integral
    return 2 * (T.val(v) - 2) + T.b(v)


def _search(T: TropCover, bound: int, mode: str, limit: int, counter: list,
            nonnegative: bool = False) -> list[dict]:
    """All twice-slope assignments valid in ``mode``.

    Values are tracked doubled.  Each vertex in turn serves as the root with
    value 0; it must be the first vertex (in input order) where the minimum 0
    is attained, so each function is produced once.
    """
    order_of = {v: i for i, v in enumerate(T.vertex_ids)}
    length = {e.id: int(e.length) if e.length.denominator == 1 else e.length for e in T.edges}
    base_of = {v: _twice_base(T, v) for v in T.vertex_ids}
    steps = {1: list(range(-bound, bound + 1)), 2: list(range(-bound, bound + 1, 2))}
    if bound % 2:
        steps[2] = list(range(-bound + 1, bound, 2))
    prune = mode == "lax" or nonnegative
    results = []
    for root in T.vertex_ids:
        # breadth-first order with parent edges
        seq, parent = [root], {root: None}
        for v in seq:
            for e in T.incident(v):
                w = e.other(v)
                if w not in parent:
                    parent[w] = e
                    seq.append(w)
        children = {v: [e for e in T.incident(v) if parent.get(e.other(v)) is e] for v in seq}
        tv = {root: 0}
        slopes: dict[str, int] = {}

        def ok_value(w, x):
            if x < 0:
                return False
            if x == 0 and order_of[w] < order_of[root]:
                return False
            return True

        def recurse(pos):
            counter[0] += 1
            if counter[0] > limit:
                raise EnumerationOverflow(f"more than {limit} candidates")
            if pos == len(seq):
                results.append(dict(slopes))
                return
            v = seq[pos]
            kids = children[v]
            pe = parent[v]
            out_parent = 0
            if pe is not None:
                s = slopes[pe.id]
                out_parent = s if pe.ends[0] == v else -s
            base = base_of[v]
            here = tv[v]
            ranges = []
            for e in kids:
                w = e.other(v)
                L = length[e.id]
                rng = [t for t in steps[1 if e.ramified else 2] if ok_value(w, here + t * L)]
                if len(T.incident(w)) == 1:
                    # look ahead at a leaf: its degree is base_of[w] - t
                    if mode == "strict":
                        rng = [t for t in rng if here + t * L == 0 or base_of[w] == t]
                    if prune:
                        rng = [t for t in rng if base_of[w] >= t]
                ranges.append(rng)
            fixed = mode == "strict" and tv[v] > 0
            if fixed and not kids:
                if base + out_parent != 0:
                    return
                combos = [()]
            elif fixed:
                # the last child slope is forced by balancing
                need = -base - out_parent
                last = set(ranges[-1])
                combos = (
                    head + (need - sum(head),)
                    for head in itertools.product(*ranges[:-1])
                    if need - sum(head) in last
                )
            else:
                combos = itertools.product(*ranges)
            for combo in combos:
                if prune and base + out_parent + sum(combo) < 0:
                    continue
                for e, t in zip(kids, combo):
                    w = e.other(v)
                    slopes[e.id] = t if e.ends[0] == v else -t
                    tv[w] = tv[v] + t * length[e.id]
                recurse(pos + 1)
            for e in kids:
                slopes.pop(e.id, None)

        recurse(0)
    return results


def _as_function(T: TropCover, twice_slopes: dict) -> CLFunction:
    values = {T.vertex_ids[0]: Fraction(0)}
    seq = [T.vertex_ids[0]]
    for v in seq:
        for e in T.incident(v):
            w = e.other(v)
            if w not in values:
                t = twice_slopes[e.id]
                out = t if e.ends[0] == v else -t
                values[w] = values[v] + Fraction(out, 2) * e.length
                seq.append(w)
    low = min(values.values())
    values = {v: values[v] - low for v in T.vertex_ids}
    return CLFunction(
        values,
        {e.id: HalfInt(twice_slopes[e.id]) for e in T.edges},
        {m.id: HalfInt(0) for m, _ in T.markings()},
    )


def enumerate_data(T: TropCover, spec: EnumerationSpec = EnumerationSpec(),
                   modes=("strict", "lax")) -> Enumeration:
    """Every contraction datum on ``T`` with ``|2 * slope| <= bound``.

    Values follow the edge lengths of ``T``.  Iteration order is
    deterministic and results are sorted by the tuple of twice-slopes in
    edge order.
    """
    counter = [0]
    found = {}
    for mode in ("strict", "lax"):
        if mode not in modes:
            found[mode] = []
            continue
        raw = _search(T, spec.max_twice_slope, mode, spec.limit, counter,
                      spec.nonnegative and mode == "strict")
        key = lambda d: tuple(d[e] for e in T.edge_ids)  # noqa: E731
        funcs = []
        for d in sorted(raw, key=key):
            f = _as_function(T, d)
            if spec.support is not None and set(f.support(T)) != set(spec.support):
                continue
            funcs.append(f)
        found[mode] = funcs
    return Enumeration(tuple(found["strict"]), tuple(found["lax"]), counter[0], spec, T)


# genus ------------------------------------------------------------------------


def _conductor_length(chart) -> int:
    total = 0
    for b in chart.branches:
        if not b.ramified:
            total += 2 * (b.m // 2 + 1)
        else:
            total += b.m + 1
    return total


def genus_two_ways(T: TropCover, f: CLFunction) -> tuple[int, Fraction]:
    """Cover genus, and the arithmetic genus of the contraction.

    The second number uses ``delta = dim(O/c) / 2`` for each singular point
    (conductor exponents read off the twice-slopes), ``l - 1`` for each of the
    two ordinary points of an etale pair, and 1 for each surviving node.
    """
    from .contract import contract

    G = build_cover_graph(T)
    outcome = contract(T, G, f)
    if not outcome.reduced:
        raise ValueError("the contraction is not reduced")
    contracted = {v for comp in outcome.contracted for v in comp}
    kept = [cv for cv in G.vertices if cv.base not in contracted]
    total = Fraction(sum(cv.genus for cv in kept))
    for chart in outcome.charts:
        if chart.kind == "etale-pair":
            total += 2 * (chart.ell - 1)
        elif chart.kind != "node":
            total += Fraction(_conductor_length(chart), 2)
    base_of = {e.id: e.ends for e in T.edges}
    for ce in G.edges:
        a, b = base_of[ce.base]
        if a not in contracted and b not in contracted:
            total += 1
    total += 1 - len(kept)
    return G.genus, total


def semigroup_delta(m: int, contracted: bool = True) -> int:
    """Number of gaps of the numerical semigroup generated by 2 and ``e``."""
    e = m + 2 if contracted else m
    if e <= 0 or e % 2 == 0:
        raise ValueError(f"<2, {e}> is not a numerical semigroup")
    reachable = set()
    bound = 2 * e
    for a in range(bound // 2 + 1):
        for b in range(bound // e + 1):
            reachable.add(2 * a + e * b)
    return sum(1 for n in range(bound) if n not in reachable)


# trees ------------------------------------------------------------------------


def canonical_form(T: TropCover) -> str:
    """Isomorphism invariant of a decorated tree (AHU encoding at the centres)."""
    g = nx.Graph()
    g.add_nodes_from(T.vertex_ids)
    g.add_edges_from(e.ends for e in T.edges)
    ram = {frozenset(e.ends): e.ramified for e in T.edges}

    def label(v):
        vert = T.vertex(v)
        return f"{vert.branch_count}:{','.join(sorted(str(m.zero_order) for m in vert.markings))}"

    def enc(v, parent):
        kids = sorted(
            ("R" if ram[frozenset((v, w))] else "U") + enc(w, v)
            for w in g.neighbors(v) if w != parent
        )
        return "(" + label(v) + "".join(kids) + ")"

    centers = nx.center(g) if len(g) > 1 else list(g)
    return min(enc(c, None) for c in centers)


def tree_hash(T: TropCover) -> str:
    return hashlib.sha1(canonical_form(T).encode()).hexdigest()[:12]


def decorated_trees(max_vertices: int, extra: int = 1, min_genus: int = 2,
                    stable: bool = True) -> Iterator[TropCover]:
    """Target trees with up to ``max_vertices`` vertices, up to isomorphism.

    Every ramification pattern is tried.  ``b(v)`` runs over the smallest
    admissible value and ``extra`` further steps of two; a single marking
    carrying all ``g - 1`` zeros sits on the first vertex.  With ``stable``,
    each vertex needs ``val + b + markings >= 3``.
    """
    seen = set()
    for n in range(1, max_vertices + 1):
        shapes = [nx.empty_graph(1)] if n == 1 else list(nx.nonisomorphic_trees(n))
        for shape in shapes:
            nodes = sorted(shape.nodes)
            pairs = sorted(tuple(sorted(p)) for p in shape.edges)
            for ram in itertools.product((False, True), repeat=len(pairs)):
                k = {v: 0 for v in nodes}
                deg = {v: 0 for v in nodes}
                for (a, b), r in zip(pairs, ram):
                    deg[a] += 1
                    deg[b] += 1
                    if r:
                        k[a] += 1
                        k[b] += 1
                choices = []
                for v in nodes:
                    marks = 1 if v == nodes[0] else 0
                    low = k[v] % 2
                    if stable:
                        while deg[v] + low + marks < 3:
                            low += 2
                    choices.append([low + 2 * j for j in range(extra + 1)])
                for bs in itertools.product(*choices):
                    total = sum(bs)
                    g = (total - 2) // 2
                    if total % 2 or g < min_genus:
                        continue
                    if any(b + k[v] == 1 for v, b in zip(nodes, bs)):
                        continue
                    verts = []
                    for v, b in zip(nodes, bs):
                        marks = (Marking("z", g - 1),) if v == nodes[0] else ()
                        verts.append(Vertex(f"v{v}", b, marks))
                    edges = [
                        Edge(f"e{i}", (f"v{a}", f"v{b}"), r)
                        for i, ((a, b), r) in enumerate(zip(pairs, ram))
                    ]
                    T = TropCover(g, (g - 1,), tuple(verts), tuple(edges))
                    key = canonical_form(T)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield T


def write_census(path, rows) -> None:
    """CSV census: tree hash, datum, outcome class, delta list."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["tree_hash", "datum", "outcome", "deltas"])
        for row in rows:
            w.writerow(row)
