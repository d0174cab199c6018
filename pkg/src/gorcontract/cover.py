"""Tropical hyperelliptic admissible covers.

The target of the cover is a tree ``T`` whose vertices carry a branch count
``b(v)`` and marking legs; an edge is *ramified* when the node below it is a
branching node.  The double-cover graph ``Gamma`` is derived from ``T``: a
vertex with ``b + k > 0`` (``k`` the number of adjacent ramified edges) has a
single preimage of genus ``(b + k - 2) / 2``, otherwise it splits into two
rational copies.  Ramified edges lift once, unramified edges twice.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence


class MalformedInput(ValueError):
    """Raised for documents that cannot even be read as a cover."""


@dataclass(frozen=True)
class Marking:
    id: str
    zero_order: int = 0


@dataclass(frozen=True)
class Vertex:
    id: str
    branch_count: int = 0
    markings: tuple[Marking, ...] = ()


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    ramified: bool = False
    length: Fraction = Fraction(1)

    def other(self, v: str) -> str:
        a, b = self.ends
        if v == a:
            return b
        if v == b:
            return a
        raise KeyError(f"vertex {v} is not an end of edge {self.id}")


@dataclass(frozen=True)
class TropCover:
    genus: int
    mu: tuple[int, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _vindex: dict = field(init=False, repr=False, compare=False)
    _eindex: dict = field(init=False, repr=False, compare=False)
    _incident: dict = field(init=False, repr=False, compare=False)
    _ids: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(self.mu))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        vindex = {v.id: i for i, v in enumerate(self.vertices)}
        eindex = {e.id: i for i, e in enumerate(self.edges)}
        incident: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            for end in set(e.ends):
                if end in incident:
                    incident[end].append(e)
        object.__setattr__(
            self, "_ids", (tuple(v.id for v in self.vertices), tuple(e.id for e in self.edges))
        )
        object.__setattr__(self, "_vindex", vindex)
        object.__setattr__(self, "_eindex", eindex)
        object.__setattr__(
            self, "_incident", {k: tuple(v) for k, v in incident.items()}
        )

    # lookups -------------------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return self._ids[0]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return self._ids[1]

    def vertex(self, vid: str) -> Vertex:
        try:
            return self.vertices[self._vindex[vid]]
        except KeyError:
            raise KeyError(f"unknown vertex {vid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self.edges[self._eindex[eid]]
        except KeyError:
            raise KeyError(f"unknown edge {eid!r}") from None

    def vertex_order(self, vid: str) -> int:
        return self._vindex[vid]

    def edge_order(self, eid: str) -> int:
        return self._eindex[eid]

    def incident(self, vid: str) -> tuple[Edge, ...]:
        if vid not in self._incident:
            raise KeyError(f"unknown vertex {vid!r}")
        return self._incident[vid]

    def val(self, vid: str) -> int:
        return len(self.incident(vid))

    def b(self, vid: str) -> int:
        return self.vertex(vid).branch_count

    def k(self, vid: str) -> int:
        return sum(1 for e in self.incident(vid) if e.ramified)

    def markings(self) -> list[tuple[Marking, str]]:
        """All marking legs with their carrying vertex, in document order."""
        return [(m, v.id) for v in self.vertices for m in v.markings]

    def marking_vertex(self, mid: str) -> str:
        for m, vid in self.markings():
            if m.id == mid:
                return vid
        raise KeyError(f"unknown marking {mid!r}")

    def is_split(self, vid: str) -> bool:
        return self.b(vid) + self.k(vid) == 0

    def vertex_genus(self, vid: str) -> int:
        """Genus of each preimage of ``vid`` in the cover (Riemann-Hurwitz)."""
        total = self.b(vid) + self.k(vid)
        if total == 0:
            return 0
        return (total - 2) // 2

    def side(self, eid: str, start: str) -> set[str]:
        """Vertices reachable from ``start`` without crossing edge ``eid``."""
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for e in self.incident(v):
                if e.id == eid:
                    continue
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen

    def components(self, subset: Iterable[str]) -> list[list[str]]:
        """Connected components of the subgraph induced on ``subset``.

        Components and their members come out in vertex input order.
        """
        subset = set(subset)
        order = [v for v in self.vertex_ids if v in subset]
        seen: set[str] = set()
        out = []
        for start in order:
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for e in self.incident(v):
                    w = e.other(v)
                    if w in subset and w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            out.append([v for v in order if v in comp])
        return out

    def with_changes(self, vertices=None, edges=None) -> "TropCover":
        return TropCover(
            genus=self.genus,
            mu=self.mu,
            vertices=self.vertices if vertices is None else tuple(vertices),
            edges=self.edges if edges is None else tuple(edges),
        )


# validation ---------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]
    vertex_genera: dict

    def __bool__(self):
        return self.ok


def _tree_violations(T: TropCover) -> list[Violation]:
    out = []
    ids = [v.id for v in T.vertices]
    if len(set(ids)) != len(ids):
        out.append(Violation("duplicate-vertex", "vertex ids are not unique"))
    eids = [e.id for e in T.edges]
    if len(set(eids)) != len(eids):
        out.append(Violation("duplicate-edge", "edge ids are not unique"))
    known = set(ids)
    for e in T.edges:
        if e.ends[0] not in known or e.ends[1] not in known:
            out.append(Violation("unknown-end", f"edge {e.id} has an unknown end", (e.id,)))
        if e.ends[0] == e.ends[1]:
            out.append(Violation("not-a-tree", f"edge {e.id} is a loop", (e.id,)))
        if e.length <= 0:
            out.append(Violation("bad-length", f"edge {e.id} has non-positive length", (e.id,)))
    if out:
        return out
    if not T.vertices:
        return [Violation("empty", "the target has no vertices")]
    if len(T.edges) != len(T.vertices) - 1 or len(T.components(ids)) != 1:
        out.append(
            Violation(
                "not-a-tree",
                f"{len(T.vertices)} vertices and {len(T.edges)} edges do not form a tree",
            )
        )
    return out


def validate_cover(raw: TropCover, *, min_genus: int = 2) -> ValidationReport:
    """Check every structural invariant of a candidate cover.

    Failures are collected rather than raised; each names the offending ids.
    ``min_genus`` defaults to the hyperelliptic range ``g >= 2``; local
    pictures of genus one may be checked with ``min_genus=1``.
    """
    T = raw
    violations = _tree_violations(T)
    genera: dict[str, int] = {}
    if violations:
        return ValidationReport(False, tuple(violations), genera)

    if T.genus < min_genus:
        violations.append(Violation("genus", f"genus {T.genus} < {min_genus}"))
    for v in T.vertices:
        if v.branch_count < 0:
            violations.append(Violation("negative-branch", f"b({v.id}) < 0", (v.id,)))
    total_b = sum(v.branch_count for v in T.vertices)
    if total_b != 2 * T.genus + 2:
        violations.append(
            Violation("branch-sum", f"sum of b(v) is {total_b}, expected {2 * T.genus + 2}")
        )
    for v in T.vertices:
        total = v.branch_count + T.k(v.id)
        if total % 2:
            violations.append(
                Violation("parity", f"b+k = {total} is odd at vertex {v.id}", (v.id,))
            )
        elif total > 0 and total < 2:
            violations.append(
                Violation("negative-genus", f"derived genus < 0 at vertex {v.id}", (v.id,))
            )
        else:
            genera[v.id] = T.vertex_genus(v.id)

    markings = T.markings()
    mids = [m.id for m, _ in markings]
    if len(set(mids)) != len(mids):
        violations.append(Violation("duplicate-marking", "marking ids are not unique"))
    if len(markings) != len(T.mu):
        violations.append(
            Violation("mu-length", f"{len(markings)} marking legs but mu has {len(T.mu)} entries")
        )
    else:
        for (m, vid), expected in zip(markings, T.mu):
            if m.zero_order != expected:
                violations.append(
                    Violation(
                        "zero-order",
                        f"marking {m.id} has zero order {m.zero_order}, mu says {expected}",
                        (m.id, vid),
                    )
                )
    if any(x < 0 for x in T.mu):
        violations.append(Violation("mu-negative", "mu has a negative entry"))
    if sum(T.mu) != T.genus - 1:
        violations.append(Violation("mu-sum", f"sum of mu is {sum(T.mu)}, expected {T.genus - 1}"))

    return ValidationReport(not violations, tuple(violations), genera)


# the double cover -----------------------------------------------------------


@dataclass(frozen=True)
class CoverVertex:
    id: str
    base: str
    genus: int


@dataclass(frozen=True)
class CoverEdge:
    id: str
    base: str
    ends: tuple[str, str]


@dataclass(frozen=True)
class CoverLeg:
    id: str
    vertex: str
    kind: str  # "marking" or "ramification"
    base: str = ""
    zero_order: int = 0


@dataclass(frozen=True)
class CoverGraph:
    vertices: tuple[CoverVertex, ...]
    edges: tuple[CoverEdge, ...]
    legs: tuple[CoverLeg, ...]

    @property
    def b1(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def genus(self) -> int:
        return sum(v.genus for v in self.vertices) + self.b1

    def over(self, base_vertex: str) -> list[CoverVertex]:
        return [v for v in self.vertices if v.base == base_vertex]

    def edges_over(self, base_edge: str) -> list[CoverEdge]:
        return [e for e in self.edges if e.base == base_edge]


def _lift_ids(T: TropCover, vid: str) -> list[str]:
    return [f"{vid}.1", f"{vid}.2"] if T.is_split(vid) else [vid]


def build_cover_graph(T: TropCover) -> CoverGraph:
    """Derive the double-cover graph of a structurally valid target tree."""
    problems = _tree_violations(T)
    report = validate_cover(T, min_genus=0)
    structural = [
        v for v in report.violations if v.code in {"parity", "negative-genus", "branch-sum"}
    ]
    problems += structural
    if problems:
        raise ValueError("; ".join(p.message for p in problems))

    vertices = []
    for v in T.vertices:
        g = T.vertex_genus(v.id)
        for cid in _lift_ids(T, v.id):
            vertices.append(CoverVertex(cid, v.id, g))

    edges = []
    for e in T.edges:
        a, b = e.ends
        la, lb = _lift_ids(T, a), _lift_ids(T, b)
        if e.ramified:
            edges.append(CoverEdge(e.id, e.id, (la[0], lb[0])))
            continue
        if len(la) == 1:
            la = la * 2
        if len(lb) == 1:
            lb = lb * 2
        for i in range(2):
            edges.append(CoverEdge(f"{e.id}.{i + 1}", e.id, (la[i], lb[i])))

    legs = []
    for v in T.vertices:
        lifts = _lift_ids(T, v.id)
        for m in v.markings:
            for i in range(2):
                legs.append(
                    CoverLeg(f"{m.id}.{i + 1}", lifts[i % len(lifts)], "marking", m.id, m.zero_order)
                )
        for j in range(v.branch_count):
            legs.append(CoverLeg(f"r.{v.id}.{j + 1}", lifts[0], "ramification", v.id))

    graph = CoverGraph(tuple(vertices), tuple(edges), tuple(legs))
    if _components_of_cover(graph) != 1:
        raise ValueError("the double cover is disconnected")
    return graph


def _components_of_cover(G: CoverGraph) -> int:
    parent = {v.id: v.id for v in G.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in G.edges:
        ra, rb = find(e.ends[0]), find(e.ends[1])
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in parent})


def contracted_subcurve_genus(T: TropCover, G: CoverGraph, S: Sequence[str]) -> int:
    """Arithmetic genus of the part of the cover lying over the vertex set ``S``.

    This is ``g(q)`` for a singular point whose contracted component is ``S``.
    When the preimage is two disjoint rational copies the value is ``0``.
    """
    S = list(S)
    if not S:
        raise ValueError("empty vertex set")
    for v in S:
        T.vertex(v)
    if len(T.components(S)) != 1:
        raise ValueError(f"vertex set {S} is not connected")
    inside = set(S)
    cverts = [v for v in G.vertices if v.base in inside]
    cedges = [
        e for e in G.edges
        if T.edge(e.base).ends[0] in inside and T.edge(e.base).ends[1] in inside
    ]
    sub = CoverGraph(tuple(cverts), tuple(cedges), ())
    ncomp = _components_of_cover(sub)
    b1 = len(cedges) - len(cverts) + ncomp
    return sum(v.genus for v in cverts) + b1


def preimage_is_connected(T: TropCover, G: CoverGraph, S: Sequence[str]) -> bool:
    inside = set(S)
    cverts = [v for v in G.vertices if v.base in inside]
    cedges = [
        e for e in G.edges
        if T.edge(e.base).ends[0] in inside and T.edge(e.base).ends[1] in inside
    ]
    return _components_of_cover(CoverGraph(tuple(cverts), tuple(cedges), ())) == 1
