"""Conewise-linear functions on the target tree.

Values live on vertices, slopes on edges (oriented from ``ends[0]`` to
``ends[1]``) and on marking legs.  Edges may carry rational lengths, so
values are arbitrary non-negative rationals; slopes are half-integers,
integral except on ramified edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .cover import CoverGraph, Edge, TropCover, Vertex
from .halfint import ZERO, HalfInt

MODES = ("canonical", "tilde", "contraction")


@dataclass(frozen=True)
class CLFunction:
    values: Mapping[str, Fraction]
    edge_slopes: Mapping[str, HalfInt]
    leg_slopes: Mapping[str, HalfInt] = field(default_factory=dict)
    branch_leg_slope: HalfInt = ZERO

    def __post_init__(self):
        object.__setattr__(self, "values", {k: Fraction(v) for k, v in self.values.items()})
        object.__setattr__(
            self, "edge_slopes", {k: HalfInt.of(v) for k, v in self.edge_slopes.items()}
        )
        object.__setattr__(
            self, "leg_slopes", {k: HalfInt.of(v) for k, v in self.leg_slopes.items()}
        )
        object.__setattr__(self, "branch_leg_slope", HalfInt.of(self.branch_leg_slope))

    def value(self, v: str) -> Fraction:
        return self.values.get(v, Fraction(0))

    def slope(self, e: Edge, source: str) -> HalfInt:
        """Slope of the function along ``e`` measured away from ``source``."""
        s = self.edge_slopes.get(e.id, ZERO)
        if source == e.ends[0]:
            return s
        if source == e.ends[1]:
            return -s
        raise KeyError(f"{source} is not an end of edge {e.id}")

    def leg(self, marking_id: str) -> HalfInt:
        return self.leg_slopes.get(marking_id, ZERO)

    def support(self, T: TropCover) -> list[str]:
        return [v for v in T.vertex_ids if self.value(v) > 0]

    def is_zero(self) -> bool:
        return (
            not any(self.values.values())
            and not any(self.edge_slopes.values())
            and not any(self.leg_slopes.values())
        )


def zero_function(T: TropCover) -> CLFunction:
    return CLFunction(
        {v: Fraction(0) for v in T.vertex_ids},
        {e: ZERO for e in T.edge_ids},
        {m.id: ZERO for m, _ in T.markings()},
    )


def from_values(T: TropCover, values: Mapping[str, Fraction], leg_slopes=None,
                branch_leg_slope=ZERO) -> CLFunction:
    """Build a function from vertex values; slopes are read off edge lengths."""
    slopes = {}
    for e in T.edges:
        a, b = e.ends
        raw = (Fraction(values[b]) - Fraction(values[a])) / e.length
        slopes[e.id] = HalfInt.of(raw)
    legs = dict(leg_slopes or {})
    for m, _ in T.markings():
        legs.setdefault(m.id, ZERO)
    return CLFunction(dict(values), slopes, legs, branch_leg_slope)


def well_formed_problems(T: TropCover, f: CLFunction) -> list[str]:
    """Everything wrong with ``f`` as a function on ``T`` (empty when fine)."""
    out = []
    known_v, known_e = set(T.vertex_ids), set(T.edge_ids)
    known_m = {m.id for m, _ in T.markings()}
    for v in f.values:
        if v not in known_v:
            out.append(f"value given for unknown vertex {v}")
    for e in f.edge_slopes:
        if e not in known_e:
            out.append(f"slope given for unknown edge {e}")
    for m in f.leg_slopes:
        if m not in known_m:
            out.append(f"leg slope given for unknown marking {m}")
    for m, s in f.leg_slopes.items():
        if not s.is_integral():
            out.append(f"leg slope {s} on marking {m} is not integral")
    for e in T.edges:
        s = f.edge_slopes.get(e.id, ZERO)
        if not e.ramified and not s.is_integral():
            out.append(f"half-integral slope {s} on unramified edge {e.id}")
        a, b = e.ends
        if f.value(b) != f.value(a) + s.fraction * e.length:
            out.append(
                f"values on edge {e.id} do not match slope {s}: "
                f"{f.value(a)} -> {f.value(b)} over length {e.length}"
            )
    return out


def div_at(T: TropCover, f: CLFunction, v: str) -> HalfInt:
    """Sum of outgoing edge slopes at ``v``; legs are not included."""
    total = ZERO
    for e in T.incident(v):
        total = total + f.slope(e, v)
    return total


def leg_sum(T: TropCover, f: CLFunction, v: str) -> HalfInt:
    total = ZERO
    for m in T.vertex(v).markings:
        total = total + f.leg(m.id)
    return total


def base_degree(T: TropCover, v: str) -> Fraction:
    """``val(v) - 2 + b(v)/2``."""
    return T.val(v) - 2 + Fraction(T.b(v), 2)


def deg_L(T: TropCover, f: CLFunction, v: str) -> Fraction:
    """Degree of the twisted bundle on the component over ``v``."""
    return base_degree(T, v) + div_at(T, f, v).fraction + leg_sum(T, f, v).fraction


@dataclass(frozen=True)
class BalanceEntry:
    vertex: str
    residual: Fraction

    @property
    def ok(self) -> bool:
        return self.residual == 0


@dataclass(frozen=True)
class BalanceReport:
    mode: str
    entries: tuple[BalanceEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[str]:
        return [e.vertex for e in self.entries if not e.ok]


def check_balancing(T: TropCover, f: CLFunction, mode: str,
                    vertices: Iterable[str] | None = None) -> BalanceReport:
    """Residual of the balancing equation of ``mode`` at each vertex.

    ``canonical``: ``val-2+b/2 - div - legs``.
    ``tilde``: ``val-2 - div - legs - b * branch_leg_slope``.
    ``contraction``: ``val-2+b/2 + div + legs``; checked on the support
    unless ``vertices`` is given.
    """
    if mode not in MODES:
        raise ValueError(f"unknown balancing mode {mode!r}")
    if vertices is None:
        vertices = f.support(T) if mode == "contraction" else T.vertex_ids
    entries = []
    for v in vertices:
        div = div_at(T, f, v).fraction
        legs = leg_sum(T, f, v).fraction
        if mode == "canonical":
            r = base_degree(T, v) - div - legs
        elif mode == "tilde":
            r = T.val(v) - 2 - div - legs - T.b(v) * f.branch_leg_slope.fraction
        else:
            r = base_degree(T, v) + div + legs
        entries.append(BalanceEntry(v, r))
    return BalanceReport(mode, tuple(entries))


# solving ----------------------------------------------------------------------


class NoSolution(ValueError):
    pass


def _solve_exact(A: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Gauss-Jordan over the rationals; ``None`` for a singular system."""
    n = len(A)
    M = [row[:] + [r] for row, r in zip(A, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return None
        M[col], M[pivot] = M[pivot], M[col]
        p = M[col][col]
        M[col] = [x / p for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [x - factor * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def solve_slopes(T: TropCover, support: Iterable[str]) -> CLFunction:
    """The function vanishing off ``support`` balanced (contraction mode) on it.

    Values on the support are the unknowns; each support vertex contributes
    one linear equation, so the system is square and solved exactly.  Leg
    slopes are zero.
    """
    support = list(dict.fromkeys(support))
    for v in support:
        T.vertex(v)
    inside = set(support)
    for comp in T.components(support):
        boundary = [
            e for v in comp for e in T.incident(v) if e.other(v) not in inside
        ]
        if not boundary:
            raise NoSolution(
                f"support component {comp} has no boundary; balancing there is inconsistent"
            )
    index = {v: i for i, v in enumerate(support)}
    n = len(support)
    A = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for v in support:
        i = index[v]
        rhs[i] = -base_degree(T, v)
        for e in T.incident(v):
            w = e.other(v)
            inv = 1 / e.length
            A[i][i] -= inv
            if w in index:
                A[i][index[w]] += inv
    sol = _solve_exact(A, rhs) if n else []
    if sol is None:
        raise NoSolution("balancing system on the support is singular")
    values = {v: Fraction(0) for v in T.vertex_ids}
    for v in support:
        values[v] = sol[index[v]]
    for v in T.vertex_ids:
        if values[v] < 0:
            raise NoSolution(f"no non-negative solution: value {values[v]} at vertex {v}")
    slopes = {}
    for e in T.edges:
        a, b = e.ends
        raw = (values[b] - values[a]) / e.length
        if (2 * raw).denominator != 1:
            raise NoSolution(f"slope {raw} on edge {e.id} is not a half-integer")
        s = HalfInt.of(raw)
        if not e.ramified and not s.is_integral():
            raise NoSolution(f"half-integral slope {s} on unramified edge {e.id}")
        slopes[e.id] = s
    return CLFunction(values, slopes, {m.id: ZERO for m, _ in T.markings()})


# validity ---------------------------------------------------------------------


@dataclass(frozen=True)
class Validity:
    ok: bool
    strictness: str
    degrees: dict
    failures: tuple[str, ...]
    contracted: tuple[str, ...]
    ribbon: tuple[str, ...]


def is_contraction_datum(T: TropCover, f: CLFunction, strictness: str = "strict") -> Validity:
    """Strict: balanced on the support.  Lax: ``deg_L >= 0`` everywhere."""
    if strictness not in ("strict", "lax"):
        raise ValueError(f"unknown strictness {strictness!r}")
    for v in T.vertex_ids:
        if f.value(v) < 0:
            raise ValueError(f"negative value {f.value(v)} at vertex {v}")
    degrees = {v: deg_L(T, f, v) for v in T.vertex_ids}
    supp = f.support(T)
    if strictness == "strict":
        failures = tuple(v for v in supp if degrees[v] != 0)
    else:
        failures = tuple(v for v in T.vertex_ids if degrees[v] < 0)
    return Validity(
        ok=not failures,
        strictness=strictness,
        degrees=degrees,
        failures=failures,
        contracted=tuple(v for v in supp if degrees[v] == 0),
        ribbon=tuple(v for v in supp if degrees[v] > 0),
    )


# levels -----------------------------------------------------------------------


@dataclass(frozen=True)
class LevelStructure:
    levels: dict
    N: int

    def at(self, level: int) -> list[str]:
        return [v for v, x in self.levels.items() if x == level]


def level_structure(f: CLFunction) -> LevelStructure:
    """Levels ``-(f - min f)``: integers, maximum 0."""
    if not f.values:
        raise ValueError("function has no vertex values")
    low = min(f.values.values())
    levels = {}
    for v, x in f.values.items():
        shifted = x - low
        if shifted.denominator != 1:
            raise ValueError(f"vertex {v} sits at non-integral level {-shifted}")
        levels[v] = -int(shifted)
    return LevelStructure(levels, -min(levels.values()))


def truncate(T: TropCover, lam_bar: CLFunction, i: int) -> tuple[TropCover, CLFunction]:
    """Level truncation ``max(level - i, 0)`` on a subdivision of ``T``.

    Edges whose end levels lie strictly on both sides of ``i`` get a new
    2-valent vertex ``"<edge>@<i>"`` at the exact crossing point.
    """
    if i > 0:
        raise ValueError(f"truncation index must be <= 0, got {i}")
    ls = level_structure(lam_bar)
    level = dict(ls.levels)
    vertices = list(T.vertices)
    edges: list[Edge] = []
    for e in T.edges:
        a, b = e.ends
        la, lb = level[a], level[b]
        if min(la, lb) < i < max(la, lb):
            mid = f"{e.id}@{i}"
            t = Fraction(la - i, la - lb) * e.length
            vertices.append(Vertex(mid, 0, ()))
            level[mid] = i
            edges.append(Edge(f"{e.id}@{i}a", (a, mid), e.ramified, t))
            edges.append(Edge(f"{e.id}@{i}b", (mid, b), e.ramified, e.length - t))
        else:
            edges.append(e)
    T2 = T.with_changes(vertices=vertices, edges=edges)
    values = {v: Fraction(max(level[v] - i, 0)) for v in T2.vertex_ids}
    slopes = {}
    for e in T2.edges:
        a, b = e.ends
        raw = (values[b] - values[a]) / e.length
        if (2 * raw).denominator != 1:
            raise ValueError(f"truncated slope {raw} on edge {e.id} is not a half-integer")
        slopes[e.id] = HalfInt.of(raw)
    legs = {m.id: ZERO for m, _ in T2.markings()}
    return T2, CLFunction(values, slopes, legs)


# the cover --------------------------------------------------------------------


@dataclass(frozen=True)
class CoverFunction:
    """Pullback of a function to the double-cover graph (integral slopes)."""
    values: dict
    edge_slopes: dict
    leg_slopes: dict


def pullback_to_cover(T: TropCover, G: CoverGraph, f: CLFunction) -> CoverFunction:
    """Copy values, double slopes on ramified edges and branch legs."""
    values = {v.id: f.value(v.base) for v in G.vertices}
    slopes = {}
    for e in G.edges:
        te = T.edge(e.base)
        s = f.edge_slopes.get(te.id, ZERO)
        twice = te.ramified
        slope = s.double() if twice else s
        if isinstance(slope, HalfInt):
            assert slope.is_integral(), f"non-integral slope on cover edge {e.id}"
            slope = int(slope)
        slopes[e.id] = slope
    legs = {}
    for leg in G.legs:
        if leg.kind == "marking":
            legs[leg.id] = int(f.leg(leg.base))
        else:
            legs[leg.id] = f.branch_leg_slope.double()
    return CoverFunction(values, slopes, legs)


def halve_from_cover(T: TropCover, G: CoverGraph, pulled: CoverFunction) -> CLFunction:
    """Inverse of :func:`pullback_to_cover`."""
    values = {}
    for v in G.vertices:
        values[v.base] = pulled.values[v.id]
    slopes = {}
    for e in G.edges:
        te = T.edge(e.base)
        s = pulled.edge_slopes[e.id]
        slopes[te.id] = HalfInt(s) if te.ramified else HalfInt.of(s)
    legs = {}
    branch = ZERO
    for leg in G.legs:
        if leg.kind == "marking":
            legs[leg.base] = HalfInt.of(pulled.leg_slopes[leg.id])
        else:
            branch = HalfInt(pulled.leg_slopes[leg.id])
    return CLFunction(values, slopes, legs, branch)


# sprouting --------------------------------------------------------------------


def sprout(T: TropCover, f: CLFunction) -> tuple[TropCover, CLFunction]:
    """Insert a rational bubble on every marking leg carried by the support.

    A marking of zero order ``m >= 1`` at a vertex ``v`` with ``f(v) > 0``
    moves to a new vertex ``w`` joined to ``v`` by an edge of slope
    ``-(m+1)`` out of ``v`` and length ``f(v)/(m+1)``, so ``f(w) = 0``.
    This lowers ``deg_L(v)`` by ``m`` and gives ``deg_L(w) = m``.
    """
    vertices = []
    new_vertices = []
    new_edges = []
    values = dict(f.values)
    slopes = dict(f.edge_slopes)
    legs = dict(f.leg_slopes)
    for v in T.vertices:
        keep = []
        for m in v.markings:
            if f.value(v.id) > 0 and m.zero_order >= 1:
                if f.leg(m.id) != 0:
                    raise ValueError(
                        f"marking {m.id} on support vertex {v.id} has leg slope {f.leg(m.id)}; "
                        "sprouting expects a truncation with zero leg slopes"
                    )
                w = f"{m.id}^"
                step = m.zero_order + 1
                new_vertices.append(Vertex(w, 0, (m,)))
                eid = f"{v.id}~{m.id}"
                new_edges.append(Edge(eid, (v.id, w), False, f.value(v.id) / step))
                values[w] = Fraction(0)
                slopes[eid] = HalfInt.of(-step)
                legs[m.id] = ZERO
            else:
                keep.append(m)
        vertices.append(Vertex(v.id, v.branch_count, tuple(keep)))
    if not new_vertices:
        return T, f
    T2 = T.with_changes(vertices=vertices + new_vertices, edges=list(T.edges) + new_edges)
    # keep mu aligned with the document order of markings
    order = [m for m, _ in T2.markings()]
    T2 = TropCover(T.genus, tuple(m.zero_order for m in order), T2.vertices, T2.edges)
    f2 = CLFunction(values, slopes, legs, f.branch_leg_slope)
    for v in f2.support(T2):
        for m in T2.vertex(v).markings:
            assert m.zero_order == 0 or f2.leg(m.id) <= 0, f"marking {m.id} left on support"
    return T2, f2

