"""Graph-level outcome of contracting along a contraction datum.

The components of ``{deg_L = 0}`` are collapsed, one point of ``Pbar`` each;
the cover over such a component becomes a single singular point whose local
invariants are packaged in a :class:`SingularityChart`.  Support vertices
with positive ``deg_L`` carry ribbons (non-reduced double structures).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .clfunc import CLFunction, deg_L, div_at, leg_sum
from .cover import CoverGraph, TropCover, contracted_subcurve_genus, preimage_is_connected
from .singularity import Branch, SingularityChart, certify_gorenstein, chart_delta


class InvalidDatum(ValueError):
    pass


@dataclass(frozen=True)
class DegreeProfile:
    degrees: dict

    def __getitem__(self, v):
        return self.degrees[v]

    @property
    def total(self) -> Fraction:
        return sum(self.degrees.values(), Fraction(0))

    def as_tuple(self, order) -> tuple:
        return tuple(self.degrees[v] for v in order)


def multidegree(T: TropCover, f: CLFunction) -> DegreeProfile:
    return DegreeProfile({v: deg_L(T, f, v) for v in T.vertex_ids})


def contraction_locus(T: TropCover, profile: DegreeProfile) -> list[list[str]]:
    """Connected components of ``{deg_L = 0}``, in vertex input order."""
    negative = [v for v in T.vertex_ids if profile[v] < 0]
    if negative:
        raise InvalidDatum(
            "negative degree at " + ", ".join(f"{v} ({profile[v]})" for v in negative)
        )
    return T.components(v for v in T.vertex_ids if profile[v] == 0)


@dataclass(frozen=True)
class Ribbon:
    id: str
    vertices: tuple[str, ...]
    degree: Fraction
    genus: Fraction


@dataclass(frozen=True)
class ParityReport:
    odd_for_b: tuple[str, ...]
    odd_for_L2: tuple[str, ...]
    even: tuple[str, ...]
    twisting_locus: tuple[str, ...]
    exceptional: tuple[str, ...]
    violations: tuple[str, ...]
    orbifold_points: tuple[str, ...]


@dataclass(frozen=True)
class AuditRecord:
    genus_cover: int
    genus_contracted: Fraction | None
    route: str
    terms: dict
    ok: bool


@dataclass(frozen=True)
class PbarGraph:
    vertices: tuple[str, ...]
    points: dict  # point id -> contracted vertices
    edges: tuple[tuple[str, str, str], ...]  # (edge id, end, end)


@dataclass(frozen=True)
class ContractionOutcome:
    profile: DegreeProfile
    contracted: tuple[tuple[str, ...], ...]
    charts: tuple[SingularityChart, ...]
    ribbons: tuple[Ribbon, ...]
    parity: ParityReport
    pbar: PbarGraph
    audit: AuditRecord
    strict: bool
    extras: dict = field(default_factory=dict)

    @property
    def reduced(self) -> bool:
        return not self.ribbons and all(c.reduced for c in self.charts)

    @property
    def twisting_locus(self) -> tuple[str, ...]:
        return self.parity.twisting_locus


def _side_b(T: TropCover, eid: str) -> int:
    a = T.edge(eid).ends[0]
    return sum(T.b(v) for v in T.side(eid, a))


def parity_analysis(T: TropCover, f: CLFunction, profile: DegreeProfile) -> ParityReport:
    """Classify each node as odd or even for ``b`` and for ``L^2``.

    For the side ``A`` containing ``ends[0]``, a node is odd for ``b`` when
    ``b(A)`` is odd and odd for ``L^2`` when ``b(A) + 2s`` is odd, ``s`` the
    slope along the edge.  The exceptional locus is the set of edges meeting
    the support; the lemma says odd-for-``b`` nodes there have half-integral
    slope and are even for ``L^2``.
    """
    supp = set(f.support(T))
    odd_b, odd_l2, even, twist, exc, bad = [], [], [], [], [], []
    for e in T.edges:
        bA = _side_b(T, e.id)
        twice = f.edge_slopes.get(e.id).double() if e.id in f.edge_slopes else 0
        is_odd_b = bA % 2 == 1
        is_odd_l2 = (bA + twice) % 2 == 1
        if is_odd_b:
            odd_b.append(e.id)
        if is_odd_l2:
            odd_l2.append(e.id)
        else:
            even.append(e.id)
        touches = e.ends[0] in supp or e.ends[1] in supp
        if touches:
            exc.append(e.id)
        if is_odd_l2 and not touches:
            twist.append(e.id)
        if is_odd_b and touches and (twice % 2 == 0 or is_odd_l2):
            bad.append(e.id)
        if is_odd_l2 and touches:
            bad.append(e.id)
    orbifold = tuple(v for v in T.vertex_ids if profile[v].denominator != 1)
    return ParityReport(
        tuple(odd_b), tuple(odd_l2), tuple(even), tuple(twist), tuple(exc),
        tuple(dict.fromkeys(bad)), orbifold,
    )


def _component_chart(T, G, f, comp, idx) -> SingularityChart:
    inside = set(comp)
    boundary = []
    for v in comp:
        for e in T.incident(v):
            w = e.other(v)
            if w not in inside:
                s = f.slope(e, v)
                delta = 0 if f.value(w) > 0 else 1
                boundary.append((e, v, w, s, delta))
    if not boundary:
        raise InvalidDatum(f"contracted component {comp} is the whole tree")
    boundary.sort(key=lambda t: (-t[4], T.edge_order(t[0].id)))
    branches = tuple(
        Branch(m=abs(s.double()), delta=delta, ramified=e.ramified, source=e.id, neighbour=w)
        for e, v, w, s, delta in boundary
    )
    connected = preimage_is_connected(T, G, comp)
    g_q = contracted_subcurve_genus(T, G, comp) if connected else 0
    if not connected:
        kind = "etale-pair"
    elif len(branches) == 1:
        kind = "contracted-component"
    else:
        kind = "m-fold"
    return SingularityChart(
        id=f"q{idx}", branches=branches, g_q=g_q, kind=kind, vertices=tuple(comp)
    )


def _node_chart(T, f, e, idx) -> SingularityChart:
    ends = []
    for v in e.ends:
        ends.append((v, 0 if f.value(v) > 0 else 1))
    ends.sort(key=lambda t: (-t[1], T.vertex_order(t[0])))
    m = abs(f.edge_slopes[e.id].double())
    branches = tuple(
        Branch(m=m, delta=d, ramified=e.ramified, source=v, neighbour=e.id) for v, d in ends
    )
    return SingularityChart(id=f"n{idx}", branches=branches, g_q=None, kind="node",
                            vertices=())


def contract(T: TropCover, G: CoverGraph, f: CLFunction) -> ContractionOutcome:
    for v in T.vertex_ids:
        if f.value(v) < 0:
            raise InvalidDatum(f"negative value {f.value(v)} at vertex {v}")
    profile = multidegree(T, f)
    failures = [v for v in T.vertex_ids if profile[v] < 0]
    if failures:
        raise InvalidDatum("not a lax contraction datum: deg_L < 0 at " + ", ".join(failures))
    supp = set(f.support(T))
    strict = all(profile[v] == 0 for v in supp)
    locus = contraction_locus(T, profile)
    contracted_set = {v for comp in locus for v in comp}
    for v in contracted_set:
        for m in T.vertex(v).markings:
            if f.leg(m.id) != 0:
                raise InvalidDatum(
                    f"marking {m.id} on contracted vertex {v} has leg slope {f.leg(m.id)}; "
                    "contracted components need zero leg slopes"
                )

    charts = [_component_chart(T, G, f, comp, i + 1) for i, comp in enumerate(locus)]
    point_of = {v: charts[i].id for i, comp in enumerate(locus) for v in comp}

    node_idx = 0
    surviving = []
    for e in T.edges:
        a, b = e.ends
        if a in contracted_set or b in contracted_set:
            if not (a in contracted_set and b in contracted_set):
                surviving.append((e.id, point_of.get(a, a), point_of.get(b, b)))
            continue
        surviving.append((e.id, a, b))
        if a in supp or b in supp:
            node_idx += 1
            charts.append(_node_chart(T, f, e, node_idx))

    ribbons = []
    ribbon_vertices = [v for v in T.vertex_ids if v in supp and profile[v] > 0]
    for i, comp in enumerate(T.components(ribbon_vertices)):
        d = Fraction(0)
        # slopes of edges inside the component cancel in the sum
        for v in comp:
            d += -Fraction(T.b(v), 2) - div_at(T, f, v).fraction - leg_sum(T, f, v).fraction
        ribbons.append(Ribbon(f"r{i + 1}", tuple(comp), d, -d - 1))

    parity = parity_analysis(T, f, profile)
    pbar = PbarGraph(
        tuple(v for v in T.vertex_ids if v not in contracted_set),
        {c.id: c.vertices for c in charts if c.kind != "node"},
        tuple(surviving),
    )
    outcome = ContractionOutcome(
        profile=profile,
        contracted=tuple(tuple(c) for c in locus),
        charts=tuple(charts),
        ribbons=tuple(ribbons),
        parity=parity,
        pbar=pbar,
        audit=AuditRecord(G.genus, None, "pending", {}, False),
        strict=strict,
        extras={"leg_total": sum((s.fraction for s in f.leg_slopes.values()), Fraction(0))},
    )
    audit = genus_audit(T, outcome, G)
    return ContractionOutcome(
        profile, outcome.contracted, outcome.charts, outcome.ribbons, parity, pbar,
        audit, strict, outcome.extras,
    )


class GenusMismatch(AssertionError):
    pass


def genus_audit(T: TropCover, outcome: ContractionOutcome, G: CoverGraph,
                raise_on_mismatch: bool = True) -> AuditRecord:
    """Compare the cover genus with the arithmetic genus of the contraction.

    Reduced case: normalization genera plus the delta invariants, minus the
    number of normalization components, plus one.  Non-reduced case: the
    degree route ``sum(deg_L) + 1``, which is not independent.
    """
    g = G.genus
    if not outcome.reduced:
        legs = outcome.extras.get("leg_total", Fraction(0))
        p_a = outcome.profile.total - legs + 1
        terms = {"total_degree": outcome.profile.total, "leg_slopes": legs}
        return AuditRecord(g, p_a, "degree", terms, p_a == g)

    contracted = {v for comp in outcome.contracted for v in comp}
    keep = [cv for cv in G.vertices if cv.base not in contracted]
    genera = sum(cv.genus for cv in keep)
    chart_deltas = {}
    for chart in outcome.charts:
        if chart.kind == "node":
            continue
        chart_deltas[chart.id] = chart_delta(chart)
        if chart.kind != "etale-pair":
            cert = certify_gorenstein(chart)
            if not cert.ok:
                raise GenusMismatch(f"chart {chart.id} fails the Gorenstein identity: {cert}")
    nodes = 0
    for ce in G.edges:
        a, b = T.edge(ce.base).ends
        if a not in contracted and b not in contracted:
            nodes += 1
    p_a = genera + sum(chart_deltas.values()) + nodes - len(keep) + 1
    terms = {
        "normalization_genera": genera,
        "chart_deltas": chart_deltas,
        "nodes": nodes,
        "components": len(keep),
    }
    ok = p_a == g
    if not ok and raise_on_mismatch:
        raise GenusMismatch(f"genus audit failed: cover genus {g}, contraction {p_a}; {terms}")
    return AuditRecord(g, Fraction(p_a), "normalization", terms, ok)
