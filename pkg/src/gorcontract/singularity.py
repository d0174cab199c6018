"""Local rings of the contracted curve at its singular points.

A chart is the numerical data of one point: for each branch of ``Pbar`` the
twice-slope ``m``, the reducedness flag ``delta`` (0 when the function is
positive on that branch) and whether the branch edge is ramified.  From it we
write down the complete local ring as generators and relations, its
normalization, conductor and delta invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly

KINDS = ("contracted-component", "branch-point", "generic", "m-fold", "node", "etale-pair")


@dataclass(frozen=True)
class Branch:
    m: int
    delta: int = 1
    ramified: bool | None = None
    source: str = ""
    neighbour: str = ""

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError(f"delta must be 0 or 1, got {self.delta}")
        if self.ramified is None:
            object.__setattr__(self, "ramified", self.m % 2 == 1)

    @property
    def type(self) -> str:
        """``h`` (two sheets), ``k`` (one ramified sheet) or ``d`` (ribbon)."""
        if self.delta == 0:
            return "d"
        return "k" if self.ramified else "h"


@dataclass(frozen=True)
class SingularityChart:
    branches: tuple[Branch, ...]
    g_q: int | None = None
    kind: str = "m-fold"
    id: str = "q"
    vertices: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if self.kind not in KINDS:
            raise ValueError(f"unknown chart kind {self.kind!r}")
        if not self.branches:
            raise ValueError("a chart needs at least one branch")

    @property
    def ell(self) -> int:
        return len(self.branches)

    @property
    def reduced(self) -> bool:
        return all(b.delta == 1 for b in self.branches)

    @property
    def parity_mismatch(self) -> bool:
        """A reduced branch whose twice-slope parity disagrees with ramification."""
        return any(b.delta == 1 and (b.m % 2 == 1) != b.ramified for b in self.branches)

    @property
    def h(self) -> int:
        return sum(1 for b in self.branches if b.type == "h")

    @property
    def k(self) -> int:
        return sum(1 for b in self.branches if b.type == "k")


def make_chart(ms, deltas=None, g_q=None, kind=None, ramified=None) -> SingularityChart:
    """Convenience constructor from parallel lists."""
    ms = list(ms)
    deltas = list(deltas) if deltas is not None else [1] * len(ms)
    ramified = list(ramified) if ramified is not None else [None] * len(ms)
    if kind is None:
        kind = "contracted-component" if len(ms) == 1 else "m-fold"
    branches = tuple(Branch(m, d, r) for m, d, r in zip(ms, deltas, ramified))
    return SingularityChart(branches, g_q, kind)


# presentations ----------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    base_vars: tuple[str, ...]
    extra_vars: tuple[str, ...]
    relations: tuple[Poly, ...]

    @property
    def text(self) -> str:
        return "\n".join(str(r) for r in self.relations)

    def strings(self) -> list[str]:
        return [str(r) for r in self.relations]


def _u_names(ell: int) -> list[str]:
    """Names of ``u_2..u_ell``; a single ``u`` when ``ell <= 2``."""
    if ell <= 2:
        return ["u"]
    return [f"u{i}" for i in range(2, ell + 1)]


def present(chart: SingularityChart) -> Presentation:
    """Generators and relations of the complete local ring at the point."""
    ell, br = chart.ell, chart.branches
    for b in br:
        if b.m < 0:
            raise ValueError(f"negative twice-slope {b.m}")
    s = [Poly.var(f"s{i}") for i in range(1, ell + 1)]
    snames = tuple(f"s{i}" for i in range(1, ell + 1))

    if chart.kind == "etale-pair":
        rels = [s[i] * s[j] for i in range(ell) for j in range(i + 1, ell)]
        u = Poly.var("u")
        rels.append(u ** 2 - 1)
        return Presentation(snames, ("u",), tuple(rels))

    if ell == 1:
        u = Poly.var("u")
        d1 = br[0].delta
        if chart.kind == "contracted-component":
            rel = u ** 2 - d1 * s[0] ** (br[0].m + 2)
        elif chart.kind == "branch-point":
            rel = u ** 2 - d1 * s[0]
        elif chart.kind == "generic":
            rel = u ** 2 - d1
        else:
            raise ValueError(f"chart kind {chart.kind} needs at least two branches")
        return Presentation(snames, ("u",), (rel,))

    if chart.kind in ("contracted-component", "branch-point", "generic"):
        raise ValueError(f"chart kind {chart.kind} has exactly one branch")
    bad = [i + 1 for i, b in enumerate(br) if b.m <= 0]
    if bad:
        raise ValueError(f"branches {bad} have twice-slope <= 0; no presentation for this chart")

    unames = _u_names(ell)
    uvar = {i: Poly.var(unames[0] if ell == 2 else f"u{i}") for i in range(2, ell + 1)}
    m = {i + 1: b.m for i, b in enumerate(br)}
    d = {i + 1: b.delta for i, b in enumerate(br)}
    S = {i + 1: s[i] for i in range(ell)}
    lead = d[1] * S[1] ** m[1]

    rels = [S[i] * S[j] for i in range(1, ell + 1) for j in range(i + 1, ell + 1)]
    idx = range(2, ell + 1)
    rels += [S[1] * (uvar[i] - uvar[j]) for i in idx for j in idx if i < j]
    rels += [S[i] * uvar[j] for i in idx for j in idx if i != j]
    rels += [uvar[i] ** 2 - lead - d[i] * S[i] ** m[i] for i in idx]
    rels += [uvar[i] * uvar[j] - lead for i in idx for j in idx if i < j]
    return Presentation(snames, tuple(unames), tuple(r for r in rels if not r.is_zero()))


# gluing -----------------------------------------------------------------------


@dataclass(frozen=True)
class GlueCertificate:
    branch_piece: Presentation
    complement: Presentation
    restricted_to_branch: tuple[Poly, ...]
    restricted_to_complement: tuple[Poly, ...]
    q_length: int
    ok: bool


def _complement_relations(chart: SingularityChart) -> list[Poly]:
    ell = chart.ell
    S = {i: Poly.var(f"s{i}") for i in range(2, ell + 1)}
    U = {i: Poly.var(f"u{i}") for i in range(2, ell + 1)}
    br = {i + 1: b for i, b in enumerate(chart.branches)}
    idx = range(2, ell + 1)
    rels = [S[i] * S[j] for i in idx for j in idx if i < j]
    rels += [S[i] * U[j] for i in idx for j in idx if i != j]
    rels += [U[i] ** 2 - br[i].delta * S[i] ** br[i].m for i in idx]
    rels += [U[i] * U[j] for i in idx for j in idx if i < j]
    return [r for r in rels if not r.is_zero()]


def glue_decomposition(chart: SingularityChart) -> GlueCertificate:
    """Split the point into the ``s1`` branch and the transverse union of the rest.

    Both pieces are checked by substitution into the full ideal: killing
    ``s2..sl`` and identifying the ``u``'s must give exactly the branch piece,
    killing ``s1`` must land inside the complementary ideal.  The gluing
    module ``Q`` has length ``delta - delta(piece 1) - delta(piece 2)``,
    which is 2 for a tangent-vector gluing.
    """
    if chart.ell < 2:
        raise ValueError("gluing needs at least two branches")
    full = present(chart)
    ell = chart.ell
    b1 = chart.branches[0]
    s1, u1 = Poly.var("s1"), Poly.var("u1")
    piece1 = Presentation(("s1",), ("u1",), (u1 ** 2 - b1.delta * s1 ** b1.m,))
    comp_rels = _complement_relations(chart)
    piece2 = Presentation(
        tuple(f"s{i}" for i in range(2, ell + 1)),
        tuple(f"u{i}" for i in range(2, ell + 1)),
        tuple(comp_rels),
    )

    to_branch = {f"s{i}": 0 for i in range(2, ell + 1)}
    for name in full.extra_vars:
        to_branch[name] = u1
    on_branch = []
    for r in full.relations:
        img = r.subs(to_branch)
        if not img.is_zero() and img not in on_branch:
            on_branch.append(img)

    # rename a lone ``u`` to ``u2`` so both ideals share variable names
    rename = {"u": Poly.var("u2")} if ell == 2 else {}
    on_comp = []
    for r in full.relations:
        img = r.subs({"s1": 0, **rename})
        if not img.is_zero() and img not in on_comp:
            on_comp.append(img)

    ok = on_branch == list(piece1.relations) and set(on_comp) <= set(comp_rels)
    if chart.reduced:
        if chart.g_q is None:
            chart = SingularityChart(chart.branches, int(admissible_g_q(chart)), chart.kind, chart.id)
        q_len = chart_delta(chart) - b1.m // 2 - (
            sum(b.m // 2 for b in chart.branches[1:]) + (ell - 2)
        )
        ok = ok and q_len == 2
    else:
        q_len = -1
    return GlueCertificate(piece1, piece2, tuple(on_branch), tuple(on_comp), q_len, ok)


# normalization ----------------------------------------------------------------


@dataclass(frozen=True)
class NormalizationData:
    h: int
    k: int
    types: tuple[str, ...]
    parameters: tuple[tuple[str, ...], ...]
    images: dict  # variable -> {parameter: Poly in that parameter}

    @property
    def branch_count(self) -> int:
        return 2 * self.h + self.k

    def verify(self, presentation: Presentation) -> list[str]:
        """Relations that do not vanish on some normalized branch."""
        failures = []
        params = [p for group in self.parameters for p in group]
        for r in presentation.relations:
            for p in params:
                img = r.subs({v: self.images[v].get(p, 0) for v in self.images})
                if not img.is_zero():
                    failures.append(f"{r} on branch {p}: {img}")
        return failures


def _roots(branch: Branch, i: int, exponent: int):
    t = branch.type
    if t == "h":
        if exponent % 2:
            raise ValueError(f"branch {i} is unramified with odd twice-slope {branch.m}")
        a, b = Poly.var(f"a{i}"), Poly.var(f"b{i}")
        return (f"a{i}", f"b{i}"), {f"a{i}": a, f"b{i}": b}, {
            f"a{i}": a ** (exponent // 2), f"b{i}": -(b ** (exponent // 2))
        }
    if t == "k":
        c = Poly.var(f"c{i}")
        return (f"c{i}",), {f"c{i}": c ** 2}, {f"c{i}": c ** exponent}
    dd = Poly.var(f"d{i}")
    return (f"d{i}",), {f"d{i}": dd}, {f"d{i}": Poly()}


def normalize(chart: SingularityChart) -> NormalizationData:
    """Parameter map of the normalization, branch by branch."""
    ell = chart.ell
    if chart.kind == "branch-point":
        c = Poly.var("c1")
        return NormalizationData(0, 1, ("k",), (("c1",),), {"s1": {"c1": c ** 2}, "u": {"c1": c}})
    if chart.kind == "generic":
        return NormalizationData(
            1, 0, ("h",), (("a1", "b1"),),
            {"s1": {"a1": Poly.var("a1"), "b1": Poly.var("b1")},
             "u": {"a1": Poly.const(1), "b1": Poly.const(-1)}},
        )
    if chart.kind == "etale-pair":
        raise ValueError("an etale pair is two ordinary rational points; nothing to normalize jointly")

    types, params, images = [], [], {}
    if ell == 1:
        b = chart.branches[0]
        names, s_img, root = _roots(b, 1, b.m + 2)
        return NormalizationData(
            chart.h, chart.k, (b.type,), (names,), {"s1": s_img, "u": root}
        )

    roots = {}
    for i, b in enumerate(chart.branches, start=1):
        names, s_img, root = _roots(b, i, b.m)
        types.append(b.type)
        params.append(names)
        images[f"s{i}"] = s_img
        roots[i] = root
    unames = _u_names(ell)
    for i in range(2, ell + 1):
        name = unames[0] if ell == 2 else f"u{i}"
        images[name] = {**roots[1], **roots[i]}
    return NormalizationData(chart.h, chart.k, tuple(types), tuple(params), images)


# conductor and delta ----------------------------------------------------------


@dataclass(frozen=True)
class GorensteinCertificate:
    conductor_exponents: tuple[tuple[str, int], ...]
    dim_O_over_c: int
    delta: int
    ok: bool


def conductor_exponents(chart: SingularityChart) -> list[tuple[str, int]]:
    """Exponents of the conductor ideal on each normalized branch."""
    if chart.kind in ("branch-point", "generic"):
        return []
    out = []
    for i, b in enumerate(chart.branches, start=1):
        if b.type == "h":
            out += [(f"a{i}", b.m // 2 + 1), (f"b{i}", b.m // 2 + 1)]
        elif b.type == "k":
            out.append((f"c{i}", b.m + 1))
    return out


def chart_delta(chart: SingularityChart) -> int:
    """Delta invariant from the genus of the contracted subcurve and branch counts."""
    if chart.kind in ("branch-point", "generic"):
        return 0
    if chart.kind == "etale-pair":
        return 2 * (chart.ell - 1)
    if not chart.reduced:
        raise ValueError(f"chart {chart.id} is not reduced; delta is not defined here")
    if chart.g_q is None:
        raise ValueError(f"chart {chart.id} has no genus for the contracted subcurve")
    return chart.g_q + 2 * chart.h + chart.k - 1


def admissible_g_q(chart: SingularityChart) -> Fraction:
    """The contracted genus compatible with balancing: ``(sum m - 2h - k + 2)/2``."""
    return Fraction(sum(b.m for b in chart.branches) - 2 * chart.h - chart.k + 2, 2)


def certify_gorenstein(chart: SingularityChart) -> GorensteinCertificate:
    if not chart.reduced:
        raise ValueError(f"chart {chart.id} is not reduced; no Gorenstein certificate")
    if chart.kind in ("node", "etale-pair"):
        raise ValueError(f"chart kind {chart.kind} is not certified here")
    exps = conductor_exponents(chart)
    dim = sum(e for _, e in exps)
    delta = chart_delta(chart)
    return GorensteinCertificate(tuple(exps), dim, delta, dim == 2 * delta)


def dualizing_pullback(chart: SingularityChart) -> list[tuple[str, int]]:
    """Multiplicities of the pulled-back dualizing sheaf at the marked preimages."""
    if chart.kind in ("node", "etale-pair", "branch-point", "generic"):
        raise ValueError(f"chart kind {chart.kind} is outside the formula's domain")
    if not chart.reduced:
        raise ValueError("dualizing pullback needs a reduced chart")
    if any(b.m <= 0 for b in chart.branches):
        raise ValueError("dualizing pullback needs positive twice-slopes")
    out = []
    for i, b in enumerate(chart.branches, start=1):
        if b.type == "h":
            out += [(f"q{i}", b.m // 2 + 1), (f"q{i}bar", b.m // 2 + 1)]
        else:
            out.append((f"q{i}", b.m + 1))
    return out


def eta_generator(chart: SingularityChart) -> str:
    """Local generator of the dualizing sheaf, as text."""
    if chart.ell < 2:
        raise ValueError("the generator is stated for at least two branches")
    if not chart.reduced:
        raise ValueError("the generator is stated for reduced points")
    terms = ["ds1/(u s1)"]
    for i in range(2, chart.ell + 1):
        u = "u" if chart.ell == 2 else f"u{i}"
        terms.append(f"ds{i}/({u} s{i})")
    return " - ".join(terms)
