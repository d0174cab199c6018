"""Assemble the JSON report for a cover and a contraction datum.

Section order is fixed (validation, profile, contraction, charts,
certificates, audit) so that diffs against stored reports point at the
stage that changed.
"""
from __future__ import annotations

from fractions import Fraction

from .clfunc import (
    CLFunction, is_contraction_datum, level_structure, sprout, truncate, well_formed_problems,
)
from .contract import ContractionOutcome, GenusMismatch, InvalidDatum, contract
from .cover import CoverGraph, TropCover, build_cover_graph, validate_cover
from .halfint import fraction_str
from .io import cover_to_dict, function_to_dict
from .singularity import (
    SingularityChart, certify_gorenstein, dualizing_pullback, eta_generator,
    glue_decomposition, normalize, present,
)


def _violations(report) -> list[dict]:
    return [{"code": v.code, "message": v.message, "ids": list(v.ids)} for v in report.violations]


def validation_section(T: TropCover, f: CLFunction | None, strictness: str,
                       min_genus: int = 2) -> dict:
    rep = validate_cover(T, min_genus=min_genus)
    out = {"ok": rep.ok, "cover": _violations(rep)}
    if rep.ok:
        G = build_cover_graph(T)
        out["cover_genus"] = G.genus
        out["vertex_genera"] = {v: g for v, g in rep.vertex_genera.items()}
    if f is not None and rep.ok:
        problems = well_formed_problems(T, f)
        out["datum_problems"] = problems
        if problems:
            out["ok"] = False
        else:
            negative = [v for v in T.vertex_ids if f.value(v) < 0]
            if negative:
                out["datum_problems"] = [f"negative value at {v}" for v in negative]
                out["ok"] = False
            else:
                strict = is_contraction_datum(T, f, "strict")
                lax = is_contraction_datum(T, f, "lax")
                out["strict"] = {"ok": strict.ok, "failures": list(strict.failures)}
                out["lax"] = {"ok": lax.ok, "failures": list(lax.failures)}
                wanted = strict if strictness == "strict" else lax
                if not wanted.ok:
                    out["ok"] = False
    return out


def chart_record(chart: SingularityChart, detail: bool = False) -> dict:
    rec = {
        "id": chart.id,
        "kind": chart.kind,
        "ell": chart.ell,
        "g_q": chart.g_q,
        "vertices": list(chart.vertices),
        "branches": [
            {"m": b.m, "delta": b.delta, "ramified": b.ramified,
             "source": b.source, "neighbour": b.neighbour}
            for b in chart.branches
        ],
        "parity_mismatch": chart.parity_mismatch,
    }
    try:
        rec["relations"] = present(chart).strings()
    except ValueError as exc:
        rec["relations"] = {"refused": str(exc)}
    if detail:
        rec["normalization"] = _guard(lambda: _normalization_record(chart))
        rec["gluing"] = _guard(lambda: _glue_record(chart))
        rec["dualizing_pullback"] = _guard(lambda: [[p, n] for p, n in dualizing_pullback(chart)])
        rec["eta"] = _guard(lambda: eta_generator(chart))
    return rec


def _guard(fn):
    try:
        return fn()
    except ValueError as exc:
        return {"refused": str(exc)}


def _normalization_record(chart):
    n = normalize(chart)
    return {
        "h": n.h,
        "k": n.k,
        "types": list(n.types),
        "images": {var: {p: str(img) for p, img in imgs.items()} for var, imgs in n.images.items()},
    }


def _glue_record(chart):
    g = glue_decomposition(chart)
    return {
        "branch_piece": g.branch_piece.strings(),
        "complement": g.complement.strings(),
        "q_length": g.q_length,
        "ok": g.ok,
    }


def certificate_record(chart: SingularityChart) -> dict:
    try:
        cert = certify_gorenstein(chart)
    except ValueError as exc:
        return {"chart": chart.id, "refused": str(exc)}
    return {
        "chart": chart.id,
        "conductor_exponents": [[p, e] for p, e in cert.conductor_exponents],
        "dim_O_over_c": cert.dim_O_over_c,
        "delta": cert.delta,
        "ok": cert.ok,
    }


def contraction_sections(T: TropCover, outcome: ContractionOutcome, detail: bool = False) -> dict:
    par = outcome.parity
    return {
        "profile": {v: fraction_str(outcome.profile[v]) for v in T.vertex_ids},
        "contraction": {
            "strict": outcome.strict,
            "reduced": outcome.reduced,
            "contracted": [
                {"point": c.id, "vertices": list(c.vertices)}
                for c in outcome.charts if c.kind != "node"
            ],
            "pbar": {
                "vertices": list(outcome.pbar.vertices),
                "points": {k: list(v) for k, v in outcome.pbar.points.items()},
                "edges": [list(e) for e in outcome.pbar.edges],
            },
            "ribbons": [
                {"id": r.id, "vertices": list(r.vertices), "degree": fraction_str(r.degree),
                 "genus": fraction_str(r.genus)}
                for r in outcome.ribbons
            ],
            "twisting_locus": list(par.twisting_locus),
            "parity": {
                "odd_for_b": list(par.odd_for_b),
                "odd_for_L2": list(par.odd_for_L2),
                "exceptional": list(par.exceptional),
                "violations": list(par.violations),
                "orbifold_points": list(par.orbifold_points),
            },
        },
        "charts": [chart_record(c, detail) for c in outcome.charts],
        "certificates": [
            certificate_record(c) for c in outcome.charts if c.kind not in ("node", "etale-pair")
        ],
        "audit": {
            "genus_cover": outcome.audit.genus_cover,
            "genus_contracted": None if outcome.audit.genus_contracted is None
            else fraction_str(outcome.audit.genus_contracted),
            "route": outcome.audit.route,
            "terms": _plain(outcome.audit.terms),
            "ok": outcome.audit.ok,
        },
    }


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    return obj


def build_report(T: TropCover, f: CLFunction, strictness: str = "lax",
                 detail: bool = False) -> tuple[dict, bool]:
    """Full report and an overall success flag."""
    report = {"validation": validation_section(T, f, strictness)}
    if not report["validation"]["ok"]:
        return report, False
    G = build_cover_graph(T)
    try:
        outcome = contract(T, G, f)
    except (InvalidDatum, GenusMismatch) as exc:
        report["error"] = str(exc)
        return report, False
    report.update(contraction_sections(T, outcome, detail))
    ok = outcome.audit.ok and all(c.get("ok", True) for c in report["certificates"])
    return report, ok


def levels_report(T: TropCover, lam_bar: CLFunction, strictness: str = "lax") -> tuple[dict, bool]:
    """Truncate, sprout and contract at every level of a differential."""
    rep = validate_cover(T)
    out = {"validation": {"ok": rep.ok, "cover": _violations(rep)}}
    if not rep.ok:
        return out, False
    problems = well_formed_problems(T, lam_bar)
    if problems:
        out["validation"] = {"ok": False, "cover": [], "datum_problems": problems}
        return out, False
    ls = level_structure(lam_bar)
    out["levels"] = {v: ls.levels[v] for v in T.vertex_ids}
    out["depth"] = ls.N
    ok = True
    per_level = []
    for i in range(0, -ls.N - 1, -1):
        Ti, li = truncate(T, lam_bar, i)
        Ts, ls_ = sprout(Ti, li)
        entry = {
            "level": i,
            "subdivided": cover_to_dict(Ti),
            "truncation": function_to_dict(Ti, li),
            "sprouted": cover_to_dict(Ts) if Ts is not Ti else None,
            "datum": function_to_dict(Ts, ls_),
        }
        sub, good = build_report(Ts, ls_, strictness)
        entry.update(sub)
        contraction = sub.get("contraction", {})
        entry["checklist"] = {
            "reduced": contraction.get("reduced"),
            "no_ribbons": not contraction.get("ribbons", [None]),
            "genus_preserved": sub.get("audit", {}).get("ok"),
        }
        ok = ok and good
        per_level.append(entry)
    out["per_level"] = per_level
    return out, ok


def cover_graph_record(G: CoverGraph) -> dict:
    return {
        "genus": G.genus,
        "b1": G.b1,
        "vertices": [{"id": v.id, "over": v.base, "genus": v.genus} for v in G.vertices],
        "edges": [{"id": e.id, "over": e.base, "ends": list(e.ends)} for e in G.edges],
        "legs": [{"id": leg.id, "vertex": leg.vertex, "kind": leg.kind} for leg in G.legs],
    }
