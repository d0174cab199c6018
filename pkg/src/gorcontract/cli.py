"""Command line front end.

    gorcontract validate FILE
    gorcontract solve --support v1,v2 FILE
    gorcontract contract [--strict|--lax] [--level I] FILE
    gorcontract levels FILE
    gorcontract singularities FILE
    gorcontract report [--out DIR] FILE

Exit status: 0 on success, 1 when validation fails (the report is still
written), 2 when the input cannot be read.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .clfunc import NoSolution, solve_slopes, truncate
from .cover import MalformedInput, build_cover_graph, validate_cover
from .dot import cover_dot, pbar_dot, target_dot
from .io import cover_to_dict, dumps, function_to_dict, load_document
from .report import (
    build_report, cover_graph_record, levels_report, validation_section,
)

COMMANDS = ("validate", "solve", "contract", "levels", "singularities", "report")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gorcontract", description=__doc__.split("\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="JSON document describing the cover")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strictness", action="store_const", const="strict",
                      help="require balancing on the whole support")
    mode.add_argument("--lax", dest="strictness", action="store_const", const="lax",
                      help="only require deg_L >= 0 (default)")
    p.set_defaults(strictness="lax")
    p.add_argument("--level", type=int, default=None,
                   help="contract the truncation of the differential at this level (<= 0)")
    p.add_argument("--support", default=None, help="comma-separated support for 'solve'")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--out", default=None, help="directory for report.json and DOT files")
    return p


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "none"
    return str(v)


def _emit(obj, fmt: str, out):
    if fmt == "json":
        out.write(dumps(obj))
    else:
        out.write(_text(obj) + "\n")


def _datum_for(args, T, datum, diff):
    if args.level is not None:
        if args.level > 0:
            raise MalformedInput("--level must be <= 0")
        if diff is None:
            raise MalformedInput("--level needs a 'differential' block")
        return truncate(T, diff, args.level)
    if datum is None:
        raise MalformedInput("no 'datum' block (or use --level with a differential)")
    return T, datum


def run(args, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        T, datum, diff = load_document(args.input)
    except (OSError, MalformedInput) as exc:
        err.write(f"error: {exc}\n")
        return 2

    cmd = args.command
    try:
        if cmd == "validate":
            section = validation_section(T, datum, args.strictness)
            if args.format == "dot":
                if not section["ok"]:
                    _emit({"validation": section}, "text", err)
                    return 1
                out.write(cover_dot(T, build_cover_graph(T)))
            else:
                rec = {"validation": section}
                if section["ok"]:
                    rec["cover_graph"] = cover_graph_record(build_cover_graph(T))
                _emit(rec, args.format, out)
            return 0 if section["ok"] else 1

        if cmd == "solve":
            if args.support is None:
                raise MalformedInput("solve needs --support")
            support = [s for s in args.support.split(",") if s]
            rep = validate_cover(T)
            if not rep.ok:
                _emit({"validation": validation_section(T, None, args.strictness)}, args.format, out)
                return 1
            try:
                f = solve_slopes(T, support)
            except KeyError as exc:
                raise MalformedInput(str(exc)) from None
            except NoSolution as exc:
                _emit({"solve": {"support": support, "error": str(exc)}}, args.format, out)
                return 1
            if args.format == "json":
                doc = cover_to_dict(T)
                doc["datum"] = function_to_dict(T, f)
                out.write(dumps(doc))
            else:
                lines = [f"support: {', '.join(support) or '(empty)'}"]
                for e in T.edges:
                    s = f.edge_slopes[e.id]
                    lines.append(f"edge {e.id} {e.ends[0]} -> {e.ends[1]}: slope {s}"
                                 f" (|slope| {abs(s)}{', ramified' if e.ramified else ''})")
                for v in T.vertex_ids:
                    lines.append(f"value {v}: {f.value(v)}")
                out.write("\n".join(lines) + "\n")
            return 0

        if cmd == "levels":
            if diff is None:
                raise MalformedInput("levels needs a 'differential' block")
            rec, ok = levels_report(T, diff, args.strictness)
            _emit(rec, "json" if args.format == "json" else "text", out)
            return 0 if ok else 1

        T2, f = _datum_for(args, T, datum, diff)
        detail = cmd in ("singularities", "report")
        rec, ok = build_report(T2, f, args.strictness, detail=detail)
        if cmd == "singularities" and "charts" in rec:
            rec = {"validation": rec["validation"], "charts": rec["charts"],
                   "certificates": rec["certificates"]}
        if args.format == "dot" and ok:
            from .contract import contract
            outcome = contract(T2, build_cover_graph(T2), f)
            out.write(pbar_dot(T2, outcome))
        else:
            _emit(rec, "json" if args.format == "dot" else args.format, out)
        if args.out:
            folder = Path(args.out)
            folder.mkdir(parents=True, exist_ok=True)
            (folder / "report.json").write_text(dumps(rec))
            (folder / "target.dot").write_text(target_dot(T2))
            if rec["validation"].get("ok"):
                G = build_cover_graph(T2)
                (folder / "cover.dot").write_text(cover_dot(T2, G))
                if ok:
                    from .contract import contract
                    (folder / "pbar.dot").write_text(pbar_dot(T2, contract(T2, G, f)))
        return 0 if ok else 1
    except MalformedInput as exc:
        err.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
