"""Emit every bundled example's JSON report, in a fixed order.

Run as a script by the determinism check; the output is compared byte for
byte across interpreter runs and against tests/fixtures/reports.
"""
import io
import sys

from gorcontract.cli import build_parser, run
from gorcontract.io import fixture_names, load_fixture
from importlib import resources


def command_for(name):
    _, datum, diff = load_fixture(name)
    if datum is not None:
        return ["report", "--format", "json"]
    return ["levels", "--format", "json"]


def report_text(name) -> str:
    path = str(resources.files("gorcontract") / "data" / f"{name}.json")
    out, err = io.StringIO(), io.StringIO()
    code = run(build_parser().parse_args(command_for(name) + [path]), out, err)
    return f"# {name} exit={code}\n{out.getvalue()}"


def main():
    for name in fixture_names():
        sys.stdout.write(report_text(name))


if __name__ == "__main__":
    main()
