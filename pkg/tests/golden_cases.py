"""Golden CLI cases shared by the CLI tests and the acceptance run."""

from __future__ import annotations

import contextlib
import io
import json
from pathlib import Path

from elltor.cli import main

GOLDEN = Path(__file__).parent / "golden"


def load_cases() -> list[dict]:
    return json.loads((GOLDEN / "cases.json").read_text())


def argv_for(case: dict) -> list[str]:
    return [a.replace("{golden}", str(GOLDEN)) for a in case["argv"]]


def run_case(case: dict) -> tuple[int, bytes]:
    """Run one case in-process; returns (exit code, stdout bytes)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        try:
            code = main(argv_for(case))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue().encode("utf-8")


def golden_path(case: dict) -> Path:
    return GOLDEN / f"{case['name']}.out"


def regenerate() -> None:
    for case in load_cases():
        code, data = run_case(case)
        if code != case["exit"]:
            raise SystemExit(f"{case['name']}: exit {code}, expected {case['exit']}")
        golden_path(case).write_bytes(data)


if __name__ == "__main__":
    regenerate()
