#!/usr/bin/env python3
"""Regenerate the frozen CLI golden outputs under tests/golden/.

Run from the repository root after an intentional output-schema change,
then review the diff before committing.
"""

import contextlib
import io
import sys
from pathlib import Path

from aclens.cli import main
from aclens.snapshot import FIXTURE_NAMES, fixture_path

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"

PRINCIPALS = {
    "fig3_shadowed_deny": "S-1-5-21-1001",
    "users_dir_demo": "S-1-5-21-2001",
    "special_perm_demo": "S-1-5-21-3001",
}


def capture(argv) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"command failed ({code}): {argv}")
    return buf.getvalue()


def run() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for name in FIXTURE_NAMES:
        snap = str(fixture_path(name))
        out = capture(["traverse", "--snapshot", snap, "--format", "json"])
        (GOLDEN_DIR / f"{name}_traverse.jsonl").write_text(out, encoding="utf-8")
        out = capture(
            [
                "effective",
                "--snapshot",
                snap,
                "/",
                "--principal",
                PRINCIPALS[name],
                "--recursive",
                "--format",
                "json",
            ]
        )
        (GOLDEN_DIR / f"{name}_effective.jsonl").write_text(out, encoding="utf-8")
        out = capture(["meta", "--snapshot", snap])
        (GOLDEN_DIR / f"{name}_meta.json").write_text(out, encoding="utf-8")
    print(f"wrote goldens for {len(FIXTURE_NAMES)} fixtures to {GOLDEN_DIR}")


if __name__ == "__main__":
    sys.exit(run())
