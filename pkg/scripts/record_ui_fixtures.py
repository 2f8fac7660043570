#!/usr/bin/env python3
"""Record service responses for the frontend's contract tests.

Captures the endpoint bodies the explorer flows replay, keyed by
fixture name and request path, into frontend/tests/fixtures/recorded.json.
Re-run after any response-schema change, then review the diff.
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from aclens.service import create_app
from aclens.snapshot import FIXTURE_NAMES, load_fixture, load_tree

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

REQUESTS = {
    "fig3_shadowed_deny": [
        "/meta",
        "/tree?path=/&depth=1",
        "/tree?path=/Accounting&depth=1",
        "/acl?path=/",
        "/acl?path=/Accounting",
        "/acl?path=/Accounting/Invoices",
        "/traverse?root=/",
        "/effective?path=/&principal=S-1-5-21-1001&recursive=true",
        "/audit?root=/",
    ],
    "users_dir_demo": [
        "/meta",
        "/tree?path=/&depth=2",
        "/traverse?root=/",
        "/traverse?root=/&filter=S-1-1-0",
        "/audit?root=/",
    ],
    "special_perm_demo": [
        "/meta",
        "/tree?path=/&depth=2",
        "/acl?path=/Shared",
        "/effective?path=/Shared&principal=S-1-5-21-3001&recursive=false",
    ],
}


def run() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    recorded: dict[str, dict[str, object]] = {}
    for name in FIXTURE_NAMES:
        snap = load_fixture(name)
        tree, graph = load_tree(snap)
        client = TestClient(create_app(tree, graph, snap))
        recorded[name] = {}
        for req in REQUESTS[name]:
            resp = client.get(req)
            if resp.status_code != 200:
                raise SystemExit(f"{name} {req} -> {resp.status_code}")
            recorded[name][req] = resp.json()
    out_file = OUT / "recorded.json"
    out_file.write_text(json.dumps(recorded, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out_file}")


if __name__ == "__main__":
    sys.exit(run())
