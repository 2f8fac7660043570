"""aclens command line.

Exit codes: 0 success (audit: no findings), 1 audit findings present,
2 snapshot errors, 3 path errors, 4 principal errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import render
from .accumulation import effective_mask, effective_search, render_effective
from .errors import AclensError, PathError, PrincipalError, SnapshotError
from .membership import GroupGraph
from .model import FsTree, PermissionAttribute
from .snapshot import Snapshot, load_snapshot_file, load_tree, meta_document
from .traversal import (
    TraversalReport,
    audit_shadowed_denies,
    per_principal_report,
    render_entry,
    traverse_report,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_SNAPSHOT = 2
EXIT_PATH = 3
EXIT_PRINCIPAL = 4


def _table(rows: list[Sequence[str]], header: Sequence[str]) -> str:
    """Aligned columns sized by content, never by terminal width."""
    all_rows = [list(header)] + [list(r) for r in rows]
    widths = [max(len(r[i]) for r in all_rows) for i in range(len(header))]
    lines = []
    for r in all_rows:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return "\n".join(lines)


def _entry_cells(entry) -> list[str]:
    provenance = "explicit" if entry.distance == 0 else f"inherited({entry.distance})"
    cells = [
        entry.principal.label,
        entry.kind.value,
        entry.rendered,
        provenance,
        entry.flags.short(),
    ]
    if entry.matched_via is not None:
        cells.append("via " + " > ".join(s.label for s in entry.matched_via))
    return cells


def _print_acl_table(entries) -> None:
    rows = [_entry_cells(e)[:5] for e in entries]
    print(_table(rows, ("PRINCIPAL", "KIND", "PERMISSION", "PROVENANCE", "FLAGS")))


def _print_traversal(report: TraversalReport, fmt: str) -> None:
    if fmt == "json":
        for row in render.traversal_rows(report):
            print(json.dumps(row, separators=(",", ":")))
        return
    for row in report.rows:
        print(row.path)
        if row.entries:
            has_via = any(e.matched_via is not None for e in row.entries)
            header = ["PRINCIPAL", "KIND", "PERMISSION", "PROVENANCE", "FLAGS"]
            if has_via:
                header.append("MATCHED")
            cells = []
            for e in row.entries:
                c = _entry_cells(e)
                if has_via and len(c) == 5:
                    c.append("direct")
                cells.append(c)
            print("  " + _table(cells, header).replace("\n", "\n  "))
        else:
            print("  (no entries)")
        print()


def _load(snapshot_file: str) -> tuple[Snapshot, FsTree, GroupGraph]:
    snap = load_snapshot_file(snapshot_file)
    tree, graph = load_tree(snap)
    return snap, tree, graph


def cmd_show(args) -> int:
    _snap, tree, _graph = _load(args.snapshot)
    acl = tree.acl_at(args.path)
    _print_acl_table([render_entry(a) for a in acl])
    return EXIT_OK


def cmd_traverse(args) -> int:
    _snap, tree, _graph = _load(args.snapshot)
    report = traverse_report(
        tree,
        args.root,
        filter_sids=frozenset(args.filter or ()),
        include_unchanged=args.include_unchanged,
        include_files=args.include_files,
    )
    _print_traversal(report, args.format)
    return EXIT_OK


def cmd_effective(args) -> int:
    _snap, tree, graph = _load(args.snapshot)
    principal = graph.principal(args.principal).sid
    if args.recursive:
        report = effective_search(tree, args.root, principal, graph)
        if args.format == "json":
            for row in render.effective_rows(report):
                print(json.dumps(row, separators=(",", ":")))
        else:
            rows = [(r.path, r.granted.hex, r.rendered) for r in report.rows]
            print(_table(rows, ("PATH", "GRANTED", "PERMISSION")))
        return EXIT_OK
    result = effective_mask(tree, args.root, principal, graph)
    if args.format == "json":
        print(json.dumps(render.effective_result_dict(args.root, principal, result),
                         separators=(",", ":")))
        return EXIT_OK
    print(f"path:       {args.root}")
    print(f"principal:  {principal.label}")
    print(f"granted:    {result.granted.hex}  {render_effective(result.granted)}")
    print(f"short_circuited: {str(result.short_circuited).lower()}")
    rows = []
    for attr in PermissionAttribute:
        deciding = result.per_bit_provenance.get(attr)
        if deciding is None:
            rows.append((attr.label, "no", "no ACE"))
        else:
            verdict = "yes" if result.granted.contains(attr) else "no"
            origin = "explicit" if deciding.is_explicit else f"inherited({deciding.distance})"
            rows.append(
                (attr.label, verdict, f"{deciding.kind.value} {deciding.principal.label} ({origin})")
            )
    print(_table(rows, ("ATTRIBUTE", "GRANTED", "DECIDED BY")))
    return EXIT_OK


def cmd_membership(args) -> int:
    snap, _tree, graph = _load(args.snapshot)
    if args.direction == "member-of":
        sids = graph.member_of_closure(args.sid)
    else:
        sids = graph.members_closure(args.sid)
    kinds = {p.sid.text: p.kind.value for p in snap.principals}
    for row in render.membership_rows(sids, kinds):
        name = row["display_name"] or ""
        print(f"{row['sid']}  {row['kind']}  {name}".rstrip())
    return EXIT_OK


def cmd_audit(args) -> int:
    _snap, tree, graph = _load(args.snapshot)
    findings = audit_shadowed_denies(tree, args.root, graph)
    for f in findings:
        d = render.finding_dict(f)
        print(
            f"{d['path']}  principal={d['principal']}  shadowed={d['shadowed_rendered']}"
            f"  deny_from={d['deny_source_path']}"
        )
    return EXIT_FINDINGS if findings else EXIT_OK


def cmd_per_principal(args) -> int:
    _snap, tree, graph = _load(args.snapshot)
    report = per_principal_report(tree, args.root, args.principal, graph)
    _print_traversal(report, args.format)
    return EXIT_OK


def cmd_meta(args) -> int:
    snap = load_snapshot_file(args.snapshot)
    print(json.dumps(meta_document(snap), indent=2))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    snap, tree, graph = _load(args.snapshot)
    app = create_app(tree, graph, snap, cors_origins=args.cors_origin or ["*"])
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aclens",
        description="Analyse NTFS-style permissions over a directory-tree snapshot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--snapshot", required=True, help="snapshot JSON file")

    p = sub.add_parser("show", help="print the ACL at a path")
    common(p)
    p.add_argument("path")
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("traverse", help="ACL report over a subtree")
    common(p)
    p.add_argument("root", nargs="?", default="/")
    p.add_argument("--filter", action="append", metavar="SID",
                   help="hide this principal's ACEs (repeatable)")
    p.add_argument("--include-unchanged", action="store_true")
    p.add_argument("--include-files", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_traverse)

    p = sub.add_parser("effective", help="effective permission for a principal")
    common(p)
    p.add_argument("root", nargs="?", default="/")
    p.add_argument("--principal", required=True, metavar="SID")
    p.add_argument("--recursive", action="store_true")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_effective)

    p = sub.add_parser("per-principal", help="traversal restricted to one principal's ACEs")
    common(p)
    p.add_argument("root", nargs="?", default="/")
    p.add_argument("--principal", required=True, metavar="SID")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_per_principal)

    p = sub.add_parser("membership", help="transitive group membership")
    common(p)
    p.add_argument("--sid", required=True)
    p.add_argument("--direction", choices=("member-of", "members"), default="member-of")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("audit", help="flag explicit allows shadowing inherited denies")
    common(p)
    p.add_argument("root", nargs="?", default="/")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("meta", help="dump the attribute/bit/code table and snapshot stats")
    common(p)
    p.set_defaults(func=cmd_meta)

    p = sub.add_parser("serve", help="serve the HTTP API over one snapshot")
    common(p)
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--bind", default="127.0.0.1")
    p.add_argument("--cors-origin", action="append",
                   help="restrict CORS to this origin (repeatable; default: any)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SnapshotError as exc:
        print(f"aclens: snapshot error: {exc}", file=sys.stderr)
        return EXIT_SNAPSHOT
    except OSError as exc:
        print(f"aclens: snapshot error: {exc}", file=sys.stderr)
        return EXIT_SNAPSHOT
    except PathError as exc:
        print(f"aclens: {exc}", file=sys.stderr)
        return EXIT_PATH
    except PrincipalError as exc:
        print(f"aclens: {exc}", file=sys.stderr)
        return EXIT_PRINCIPAL
    except AclensError as exc:
        print(f"aclens: {exc}", file=sys.stderr)
        return EXIT_SNAPSHOT


if __name__ == "__main__":
    sys.exit(main())
