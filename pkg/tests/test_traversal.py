import pytest

from aclens.accumulation import effective_mask
from aclens.masks import CoarseLevel
from aclens.model import AceKind, PermissionAttribute, acl_equal
from aclens.snapshot import generate_synthetic, load_tree
from aclens.traversal import (
    audit_shadowed_denies,
    per_principal_report,
    traverse_report,
)
from conftest import EVERYONE, FIG3_USER, G1, U1, ace, folder, make_graph, make_tree

A = PermissionAttribute


def row_paths(report):
    return [r.path for r in report.rows]


def test_root_always_emitted_even_when_empty():
    tree = make_tree(folder("", children=[folder("a")]))
    report = traverse_report(tree, "/")
    assert row_paths(report) == ["/"]
    assert report.rows[0].entries == ()


def test_unchanged_children_suppressed(fig3):
    _snap, tree, _graph = fig3
    report = traverse_report(tree, "/")
    assert row_paths(report) == ["/", "/Accounting", "/Accounting/Plan"]


def test_include_unchanged_lists_everything(fig3):
    _snap, tree, _graph = fig3
    report = traverse_report(tree, "/", include_unchanged=True)
    assert row_paths(report) == [
        "/",
        "/Accounting",
        "/Accounting/Invoices",
        "/Accounting/Plan",
    ]


def test_filter_hides_principal_everywhere(users_demo):
    _snap, tree, _graph = users_demo
    report = traverse_report(tree, "/", filter_sids={"S-1-1-0"}, include_unchanged=True)
    for row in report.rows:
        assert all(e.principal.text != "S-1-1-0" for e in row.entries)
    unfiltered = traverse_report(tree, "/", include_unchanged=True)
    assert any(
        e.principal.text == "S-1-1-0" for row in unfiltered.rows for e in row.entries
    )


def test_filter_is_exact_not_transitive(users_demo):
    # Hiding Everyone must not hide alice's explicit entries.
    _snap, tree, _graph = users_demo
    report = traverse_report(tree, "/Users", filter_sids={"S-1-1-0"})
    alice_rows = [r for r in report.rows if r.path == "/Users/alice"]
    assert alice_rows and any(
        e.principal.text == "S-1-5-21-2001" for e in alice_rows[0].entries
    )


def test_special_mask_rendered_compressed(special_demo):
    _snap, tree, _graph = special_demo
    report = traverse_report(tree, "/")
    shared = next(r for r in report.rows if r.path == "/Shared")
    special = next(e for e in shared.entries if e.level is CoarseLevel.SPECIAL)
    assert special.rendered == "R-W-Dc-Rp-Cp"


def test_files_excluded_by_default(users_demo):
    _snap, tree, _graph = users_demo
    default = traverse_report(tree, "/", include_unchanged=True)
    assert "/Users/alice/notes.txt" not in row_paths(default)
    with_files = traverse_report(tree, "/", include_unchanged=True, include_files=True)
    assert "/Users/alice/notes.txt" in row_paths(with_files)


def test_rows_in_preorder_name_order():
    tree = make_tree(
        folder(
            "",
            children=[
                folder("zeta", aces=[ace(U1)]),
                folder("alpha", aces=[ace(U1)], children=[folder("inner", aces=[ace(EVERYONE)])]),
            ],
        )
    )
    report = traverse_report(tree, "/", include_unchanged=True)
    assert row_paths(report) == ["/", "/alpha", "/alpha/inner", "/zeta"]


# --- row minimality over seeded snapshots -----------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_row_minimality_both_directions(seed):
    snap = generate_synthetic(seed=seed, folders=25, principals=4, max_depth=5, ace_density=0.4)
    tree, _graph = load_tree(snap)
    report = traverse_report(tree, "/")
    emitted = set(row_paths(report))
    assert "/" in emitted
    for path in tree.materialized:
        from aclens.model import NodeKind, resolve_path

        if resolve_path(tree, path).kind is not NodeKind.FOLDER or path == "/":
            continue
        parent = path.rsplit("/", 1)[0] or "/"
        differs = not acl_equal(tree.materialized[path], tree.materialized[parent])
        assert (path in emitted) == differs, path


@pytest.mark.parametrize("seed", range(10))
def test_filter_completeness_only_adds(seed):
    snap = generate_synthetic(seed=seed, folders=20, principals=5, max_depth=4, ace_density=0.7)
    tree, _graph = load_tree(snap)
    target = snap.principals[0].sid.text
    with_filter = traverse_report(tree, "/", filter_sids={target}, include_unchanged=True)
    without = traverse_report(tree, "/", include_unchanged=True)
    assert row_paths(with_filter) == row_paths(without)
    for wf, wo in zip(with_filter.rows, without.rows):
        wf_keys = [(e.principal.text, e.kind, e.rendered, e.distance) for e in wf.entries]
        wo_keys = [(e.principal.text, e.kind, e.rendered, e.distance) for e in wo.entries]
        # Removing the filter re-adds only the filtered principal's
        # entries, in place, without reordering the others.
        assert [k for k in wo_keys if k[0] != target] == wf_keys


def test_determinism(fig3):
    _snap, tree, _graph = fig3
    assert traverse_report(tree, "/") == traverse_report(tree, "/")


# --- per-principal view ------------------------------------------------------

def test_per_principal_absent_everywhere_is_empty():
    tree = make_tree(folder("", aces=[ace(EVERYONE)], children=[folder("a")]))
    graph = make_graph(users=[U1], groups=[EVERYONE])
    report = per_principal_report(tree, "/", U1, graph)
    assert report.rows == ()


def test_per_principal_fig3(fig3):
    _snap, tree, graph = fig3
    report = per_principal_report(tree, "/", FIG3_USER, graph)
    assert row_paths(report) == ["/Accounting", "/Accounting/Plan"]
    accounting = report.rows[0]
    assert [(e.principal.text, e.kind) for e in accounting.entries] == [
        ("S-1-1-0", AceKind.DENY)
    ]
    plan = report.rows[1]
    assert any(e.principal.text == FIG3_USER for e in plan.entries)


def test_per_principal_group_match_annotated():
    tree = make_tree(folder("", aces=[ace(G1, "allow")]))
    graph = make_graph(users=[U1], groups=[G1], edges=[(U1, G1)])
    report = per_principal_report(tree, "/", U1, graph)
    (row,) = report.rows
    (entry,) = row.entries
    assert entry.matched_via is not None
    assert [s.text for s in entry.matched_via] == [U1.text, G1.text]


def test_per_principal_direct_match_not_annotated():
    tree = make_tree(folder("", aces=[ace(U1, "allow")]))
    graph = make_graph(users=[U1])
    report = per_principal_report(tree, "/", U1, graph)
    assert report.rows[0].entries[0].matched_via is None


def test_per_principal_entries_cover_effective_provenance(fig3):
    # Every deciding ACE the evaluator consulted appears in the row.
    _snap, tree, graph = fig3
    report = per_principal_report(tree, "/", FIG3_USER, graph)
    by_path = {r.path: r.entries for r in report.rows}
    for path in ("/Accounting", "/Accounting/Plan"):
        res = effective_mask(tree, path, FIG3_USER, graph)
        deciders = {
            (d.principal.text, d.kind, d.mask.bits, d.distance)
            for d in res.per_bit_provenance.values()
            if d is not None
        }
        listed = {
            (e.principal.text, e.kind, None, e.distance) for e in by_path[path]
        }
        for sid_text, kind, _bits, distance in deciders:
            assert (sid_text, kind, None, distance) in listed


# --- shadowed-deny audit ------------------------------------------------------

def test_audit_fig3_single_finding(fig3):
    _snap, tree, graph = fig3
    findings = audit_shadowed_denies(tree, "/", graph)
    assert len(findings) == 1
    f = findings[0]
    assert f.path == "/Accounting/Plan"
    assert f.principal.text == FIG3_USER
    assert f.deny_source_path == "/Accounting"
    # FullControl ∩ Modify = the Modify attribute set.
    from aclens.masks import MODIFY_SET

    assert f.shadowed == MODIFY_SET


def test_audit_clean_tree_empty(users_demo):
    _snap, tree, graph = users_demo
    assert audit_shadowed_denies(tree, "/", graph) == []


def test_audit_disjoint_masks_no_finding():
    tree = make_tree(
        folder(
            "",
            aces=[ace(EVERYONE, "deny", mask={A.WRITE_DATA}, ci=True)],
            children=[folder("x", aces=[ace(U1, "allow", mask={A.READ_DATA})])],
        )
    )
    graph = make_graph(users=[U1], groups=[EVERYONE], edges=[(U1, EVERYONE)])
    assert audit_shadowed_denies(tree, "/", graph) == []


def test_audit_unrelated_principal_no_finding():
    # The deny targets a group the allow's principal is NOT in.
    tree = make_tree(
        folder(
            "",
            aces=[ace(G1, "deny", mask={A.READ_DATA}, ci=True)],
            children=[folder("x", aces=[ace(U1, "allow", mask={A.READ_DATA})])],
        )
    )
    graph = make_graph(users=[U1], groups=[G1])
    assert audit_shadowed_denies(tree, "/", graph) == []


def test_audit_skips_attributes_not_actually_granted():
    # An explicit deny outranks the allow for WRITE_DATA, so only
    # READ_DATA is genuinely shadowed.
    tree = make_tree(
        folder(
            "",
            aces=[ace(EVERYONE, "deny", mask={A.READ_DATA, A.WRITE_DATA}, ci=True)],
            children=[
                folder(
                    "x",
                    aces=[
                        ace(U1, "deny", mask={A.WRITE_DATA}),
                        ace(U1, "allow", mask={A.READ_DATA, A.WRITE_DATA}),
                    ],
                )
            ],
        )
    )
    graph = make_graph(users=[U1], groups=[EVERYONE], edges=[(U1, EVERYONE)])
    findings = audit_shadowed_denies(tree, "/", graph)
    assert len(findings) == 1
    assert findings[0].shadowed == {A.READ_DATA}


def test_audit_findings_confirmed_by_semantics():
    for seed in range(25):
        snap = generate_synthetic(seed=seed, folders=20, principals=5, max_depth=4, ace_density=0.7)
        tree, graph = load_tree(snap)
        for f in audit_shadowed_denies(tree, "/", graph):
            granted = effective_mask(tree, f.path, f.principal, graph).granted
            for attr in f.shadowed:
                assert granted.contains(attr)


def test_audit_order_deterministic():
    for seed in range(5):
        snap = generate_synthetic(seed=seed, folders=20, principals=5, max_depth=4, ace_density=0.8)
        tree, graph = load_tree(snap)
        a = audit_shadowed_denies(tree, "/", graph)
        b = audit_shadowed_denies(tree, "/", graph)
        assert a == b
