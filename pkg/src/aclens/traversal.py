"""Filtered directory-walk reports and the shadowed-deny audit.

traverse_report suppresses folders whose ACL matches their parent's and
hides filtered principals; per_principal_report inverts the filter to
show only the ACEs relevant to one principal; audit_shadowed_denies
flags explicit allows that put an inherited deny out of reach.
"""

from __future__ import annotations

from dataclasses import dataclass

from .accumulation import effective_mask
from .masks import CoarseLevel, describe_mask
from .membership import GroupGraph
from .model import (
    ATTRIBUTE_BITS,
    Ace,
    AceKind,
    AccessMask,
    FsTree,
    InheritFlags,
    PermissionAttribute,
    Sid,
    acl_equal,
    walk_tree,
)
from .propagation import source_path


@dataclass(frozen=True)
class ReportEntry:
    """One rendered ACE row: coarse level name for standard masks, the
    hyphenated code string for special ones."""

    principal: Sid
    kind: AceKind
    level: CoarseLevel
    rendered: str
    distance: int
    flags: InheritFlags
    matched_via: tuple[Sid, ...] | None = None


@dataclass(frozen=True)
class TraversalRow:
    path: str
    entries: tuple[ReportEntry, ...]


@dataclass(frozen=True)
class TraversalReport:
    rows: tuple[TraversalRow, ...]


@dataclass(frozen=True)
class Finding:
    """An explicit allow shadowing an inherited deny for some attributes."""

    path: str
    principal: Sid
    shadowed: frozenset[PermissionAttribute]
    deny_source_path: str
    allow_ace: Ace


def render_entry(ace: Ace, matched_via: tuple[Sid, ...] | None = None) -> ReportEntry:
    level, rendered = describe_mask(ace.mask, ace.flags)
    return ReportEntry(
        principal=ace.principal,
        kind=ace.kind,
        level=level,
        rendered=rendered,
        distance=ace.distance,
        flags=ace.flags,
        matched_via=matched_via,
    )


def traverse_report(
    tree: FsTree,
    root: str = "/",
    filter_sids: frozenset[str] | set[str] = frozenset(),
    include_unchanged: bool = False,
    include_files: bool = False,
) -> TraversalReport:
    """Depth-first ACL report.

    The walk root is always emitted; other rows appear only when their
    ACL differs from the parent's, unless include_unchanged is set.
    ACEs whose principal is in filter_sids are dropped from every row
    (exact SID match, no group expansion).
    """
    rows: list[TraversalRow] = []
    for path, _node, parent in walk_tree(tree, root, include_files=include_files):
        if (
            not include_unchanged
            and parent is not None
            and acl_equal(tree.acl_at(path), tree.acl_at(parent))
        ):
            continue
        entries = tuple(
            render_entry(a)
            for a in tree.acl_at(path)
            if a.principal.text not in filter_sids
        )
        rows.append(TraversalRow(path, entries))
    return TraversalReport(tuple(rows))


def per_principal_report(
    tree: FsTree, root: str, principal: Sid | str, graph: GroupGraph
) -> TraversalReport:
    """Like traverse_report, but keeps only ACEs matching the principal
    directly or via group membership, and drops rows with no match.

    Group-matched entries carry the membership chain that connected
    them, for display.
    """
    sids = graph.applicable_texts(principal)
    own_text = graph.principal(principal).sid.text
    chains: dict[str, tuple[Sid, ...] | None] = {}

    rows: list[TraversalRow] = []
    for path, _node, parent in walk_tree(tree, root):
        if parent is not None and acl_equal(tree.acl_at(path), tree.acl_at(parent)):
            continue
        matched = [a for a in tree.acl_at(path) if a.principal.text in sids]
        if not matched:
            continue
        entries = []
        for ace in matched:
            if ace.principal.text == own_text:
                entries.append(render_entry(ace))
                continue
            if ace.principal.text not in chains:
                chains[ace.principal.text] = graph.chain_to(own_text, ace.principal.text)
            entries.append(render_entry(ace, matched_via=chains[ace.principal.text]))
        rows.append(TraversalRow(path, tuple(entries)))
    return TraversalReport(tuple(rows))


def audit_shadowed_denies(tree: FsTree, root: str, graph: GroupGraph) -> list[Finding]:
    """Report every (explicit allow, inherited deny) pair where the
    allow's principal would be caught by the deny, the masks overlap,
    and the overlapping attributes really are granted.

    Findings come in walk order, sorted by allow principal within a
    path; the deny's origin is resolved from its recorded distance.
    """
    findings: list[Finding] = []
    for path, _node, _parent in walk_tree(tree, root):
        acl = tree.acl_at(path)
        allows = [a for a in acl if a.is_explicit and a.kind is AceKind.ALLOW]
        denies = [d for d in acl if d.is_inherited and d.kind is AceKind.DENY]
        if not allows or not denies:
            continue
        here: list[Finding] = []
        for allow in allows:
            caught_by = graph.applicable_texts(allow.principal)
            granted_bits: int | None = None
            for deny in denies:
                if deny.principal.text not in caught_by:
                    continue
                overlap = allow.mask.bits & deny.mask.bits & ATTRIBUTE_BITS
                if not overlap:
                    continue
                if granted_bits is None:
                    granted_bits = effective_mask(
                        tree, path, allow.principal, graph
                    ).granted.bits
                shadowed_bits = overlap & granted_bits
                if not shadowed_bits:
                    continue
                shadowed = frozenset(
                    a for a in PermissionAttribute if shadowed_bits & a.value
                )
                here.append(
                    Finding(
                        path=path,
                        principal=allow.principal,
                        shadowed=shadowed,
                        deny_source_path=source_path(path, deny),
                        allow_ace=allow,
                    )
                )
        here.sort(key=lambda f: f.principal.text)
        findings.extend(here)
    return findings


def shadowed_mask(finding: Finding) -> AccessMask:
    bits = 0
    for attr in finding.shadowed:
        bits |= attr.value
    return AccessMask(bits)
