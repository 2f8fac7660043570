"""Effective-permission computation.

Each of the fourteen attributes is decided independently by the first
ACE mentioning it in canonical precedence order (explicit deny, explicit
allow, inherited nearest-first with deny before allow per distance).
Attributes no ACE mentions default to not granted.

brute_force_effective re-derives the same answer from scratch by
per-attribute tier minimization and exists purely as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .masks import CoarseLevel, classify_coarse, compress_special
from .model import (
    ATTRIBUTE_BITS,
    Ace,
    AceKind,
    AccessMask,
    FsTree,
    PermissionAttribute,
    Sid,
    acl_equal,
    walk_tree,
)
from .membership import GroupGraph


@dataclass(frozen=True)
class EffectiveResult:
    """What a principal actually holds at one path.

    per_bit_provenance maps every attribute to the ACE that decided it,
    or None when no applicable ACE mentioned it. short_circuited mirrors
    the early-exit case: an explicit deny covered every attribute any
    applicable ACE mentions.
    """

    granted: AccessMask
    per_bit_provenance: Mapping[PermissionAttribute, Ace | None]
    short_circuited: bool


def _applicable_entries(tree: FsTree, path: str, sids: frozenset[str]) -> list[Ace]:
    return [e for e in tree.acl_at(path).entries if e.principal.text in sids]


def effective_mask(
    tree: FsTree, path: str, principal: Sid | str, graph: GroupGraph
) -> EffectiveResult:
    """Evaluate the accumulated permission for a principal at a path.

    The principal matches an ACE directly or through any group it
    transitively belongs to.
    """
    sids = graph.applicable_texts(principal)
    entries = _applicable_entries(tree, path, sids)

    decided = 0
    granted = 0
    mentioned = 0
    provenance: dict[PermissionAttribute, Ace | None] = {}
    for entry in entries:
        attr_bits = entry.mask.bits & ATTRIBUTE_BITS
        mentioned |= attr_bits
        take = attr_bits & ~decided
        if not take:
            continue
        decided |= take
        if entry.kind is AceKind.ALLOW:
            granted |= take
        for attr in PermissionAttribute:
            if take & attr.value:
                provenance[attr] = entry
    for attr in PermissionAttribute:
        provenance.setdefault(attr, None)

    short_circuited = mentioned != 0 and any(
        e.is_explicit
        and e.kind is AceKind.DENY
        and (e.mask.bits & mentioned) == mentioned
        for e in entries
    )
    return EffectiveResult(AccessMask(granted), provenance, short_circuited)


def brute_force_effective(
    tree: FsTree, path: str, principal: Sid | str, graph: GroupGraph
) -> AccessMask:
    """Independent oracle for effective_mask.

    For each attribute, enumerate every applicable ACE mentioning it,
    rank each by an explicit tier encoding (explicit deny 0, explicit
    allow 1, inherited deny/allow at distance d at 2d/2d+1), and grant
    iff the minimum-rank ACE is an allow.
    """
    sids = graph.applicable_texts(principal)
    entries = _applicable_entries(tree, path, sids)

    granted: set[PermissionAttribute] = set()
    for attr in PermissionAttribute:
        best_rank: int | None = None
        best_is_allow = False
        for e in entries:
            if not e.mask.bits & attr.value:
                continue
            if e.distance == 0:
                rank = 0 if e.kind is AceKind.DENY else 1
            else:
                rank = 2 * e.distance + (0 if e.kind is AceKind.DENY else 1)
            if best_rank is None or rank < best_rank:
                best_rank = rank
                best_is_allow = e.kind is AceKind.ALLOW
        if best_rank is not None and best_is_allow:
            granted.add(attr)
    bits = 0
    for attr in granted:
        bits |= attr.value
    return AccessMask(bits)


@dataclass(frozen=True)
class EffectiveRow:
    path: str
    granted: AccessMask
    rendered: str


@dataclass(frozen=True)
class EffectiveReport:
    rows: tuple[EffectiveRow, ...]


def render_effective(granted: AccessMask) -> str:
    if not granted.bits:
        return "(none)"
    level = classify_coarse(granted)
    if level is CoarseLevel.SPECIAL:
        return compress_special(granted)
    return level.value


def effective_search(
    tree: FsTree,
    root: str,
    principal: Sid | str,
    graph: GroupGraph,
    suppress_unchanged: bool = True,
) -> EffectiveReport:
    """Depth-first effective-permission report over every folder under
    root.

    The walk root is always reported; deeper folders are skipped when
    suppress_unchanged is set and their ACL matches their parent's.
    """
    sids = graph.applicable_texts(principal)
    rows: list[EffectiveRow] = []
    for path, _node, parent in walk_tree(tree, root):
        if (
            suppress_unchanged
            and parent is not None
            and acl_equal(tree.acl_at(path), tree.acl_at(parent))
        ):
            continue
        decided = 0
        granted = 0
        for entry in _applicable_entries(tree, path, sids):
            take = entry.mask.bits & ATTRIBUTE_BITS & ~decided
            if not take:
                continue
            decided |= take
            if entry.kind is AceKind.ALLOW:
                granted |= take
        mask = AccessMask(granted)
        rows.append(EffectiveRow(path, mask, render_effective(mask)))
    return EffectiveReport(tuple(rows))
