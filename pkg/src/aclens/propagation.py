"""Inheritance materialization.

Turns a tree of explicit ACEs into per-path canonical ACLs by applying
the propagation flags top-down: container_inherit reaches child folders,
object_inherit child files, no_propagate stops after one level with the
copy's flags cleared, and inherit_only keeps an ACE out of the ACL of
the node it sits on.
"""

from __future__ import annotations

from .errors import AceNotPresent
from .model import (
    NO_FLAGS,
    Ace,
    FsNode,
    FsTree,
    NodeKind,
    canonicalize_acl,
    child_path,
    normalize_path,
    split_path,
)


def _propagated_copy(source: Ace) -> Ace:
    flags = NO_FLAGS if source.flags.no_propagate else source.flags
    return Ace(
        principal=source.principal,
        kind=source.kind,
        mask=source.mask,
        flags=flags,
        distance=source.distance + 1,
    )


def materialize_inheritance(tree: FsTree) -> FsTree:
    """Populate tree.materialized with a canonical ACL for every path.

    Single top-down pass. A node's ACL is its explicit ACEs (minus
    inherit_only ones, which only affect descendants) plus the copies
    propagated from its ancestors; copies record their distance from the
    explicit source.
    """
    tree.materialized.clear()
    stack: list[tuple[FsNode, str, list[Ace]]] = [(tree.root, "/", [])]
    while stack:
        node, path, inherited = stack.pop()
        applied = [a for a in node.explicit_aces if not a.flags.inherit_only]
        tree.materialized[path] = canonicalize_acl(applied + inherited)

        if node.kind is NodeKind.FILE:
            continue
        # inherit_only sources propagate even though they are absent from
        # this node's own ACL.
        sources = list(node.explicit_aces) + inherited
        for child in sorted(node.children, key=lambda c: c.name, reverse=True):
            wants_folder = child.kind is NodeKind.FOLDER
            copies = [
                _propagated_copy(src)
                for src in sources
                if (src.flags.container_inherit if wants_folder else src.flags.object_inherit)
            ]
            stack.append((child, child_path(path, child.name), copies))
    return tree


def distance_of(tree: FsTree, path: str, ace: Ace) -> int:
    """How many levels above ``path`` the ACE was explicitly entered;
    0 for explicit entries at the node itself."""
    acl = tree.acl_at(path)
    if ace not in acl.entries:
        raise AceNotPresent(f"ACE not present at {normalize_path(path)}")
    return ace.distance


def source_path(path: str, ace: Ace) -> str:
    """The ancestor path an inherited ACE originated at."""
    segs = split_path(path)
    if ace.distance > len(segs):
        raise AceNotPresent(f"distance {ace.distance} exceeds depth of {normalize_path(path)}")
    keep = segs[: len(segs) - ace.distance]
    return "/" + "/".join(keep) if keep else "/"
