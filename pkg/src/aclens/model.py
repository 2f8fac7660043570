"""Security-descriptor data model.

SIDs, access masks, ACEs and ACLs, and the folder/file tree they attach
to. Everything here is immutable after snapshot load; the only mutable
container is ``FsTree.materialized``, which the propagation engine fills
in exactly once.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .errors import NotAFolder, PathNotFound

_SID_RE = re.compile(r"^S-\d+-\d+(?:-\d+)*$")

# Access-mask layout. Bits 0-8 and 16-20 carry the fourteen permission
# attributes, bit 23 is SACL access (representable, never an attribute),
# bits 24-27 are reserved and must stay zero, bits 28-31 are generic.
RESERVED_BITS = 0x0F000000
GENERIC_ALL_BIT = 0x10000000
GENERIC_EXECUTE_BIT = 0x20000000
GENERIC_WRITE_BIT = 0x40000000
GENERIC_READ_BIT = 0x80000000
GENERIC_BITS = 0xF0000000
ACCESS_SYSTEM_SECURITY_BIT = 0x00800000


class PermissionAttribute(Enum):
    """The fourteen fine-grained rights; each value is its mask bit.

    Definition order is the fixed display order used by the hyphenated
    special-permission strings.
    """

    READ_DATA = 0x00000001
    WRITE_DATA = 0x00000002
    APPEND_DATA = 0x00000004
    READ_EXTENDED_ATTRIBUTES = 0x00000008
    WRITE_EXTENDED_ATTRIBUTES = 0x00000010
    EXECUTE = 0x00000020
    DELETE_CHILD = 0x00000040
    READ_ATTRIBUTES = 0x00000080
    WRITE_ATTRIBUTES = 0x00000100
    DELETE = 0x00010000
    READ_PERMISSIONS = 0x00020000
    CHANGE_PERMISSIONS = 0x00040000
    TAKE_OWNERSHIP = 0x00080000
    SYNCHRONIZE = 0x00100000

    @property
    def bit(self) -> int:
        return self.value.bit_length() - 1

    @property
    def label(self) -> str:
        """CamelCase display name, e.g. ``ReadData``."""
        return "".join(part.capitalize() for part in self.name.split("_"))


ATTRIBUTE_BITS = 0
for _attr in PermissionAttribute:
    ATTRIBUTE_BITS |= _attr.value


@dataclass(frozen=True, slots=True, eq=False)
class Sid:
    """A security identifier.

    Equality and hashing use the SID text only; display_name is
    presentation metadata carried from the snapshot's principal
    directory.
    """

    text: str
    display_name: str | None = None

    def __post_init__(self):
        if not _SID_RE.match(self.text):
            raise ValueError(f"malformed SID: {self.text!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sid):
            return NotImplemented
        return self.text == other.text

    def __hash__(self) -> int:
        return hash(self.text)

    def __str__(self) -> str:
        return self.text

    @property
    def label(self) -> str:
        return self.display_name or self.text


class PrincipalKind(Enum):
    USER = "user"
    GROUP = "group"


@dataclass(frozen=True, slots=True)
class Principal:
    sid: Sid
    kind: PrincipalKind


@dataclass(frozen=True, slots=True)
class AccessMask:
    """A 32-bit permission vector. Reserved bits 24-27 are rejected."""

    bits: int = 0

    def __post_init__(self):
        if not 0 <= self.bits <= 0xFFFFFFFF:
            raise ValueError(f"mask out of 32-bit range: {self.bits:#x}")
        if self.bits & RESERVED_BITS:
            raise ValueError(f"reserved bits 24-27 set: {self.bits:#010x}")

    @property
    def is_normalized(self) -> bool:
        return not self.bits & GENERIC_BITS

    @property
    def attribute_bits(self) -> int:
        return self.bits & ATTRIBUTE_BITS

    def contains(self, attr: PermissionAttribute) -> bool:
        return bool(self.bits & attr.value)

    def __or__(self, other: "AccessMask") -> "AccessMask":
        return AccessMask(self.bits | other.bits)

    def __and__(self, other: "AccessMask") -> "AccessMask":
        return AccessMask(self.bits & other.bits)

    def __bool__(self) -> bool:
        return bool(self.bits)

    @property
    def hex(self) -> str:
        return f"0x{self.bits:08x}"


ZERO_MASK = AccessMask(0)


@dataclass(frozen=True, slots=True)
class InheritFlags:
    """Propagation control bits carried by an ACE.

    inherit_only and no_propagate are meaningless without at least one
    inherit bit, so those combinations are rejected outright.
    """

    container_inherit: bool = False
    object_inherit: bool = False
    no_propagate: bool = False
    inherit_only: bool = False

    def __post_init__(self):
        inheritable = self.container_inherit or self.object_inherit
        if self.inherit_only and not inheritable:
            raise ValueError("inherit_only requires an inherit bit")
        if self.no_propagate and not inheritable:
            raise ValueError("no_propagate requires an inherit bit")

    def names(self) -> tuple[str, ...]:
        out = []
        if self.container_inherit:
            out.append("container_inherit")
        if self.object_inherit:
            out.append("object_inherit")
        if self.no_propagate:
            out.append("no_propagate")
        if self.inherit_only:
            out.append("inherit_only")
        return tuple(out)

    def short(self) -> str:
        """Compact rendering for tables, e.g. ``ci,np`` or ``-``."""
        abbrev = {
            "container_inherit": "ci",
            "object_inherit": "oi",
            "no_propagate": "np",
            "inherit_only": "io",
        }
        names = self.names()
        return ",".join(abbrev[n] for n in names) if names else "-"


NO_FLAGS = InheritFlags()


class AceKind(Enum):
    ALLOW = "allow"
    DENY = "deny"


@dataclass(frozen=True, slots=True)
class Ace:
    """One access-control entry.

    ``distance`` is 0 for explicit entries and the number of levels from
    the explicit source for inherited copies (recorded at
    materialization time so precedence can order nearer relatives
    first).
    """

    principal: Sid
    kind: AceKind
    mask: AccessMask
    flags: InheritFlags = NO_FLAGS
    distance: int = 0

    def __post_init__(self):
        if self.distance < 0:
            raise ValueError("distance must be >= 0")
        if not self.mask.bits:
            raise ValueError("ACE mask must be non-zero")

    @property
    def is_explicit(self) -> bool:
        return self.distance == 0

    @property
    def is_inherited(self) -> bool:
        return self.distance > 0

    @property
    def tier(self) -> int:
        """Precedence tier: explicit deny, explicit allow, then inherited
        entries by ascending distance with deny before allow per distance."""
        base = 2 * self.distance
        return base if self.kind is AceKind.DENY else base + 1

    def provenance(self) -> str:
        return "explicit" if self.distance == 0 else f"inherited({self.distance})"


def _entry_signature(ace: Ace) -> tuple:
    # Provenance deliberately excluded: an ACL inherited unchanged one
    # level deeper must compare equal to its parent's.
    return (ace.principal.text, ace.kind, ace.mask.bits, ace.flags)


@dataclass(frozen=True)
class Acl:
    """An ordered ACE list in canonical order.

    Build via canonicalize_acl; the constructor does not sort.
    """

    entries: tuple[Ace, ...] = ()
    signature: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "signature", tuple(_entry_signature(e) for e in self.entries)
        )

    def __iter__(self) -> Iterator[Ace]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


EMPTY_ACL = Acl()


def canonicalize_acl(entries: Iterable[Ace]) -> Acl:
    """Sort entries into canonical precedence order.

    Explicit deny, explicit allow, then inherited entries by ascending
    distance with deny before allow at each distance. The sort is stable
    among ties, so shuffles of equal-tier entries keep their relative
    order.
    """
    return Acl(tuple(sorted(entries, key=lambda a: a.tier)))


def acl_equal(a: Acl, b: Acl) -> bool:
    """Elementwise equality on (principal, kind, mask, flags), ignoring
    provenance. Both inputs must already be canonical."""
    return a.signature == b.signature


class NodeKind(Enum):
    FOLDER = "folder"
    FILE = "file"


@dataclass(frozen=True, slots=True)
class FsNode:
    """A folder or file carrying its explicitly-entered ACEs."""

    name: str
    kind: NodeKind
    owner: Sid
    explicit_aces: tuple[Ace, ...] = ()
    children: tuple["FsNode", ...] = ()

    def __post_init__(self):
        if self.kind is NodeKind.FILE and self.children:
            raise ValueError(f"file {self.name!r} cannot have children")
        seen = set()
        for child in self.children:
            if not child.name or "/" in child.name:
                raise ValueError(f"bad child name {child.name!r} under {self.name!r}")
            if child.name in seen:
                raise ValueError(f"duplicate child name {child.name!r} under {self.name!r}")
            seen.add(child.name)
        for ace in self.explicit_aces:
            if not ace.is_explicit:
                raise ValueError("tree nodes carry explicit ACEs only")

    @property
    def is_folder(self) -> bool:
        return self.kind is NodeKind.FOLDER

    def child(self, name: str) -> "FsNode | None":
        for c in self.children:
            if c.name == name:
                return c
        return None


@dataclass
class FsTree:
    """The snapshot tree plus per-path materialized ACLs.

    ``materialized`` is filled once by materialize_inheritance and maps
    normalized paths ("/", "/Accounting", ...) to canonical ACLs.
    """

    root: FsNode
    materialized: dict[str, Acl] = field(default_factory=dict)

    def acl_at(self, path: str) -> Acl:
        key = normalize_path(path)
        try:
            return self.materialized[key]
        except KeyError:
            raise PathNotFound(key) from None


def split_path(path: str) -> list[str]:
    return [seg for seg in path.split("/") if seg]


def normalize_path(path: str) -> str:
    segs = split_path(path)
    return "/" + "/".join(segs) if segs else "/"


def child_path(parent: str, name: str) -> str:
    return parent + name if parent.endswith("/") else parent + "/" + name


def resolve_path(tree: FsTree, path: str) -> FsNode:
    """Walk a slash-separated path from the root. "" and "/" are the root."""
    node = tree.root
    walked = "/"
    for seg in split_path(path):
        if node.kind is NodeKind.FILE:
            raise NotAFolder(walked)
        nxt = node.child(seg)
        if nxt is None:
            raise PathNotFound(child_path(walked, seg))
        node = nxt
        walked = child_path(walked, seg)
    return node


def walk_tree(
    tree: FsTree, root: str = "/", include_files: bool = False
) -> Iterator[tuple[str, FsNode, str | None]]:
    """Depth-first preorder walk from ``root``.

    Yields (path, node, parent_path); parent_path is None for the walk
    root itself. Siblings come in name order; only folders are entered.
    The walk root must be a folder.
    """
    start = resolve_path(tree, root)
    if not start.is_folder:
        raise NotAFolder(normalize_path(root))
    stack: list[tuple[str, FsNode, str | None]] = [(normalize_path(root), start, None)]
    while stack:
        path, node, parent = stack.pop()
        yield path, node, parent
        ordered = sorted(node.children, key=lambda c: c.name, reverse=True)
        for c in ordered:
            if c.is_folder:
                stack.append((child_path(path, c.name), c, path))
            elif include_files:
                stack.append((child_path(path, c.name), c, path))
