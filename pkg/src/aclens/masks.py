"""Access-mask semantics.

The fixed attribute/bit/code table, generic-bit expansion, the six
standard coarse-grained levels, and the hyphenated character-to-attribute
compression used for special permissions.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable

from .errors import DuplicateCode, EmptyMask, NotNormalized, UnknownCode
from .model import (
    GENERIC_ALL_BIT,
    GENERIC_BITS,
    GENERIC_EXECUTE_BIT,
    GENERIC_READ_BIT,
    GENERIC_WRITE_BIT,
    AccessMask,
    InheritFlags,
    PermissionAttribute,
)

A = PermissionAttribute

# Short codes for the hyphenated rendering. The first five are fixed by
# the compression scheme ("R-W-Dc-Rp-Cp"); the rest follow the same
# initialism style.
ATTRIBUTE_CODES: dict[PermissionAttribute, str] = {
    A.READ_DATA: "R",
    A.WRITE_DATA: "W",
    A.APPEND_DATA: "Ad",
    A.READ_EXTENDED_ATTRIBUTES: "Re",
    A.WRITE_EXTENDED_ATTRIBUTES: "We",
    A.EXECUTE: "X",
    A.DELETE_CHILD: "Dc",
    A.READ_ATTRIBUTES: "Ra",
    A.WRITE_ATTRIBUTES: "Wa",
    A.DELETE: "D",
    A.READ_PERMISSIONS: "Rp",
    A.CHANGE_PERMISSIONS: "Cp",
    A.TAKE_OWNERSHIP: "To",
    A.SYNCHRONIZE: "Sy",
}

CODE_ATTRIBUTES: dict[str, PermissionAttribute] = {
    code: attr for attr, code in ATTRIBUTE_CODES.items()
}


def mask_of(attrs: Iterable[PermissionAttribute]) -> AccessMask:
    bits = 0
    for attr in attrs:
        bits |= attr.value
    return AccessMask(bits)


# Generic-bit expansions: "all needed to read/write/execute a file", and
# everything for generic-all.
GENERIC_READ_SET = frozenset(
    {A.READ_DATA, A.READ_EXTENDED_ATTRIBUTES, A.READ_ATTRIBUTES,
     A.READ_PERMISSIONS, A.SYNCHRONIZE}
)
GENERIC_WRITE_SET = frozenset(
    {A.WRITE_DATA, A.APPEND_DATA, A.WRITE_EXTENDED_ATTRIBUTES,
     A.WRITE_ATTRIBUTES, A.READ_PERMISSIONS, A.SYNCHRONIZE}
)
GENERIC_EXECUTE_SET = frozenset(
    {A.EXECUTE, A.READ_ATTRIBUTES, A.READ_PERMISSIONS, A.SYNCHRONIZE}
)
GENERIC_ALL_SET = frozenset(PermissionAttribute)

_GENERIC_EXPANSIONS = (
    (GENERIC_READ_BIT, mask_of(GENERIC_READ_SET).bits),
    (GENERIC_WRITE_BIT, mask_of(GENERIC_WRITE_SET).bits),
    (GENERIC_EXECUTE_BIT, mask_of(GENERIC_EXECUTE_SET).bits),
    (GENERIC_ALL_BIT, mask_of(GENERIC_ALL_SET).bits),
)


class CoarseLevel(Enum):
    READ = "Read"
    WRITE = "Write"
    LIST_FOLDER_CONTENTS = "ListFolderContents"
    READ_AND_EXECUTE = "ReadAndExecute"
    MODIFY = "Modify"
    FULL_CONTROL = "FullControl"
    SPECIAL = "Special"


# Canonical attribute sets behind the standard levels. ListFolderContents
# shares ReadAndExecute's mask and is told apart by inheritance flags
# only. Modify is ReadAndExecute plus Write plus Delete.
READ_SET = GENERIC_READ_SET
WRITE_SET = GENERIC_WRITE_SET
READ_AND_EXECUTE_SET = READ_SET | GENERIC_EXECUTE_SET
MODIFY_SET = READ_AND_EXECUTE_SET | WRITE_SET | {A.DELETE}
FULL_CONTROL_SET = GENERIC_ALL_SET

COARSE_SETS: dict[CoarseLevel, frozenset[PermissionAttribute]] = {
    CoarseLevel.READ: READ_SET,
    CoarseLevel.WRITE: WRITE_SET,
    CoarseLevel.LIST_FOLDER_CONTENTS: frozenset(READ_AND_EXECUTE_SET),
    CoarseLevel.READ_AND_EXECUTE: frozenset(READ_AND_EXECUTE_SET),
    CoarseLevel.MODIFY: frozenset(MODIFY_SET),
    CoarseLevel.FULL_CONTROL: FULL_CONTROL_SET,
}

_LEVEL_BY_BITS: dict[int, CoarseLevel] = {
    mask_of(READ_SET).bits: CoarseLevel.READ,
    mask_of(WRITE_SET).bits: CoarseLevel.WRITE,
    mask_of(READ_AND_EXECUTE_SET).bits: CoarseLevel.READ_AND_EXECUTE,
    mask_of(MODIFY_SET).bits: CoarseLevel.MODIFY,
    mask_of(FULL_CONTROL_SET).bits: CoarseLevel.FULL_CONTROL,
}

FULL_CONTROL_MASK = mask_of(FULL_CONTROL_SET)
MODIFY_MASK = mask_of(MODIFY_SET)
READ_AND_EXECUTE_MASK = mask_of(READ_AND_EXECUTE_SET)
READ_MASK = mask_of(READ_SET)
WRITE_MASK = mask_of(WRITE_SET)


def normalize_generic(mask: AccessMask) -> AccessMask:
    """Clear generic bits 28-31, replacing each with its specific-attribute
    expansion. Idempotent, and never clears an attribute bit already set."""
    bits = mask.bits
    if not bits & GENERIC_BITS:
        return mask
    for generic_bit, expansion in _GENERIC_EXPANSIONS:
        if bits & generic_bit:
            bits |= expansion
    return AccessMask(bits & ~GENERIC_BITS)


def attributes_of(mask: AccessMask) -> frozenset[PermissionAttribute]:
    """The attributes whose bits are set. Requires a normalized mask."""
    if not mask.is_normalized:
        raise NotNormalized(f"mask has generic bits set: {mask.hex}")
    return frozenset(a for a in PermissionAttribute if mask.bits & a.value)


def classify_coarse(mask: AccessMask, flags: InheritFlags | None = None) -> CoarseLevel:
    """Match a normalized mask against the standard coarse levels.

    ReadAndExecute's mask classifies as ListFolderContents when the ACE
    propagates to folders only (container_inherit without
    object_inherit); anything that matches no canonical set is Special.
    """
    if not mask.is_normalized:
        raise NotNormalized(f"mask has generic bits set: {mask.hex}")
    level = _LEVEL_BY_BITS.get(mask.attribute_bits, CoarseLevel.SPECIAL)
    if (
        level is CoarseLevel.READ_AND_EXECUTE
        and flags is not None
        and flags.container_inherit
        and not flags.object_inherit
    ):
        return CoarseLevel.LIST_FOLDER_CONTENTS
    return level


def compress_special(mask: AccessMask) -> str:
    """Hyphen-joined attribute codes in fixed table order, e.g.
    ``R-W-Dc-Rp-Cp``."""
    attrs = attributes_of(mask)
    if not attrs:
        raise EmptyMask(f"no attributes to compress: {mask.hex}")
    return "-".join(ATTRIBUTE_CODES[a] for a in PermissionAttribute if a in attrs)


def parse_compressed(s: str) -> AccessMask:
    """Inverse of compress_special."""
    seen: set[PermissionAttribute] = set()
    for token in s.split("-"):
        attr = CODE_ATTRIBUTES.get(token)
        if attr is None:
            raise UnknownCode(token)
        if attr in seen:
            raise DuplicateCode(token)
        seen.add(attr)
    return mask_of(seen)


def describe_mask(mask: AccessMask, flags: InheritFlags | None = None) -> tuple[CoarseLevel, str]:
    """Classify and render a mask: the level name for standard levels,
    the compressed code string for special ones."""
    level = classify_coarse(mask, flags)
    if level is CoarseLevel.SPECIAL:
        return level, compress_special(mask)
    return level, level.value


def permission_table() -> list[dict]:
    """The attribute/bit/code table as a machine-readable document, so
    the UI and fixtures share the engine's key."""
    return [
        {"name": a.label, "bit": a.bit, "mask": f"0x{a.value:08x}", "code": ATTRIBUTE_CODES[a]}
        for a in PermissionAttribute
    ]


def coarse_table() -> list[dict]:
    rows = []
    for level, attrs in COARSE_SETS.items():
        rows.append(
            {
                "name": level.value,
                "mask": mask_of(attrs).hex,
                "attributes": [a.label for a in PermissionAttribute if a in attrs],
            }
        )
    return rows


def generic_table() -> list[dict]:
    names = (
        ("GenericRead", GENERIC_READ_BIT, GENERIC_READ_SET),
        ("GenericWrite", GENERIC_WRITE_BIT, GENERIC_WRITE_SET),
        ("GenericExecute", GENERIC_EXECUTE_BIT, GENERIC_EXECUTE_SET),
        ("GenericAll", GENERIC_ALL_BIT, GENERIC_ALL_SET),
    )
    return [
        {
            "name": name,
            "bit": bit.bit_length() - 1,
            "expands_to": [a.label for a in PermissionAttribute if a in attrs],
        }
        for name, bit, attrs in names
    ]
