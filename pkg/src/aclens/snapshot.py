"""Snapshot format v1: parsing, validation, canonical serialization, and
a seeded synthetic generator.

A snapshot is a JSON document carrying the principal directory, the
membership edges, and the folder/file tree with its explicitly-entered
ACEs. Masks may be spelled as hex ("0x001301bf"), as hyphenated
attribute codes ("R-W-Dc-Rp-Cp"), or as a coarse level name ("Modify");
canonical serialization always emits hex plus a rendered comment field.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import (
    BadFlags,
    BadMask,
    BadParameters,
    DuplicateCode,
    SchemaError,
    UnknownCode,
    UnknownSid,
)
from .masks import (
    ATTRIBUTE_CODES,
    FULL_CONTROL_MASK,
    MODIFY_MASK,
    READ_AND_EXECUTE_MASK,
    READ_MASK,
    WRITE_MASK,
    coarse_table,
    describe_mask,
    generic_table,
    normalize_generic,
    parse_compressed,
    permission_table,
)
from .membership import GroupGraph
from .model import (
    AccessMask,
    Ace,
    AceKind,
    FsNode,
    FsTree,
    InheritFlags,
    NodeKind,
    PermissionAttribute,
    Principal,
    PrincipalKind,
    Sid,
)
from .propagation import materialize_inheritance

FORMAT_VERSION = 1

FIXTURE_NAMES = ("fig3_shadowed_deny", "users_dir_demo", "special_perm_demo")

_COARSE_NAMES = {
    "Read": READ_MASK,
    "Write": WRITE_MASK,
    "ListFolderContents": READ_AND_EXECUTE_MASK,
    "ReadAndExecute": READ_AND_EXECUTE_MASK,
    "Modify": MODIFY_MASK,
    "FullControl": FULL_CONTROL_MASK,
}

_FLAG_NAMES = ("container_inherit", "object_inherit", "no_propagate", "inherit_only")


@dataclass(frozen=True)
class Snapshot:
    """A validated snapshot document."""

    format_version: int
    principals: tuple[Principal, ...]
    memberships: tuple[tuple[str, str], ...]
    root: FsNode


def _require_keys(obj: dict, required: set[str], optional: set[str], path: str) -> None:
    keys = set(obj)
    missing = required - keys
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(sorted(missing))}", path)
    extra = keys - required - optional
    if extra:
        raise SchemaError(f"unexpected field(s): {', '.join(sorted(extra))}", path)


def _require_str(obj: dict, key: str, path: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise SchemaError(f"field {key!r} must be a string", f"{path}/{key}")
    return value


def _parse_mask(spelling: str, path: str) -> AccessMask:
    if spelling.lower().startswith("0x"):
        try:
            bits = int(spelling, 16)
        except ValueError:
            raise BadMask(f"bad hex mask: {spelling!r}", path) from None
        try:
            mask = AccessMask(bits)
        except ValueError as exc:
            raise BadMask(str(exc), path) from None
    elif spelling in _COARSE_NAMES:
        mask = _COARSE_NAMES[spelling]
    else:
        try:
            mask = parse_compressed(spelling)
        except (UnknownCode, DuplicateCode) as exc:
            raise BadMask(str(exc), path) from None
    mask = normalize_generic(mask)
    if not mask.bits:
        raise BadMask("mask grants nothing", path)
    return mask


def _parse_flags(raw: Any, path: str) -> InheritFlags:
    if raw is None:
        return InheritFlags()
    if not isinstance(raw, list):
        raise BadFlags("flags must be a list of flag names", path)
    seen = set()
    for name in raw:
        if name not in _FLAG_NAMES:
            raise BadFlags(f"unknown flag: {name!r}", path)
        if name in seen:
            raise BadFlags(f"duplicate flag: {name!r}", path)
        seen.add(name)
    try:
        return InheritFlags(
            container_inherit="container_inherit" in seen,
            object_inherit="object_inherit" in seen,
            no_propagate="no_propagate" in seen,
            inherit_only="inherit_only" in seen,
        )
    except ValueError as exc:
        raise BadFlags(str(exc), path) from None


def _parse_ace(raw: Any, path: str, directory: dict[str, Sid]) -> Ace:
    if not isinstance(raw, dict):
        raise SchemaError("ACE must be an object", path)
    _require_keys(raw, {"principal_sid", "kind", "mask"}, {"flags", "rendered"}, path)
    sid_text = _require_str(raw, "principal_sid", path)
    if sid_text not in directory:
        raise UnknownSid(f"undeclared SID: {sid_text}", f"{path}/principal_sid")
    kind_text = _require_str(raw, "kind", path)
    if kind_text not in ("allow", "deny"):
        raise SchemaError(f"kind must be allow or deny, got {kind_text!r}", f"{path}/kind")
    mask = _parse_mask(_require_str(raw, "mask", path), f"{path}/mask")
    flags = _parse_flags(raw.get("flags"), f"{path}/flags")
    return Ace(
        principal=directory[sid_text],
        kind=AceKind(kind_text),
        mask=mask,
        flags=flags,
    )


def _parse_principals(raw: Any, directory: dict[str, Sid]) -> list[Principal]:
    if not isinstance(raw, list):
        raise SchemaError("principals must be a list", "/principals")
    out: list[Principal] = []
    for i, rec in enumerate(raw):
        path = f"/principals/{i}"
        if not isinstance(rec, dict):
            raise SchemaError("principal must be an object", path)
        _require_keys(rec, {"sid", "kind"}, {"display_name"}, path)
        sid_text = _require_str(rec, "sid", path)
        display = rec.get("display_name")
        if display is not None and not isinstance(display, str):
            raise SchemaError("display_name must be a string", f"{path}/display_name")
        try:
            sid = Sid(sid_text, display)
        except ValueError as exc:
            raise SchemaError(str(exc), f"{path}/sid") from None
        if sid.text in directory:
            raise SchemaError(f"duplicate principal: {sid.text}", f"{path}/sid")
        kind_text = _require_str(rec, "kind", path)
        if kind_text not in ("user", "group"):
            raise SchemaError(f"kind must be user or group, got {kind_text!r}", f"{path}/kind")
        directory[sid.text] = sid
        out.append(Principal(sid, PrincipalKind(kind_text)))
    return out


def _parse_memberships(
    raw: Any, principals: dict[str, Principal]
) -> list[tuple[str, str]]:
    if not isinstance(raw, list):
        raise SchemaError("memberships must be a list", "/memberships")
    out: list[tuple[str, str]] = []
    for i, rec in enumerate(raw):
        path = f"/memberships/{i}"
        if not isinstance(rec, dict):
            raise SchemaError("membership must be an object", path)
        _require_keys(rec, {"member_sid", "group_sid"}, set(), path)
        member = _require_str(rec, "member_sid", path)
        group = _require_str(rec, "group_sid", path)
        if member not in principals:
            raise UnknownSid(f"undeclared SID: {member}", f"{path}/member_sid")
        if group not in principals:
            raise UnknownSid(f"undeclared SID: {group}", f"{path}/group_sid")
        if member == group:
            raise SchemaError("self-membership rejected", path)
        if principals[group].kind is not PrincipalKind.GROUP:
            raise SchemaError(f"group_sid {group} is not a group", f"{path}/group_sid")
        out.append((member, group))
    return out


def _parse_tree(raw: Any, directory: dict[str, Sid]) -> FsNode:
    # Iterative post-order build: children tuples are completed before
    # their parent node is constructed, without Python recursion.
    def validate(rec: Any, path: str, is_root: bool) -> tuple[str, NodeKind, Sid, tuple[Ace, ...], list]:
        if not isinstance(rec, dict):
            raise SchemaError("node must be an object", path)
        _require_keys(rec, {"name", "kind", "owner_sid"}, {"aces", "children"}, path)
        name = _require_str(rec, "name", path)
        if not is_root and (not name or "/" in name):
            raise SchemaError(f"bad node name: {name!r}", f"{path}/name")
        kind_text = _require_str(rec, "kind", path)
        if kind_text not in ("folder", "file"):
            raise SchemaError(f"kind must be folder or file, got {kind_text!r}", f"{path}/kind")
        kind = NodeKind(kind_text)
        owner_text = _require_str(rec, "owner_sid", path)
        if owner_text not in directory:
            raise UnknownSid(f"undeclared SID: {owner_text}", f"{path}/owner_sid")
        aces_raw = rec.get("aces", [])
        if not isinstance(aces_raw, list):
            raise SchemaError("aces must be a list", f"{path}/aces")
        aces = tuple(
            _parse_ace(a, f"{path}/aces/{i}", directory) for i, a in enumerate(aces_raw)
        )
        children_raw = rec.get("children", [])
        if not isinstance(children_raw, list):
            raise SchemaError("children must be a list", f"{path}/children")
        if kind is NodeKind.FILE and children_raw:
            raise SchemaError("file nodes cannot have children", f"{path}/children")
        return name, kind, directory[owner_text], aces, children_raw

    root_out: list[FsNode] = []
    work: list[tuple] = [("enter", raw, "/tree", root_out, True)]
    while work:
        frame = work.pop()
        if frame[0] == "enter":
            _, rec, path, out, is_root = frame
            name, kind, owner, aces, children_raw = validate(rec, path, is_root)
            child_out: list[FsNode] = []
            work.append(("exit", name, kind, owner, aces, child_out, out, path))
            for i in reversed(range(len(children_raw))):
                work.append(("enter", children_raw[i], f"{path}/children/{i}", child_out, False))
        else:
            _, name, kind, owner, aces, child_out, out, path = frame
            try:
                node = FsNode(name, kind, owner, aces, tuple(child_out))
            except ValueError as exc:
                raise SchemaError(str(exc), path) from None
            out.append(node)
    return root_out[0]


def parse_snapshot(text: str) -> Snapshot:
    """Parse and validate a snapshot document.

    Every validation error is typed (SchemaError, UnknownSid, BadMask,
    BadFlags) and carries a JSON-pointer-style path to the offending
    element. Masks are normalized at this stage, so the engine never
    sees generic bits.
    """
    try:
        doc = json.loads(text)
    except (ValueError, RecursionError) as exc:
        raise SchemaError(f"invalid JSON: {exc}", "/") from None
    if not isinstance(doc, dict):
        raise SchemaError("document must be an object", "/")
    _require_keys(doc, {"format_version", "principals", "memberships", "tree"}, set(), "/")
    version = doc["format_version"]
    if version != FORMAT_VERSION:
        raise SchemaError(f"unsupported format_version: {version!r}", "/format_version")

    directory: dict[str, Sid] = {}
    principals = _parse_principals(doc["principals"], directory)
    by_text = {p.sid.text: p for p in principals}
    memberships = _parse_memberships(doc["memberships"], by_text)
    root = _parse_tree(doc["tree"], directory)
    return Snapshot(version, tuple(principals), tuple(memberships), root)


def load_snapshot_file(path: str | Path) -> Snapshot:
    return parse_snapshot(Path(path).read_text(encoding="utf-8"))


def load_tree(snapshot: Snapshot) -> tuple[FsTree, GroupGraph]:
    """Build the tree and membership graph, materializing inheritance."""
    tree = materialize_inheritance(FsTree(snapshot.root))
    by_text = {p.sid.text: p for p in snapshot.principals}
    edges = [(by_text[m].sid, by_text[g].sid) for m, g in snapshot.memberships]
    graph = GroupGraph(snapshot.principals, edges)
    return tree, graph


def _node_document(node: FsNode) -> dict:
    aces = []
    for ace in node.explicit_aces:
        _level, rendered = describe_mask(ace.mask, ace.flags)
        aces.append(
            {
                "principal_sid": ace.principal.text,
                "kind": ace.kind.value,
                "mask": ace.mask.hex,
                "rendered": rendered,
                "flags": list(ace.flags.names()),
            }
        )
    doc = {
        "name": node.name,
        "kind": node.kind.value,
        "owner_sid": node.owner.text,
        "aces": aces,
        "children": [_node_document(c) for c in node.children],
    }
    return doc


def serialize_snapshot(snapshot: Snapshot) -> str:
    """Canonical serialization: hex masks plus a rendered comment field,
    authored ordering preserved. parse -> serialize is idempotent."""
    principals = []
    for p in snapshot.principals:
        rec: dict[str, Any] = {"sid": p.sid.text, "kind": p.kind.value}
        if p.sid.display_name is not None:
            rec["display_name"] = p.sid.display_name
        principals.append(rec)
    doc = {
        "format_version": snapshot.format_version,
        "principals": principals,
        "memberships": [
            {"member_sid": m, "group_sid": g} for m, g in snapshot.memberships
        ],
        "tree": _node_document(snapshot.root),
    }
    return json.dumps(doc, indent=2) + "\n"


def snapshot_stats(snapshot: Snapshot) -> dict:
    folders = files = aces = 0
    depth = 0
    stack: list[tuple[FsNode, int]] = [(snapshot.root, 1)]
    while stack:
        node, d = stack.pop()
        depth = max(depth, d)
        aces += len(node.explicit_aces)
        if node.kind is NodeKind.FOLDER:
            folders += 1
        else:
            files += 1
        stack.extend((c, d + 1) for c in node.children)
    return {
        "folders": folders,
        "files": files,
        "explicit_aces": aces,
        "max_depth": depth,
        "principals": len(snapshot.principals),
        "memberships": len(snapshot.memberships),
    }


def meta_document(snapshot: Snapshot | None = None) -> dict:
    """The attribute/bit/code table (the UI's character-to-attribute
    key), coarse-level definitions, generic expansions, and — when a
    snapshot is supplied — its stats and principal directory (the
    explorer's filter dialog selects from these)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "attributes": permission_table(),
        "coarse_levels": coarse_table(),
        "generic": generic_table(),
    }
    if snapshot is not None:
        doc["snapshot"] = snapshot_stats(snapshot)
        doc["principals"] = [
            {"sid": p.sid.text, "display_name": p.sid.display_name, "kind": p.kind.value}
            for p in snapshot.principals
        ]
    return doc


def fixture_path(name: str) -> Path:
    """Filesystem path of a shipped golden fixture."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture: {name}")
    return Path(str(resources.files("aclens").joinpath(f"fixtures/{name}.json")))


def load_fixture(name: str) -> Snapshot:
    return parse_snapshot(fixture_path(name).read_text(encoding="utf-8"))


# --- synthetic generation ------------------------------------------------

_VALID_FLAG_COMBOS: tuple[InheritFlags, ...] = tuple(
    InheritFlags(ci, oi, np, io)
    for ci in (False, True)
    for oi in (False, True)
    for np in (False, True)
    for io in (False, True)
    if (ci or oi) or not (np or io)
)

# Weighted toward the combinations real trees mostly use.
_FLAG_WEIGHTS = {
    InheritFlags(): 30,
    InheritFlags(container_inherit=True): 20,
    InheritFlags(container_inherit=True, object_inherit=True): 30,
}


def _random_flags(rng: random.Random) -> InheritFlags:
    combos = list(_VALID_FLAG_COMBOS)
    weights = [_FLAG_WEIGHTS.get(c, 3) for c in combos]
    return rng.choices(combos, weights=weights, k=1)[0]


def _random_mask_spelling(rng: random.Random) -> str:
    if rng.random() < 0.5:
        return rng.choice(
            ("Read", "Write", "ListFolderContents", "ReadAndExecute", "Modify", "FullControl")
        )
    attrs = rng.sample(list(PermissionAttribute), k=rng.randint(1, 5))
    return "-".join(ATTRIBUTE_CODES[a] for a in PermissionAttribute if a in attrs)


def generate_synthetic(
    seed: int,
    folders: int,
    principals: int,
    max_depth: int,
    ace_density: float,
) -> Snapshot:
    """Deterministically generate a valid snapshot.

    ``folders`` counts the root; files are added at roughly a third of
    the folder count. The same seed always yields a byte-identical
    serialized snapshot.
    """
    if folders < 1:
        raise BadParameters("folders must be >= 1")
    if principals < 1:
        raise BadParameters("principals must be >= 1")
    if max_depth < 1:
        raise BadParameters("max_depth must be >= 1")
    if not 0.0 <= ace_density <= 1.0:
        raise BadParameters("ace_density must be within 0..1")
    if folders > 1 and max_depth < 2:
        raise BadParameters("folders do not fit within max_depth")

    rng = random.Random(seed)

    n_groups = principals // 2
    n_users = principals - n_groups
    principal_records = []
    user_sids = [f"S-1-5-21-{1000 + i}" for i in range(n_users)]
    group_sids = [f"S-1-5-32-{600 + j}" for j in range(n_groups)]
    for i, sid in enumerate(user_sids):
        principal_records.append({"sid": sid, "kind": "user", "display_name": f"user{i}"})
    for j, sid in enumerate(group_sids):
        principal_records.append({"sid": sid, "kind": "group", "display_name": f"group{j}"})
    all_sids = user_sids + group_sids

    memberships = []
    for sid in user_sids:
        if not group_sids:
            break
        for g in sorted(rng.sample(group_sids, k=rng.randint(0, min(2, len(group_sids))))):
            memberships.append({"member_sid": sid, "group_sid": g})
    for j, sid in enumerate(group_sids):
        later = group_sids[j + 1 :]
        if later and rng.random() < 0.3:
            memberships.append({"member_sid": sid, "group_sid": rng.choice(later)})

    def make_aces(is_folder: bool) -> list[dict]:
        if rng.random() >= ace_density:
            return []
        out = []
        for _ in range(rng.randint(1, 3)):
            flags = _random_flags(rng) if is_folder else InheritFlags()
            out.append(
                {
                    "principal_sid": rng.choice(all_sids),
                    "kind": "deny" if rng.random() < 0.3 else "allow",
                    "mask": _random_mask_spelling(rng),
                    "flags": list(flags.names()),
                }
            )
        return out

    root = {
        "name": "",
        "kind": "folder",
        "owner_sid": rng.choice(all_sids),
        "aces": make_aces(True),
        "children": [],
    }
    eligible = [(root, 1)] if max_depth > 1 else []
    folder_nodes = [root]
    for i in range(1, folders):
        parent, depth = rng.choice(eligible)
        node = {
            "name": f"d{i:05d}",
            "kind": "folder",
            "owner_sid": rng.choice(all_sids),
            "aces": make_aces(True),
            "children": [],
        }
        parent["children"].append(node)
        folder_nodes.append(node)
        if depth + 1 < max_depth:
            eligible.append((node, depth + 1))

    for i in range(folders // 3):
        parent = rng.choice(folder_nodes)
        parent["children"].append(
            {
                "name": f"f{i:05d}.dat",
                "kind": "file",
                "owner_sid": rng.choice(all_sids),
                "aces": make_aces(False),
                "children": [],
            }
        )

    doc = {
        "format_version": FORMAT_VERSION,
        "principals": principal_records,
        "memberships": memberships,
        "tree": root,
    }
    return parse_snapshot(json.dumps(doc))
