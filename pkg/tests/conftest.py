import pytest

from aclens.masks import FULL_CONTROL_MASK, MODIFY_MASK, mask_of
from aclens.membership import GroupGraph
from aclens.model import (
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
from aclens.propagation import materialize_inheritance
from aclens.snapshot import load_fixture, load_tree

ADMIN = Sid("S-1-5-32-544", "BUILTIN\\Administrators")
EVERYONE = Sid("S-1-1-0", "Everyone")
U1 = Sid("S-1-5-21-1001", "u1")
U2 = Sid("S-1-5-21-1002", "u2")
G1 = Sid("S-1-5-32-601", "g1")
G2 = Sid("S-1-5-32-602", "g2")


def ace(sid, kind="allow", mask=None, ci=False, oi=False, np=False, io=False, distance=0):
    if mask is None:
        mask = FULL_CONTROL_MASK
    elif isinstance(mask, int):
        mask = AccessMask(mask)
    elif isinstance(mask, (set, frozenset)):
        mask = mask_of(mask)
    return Ace(
        principal=sid,
        kind=AceKind(kind),
        mask=mask,
        flags=InheritFlags(ci, oi, np, io),
        distance=distance,
    )


def folder(name, aces=(), children=(), owner=ADMIN):
    return FsNode(name, NodeKind.FOLDER, owner, tuple(aces), tuple(children))


def file_(name, aces=(), owner=ADMIN):
    return FsNode(name, NodeKind.FILE, owner, tuple(aces))


def make_tree(root):
    return materialize_inheritance(FsTree(root))


def make_graph(users=(), groups=(), edges=()):
    principals = [Principal(s, PrincipalKind.USER) for s in users] + [
        Principal(s, PrincipalKind.GROUP) for s in groups
    ]
    return GroupGraph(principals, edges)


@pytest.fixture(scope="session")
def fig3():
    snap = load_fixture("fig3_shadowed_deny")
    tree, graph = load_tree(snap)
    return snap, tree, graph


@pytest.fixture(scope="session")
def users_demo():
    snap = load_fixture("users_dir_demo")
    tree, graph = load_tree(snap)
    return snap, tree, graph


@pytest.fixture(scope="session")
def special_demo():
    snap = load_fixture("special_perm_demo")
    tree, graph = load_tree(snap)
    return snap, tree, graph


FIG3_USER = "S-1-5-21-1001"

MODIFY_SET = frozenset(
    a
    for a in PermissionAttribute
    if MODIFY_MASK.contains(a)
)
