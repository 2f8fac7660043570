"""aclens: analyse NTFS-style file-system permissions over snapshots.

Public surface: the data model, mask semantics, membership closures,
inheritance materialization, effective-permission accumulation,
traversal reports and the shadowed-deny audit, snapshot IO, a CLI, and
an HTTP service for the interactive explorer.
"""

from .accumulation import (
    EffectiveReport,
    EffectiveResult,
    EffectiveRow,
    brute_force_effective,
    effective_mask,
    effective_search,
)
from .errors import (
    AceNotPresent,
    AclensError,
    BadFlags,
    BadMask,
    BadParameters,
    DuplicateCode,
    EmptyMask,
    NotAFolder,
    NotAGroup,
    NotNormalized,
    PathNotFound,
    SchemaError,
    SnapshotError,
    UnknownCode,
    UnknownPrincipal,
    UnknownSid,
)
from .masks import (
    ATTRIBUTE_CODES,
    CoarseLevel,
    attributes_of,
    classify_coarse,
    compress_special,
    mask_of,
    normalize_generic,
    parse_compressed,
)
from .membership import GroupGraph
from .model import (
    AccessMask,
    Ace,
    AceKind,
    Acl,
    FsNode,
    FsTree,
    InheritFlags,
    NodeKind,
    PermissionAttribute,
    Principal,
    PrincipalKind,
    Sid,
    acl_equal,
    canonicalize_acl,
    resolve_path,
)
from .propagation import distance_of, materialize_inheritance
from .snapshot import (
    Snapshot,
    generate_synthetic,
    load_fixture,
    load_snapshot_file,
    load_tree,
    parse_snapshot,
    serialize_snapshot,
)
from .traversal import (
    Finding,
    ReportEntry,
    TraversalReport,
    TraversalRow,
    audit_shadowed_denies,
    per_principal_report,
    traverse_report,
)

__version__ = "0.1.0"
