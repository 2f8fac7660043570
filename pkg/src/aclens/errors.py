"""Exception hierarchy shared by every aclens module.

The CLI maps these onto its exit-code contract: snapshot errors -> 2,
path errors -> 3, principal errors -> 4.
"""

from __future__ import annotations


class AclensError(Exception):
    """Base class for all aclens errors."""


class PathError(AclensError):
    """A path argument did not resolve inside the tree."""

    def __init__(self, message: str, path: str):
        super().__init__(message)
        self.path = path


class PathNotFound(PathError):
    def __init__(self, path: str):
        super().__init__(f"path not found: {path}", path)


class NotAFolder(PathError):
    def __init__(self, path: str):
        super().__init__(f"not a folder: {path}", path)


class PrincipalError(AclensError):
    """A SID argument did not resolve against the principal directory."""

    def __init__(self, message: str, sid: str):
        super().__init__(message)
        self.sid = sid


class UnknownPrincipal(PrincipalError):
    def __init__(self, sid: str):
        super().__init__(f"unknown principal: {sid}", sid)


class NotAGroup(PrincipalError):
    def __init__(self, sid: str):
        super().__init__(f"not a group: {sid}", sid)


class NotNormalized(AclensError):
    """Mask still carries generic bits where a normalized mask is required."""


class EmptyMask(AclensError):
    """Mask carries no permission attributes, so there is nothing to render."""


class UnknownCode(AclensError):
    def __init__(self, code: str):
        super().__init__(f"unknown attribute code: {code!r}")
        self.code = code


class DuplicateCode(AclensError):
    def __init__(self, code: str):
        super().__init__(f"duplicate attribute code: {code!r}")
        self.code = code


class AceNotPresent(AclensError):
    """The ACE handed to distance_of is not in the ACL at that path."""


class SnapshotError(AclensError):
    """Snapshot document failed validation; detail_path locates the element."""

    def __init__(self, message: str, detail_path: str = "/"):
        super().__init__(f"{detail_path}: {message}")
        self.detail_path = detail_path
        self.reason = message


class SchemaError(SnapshotError):
    pass


class UnknownSid(SnapshotError):
    pass


class BadMask(SnapshotError):
    pass


class BadFlags(SnapshotError):
    pass


class BadParameters(AclensError):
    """Invalid arguments to the synthetic snapshot generator."""
