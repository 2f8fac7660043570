"""Read-only HTTP/JSON facade over one loaded snapshot.

All endpoints are GET and stateless; response row schemas match the CLI
json output exactly. Unknown paths or principals return 404 with a
{code, message, detail_path} body; malformed queries return 400.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import render
from .accumulation import effective_mask, effective_search
from .errors import AclensError, NotAFolder, NotAGroup, PathError, PrincipalError
from .membership import GroupGraph
from .model import FsTree, NodeKind, child_path, normalize_path, resolve_path
from .snapshot import Snapshot, meta_document
from .traversal import audit_shadowed_denies, render_entry, traverse_report


def _tree_listing(tree: FsTree, path: str, depth: int) -> dict:
    node = resolve_path(tree, path)
    norm = normalize_path(path)

    def describe(n, p, remaining) -> dict:
        has_children = bool(n.children)
        doc = {
            "path": p,
            "name": n.name,
            "kind": n.kind.value,
            "has_children": has_children,
            "children": None,
        }
        if remaining > 0 and n.kind is NodeKind.FOLDER:
            doc["children"] = [
                describe(c, child_path(p, c.name), remaining - 1)
                for c in sorted(n.children, key=lambda c: c.name)
            ]
        return doc

    return describe(node, norm, depth)


def _parse_bool(value: str, name: str) -> bool:
    lowered = value.lower()
    if lowered in ("1", "true", "yes"):
        return True
    if lowered in ("0", "false", "no", ""):
        return False
    raise _BadQuery(f"{name} must be a boolean, got {value!r}")


class _BadQuery(Exception):
    pass


def create_app(
    tree: FsTree,
    graph: GroupGraph,
    snapshot: Snapshot,
    cors_origins: list[str] | tuple[str, ...] = ("*",),
) -> FastAPI:
    app = FastAPI(title="aclens", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    kinds = {p.sid.text: p.kind.value for p in snapshot.principals}

    @app.exception_handler(PathError)
    async def _path_error(request: Request, exc: PathError):
        code = "not_a_folder" if isinstance(exc, NotAFolder) else "path_not_found"
        return JSONResponse(
            status_code=404,
            content={"code": code, "message": str(exc), "detail_path": exc.path},
        )

    @app.exception_handler(PrincipalError)
    async def _principal_error(request: Request, exc: PrincipalError):
        code = "not_a_group" if isinstance(exc, NotAGroup) else "unknown_principal"
        return JSONResponse(
            status_code=404,
            content={"code": code, "message": str(exc), "detail_path": exc.sid},
        )

    @app.exception_handler(_BadQuery)
    async def _bad_query(request: Request, exc: _BadQuery):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_query", "message": str(exc), "detail_path": str(request.url.path)},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_query", "message": str(exc.errors()), "detail_path": str(request.url.path)},
        )

    @app.exception_handler(AclensError)
    async def _engine_error(request: Request, exc: AclensError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_query", "message": str(exc), "detail_path": str(request.url.path)},
        )

    @app.get("/meta")
    def meta():
        return meta_document(snapshot)

    @app.get("/tree")
    def tree_endpoint(path: str = "/", depth: int = 1):
        if depth < 0:
            raise _BadQuery("depth must be >= 0")
        return _tree_listing(tree, path, depth)

    @app.get("/acl")
    def acl_endpoint(path: str = "/"):
        acl = tree.acl_at(path)
        return {
            "path": normalize_path(path),
            "entries": [render.entry_dict(render_entry(a)) for a in acl],
        }

    @app.get("/traverse")
    def traverse_endpoint(
        root: str = "/",
        filter: str = Query(default=""),
        include_unchanged: str = "false",
    ):
        sids = frozenset(s for s in filter.split(",") if s)
        report = traverse_report(
            tree,
            root,
            filter_sids=sids,
            include_unchanged=_parse_bool(include_unchanged, "include_unchanged"),
        )
        return {"rows": render.traversal_rows(report)}

    @app.get("/effective")
    def effective_endpoint(path: str = "/", principal: str = Query(...), recursive: str = "false"):
        sid = graph.principal(principal).sid
        if _parse_bool(recursive, "recursive"):
            report = effective_search(tree, path, sid, graph)
            return {"rows": render.effective_rows(report)}
        result = effective_mask(tree, path, sid, graph)
        return render.effective_result_dict(normalize_path(path), sid, result)

    @app.get("/membership")
    def membership_endpoint(sid: str = Query(...), direction: str = "member-of"):
        if direction == "member-of":
            sids = graph.member_of_closure(sid)
        elif direction == "members":
            sids = graph.members_closure(sid)
        else:
            raise _BadQuery(f"direction must be member-of or members, got {direction!r}")
        return {
            "sid": graph.principal(sid).sid.text,
            "direction": direction,
            "results": render.membership_rows(sids, kinds),
        }

    @app.get("/audit")
    def audit_endpoint(root: str = "/"):
        findings = audit_shadowed_denies(tree, root, graph)
        return {"findings": [render.finding_dict(f) for f in findings]}

    return app
