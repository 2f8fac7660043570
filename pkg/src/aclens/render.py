"""JSON-shaped views of report objects.

The CLI's json output and the HTTP service share these builders so the
two surfaces stay schema-identical. Dict key order is fixed; identical
inputs serialize byte-identically.
"""

from __future__ import annotations

from .accumulation import EffectiveReport, EffectiveResult, render_effective
from .masks import compress_special
from .model import Ace, PermissionAttribute, Sid
from .traversal import Finding, ReportEntry, TraversalReport, shadowed_mask


def sid_dict(sid: Sid) -> dict:
    return {"sid": sid.text, "display_name": sid.display_name}


def entry_dict(entry: ReportEntry) -> dict:
    out = {
        "sid": entry.principal.text,
        "display_name": entry.principal.display_name,
        "kind": entry.kind.value,
        "level": entry.level.value,
        "rendered": entry.rendered,
        "provenance": "explicit" if entry.distance == 0 else "inherited",
        "distance": entry.distance,
        "flags": list(entry.flags.names()),
    }
    if entry.matched_via is not None:
        out["matched_via"] = [s.text for s in entry.matched_via]
    return out


def traversal_rows(report: TraversalReport) -> list[dict]:
    return [
        {"path": row.path, "entries": [entry_dict(e) for e in row.entries]}
        for row in report.rows
    ]


def ace_dict(ace: Ace) -> dict:
    return {
        "sid": ace.principal.text,
        "display_name": ace.principal.display_name,
        "kind": ace.kind.value,
        "mask": ace.mask.hex,
        "provenance": "explicit" if ace.distance == 0 else "inherited",
        "distance": ace.distance,
        "flags": list(ace.flags.names()),
    }


def effective_result_dict(path: str, principal: Sid, result: EffectiveResult) -> dict:
    provenance = {}
    for attr in PermissionAttribute:
        deciding = result.per_bit_provenance.get(attr)
        provenance[attr.label] = None if deciding is None else ace_dict(deciding)
    return {
        "path": path,
        "principal": principal.text,
        "granted": result.granted.hex,
        "rendered": render_effective(result.granted),
        "short_circuited": result.short_circuited,
        "provenance": provenance,
    }


def effective_rows(report: EffectiveReport) -> list[dict]:
    return [
        {"path": row.path, "granted": row.granted.hex, "rendered": row.rendered}
        for row in report.rows
    ]


def finding_dict(finding: Finding) -> dict:
    return {
        "path": finding.path,
        "principal": finding.principal.text,
        "display_name": finding.principal.display_name,
        "shadowed": [a.label for a in PermissionAttribute if a in finding.shadowed],
        "shadowed_rendered": compress_special(shadowed_mask(finding)),
        "deny_source_path": finding.deny_source_path,
        "allow": ace_dict(finding.allow_ace),
    }


def membership_rows(sids: set[Sid], kinds: dict[str, str]) -> list[dict]:
    ordered = sorted(sids, key=lambda s: s.text)
    return [
        {"sid": s.text, "display_name": s.display_name, "kind": kinds[s.text]}
        for s in ordered
    ]
