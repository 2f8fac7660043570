"""Transitive group-membership resolution.

The graph is directed member -> containing group. Both closure
directions are cycle-safe; cycles are accepted at load with a warning
since real directories can contain them transiently.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import Iterable

from .errors import NotAGroup, UnknownPrincipal
from .model import Principal, PrincipalKind, Sid

logger = logging.getLogger(__name__)


class GroupGraph:
    """Immutable membership graph over the snapshot's principals."""

    def __init__(self, principals: Iterable[Principal], edges: Iterable[tuple[Sid, Sid]]):
        self._principals: dict[str, Principal] = {}
        for p in principals:
            if p.sid.text in self._principals:
                raise ValueError(f"duplicate principal: {p.sid.text}")
            self._principals[p.sid.text] = p

        self._member_groups: dict[str, list[str]] = {t: [] for t in self._principals}
        self._group_members: dict[str, list[str]] = {t: [] for t in self._principals}
        self._edges: set[tuple[str, str]] = set()
        for member, group in edges:
            m, g = member.text, group.text
            if m not in self._principals:
                raise ValueError(f"membership edge references unknown SID {m}")
            if g not in self._principals:
                raise ValueError(f"membership edge references unknown SID {g}")
            if m == g:
                raise ValueError(f"self-membership rejected: {m}")
            if self._principals[g].kind is not PrincipalKind.GROUP:
                raise ValueError(f"membership target {g} is not a group")
            if (m, g) in self._edges:
                continue
            self._edges.add((m, g))
            self._member_groups[m].append(g)
            self._group_members[g].append(m)

        self._closure_cache: dict[str, frozenset[str]] = {}
        if self._has_cycle():
            logger.warning("membership graph contains a cycle; closures remain finite")

    def _has_cycle(self) -> bool:
        WHITE, GREY, BLACK = 0, 1, 2
        color = {t: WHITE for t in self._principals}
        for start in self._principals:
            if color[start] != WHITE:
                continue
            stack = [(start, iter(self._member_groups[start]))]
            color[start] = GREY
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if color[nxt] == GREY:
                        return True
                    if color[nxt] == WHITE:
                        color[nxt] = GREY
                        stack.append((nxt, iter(self._member_groups[nxt])))
                        advanced = True
                        break
                if not advanced:
                    color[node] = BLACK
                    stack.pop()
        return False

    @property
    def principals(self) -> tuple[Principal, ...]:
        return tuple(self._principals.values())

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._edges)

    def principal(self, sid: Sid | str) -> Principal:
        text = sid.text if isinstance(sid, Sid) else sid
        try:
            return self._principals[text]
        except KeyError:
            raise UnknownPrincipal(text) from None

    def _reach(self, start: str, adjacency: dict[str, list[str]]) -> set[str]:
        seen: set[str] = set()
        queue = deque(adjacency[start])
        while queue:
            cur = queue.popleft()
            if cur in seen or cur == start:
                continue
            seen.add(cur)
            queue.extend(adjacency[cur])
        return seen

    def member_of_closure(self, sid: Sid | str) -> set[Sid]:
        """All groups reachable by following member->group edges, the
        starting principal excluded."""
        start = self.principal(sid).sid.text
        return {self._principals[t].sid for t in self._reach(start, self._member_groups)}

    def members_closure(self, sid: Sid | str) -> set[Sid]:
        """All principals contained in a group, transitively."""
        p = self.principal(sid)
        if p.kind is not PrincipalKind.GROUP:
            raise NotAGroup(p.sid.text)
        return {self._principals[t].sid for t in self._reach(p.sid.text, self._group_members)}

    def applicable_sids(self, sid: Sid | str) -> set[Sid]:
        """The principal itself plus every group it transitively belongs
        to; the matching set the accumulation engine scans for."""
        p = self.principal(sid)
        return {p.sid} | self.member_of_closure(sid)

    def applicable_texts(self, sid: Sid | str) -> frozenset[str]:
        """applicable_sids as raw SID strings, memoized for tree walks."""
        start = self.principal(sid).sid.text
        cached = self._closure_cache.get(start)
        if cached is None:
            cached = frozenset({start} | self._reach(start, self._member_groups))
            self._closure_cache[start] = cached
        return cached

    def chain_to(self, start: Sid | str, target: Sid | str) -> tuple[Sid, ...] | None:
        """Shortest membership chain from start up to target, endpoints
        included; None when target is not among start's groups."""
        s = self.principal(start).sid.text
        t = self.principal(target).sid.text
        if s == t:
            return (self._principals[s].sid,)
        prev: dict[str, str] = {}
        queue = deque([s])
        seen = {s}
        while queue:
            cur = queue.popleft()
            for nxt in self._member_groups[cur]:
                if nxt in seen:
                    continue
                prev[nxt] = cur
                if nxt == t:
                    chain = [t]
                    while chain[-1] != s:
                        chain.append(prev[chain[-1]])
                    return tuple(self._principals[x].sid for x in reversed(chain))
                seen.add(nxt)
                queue.append(nxt)
        return None
