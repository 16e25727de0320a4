"""Ordinal preference relations over edge identifiers.

A relation is stored in decomposed form: ``strict`` holds ordered pairs
(left strictly preferred to right) and ``indiff`` holds unordered
indifference pairs. A pair of ids appearing in neither is incomparable.
Reflexive pairs are implicit and never stored. Only the strict part
constrains maximal sets and linear extensions; indifference is kept for
reporting and decomposition queries.
"""

from __future__ import annotations

import heapq
from enum import Enum
from typing import Callable, Iterable, Iterator

from .errors import InputError, OracleScaleExceeded, PreconditionError

__all__ = [
    "FundamentalKind",
    "EdgeRelation",
    "TieBreak",
    "decompose",
    "is_p_acyclic",
    "maximal_set",
    "optimal_set",
    "greedy_linear_extension",
    "iter_linear_extensions",
    "enumerate_linear_extensions",
]

# Sort key over edge ids; smaller key means picked earlier.
TieBreak = Callable[[str], object]


class FundamentalKind(Enum):
    """The four mutually exclusive ways an ordered pair of ids can relate."""

    INDIFFERENCE = "indifference"
    STRICT_PREFERENCE = "strict-preference"
    STRICT_AVERSION = "strict-aversion"
    INCOMPARABILITY = "incomparability"


def _norm(x: str, y: str) -> tuple[str, str]:
    return (x, y) if x <= y else (y, x)


class EdgeRelation:
    """Immutable preference relation on a ground set of edge ids."""

    __slots__ = ("ground", "strict", "indiff", "_preds", "_succs")

    def __init__(
        self,
        ground: Iterable[str],
        strict: Iterable[tuple[str, str]] = (),
        indiff: Iterable[tuple[str, str]] = (),
    ):
        self.ground: frozenset[str] = frozenset(ground)
        strict_pairs: set[tuple[str, str]] = set()
        for left, right in strict:
            self._check_member(left)
            self._check_member(right)
            if left == right:
                raise InputError(
                    f"reflexive pair on {left!r} may not be declared",
                    code="reflexive_pair",
                )
            strict_pairs.add((left, right))
        indiff_pairs: set[tuple[str, str]] = set()
        for x, y in indiff:
            self._check_member(x)
            self._check_member(y)
            if x == y:
                raise InputError(
                    f"reflexive pair on {x!r} may not be declared", code="reflexive_pair"
                )
            indiff_pairs.add(_norm(x, y))
        for left, right in strict_pairs:
            if (right, left) in strict_pairs:
                raise InputError(
                    f"{left!r} and {right!r} are declared strict in both directions; "
                    "declare them indifferent instead",
                    code="contradictory_pair",
                )
            if _norm(left, right) in indiff_pairs:
                raise InputError(
                    f"{left!r} and {right!r} are declared both strict and indifferent",
                    code="contradictory_pair",
                )
        self.strict: frozenset[tuple[str, str]] = frozenset(strict_pairs)
        self.indiff: frozenset[tuple[str, str]] = frozenset(indiff_pairs)
        preds: dict[str, set[str]] = {e: set() for e in self.ground}
        succs: dict[str, set[str]] = {e: set() for e in self.ground}
        for left, right in self.strict:
            preds[right].add(left)
            succs[left].add(right)
        self._preds = {e: frozenset(s) for e, s in preds.items()}
        self._succs = {e: frozenset(s) for e, s in succs.items()}

    def _check_member(self, e: str) -> None:
        if e not in self.ground:
            raise InputError(f"unknown edge id {e!r} in relation", code="unknown_edge")

    def predecessors_of(self, e: str) -> frozenset[str]:
        """Ids strictly preferred to ``e`` by a stored pair."""
        self._check_member(e)
        return self._preds[e]

    def successors_of(self, e: str) -> frozenset[str]:
        self._check_member(e)
        return self._succs[e]

    def weakly_prefers(self, x: str, y: str) -> bool:
        """Whether x is at least as good as y (reflexivity granted)."""
        self._check_member(x)
        self._check_member(y)
        return x == y or (x, y) in self.strict or _norm(x, y) in self.indiff

    def restrict(self, keep: Iterable[str]) -> "EdgeRelation":
        """The relation induced on a subset of the ground set."""
        kept = frozenset(keep)
        unknown = kept - self.ground
        if unknown:
            raise InputError(
                f"unknown edge id {sorted(unknown)[0]!r}", code="unknown_edge"
            )
        return EdgeRelation(
            kept,
            (p for p in self.strict if p[0] in kept and p[1] in kept),
            (p for p in self.indiff if p[0] in kept and p[1] in kept),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeRelation):
            return NotImplemented
        return (
            self.ground == other.ground
            and self.strict == other.strict
            and self.indiff == other.indiff
        )

    def __hash__(self) -> int:
        return hash((self.ground, self.strict, self.indiff))

    def __repr__(self) -> str:
        return (
            f"EdgeRelation({len(self.ground)} ids, {len(self.strict)} strict, "
            f"{len(self.indiff)} indifferent)"
        )


def decompose(rel: EdgeRelation, x: str, y: str) -> FundamentalKind:
    """Classify the ordered pair (x, y) into its fundamental kind."""
    rel._check_member(x)
    rel._check_member(y)
    if x == y:
        raise InputError("decompose requires two distinct ids", code="reflexive_pair")
    if _norm(x, y) in rel.indiff:
        return FundamentalKind.INDIFFERENCE
    if (x, y) in rel.strict:
        return FundamentalKind.STRICT_PREFERENCE
    if (y, x) in rel.strict:
        return FundamentalKind.STRICT_AVERSION
    return FundamentalKind.INCOMPARABILITY


def is_p_acyclic(rel: EdgeRelation) -> bool:
    """True iff the strict-preference arcs contain no directed cycle."""
    indeg = {e: len(rel.predecessors_of(e)) for e in rel.ground}
    stack = [e for e, d in indeg.items() if d == 0]
    seen = 0
    while stack:
        e = stack.pop()
        seen += 1
        for s in rel.successors_of(e):
            indeg[s] -= 1
            if indeg[s] == 0:
                stack.append(s)
    return seen == len(rel.ground)


def _subset_of_ground(rel: EdgeRelation, elements: Iterable[str]) -> frozenset[str]:
    elems = frozenset(elements)
    unknown = elems - rel.ground
    if unknown:
        raise InputError(f"unknown edge id {sorted(unknown)[0]!r}", code="unknown_edge")
    return elems


def maximal_set(elements: Iterable[str], rel: EdgeRelation) -> frozenset[str]:
    """Members that no other member strictly beats."""
    elems = _subset_of_ground(rel, elements)
    return frozenset(x for x in elems if not (rel.predecessors_of(x) & elems))


def optimal_set(elements: Iterable[str], rel: EdgeRelation) -> frozenset[str]:
    """Members weakly preferred to every member."""
    elems = _subset_of_ground(rel, elements)
    return frozenset(
        x for x in elems if all(rel.weakly_prefers(x, y) for y in elems)
    )


def greedy_linear_extension(
    rel: EdgeRelation, tie_break: TieBreak | None = None
) -> tuple[str, ...]:
    """Total order refining the strict part, built greedily.

    Repeatedly removes the tie-break-least element among those with no
    remaining strict predecessor. ``tie_break`` is a sort key over edge
    ids and defaults to the id itself.
    """
    key = tie_break if tie_break is not None else (lambda e: e)
    indeg = {e: len(rel.predecessors_of(e)) for e in rel.ground}
    heap = [(key(e), e) for e, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    out: list[str] = []
    while heap:
        _, e = heapq.heappop(heap)
        out.append(e)
        for s in rel.successors_of(e):
            indeg[s] -= 1
            if indeg[s] == 0:
                heapq.heappush(heap, (key(s), s))
    if len(out) != len(rel.ground):
        raise PreconditionError(
            "strict preference arcs contain a cycle", code="strict_cycle"
        )
    return tuple(out)


def iter_linear_extensions(rel: EdgeRelation) -> Iterator[tuple[str, ...]]:
    """Yield every linear extension in lexicographic order, no duplicates.

    Yields nothing when the strict part is cyclic; callers wanting a hard
    error should check ``is_p_acyclic`` first.
    """
    ids = sorted(rel.ground)
    n = len(ids)
    indeg = {e: len(rel.predecessors_of(e)) for e in ids}
    prefix: list[str] = []

    def walk(avail: list[str]) -> Iterator[tuple[str, ...]]:
        if not avail:
            if len(prefix) == n:
                yield tuple(prefix)
            return
        for e in avail:
            prefix.append(e)
            opened = []
            for s in rel.successors_of(e):
                indeg[s] -= 1
                if indeg[s] == 0:
                    opened.append(s)
            nxt = sorted([x for x in avail if x != e] + opened)
            yield from walk(nxt)
            for s in rel.successors_of(e):
                indeg[s] += 1
            prefix.pop()

    yield from walk(sorted(e for e in ids if indeg[e] == 0))


def enumerate_linear_extensions(
    rel: EdgeRelation, cap: int = 100_000
) -> list[tuple[str, ...]]:
    """All linear extensions; raises OracleScaleExceeded past ``cap``."""
    if not is_p_acyclic(rel):
        raise PreconditionError(
            "strict preference arcs contain a cycle", code="strict_cycle"
        )
    out: list[tuple[str, ...]] = []
    for ext in iter_linear_extensions(rel):
        if len(out) >= cap:
            raise OracleScaleExceeded(f"linear extension count exceeds cap {cap}")
        out.append(ext)
    return out
