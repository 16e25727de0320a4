"""Maximal spanning trees for an ordinal edge relation.

``solve`` produces one maximal tree in polynomial time: topologically
sort the edges, convert positions to strictly decreasing utilities, and
run the greedy tree builder on the resulting order. The oracle side
realizes the full maximal set two independent ways (greedy over every
linear extension, and certification of every enumerated tree) and
insists the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, OracleScaleExceeded, PreconditionError
from .graph import UndirectedGraph, _greedy_tree, enumerate_spanning_trees
from .relation import (
    EdgeRelation,
    FundamentalKind,
    TieBreak,
    greedy_linear_extension,
    is_p_acyclic,
    iter_linear_extensions,
)

__all__ = [
    "Instance",
    "KCertificate",
    "utilities_from_extension",
    "solve",
    "k_certified",
    "k_relation",
    "oracle_maximal_trees",
]

DEFAULT_EXTENSION_CAP = 100_000
DEFAULT_TREE_CAP = 10_000


@dataclass(frozen=True)
class Instance:
    """A graph paired with a preference relation on exactly its edges."""

    graph: UndirectedGraph
    relation: EdgeRelation

    def __post_init__(self) -> None:
        if self.relation.ground != self.graph.edge_ids:
            raise InputError(
                "relation ground set must equal the graph's edge ids",
                code="relation_ground_mismatch",
            )
        if not is_p_acyclic(self.relation):
            raise PreconditionError(
                "strict preference arcs contain a cycle", code="strict_cycle"
            )


def utilities_from_extension(ext: Iterable[str]) -> dict[str, int]:
    """Strictly decreasing integer utilities along an extension.

    The element at position i (0-based) of an n-element extension gets
    utility n - 1 - i, so earlier means strictly better.
    """
    ext = list(ext)
    n = len(ext)
    return {e: n - 1 - i for i, e in enumerate(ext)}


def solve(inst: Instance, tie_break: TieBreak | None = None) -> frozenset[str] | None:
    """One maximal spanning tree, or None when the graph is disconnected."""
    ext = greedy_linear_extension(inst.relation, tie_break)
    utility = utilities_from_extension(ext)
    order = sorted(utility, key=lambda e: -utility[e])
    return _greedy_tree(inst.graph, order)


@dataclass(frozen=True)
class KCertificate:
    """Witness that a subset is greedily constructible.

    The witness extension places every edge outside ``subject`` only
    where it would close a cycle with the subject edges already placed
    (or where those subject edges already contain a cycle themselves).
    """

    subject: frozenset[str]
    witness: tuple[str, ...]

    def verify(self, graph: UndirectedGraph) -> bool:
        """Re-check the certificate condition directly on the graph."""
        parent = {v: v for v in graph.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        prefix_cyclic = False
        for eid in self.witness:
            e = graph.edge(eid)
            ru, rv = find(e.u), find(e.v)
            if eid in self.subject:
                if ru == rv:
                    prefix_cyclic = True
                else:
                    parent[ru] = rv
            elif not prefix_cyclic and ru != rv:
                return False
        return True


class _RollbackDSU:
    """Union-find over vertices with an undo stack (no path compression)."""

    def __init__(self, vertices: Iterable[str]):
        self.parent = {v: v for v in vertices}
        self.size = {v: 1 for v in self.parent}
        self.trail: list[str] = []

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, x: str, y: str) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] > self.size[ry]:
            rx, ry = ry, rx
        self.parent[rx] = ry
        self.size[ry] += self.size[rx]
        self.trail.append(rx)
        return True

    def mark(self) -> int:
        return len(self.trail)

    def rollback(self, mark: int) -> None:
        while len(self.trail) > mark:
            rx = self.trail.pop()
            ry = self.parent[rx]
            self.parent[rx] = rx
            self.size[ry] -= self.size[rx]


def k_certified(
    inst: Instance, subject: Iterable[str], cap: int = DEFAULT_EXTENSION_CAP
) -> KCertificate | None:
    """Search for a certificate extension for ``subject``, or None.

    Backtracks over linear extensions, placing subject edges first at
    every step; a non-subject edge may only be placed once the subject
    edges placed so far already connect its endpoints (or contain a
    cycle). The search is complete: it returns None only when no
    extension satisfies the condition.
    """
    subject = frozenset(subject)
    unknown = subject - inst.graph.edge_ids
    if unknown:
        raise InputError(f"unknown edge id {sorted(unknown)[0]!r}", code="unknown_edge")
    rel = inst.relation
    graph = inst.graph
    ids = sorted(rel.ground)
    n = len(ids)
    indeg = {e: len(rel.predecessors_of(e)) for e in ids}
    dsu = _RollbackDSU(graph.vertices)
    prefix: list[str] = []
    budget = cap

    def candidates(avail: set[str]) -> list[str]:
        inside = sorted(e for e in avail if e in subject)
        outside = sorted(e for e in avail if e not in subject)
        return inside + outside

    def walk(avail: set[str], prefix_cyclic: bool) -> tuple[str, ...] | None:
        nonlocal budget
        if len(prefix) == n:
            return tuple(prefix)
        for e in candidates(avail):
            in_subject = e in subject
            edge = graph.edge(e)
            connected = dsu.find(edge.u) == dsu.find(edge.v)
            if not in_subject and not prefix_cyclic and not connected:
                continue
            budget -= 1
            if budget < 0:
                raise OracleScaleExceeded(
                    f"certificate search exceeded cap {cap}"
                )
            mark = dsu.mark()
            now_cyclic = prefix_cyclic
            if in_subject:
                if connected:
                    now_cyclic = True
                else:
                    dsu.union(edge.u, edge.v)
            prefix.append(e)
            opened = set()
            for s in rel.successors_of(e):
                indeg[s] -= 1
                if indeg[s] == 0:
                    opened.add(s)
            avail.remove(e)
            found = walk(avail | opened, now_cyclic)
            avail.add(e)
            for s in rel.successors_of(e):
                indeg[s] += 1
            prefix.pop()
            dsu.rollback(mark)
            if found is not None:
                return found
        return None

    witness = walk({e for e in ids if indeg[e] == 0}, False)
    if witness is None:
        return None
    return KCertificate(subject=subject, witness=witness)


def k_relation(
    inst: Instance,
    x: Iterable[str],
    y: Iterable[str],
    cap: int = DEFAULT_EXTENSION_CAP,
) -> FundamentalKind:
    """Fundamental kind of the derived subset relation between x and y.

    Certification is one-sided, so the kind follows from which of the two
    subsets is certified: both means indifference, only x means strict
    preference, only y strict aversion, neither incomparability.
    """
    x = frozenset(x)
    y = frozenset(y)
    if x == y:
        raise InputError("k_relation requires two distinct subsets", code="reflexive_pair")
    cx = k_certified(inst, x, cap) is not None
    cy = k_certified(inst, y, cap) is not None
    if cx and cy:
        return FundamentalKind.INDIFFERENCE
    if cx:
        return FundamentalKind.STRICT_PREFERENCE
    if cy:
        return FundamentalKind.STRICT_AVERSION
    return FundamentalKind.INCOMPARABILITY


def oracle_maximal_trees(
    inst: Instance,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
    tree_cap: int = DEFAULT_TREE_CAP,
) -> tuple[frozenset[str], ...]:
    """All maximal spanning trees, computed two independent ways.

    Route one runs the greedy builder over every linear extension; route
    two filters the full spanning-tree enumeration through certification.
    The two results must coincide; a mismatch raises, since it would mean
    an implementation bug rather than a property of the instance.
    """
    greedy_trees: set[frozenset[str]] = set()
    count = 0
    for ext in iter_linear_extensions(inst.relation):
        count += 1
        if count > extension_cap:
            raise OracleScaleExceeded(
                f"linear extension count exceeds cap {extension_cap}"
            )
        tree = _greedy_tree(inst.graph, ext)
        if tree is not None:
            greedy_trees.add(tree)
    certified: set[frozenset[str]] = set()
    for tree in enumerate_spanning_trees(inst.graph, cap=tree_cap):
        if k_certified(inst, tree, cap=extension_cap) is not None:
            certified.add(tree)
    if greedy_trees != certified:
        raise RuntimeError(
            "maximal-tree oracle routes disagree: "
            f"{sorted(map(sorted, greedy_trees))} vs {sorted(map(sorted, certified))}"
        )
    return tuple(sorted(greedy_trees, key=sorted))
