"""Undirected multigraph primitives.

Vertices and edges carry opaque string identifiers. Parallel edges (same
endpoint pair, distinct ids) are allowed; self-loops are rejected at
construction because no spanning tree can use one and they would only
complicate contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import InputError, OracleScaleExceeded

__all__ = [
    "Edge",
    "UndirectedGraph",
    "ComponentStructure",
    "connected_components",
    "enumerate_spanning_trees",
    "kruskal_by_order",
    "reduce_graph",
]


@dataclass(frozen=True, order=True)
class Edge:
    """An identified edge between two distinct vertices."""

    id: str
    u: str
    v: str

    def __post_init__(self) -> None:
        if self.u == self.v:
            raise InputError(
                f"edge {self.id!r} is a self-loop on {self.u!r}", code="self_loop"
            )

    @property
    def endpoints(self) -> frozenset[str]:
        return frozenset((self.u, self.v))


class UndirectedGraph:
    """Immutable undirected multigraph with identified edges."""

    __slots__ = ("vertices", "edges", "edge_ids", "_by_id")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge] = ()):
        self.vertices: frozenset[str] = frozenset(vertices)
        by_id: dict[str, Edge] = {}
        for e in sorted(edges):
            if e.id in by_id:
                raise InputError(f"duplicate edge id {e.id!r}", code="duplicate_edge_id")
            if e.u not in self.vertices or e.v not in self.vertices:
                raise InputError(
                    f"edge {e.id!r} touches a vertex outside the vertex set",
                    code="unknown_vertex",
                )
            by_id[e.id] = e
        self.edges: tuple[Edge, ...] = tuple(by_id.values())
        self.edge_ids: frozenset[str] = frozenset(by_id)
        self._by_id = by_id

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._by_id[edge_id]
        except KeyError:
            raise InputError(f"unknown edge id {edge_id!r}", code="unknown_edge") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"UndirectedGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class ComponentStructure:
    """Component count plus a vertex -> component-index labeling."""

    count: int
    labels: Mapping[str, int]


def _edge_subset(graph: UndirectedGraph, subset: Iterable[str]) -> frozenset[str]:
    ids = frozenset(subset)
    unknown = ids - graph.edge_ids
    if unknown:
        raise InputError(
            f"unknown edge id {sorted(unknown)[0]!r} in subset", code="unknown_edge"
        )
    return ids


def connected_components(
    graph: UndirectedGraph, subset: Iterable[str]
) -> ComponentStructure:
    """Count and label the components of the partial graph (V, subset).

    Linear in the number of vertices plus subset edges. Components are
    numbered in order of their least vertex id, so the labeling is
    deterministic.
    """
    ids = _edge_subset(graph, subset)
    adjacency: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for eid in ids:
        e = graph.edge(eid)
        adjacency[e.u].append(e.v)
        adjacency[e.v].append(e.u)
    labels: dict[str, int] = {}
    count = 0
    for root in sorted(graph.vertices):
        if root in labels:
            continue
        labels[root] = count
        stack = [root]
        while stack:
            x = stack.pop()
            for y in adjacency[x]:
                if y not in labels:
                    labels[y] = count
                    stack.append(y)
        count += 1
    return ComponentStructure(count=count, labels=labels)


def kruskal_by_order(
    graph: UndirectedGraph, order: Iterable[str]
) -> frozenset[str] | None:
    """Greedy spanning tree under a total edge order.

    Scans edges in the given order, keeping each edge whose endpoints lie
    in different components of the kept set. Returns the kept set once it
    spans, or None when the graph is disconnected.
    """
    order = list(order)
    if sorted(order) != sorted(graph.edge_ids):
        raise InputError(
            "order must be a permutation of the graph's edge ids", code="bad_order"
        )
    return _greedy_tree(graph, order)


def _greedy_tree(graph: UndirectedGraph, order: Iterable[str]) -> frozenset[str] | None:
    parent = {v: v for v in graph.vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    remaining = len(graph.vertices)
    if remaining == 0:
        return None
    kept: list[str] = []
    for eid in order:
        e = graph.edge(eid)
        ru, rv = find(e.u), find(e.v)
        if ru != rv:
            parent[ru] = rv
            kept.append(eid)
            remaining -= 1
            if remaining == 1:
                break
    if remaining != 1:
        return None
    return frozenset(kept)


def enumerate_spanning_trees(
    graph: UndirectedGraph, cap: int = 10_000
) -> list[frozenset[str]]:
    """All spanning trees, as a canonically sorted list of edge-id sets.

    Backtracks over the id-sorted edge list, including or excluding each
    edge, pruning branches that close a cycle or can no longer connect the
    graph. Raises OracleScaleExceeded when more than ``cap`` trees exist.
    """
    nv = len(graph.vertices)
    if nv == 0:
        return []
    if nv == 1:
        return [frozenset()]
    edges = graph.edges
    ne = len(edges)
    out: list[frozenset[str]] = []

    def find(parent: dict[str, str], x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def can_still_connect(parent: dict[str, str], i: int, comps: int) -> bool:
        probe = dict(parent)
        for e in edges[i:]:
            ru, rv = find(probe, e.u), find(probe, e.v)
            if ru != rv:
                probe[ru] = rv
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    def walk(i: int, parent: dict[str, str], chosen: list[str], comps: int) -> None:
        if comps == 1:
            if len(out) >= cap:
                raise OracleScaleExceeded(f"spanning tree count exceeds cap {cap}")
            out.append(frozenset(chosen))
            return
        if i == ne or ne - i < comps - 1:
            return
        if not can_still_connect(parent, i, comps):
            return
        e = edges[i]
        ru, rv = find(parent, e.u), find(parent, e.v)
        if ru != rv:
            child = dict(parent)
            child[ru] = rv
            chosen.append(e.id)
            walk(i + 1, child, chosen, comps - 1)
            chosen.pop()
        walk(i + 1, parent, chosen, comps)

    walk(0, {v: v for v in graph.vertices}, [], nv)
    return sorted(out, key=sorted)


def reduce_graph(
    graph: UndirectedGraph,
    contract: Iterable[str] = (),
    delete: Iterable[str] = (),
) -> UndirectedGraph:
    """Contract one edge set and delete another.

    Each contracted edge merges its endpoints; the merged vertex takes the
    least vertex id among its members. Edges that become self-loops are
    dropped; surviving edges keep their ids. The contract set must be a
    forest, else no tree could ever extend it.
    """
    contract = _edge_subset(graph, contract)
    delete = _edge_subset(graph, delete)
    if contract & delete:
        raise InputError(
            "contract and delete sets overlap", code="conflicting_subsets"
        )
    parent = {v: v for v in graph.vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in sorted(contract):
        e = graph.edge(eid)
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            raise InputError(
                f"contract set closes a cycle at edge {eid!r}", code="cyclic_contract"
            )
        parent[ru] = rv
    representative: dict[str, str] = {}
    for v in sorted(graph.vertices):
        representative.setdefault(find(v), v)
    vmap = {v: representative[find(v)] for v in graph.vertices}
    dropped = contract | delete
    new_edges = []
    for e in graph.edges:
        if e.id in dropped:
            continue
        nu, nv_ = vmap[e.u], vmap[e.v]
        if nu == nv_:
            continue
        new_edges.append(Edge(e.id, nu, nv_))
    return UndirectedGraph(set(vmap.values()), new_edges)
