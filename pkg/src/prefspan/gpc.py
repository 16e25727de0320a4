"""Global preferential consistency: the max-consistent edge set.

An edge is max-consistent when at least one maximal spanning tree uses
it. The filter sweeps edges from most to least preferred; for each edge
it accumulates the set of edges reachable backwards through strict
preference arcs, and keeps the edge exactly when those better edges
leave its endpoints in different components. The result is independent
of which maximal edge gets picked first at every step.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _sparse_cc

from .choices import Choose
from .errors import InputError
from .graph import connected_components
from .relation import EdgeRelation
from .solver import Instance

__all__ = ["StrictClosure", "strict_closure", "gpc"]

# Past this many closure members a sparse solver beats a dict union-find.
_SPARSE_THRESHOLD = 96


@dataclass(frozen=True)
class StrictClosure:
    """All edges from which a path of strict preferences reaches ``edge``."""

    edge: str
    ancestors: frozenset[str]


def strict_closure(rel: EdgeRelation, edge: str) -> StrictClosure:
    rel._check_member(edge)
    seen: set[str] = set()
    stack = [edge]
    while stack:
        x = stack.pop()
        for p in rel.predecessors_of(x):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return StrictClosure(edge=edge, ancestors=frozenset(seen))


def gpc(
    inst: Instance, choose: Choose | None = None, selfcheck: bool = False
) -> frozenset[str] | None:
    """Exact max-consistent edge set, or None when the graph is disconnected.

    ``choose`` picks among the currently maximal unprocessed edges; the
    default takes the least id. Any strategy yields the same result.
    ``selfcheck`` turns on per-iteration assertions (closure equality,
    the component-count formulation of the keep test, loop invariants)
    and is meant for small instances under test.
    """
    graph, rel = inst.graph, inst.relation
    if connected_components(graph, graph.edge_ids).count > 1:
        return None

    ids = sorted(graph.edge_ids)
    n = len(ids)
    pos = {e: i for i, e in enumerate(ids)}
    verts = sorted(graph.vertices)
    vpos = {v: i for i, v in enumerate(verts)}
    nv = len(verts)
    eu = [vpos[graph.edge(e).u] for e in ids]
    ev = [vpos[graph.edge(e).v] for e in ids]
    preds = [[pos[p] for p in rel.predecessors_of(e)] for e in ids]
    succs = [[pos[s] for s in rel.successors_of(e)] for e in ids]
    indeg = [len(p) for p in preds]

    use_numpy = n > 256
    if use_numpy:
        eu_arr = np.asarray(eu, dtype=np.int32)
        ev_arr = np.asarray(ev, dtype=np.int32)
        nbytes = (n + 7) // 8

    def divided_small(i: int, mask: int) -> bool:
        parent: dict[int, int] = {}

        def find(a: int) -> int:
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        m = mask
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            ra, rb = find(eu[j]), find(ev[j])
            if ra != rb:
                parent[ra] = rb
        return find(eu[i]) != find(ev[i])

    def divided_sparse(i: int, mask: int) -> bool:
        raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        members = np.nonzero(np.unpackbits(raw, bitorder="little")[:n])[0]
        if members.size <= _SPARSE_THRESHOLD:
            return divided_small(i, mask)
        g = coo_matrix(
            (
                np.ones(members.size, dtype=np.int8),
                (eu_arr[members], ev_arr[members]),
            ),
            shape=(nv, nv),
        )
        _, labels = _sparse_cc(g, directed=False)
        return bool(labels[eu[i]] != labels[ev[i]])

    divided = divided_sparse if use_numpy else divided_small

    closures: list[int] = [0] * n
    done = [False] * n
    kept: list[str] = []

    if choose is None:
        heap = [i for i in range(n) if indeg[i] == 0]
        heapq.heapify(heap)

        def pop() -> int:
            return heapq.heappop(heap)

        def push(i: int) -> None:
            heapq.heappush(heap, i)

        def pending() -> bool:
            return bool(heap)

    else:
        avail: set[int] = {i for i in range(n) if indeg[i] == 0}

        def pop() -> int:
            cands = sorted(avail)
            picked = choose([ids[i] for i in cands])
            i = pos.get(picked, -1)
            if i not in avail:
                raise InputError(
                    f"choose strategy returned {picked!r}, not a candidate",
                    code="bad_choice",
                )
            avail.remove(i)
            return i

        def push(i: int) -> None:
            avail.add(i)

        def pending() -> bool:
            return bool(avail)

    processed = 0
    while pending():
        i = pop()
        mask = 0
        for p in preds[i]:
            mask |= closures[p] | (1 << p)
        closures[i] = mask
        if selfcheck:
            _assert_iteration(inst, ids, i, mask, done, kept, divided(i, mask))
        if divided(i, mask):
            kept.append(ids[i])
        done[i] = True
        processed += 1
        for s in succs[i]:
            indeg[s] -= 1
            if indeg[s] == 0:
                push(s)
    if processed != n:  # unreachable: Instance guarantees acyclicity
        raise AssertionError("sweep did not consume every edge")
    return frozenset(kept)


def _assert_iteration(
    inst: Instance,
    ids: list[str],
    i: int,
    mask: int,
    done: list[bool],
    kept: list[str],
    divided: bool,
) -> None:
    """Cross-checks for small instances: closures, keep test, invariants."""
    e = ids[i]
    members = {ids[j] for j in range(len(ids)) if mask >> j & 1}
    assert members == strict_closure(inst.relation, e).ancestors
    assert all(done[ids.index(f)] for f in members)  # better edges processed first
    remaining = {ids[j] for j in range(len(ids)) if not done[j]}
    assert not (set(kept) & remaining)
    assert not (members & remaining)
    without = connected_components(inst.graph, members).count
    with_e = connected_components(inst.graph, members | {e}).count
    assert (with_e < without) == divided
