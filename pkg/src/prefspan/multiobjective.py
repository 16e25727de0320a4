"""Multi-attribute edge utilities and the two aggregation routes.

Edge-level aggregation turns a criteria matrix into an edge relation by
Pareto dominance, after which the ordinal machinery applies. The
classical route instead sums each criterion over a tree and compares the
score vectors by Pareto dominance; ``inclusion_check`` verifies that the
classical maximal trees form a subset of the ordinal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InputError
from .graph import UndirectedGraph, enumerate_spanning_trees
from .relation import EdgeRelation, is_p_acyclic
from .solver import (
    DEFAULT_EXTENSION_CAP,
    DEFAULT_TREE_CAP,
    Instance,
    oracle_maximal_trees,
)

__all__ = [
    "CriteriaMatrix",
    "InclusionReport",
    "pareto_edge_relation",
    "utility_edge_relation",
    "score_vector",
    "pareto_dominates",
    "sigma_pareto_maximal_trees",
    "theorem2_check",
]


@dataclass(frozen=True, eq=False)
class CriteriaMatrix:
    """Integer utility vectors per edge, one component per criterion."""

    names: tuple[str, ...]
    values: Mapping[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        if not self.names:
            raise InputError("criteria need at least one name", code="criteria_mismatch")
        p = len(self.names)
        for e, vec in self.values.items():
            if len(vec) != p:
                raise InputError(
                    f"edge {e!r} has {len(vec)} values for {p} criteria",
                    code="criteria_mismatch",
                )
            for x in vec:
                if isinstance(x, bool) or not isinstance(x, int):
                    raise InputError(
                        f"criteria values must be integers, got {x!r} for edge {e!r}",
                        code="criteria_mismatch",
                    )

    @property
    def p(self) -> int:
        return len(self.names)

    @property
    def edge_ids(self) -> frozenset[str]:
        return frozenset(self.values)

    def vector(self, e: str) -> tuple[int, ...]:
        try:
            return self.values[e]
        except KeyError:
            raise InputError(f"no criteria values for edge {e!r}", code="unknown_edge") from None


def pareto_edge_relation(criteria: CriteriaMatrix) -> EdgeRelation:
    """Edge relation from componentwise dominance of the utility vectors.

    Equal vectors are indifferent; all-at-least with one strictly better
    gives a strict pair; anything else stays incomparable. The result is
    a partial preorder, hence always acyclic in its strict part.
    """
    ids = sorted(criteria.values)
    strict: list[tuple[str, str]] = []
    indiff: list[tuple[str, str]] = []
    for x, y in combinations(ids, 2):
        vx, vy = criteria.vector(x), criteria.vector(y)
        x_ge = all(a >= b for a, b in zip(vx, vy))
        y_ge = all(b >= a for a, b in zip(vx, vy))
        if x_ge and y_ge:
            indiff.append((x, y))
        elif x_ge:
            strict.append((x, y))
        elif y_ge:
            strict.append((y, x))
    rel = EdgeRelation(ids, strict, indiff)
    assert is_p_acyclic(rel)
    return rel


def utility_edge_relation(utility: Mapping[str, int]) -> EdgeRelation:
    """Total preorder on edges induced by a single integer utility."""
    ids = sorted(utility)
    strict: list[tuple[str, str]] = []
    indiff: list[tuple[str, str]] = []
    for x, y in combinations(ids, 2):
        if utility[x] > utility[y]:
            strict.append((x, y))
        elif utility[y] > utility[x]:
            strict.append((y, x))
        else:
            indiff.append((x, y))
    return EdgeRelation(ids, strict, indiff)


def score_vector(criteria: CriteriaMatrix, subset: Iterable[str]) -> tuple[int, ...]:
    """Componentwise sum of the criteria vectors over an edge subset."""
    totals = [0] * criteria.p
    for e in subset:
        vec = criteria.vector(e)
        for k, x in enumerate(vec):
            totals[k] += x
    return tuple(totals)


def pareto_dominates(v: Sequence[int], w: Sequence[int]) -> bool:
    """True iff v is at least w everywhere and strictly better somewhere."""
    if len(v) != len(w):
        raise InputError("score vectors differ in length", code="criteria_mismatch")
    return all(a >= b for a, b in zip(v, w)) and tuple(v) != tuple(w)


def _require_cover(graph: UndirectedGraph, criteria: CriteriaMatrix) -> None:
    if criteria.edge_ids != graph.edge_ids:
        raise InputError(
            "criteria must cover exactly the graph's edges", code="criteria_mismatch"
        )


def sigma_pareto_maximal_trees(
    graph: UndirectedGraph,
    criteria: CriteriaMatrix,
    tree_cap: int = DEFAULT_TREE_CAP,
) -> tuple[frozenset[str], ...]:
    """Spanning trees whose summed score vector no other tree dominates."""
    _require_cover(graph, criteria)
    trees = enumerate_spanning_trees(graph, cap=tree_cap)
    scores = [score_vector(criteria, t) for t in trees]
    keep = [
        t
        for t, s in zip(trees, scores)
        if not any(pareto_dominates(s2, s) for s2 in scores)
    ]
    return tuple(sorted(keep, key=sorted))


@dataclass(frozen=True)
class InclusionReport:
    """Outcome of comparing the two aggregation routes on one input.

    ``holds`` states that every sum-then-Pareto maximal tree is also
    maximal for the edgewise route; ``strict_witnesses`` lists the trees
    maximal for the edgewise route only.
    """

    holds: bool
    strict_witnesses: tuple[frozenset[str], ...]
    sum_pareto: tuple[frozenset[str], ...]
    edge_pareto: tuple[frozenset[str], ...]


def theorem2_check(
    graph: UndirectedGraph,
    criteria: CriteriaMatrix,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
    tree_cap: int = DEFAULT_TREE_CAP,
) -> InclusionReport:
    """Compare the two aggregation routes on one graph and criteria matrix."""
    _require_cover(graph, criteria)
    sum_route = sigma_pareto_maximal_trees(graph, criteria, tree_cap=tree_cap)
    inst = Instance(graph, pareto_edge_relation(criteria))
    edge_route = oracle_maximal_trees(
        inst, extension_cap=extension_cap, tree_cap=tree_cap
    )
    holds = set(sum_route) <= set(edge_route)
    witnesses = tuple(sorted(set(edge_route) - set(sum_route), key=sorted))
    return InclusionReport(
        holds=holds,
        strict_witnesses=witnesses,
        sum_pareto=sum_route,
        edge_pareto=edge_route,
    )
