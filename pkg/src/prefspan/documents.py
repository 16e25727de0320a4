"""Instance document parsing and serialization.

One JSON document format serves the CLI, the fixtures, and the HTTP
service::

    {
      "vertices": ["1", "2"],
      "edges": [{"id": "a", "u": "1", "v": "2"}],
      "preferences": [{"left": "a", "right": "b", "kind": "strict"}],
      "criteria": {"names": ["cost"], "values": {"a": [3]}},   # optional
      "name": "display name"                                   # optional
    }

``kind`` is "strict" (left strictly preferred to right) or
"indifferent". Serialization is canonical: sorted vertices, edges sorted
by id with sorted endpoints, strict pairs before indifferent ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import InputError
from .graph import Edge, UndirectedGraph
from .multiobjective import CriteriaMatrix
from .relation import EdgeRelation
from .solver import Instance

__all__ = ["ParsedDocument", "parse_document", "to_document"]


@dataclass(frozen=True)
class ParsedDocument:
    graph: UndirectedGraph
    relation: EdgeRelation
    criteria: CriteriaMatrix | None
    name: str | None

    def instance(self) -> Instance:
        """Build the solver instance; raises when the strict part is cyclic."""
        return Instance(self.graph, self.relation)


def _fail(message: str, code: str) -> None:
    raise InputError(message, code=code)


def _require(cond: bool, message: str, code: str = "bad_document") -> None:
    if not cond:
        _fail(message, code)


def _str_list(obj: Any, where: str) -> list[str]:
    _require(isinstance(obj, list), f"{where} must be a list")
    for i, x in enumerate(obj):
        _require(isinstance(x, str) and x != "", f"{where}[{i}] must be a non-empty string")
    return obj


def parse_document(obj: Any) -> ParsedDocument:
    """Validate a document object and build the domain values."""
    _require(isinstance(obj, dict), "document must be a JSON object")
    allowed = {"vertices", "edges", "preferences", "criteria", "name"}
    extra = set(obj) - allowed
    _require(not extra, f"unknown document key {sorted(extra)[0]!r}")
    _require("vertices" in obj, "document is missing 'vertices'")
    _require("edges" in obj, "document is missing 'edges'")
    _require("preferences" in obj, "document is missing 'preferences'")

    vertices = _str_list(obj["vertices"], "vertices")
    _require(len(vertices) > 0, "vertices must not be empty")
    if len(set(vertices)) != len(vertices):
        dup = sorted(v for v in vertices if vertices.count(v) > 1)[0]
        _fail(f"duplicate vertex id {dup!r}", "duplicate_vertex_id")

    _require(isinstance(obj["edges"], list), "edges must be a list")
    edges: list[Edge] = []
    seen_ids: set[str] = set()
    for i, item in enumerate(obj["edges"]):
        where = f"edges[{i}]"
        _require(isinstance(item, dict), f"{where} must be an object")
        _require(set(item) == {"id", "u", "v"}, f"{where} must have exactly id, u, v")
        for key in ("id", "u", "v"):
            _require(
                isinstance(item[key], str) and item[key] != "",
                f"{where}.{key} must be a non-empty string",
            )
        if item["id"] in seen_ids:
            _fail(f"duplicate edge id {item['id']!r} at {where}", "duplicate_edge_id")
        seen_ids.add(item["id"])
        if item["u"] not in set(vertices) or item["v"] not in set(vertices):
            _fail(f"{where} references an unknown vertex", "unknown_vertex")
        edges.append(Edge(item["id"], item["u"], item["v"]))
    graph = UndirectedGraph(vertices, edges)

    _require(isinstance(obj["preferences"], list), "preferences must be a list")
    strict: list[tuple[str, str]] = []
    indiff: list[tuple[str, str]] = []
    for i, item in enumerate(obj["preferences"]):
        where = f"preferences[{i}]"
        _require(isinstance(item, dict), f"{where} must be an object")
        _require(
            set(item) == {"left", "right", "kind"},
            f"{where} must have exactly left, right, kind",
        )
        left, right, kind = item["left"], item["right"], item["kind"]
        for key, val in (("left", left), ("right", right)):
            _require(
                isinstance(val, str) and val != "",
                f"{where}.{key} must be a non-empty string",
            )
        for val in (left, right):
            if val not in graph.edge_ids:
                _fail(f"{where} references unknown edge {val!r}", "unknown_edge")
        if kind == "strict":
            strict.append((left, right))
        elif kind == "indifferent":
            indiff.append((left, right))
        else:
            _fail(f"{where}.kind must be 'strict' or 'indifferent'", "bad_kind")
    relation = EdgeRelation(graph.edge_ids, strict, indiff)

    criteria = None
    if "criteria" in obj:
        block = obj["criteria"]
        _require(isinstance(block, dict), "criteria must be an object")
        _require(
            set(block) == {"names", "values"}, "criteria must have exactly names, values"
        )
        names = _str_list(block["names"], "criteria.names")
        _require(len(names) > 0, "criteria.names must not be empty", "criteria_mismatch")
        _require(isinstance(block["values"], dict), "criteria.values must be an object")
        values: dict[str, tuple[int, ...]] = {}
        for e, vec in block["values"].items():
            if e not in graph.edge_ids:
                _fail(f"criteria.values references unknown edge {e!r}", "unknown_edge")
            _require(isinstance(vec, list), f"criteria.values[{e!r}] must be a list")
            for x in vec:
                _require(
                    isinstance(x, int) and not isinstance(x, bool),
                    f"criteria.values[{e!r}] must hold integers",
                    "criteria_mismatch",
                )
            values[e] = tuple(vec)
        missing = graph.edge_ids - set(values)
        if missing:
            _fail(
                f"criteria.values is missing edge {sorted(missing)[0]!r}",
                "criteria_mismatch",
            )
        criteria = CriteriaMatrix(tuple(names), values)

    name = None
    if "name" in obj:
        _require(isinstance(obj["name"], str), "name must be a string")
        name = obj["name"]

    return ParsedDocument(graph=graph, relation=relation, criteria=criteria, name=name)


def to_document(
    graph: UndirectedGraph,
    relation: EdgeRelation,
    criteria: CriteriaMatrix | None = None,
    name: str | None = None,
) -> dict[str, Any]:
    """Canonical document for the given domain values."""
    doc: dict[str, Any] = {
        "vertices": sorted(graph.vertices),
        "edges": [
            {"id": e.id, "u": min(e.u, e.v), "v": max(e.u, e.v)} for e in graph.edges
        ],
        "preferences": (
            [
                {"left": left, "right": right, "kind": "strict"}
                for left, right in sorted(relation.strict)
            ]
            + [
                {"left": x, "right": y, "kind": "indifferent"}
                for x, y in sorted(relation.indiff)
            ]
        ),
    }
    if criteria is not None:
        doc["criteria"] = {
            "names": list(criteria.names),
            "values": {e: list(criteria.values[e]) for e in sorted(criteria.values)},
        }
    if name is not None:
        doc["name"] = name
    return doc
