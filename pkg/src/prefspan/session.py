"""Interactive tree-building sessions over stored instances.

A session tracks committed (contracted) and excluded (deleted) edges,
recomputes the still-consistent edge set after every move, and keeps an
undo stack of prior positions. Fast mode reruns the consistency filter
on the reduced instance, which is a heuristic: it may keep edges no
maximal tree of the original instance extends. Exact mode filters
through the enumerated maximal trees of the original instance and is
only offered within the enumeration budget.
"""

from __future__ import annotations

import hashlib
import json
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterator

from .documents import ParsedDocument, parse_document
from .errors import ConflictError, InputError, NotFoundError, OracleScaleExceeded
from .gpc import gpc
from .graph import connected_components, reduce_graph
from .relation import iter_linear_extensions
from .solver import DEFAULT_EXTENSION_CAP, DEFAULT_TREE_CAP, Instance, oracle_maximal_trees

__all__ = [
    "Action",
    "SessionState",
    "SessionEngine",
    "StoredInstance",
    "Store",
    "SessionManager",
    "AnalysisReport",
    "reduced_instance",
    "exact_capable",
    "analyze",
    "FAST_MODE_WARNING",
    "EXACT_MAX_EDGES",
]

FAST_MODE_WARNING = (
    "fast mode: consistency is recomputed on the reduced instance and may keep "
    "edges that no maximal tree of the original instance extends"
)

EXACT_MAX_EDGES = 12

_MODES = ("fast", "exact")
_KINDS = ("commit", "exclude", "undo")


@dataclass(frozen=True)
class Action:
    kind: str
    edge: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InputError(f"unknown action kind {self.kind!r}", code="bad_action")
        if self.kind == "undo" and self.edge is not None:
            raise InputError("undo takes no edge", code="bad_action")
        if self.kind != "undo" and not self.edge:
            raise InputError(f"{self.kind} needs an edge", code="bad_action")


@dataclass(frozen=True)
class SessionState:
    session_id: str
    instance_id: str
    mode: str
    committed: frozenset[str]
    excluded: frozenset[str]
    consistent_now: frozenset[str]
    status: str  # in-progress | complete | dead-end
    warnings: tuple[str, ...]
    history: tuple[tuple[frozenset[str], frozenset[str]], ...]


def reduced_instance(
    inst: Instance, committed: frozenset[str], excluded: frozenset[str]
) -> Instance:
    """The instance left after contracting commitments and deleting exclusions.

    Preference pairs survive only when both their edges survive; nothing
    is synthesized for merged context.
    """
    graph = reduce_graph(inst.graph, contract=committed, delete=excluded)
    return Instance(graph, inst.relation.restrict(graph.edge_ids))


def exact_capable(
    inst: Instance,
    max_edges: int = EXACT_MAX_EDGES,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
) -> bool:
    """Whether the enumeration budget admits exact-mode filtering."""
    if len(inst.graph.edge_ids) > max_edges:
        return False
    count = 0
    for _ in iter_linear_extensions(inst.relation):
        count += 1
        if count > extension_cap:
            return False
    return True


class SessionEngine:
    """Pure state machine for one session; does no storage or locking."""

    def __init__(
        self,
        session_id: str,
        instance_id: str,
        inst: Instance,
        mode: str,
        extension_cap: int = DEFAULT_EXTENSION_CAP,
        tree_cap: int = DEFAULT_TREE_CAP,
    ):
        if mode not in _MODES:
            raise InputError(f"unknown session mode {mode!r}", code="bad_mode")
        self.session_id = session_id
        self.instance_id = instance_id
        self.inst = inst
        self.mode = mode
        self._trees: tuple[frozenset[str], ...] | None = None
        if mode == "exact":
            self._trees = oracle_maximal_trees(
                inst, extension_cap=extension_cap, tree_cap=tree_cap
            )

    def initial_state(self) -> SessionState:
        return self._materialize(frozenset(), frozenset(), ())

    def step(self, state: SessionState, action: Action) -> SessionState:
        if action.kind == "undo":
            if not state.history:
                raise ConflictError("nothing to undo", code="conflict")
            committed, excluded = state.history[-1]
            return self._materialize(committed, excluded, state.history[:-1])
        if state.status != "in-progress":
            raise ConflictError(
                f"session is {state.status}; only undo is allowed", code="conflict"
            )
        edge = action.edge
        assert edge is not None
        if edge not in self.inst.graph.edge_ids:
            raise NotFoundError(f"unknown edge id {edge!r}", code="not_found")
        history = state.history + ((state.committed, state.excluded),)
        if action.kind == "commit":
            if edge in state.committed:
                raise ConflictError(f"edge {edge!r} is already committed", code="conflict")
            if edge not in state.consistent_now:
                raise ConflictError(
                    f"edge {edge!r} is not consistent in the current state",
                    code="conflict",
                )
            return self._materialize(
                state.committed | {edge}, state.excluded, history
            )
        # exclude
        if edge in state.committed:
            raise ConflictError(
                f"edge {edge!r} is committed and cannot be excluded", code="conflict"
            )
        return self._materialize(state.committed, state.excluded | {edge}, history)

    def _materialize(
        self,
        committed: frozenset[str],
        excluded: frozenset[str],
        history: tuple[tuple[frozenset[str], frozenset[str]], ...],
    ) -> SessionState:
        reduced = reduced_instance(self.inst, committed, excluded)
        if self._trees is not None:
            now = set(committed)
            for tree in self._trees:
                if committed <= tree and not (tree & excluded):
                    now |= tree
        else:
            filtered = gpc(reduced)
            now = set(committed) | (filtered or set())
        graph = self.inst.graph
        complete = (
            len(committed) == len(graph.vertices) - 1
            and connected_components(graph, committed).count == 1
        )
        dead = (
            len(reduced.graph.vertices) > 1
            and connected_components(reduced.graph, reduced.graph.edge_ids).count > 1
        )
        status = "complete" if complete else ("dead-end" if dead else "in-progress")
        warnings = (FAST_MODE_WARNING,) if self.mode == "fast" else ()
        return SessionState(
            session_id=self.session_id,
            instance_id=self.instance_id,
            mode=self.mode,
            committed=committed,
            excluded=excluded,
            consistent_now=frozenset(now) - excluded,
            status=status,
            warnings=warnings,
            history=history,
        )


@dataclass(frozen=True)
class StoredInstance:
    id: str
    document: dict
    parsed: ParsedDocument
    created_at: str


def _canonical_bytes(obj: Any) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


class Store:
    """One directory of JSON files per object kind; ids are file stems."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._instances = self.root / "instances"
        self._sessions = self.root / "sessions"
        self._instances.mkdir(parents=True, exist_ok=True)
        self._sessions.mkdir(parents=True, exist_ok=True)

    def put_instance(self, document: dict) -> str:
        parse_document(document).instance()  # validate before persisting
        iid = hashlib.sha256(_canonical_bytes(document)).hexdigest()[:12]
        path = self._instances / f"{iid}.json"
        if not path.exists():
            record = {
                "id": iid,
                "createdAt": datetime.now(timezone.utc).isoformat(),
                "document": document,
            }
            self._write(path, record)
        return iid

    def get_instance(self, iid: str) -> StoredInstance:
        path = self._instances / f"{iid}.json"
        if not _is_safe_id(iid) or not path.exists():
            raise NotFoundError(f"unknown instance {iid!r}", code="not_found")
        record = json.loads(path.read_text(encoding="utf-8"))
        return StoredInstance(
            id=record["id"],
            document=record["document"],
            parsed=parse_document(record["document"]),
            created_at=record["createdAt"],
        )

    def put_session(self, record: dict) -> None:
        self._write(self._sessions / f"{record['sessionId']}.json", record)

    def get_session(self, sid: str) -> dict:
        path = self._sessions / f"{sid}.json"
        if not _is_safe_id(sid) or not path.exists():
            raise NotFoundError(f"unknown session {sid!r}", code="not_found")
        return json.loads(path.read_text(encoding="utf-8"))

    def _write(self, path: Path, obj: dict) -> None:
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(obj, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)


def _is_safe_id(token: str) -> bool:
    return token.isalnum() and 0 < len(token) <= 64


class SessionManager:
    """Session lifecycle over a store; serializes actions per session."""

    def __init__(
        self,
        store: Store,
        exact_max_edges: int = EXACT_MAX_EDGES,
        extension_cap: int = DEFAULT_EXTENSION_CAP,
        tree_cap: int = DEFAULT_TREE_CAP,
    ):
        self.store = store
        self.exact_max_edges = exact_max_edges
        self.extension_cap = extension_cap
        self.tree_cap = tree_cap
        self._live: dict[str, tuple[SessionEngine, SessionState, list[dict]]] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def create(self, instance_id: str, mode: str | None = None) -> SessionState:
        stored = self.store.get_instance(instance_id)
        inst = stored.parsed.instance()
        capable = exact_capable(inst, self.exact_max_edges, self.extension_cap)
        if mode is None:
            mode = "exact" if capable else "fast"
        elif mode == "exact" and not capable:
            raise ConflictError(
                "instance exceeds the exact-mode enumeration budget", code="conflict"
            )
        elif mode not in _MODES:
            raise InputError(f"unknown session mode {mode!r}", code="bad_mode")
        sid = secrets.token_hex(8)
        engine = SessionEngine(
            sid, instance_id, inst, mode, self.extension_cap, self.tree_cap
        )
        state = engine.initial_state()
        with self._registry_lock:
            self._live[sid] = (engine, state, [])
            self._locks[sid] = threading.Lock()
        self._persist(sid)
        return state

    def get(self, sid: str) -> SessionState:
        return self._entry(sid)[1]

    def act(self, sid: str, action: Action) -> SessionState:
        with self._lock_for(sid):
            engine, state, transcript = self._entry(sid)
            new_state = engine.step(state, action)
            transcript.append({"kind": action.kind, "edge": action.edge})
            self._live[sid] = (engine, new_state, transcript)
            self._persist(sid)
            return new_state

    def _lock_for(self, sid: str) -> threading.Lock:
        with self._registry_lock:
            if sid not in self._locks:
                self._locks[sid] = threading.Lock()
            return self._locks[sid]

    def _entry(self, sid: str) -> tuple[SessionEngine, SessionState, list[dict]]:
        with self._registry_lock:
            if sid in self._live:
                return self._live[sid]
        record = self.store.get_session(sid)
        engine = SessionEngine(
            sid,
            record["instanceId"],
            self.store.get_instance(record["instanceId"]).parsed.instance(),
            record["mode"],
            self.extension_cap,
            self.tree_cap,
        )
        state = engine.initial_state()
        for item in record["actions"]:  # replay is deterministic
            state = engine.step(state, Action(item["kind"], item.get("edge")))
        with self._registry_lock:
            self._live[sid] = (engine, state, list(record["actions"]))
        return self._live[sid]

    def _persist(self, sid: str) -> None:
        engine, state, transcript = self._live[sid]
        self.store.put_session(
            {
                "sessionId": sid,
                "instanceId": engine.instance_id,
                "mode": engine.mode,
                "actions": transcript,
            }
        )


@dataclass(frozen=True)
class AnalysisReport:
    connected: bool
    p_acyclic: bool
    consistent_edges: frozenset[str] | None  # None encodes 'no'
    maximal_trees: tuple[frozenset[str], ...] | None  # None when over budget


def analyze(
    inst: Instance,
    exact_max_edges: int = EXACT_MAX_EDGES,
    extension_cap: int = DEFAULT_EXTENSION_CAP,
    tree_cap: int = DEFAULT_TREE_CAP,
) -> AnalysisReport:
    """Read-only summary: connectivity, acyclicity, consistency, oracle trees."""
    connected = connected_components(inst.graph, inst.graph.edge_ids).count <= 1
    consistent = gpc(inst)
    trees: tuple[frozenset[str], ...] | None = None
    if exact_capable(inst, exact_max_edges, extension_cap):
        try:
            trees = oracle_maximal_trees(
                inst, extension_cap=extension_cap, tree_cap=tree_cap
            )
        except OracleScaleExceeded:
            trees = None
    return AnalysisReport(
        connected=connected,
        p_acyclic=True,  # Instance construction guarantees it
        consistent_edges=consistent,
        maximal_trees=trees,
    )
