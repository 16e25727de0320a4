"""Maximal spanning trees under ordinal edge preferences.

The package covers the full pipeline: multigraph primitives, preference
relations with their choice sets and linear extensions, a polynomial
maximal-tree solver with exhaustive oracles, the linear-time
max-consistency filter, multiobjective aggregation, and an interactive
session service with an HTTP API.
"""

from .choices import seeded_choose, seeded_tie_break
from .errors import (
    ConflictError,
    InputError,
    NotFoundError,
    OracleScaleExceeded,
    PreconditionError,
    PrefspanError,
)
from .documents import ParsedDocument, parse_document, to_document
from .gpc import StrictClosure, gpc, strict_closure
from .graph import (
    ComponentStructure,
    Edge,
    UndirectedGraph,
    connected_components,
    enumerate_spanning_trees,
    kruskal_by_order,
    reduce_graph,
)
from .multiobjective import (
    CriteriaMatrix,
    InclusionReport,
    pareto_dominates,
    pareto_edge_relation,
    score_vector,
    sigma_pareto_maximal_trees,
    theorem2_check,
    utility_edge_relation,
)
from .relation import (
    EdgeRelation,
    FundamentalKind,
    decompose,
    enumerate_linear_extensions,
    greedy_linear_extension,
    is_p_acyclic,
    iter_linear_extensions,
    maximal_set,
    optimal_set,
)
from .session import (
    Action,
    AnalysisReport,
    SessionEngine,
    SessionManager,
    SessionState,
    Store,
    analyze,
    exact_capable,
    reduced_instance,
)
from .solver import (
    Instance,
    KCertificate,
    k_certified,
    k_relation,
    oracle_maximal_trees,
    solve,
    utilities_from_extension,
)

__version__ = "0.1.0"
