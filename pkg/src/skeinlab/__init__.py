"""Skein-theoretic calculator for singly generated planar algebras at dim(3-box) = 14."""

from .scalar import Tolerance, solve_quadratic, principal_q_from_c, largest_real_root
from .twobox import (
    DEPTH3_DELTA,
    BoxVec,
    BraidPair,
    TwoBoxModel,
    bmw_two_box_traces,
    braid_pair,
    from_classification_data,
    trace_split,
    unique_braid_check,
)
from .skein import Diagram, FormalSum, Vertex, evaluate, evaluate_detailed, find_small_face, reduce_once, validate
from .threebox import (
    Basis14,
    GramMatrix,
    Pattern,
    TriangleTable,
    closure,
    enumerate_basis,
    gram,
    inner,
    mirror,
    reidemeister_residuals,
    solve_triangle,
    triangle_pattern,
    ybe_residual,
)
from .classify import (
    Admissibility,
    ClassificationResult,
    PrincipalGraphPrefix,
    admissible_check,
    classify,
    delta_for_l,
    normalize_bmw_params,
    principal_graph_prefix,
    recover_qr,
    solve_delta,
)

__all__ = [
    "Tolerance",
    "solve_quadratic",
    "principal_q_from_c",
    "largest_real_root",
    "DEPTH3_DELTA",
    "BoxVec",
    "BraidPair",
    "TwoBoxModel",
    "bmw_two_box_traces",
    "braid_pair",
    "from_classification_data",
    "trace_split",
    "unique_braid_check",
    "Diagram",
    "FormalSum",
    "Vertex",
    "evaluate",
    "evaluate_detailed",
    "find_small_face",
    "reduce_once",
    "validate",
    "Basis14",
    "GramMatrix",
    "Pattern",
    "TriangleTable",
    "closure",
    "enumerate_basis",
    "gram",
    "inner",
    "mirror",
    "reidemeister_residuals",
    "solve_triangle",
    "triangle_pattern",
    "ybe_residual",
    "Admissibility",
    "ClassificationResult",
    "PrincipalGraphPrefix",
    "admissible_check",
    "classify",
    "delta_for_l",
    "normalize_bmw_params",
    "principal_graph_prefix",
    "recover_qr",
    "solve_delta",
]
