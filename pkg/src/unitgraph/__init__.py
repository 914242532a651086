"""Unit graphs of residue rings, their invariants, and their incidence codes."""

from .errors import DomainError, ResourceError
from .gf_linalg import GfMatrix, null_space_basis, rank, row_space_contains, rref
from .incidence_codes import (
    UNDEFINED,
    UNKNOWN,
    CodeParams,
    LinearCode,
    code_from_incidence,
    dual_code,
    error_capabilities,
    incidence_matrix,
    min_weight_dependency,
    min_weight_exhaustive,
    syndrome_decode_single,
)
from .ring_core import RingElement, RingSpec, crt_decompose, crt_map, euler_phi, is_unit, units
from .unit_graph import (
    GraphInvariants,
    UnitGraph,
    analyze_graph,
    build_unit_graph,
    expected_edge_count,
)
from .verify_harness import VerificationReport, build_report, crt_isomorphism_check

__all__ = [
    "CodeParams", "DomainError", "GfMatrix", "GraphInvariants", "LinearCode", "ResourceError",
    "RingElement", "RingSpec", "UNDEFINED", "UNKNOWN", "UnitGraph", "VerificationReport",
    "analyze_graph", "build_report", "build_unit_graph", "code_from_incidence",
    "crt_decompose", "crt_isomorphism_check", "crt_map", "dual_code", "error_capabilities",
    "euler_phi", "expected_edge_count", "incidence_matrix", "is_unit", "min_weight_dependency",
    "min_weight_exhaustive", "null_space_basis", "rank", "row_space_contains", "rref",
    "syndrome_decode_single", "units",
]
