"""kltledger: exact invariants of klt surface singularities from dual graphs,
and a desk-scale simulator for the Chern-value ledger of divisorial
contractions.

Everything is exact rational arithmetic; the hot kernels live in a compiled
extension with a pure-Python fallback (see `kltledger._kernels.BACKEND`).
"""

from ._kernels import BACKEND as kernel_backend
from .graphs import (
    INF,
    DualGraph,
    EdgeBlowUp,
    Vertex,
    VertexBlowUp,
    blow_up,
    canonical_form,
    intersection_matrix,
    is_negative_definite,
    reduced_exc_selfint,
    split_at_vertex,
    validate_minimal,
    chain,
    fork,
)
from .hj import CyclicType, HJExpansion, delta_cyclic, dual_q, hj_evaluate, hj_expand
from .discrepancy import (
    Basket,
    KltThreshold,
    NotKlt,
    PlatonicBranch,
    PlatonicType,
    basket_key,
    classify,
    delta,
    discrepancies,
    formal_smooth,
    gamma_point,
    klt_threshold,
    local_group_order,
    pullback_defect,
)
from .ledger import (
    ContractionData,
    ContractionScenario,
    PickVertex,
    Script,
    SurfaceState,
    apply_contraction,
    chern_value,
    mu_trajectory,
    orbifold_c2,
    resolve_scenario,
)
from .mmp import (
    BoundsRecord,
    EnumerationBudget,
    ScanReport,
    compute_bounds,
    enumerate_baskets,
    enumerate_scenarios,
    scan_min_ch,
    verify_chain_bound,
    verify_mu_monotone,
)

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "INF",
    "DualGraph",
    "Vertex",
    "VertexBlowUp",
    "EdgeBlowUp",
    "blow_up",
    "split_at_vertex",
    "validate_minimal",
    "intersection_matrix",
    "is_negative_definite",
    "reduced_exc_selfint",
    "canonical_form",
    "chain",
    "fork",
    "CyclicType",
    "HJExpansion",
    "hj_expand",
    "hj_evaluate",
    "dual_q",
    "delta_cyclic",
    "Basket",
    "NotKlt",
    "KltThreshold",
    "PlatonicBranch",
    "PlatonicType",
    "classify",
    "delta",
    "discrepancies",
    "klt_threshold",
    "pullback_defect",
    "local_group_order",
    "gamma_point",
    "formal_smooth",
    "basket_key",
    "Script",
    "PickVertex",
    "ContractionScenario",
    "ContractionData",
    "SurfaceState",
    "chern_value",
    "orbifold_c2",
    "resolve_scenario",
    "mu_trajectory",
    "apply_contraction",
    "EnumerationBudget",
    "ScanReport",
    "BoundsRecord",
    "enumerate_baskets",
    "enumerate_scenarios",
    "verify_mu_monotone",
    "verify_chain_bound",
    "scan_min_ch",
    "compute_bounds",
    "__version__",
]
