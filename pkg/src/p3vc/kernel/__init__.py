from .crucial import (
    AuditReport,
    CrucialPartition,
    PackingClassification,
    apply_reduction_rules,
    audit_bound,
    build_crucial_partition,
    classify_packing,
    partition_violations,
)
from .decomposition import (
    ASideView,
    ContractError,
    GoodDecomposition,
    a_side_view,
    decomposition_violations,
    find_good_decomposition,
    reduce_by_decomposition,
)
from .kernelize import KernelResult, kernelize

__all__ = [
    "ASideView",
    "AuditReport",
    "ContractError",
    "CrucialPartition",
    "GoodDecomposition",
    "KernelResult",
    "PackingClassification",
    "a_side_view",
    "apply_reduction_rules",
    "audit_bound",
    "build_crucial_partition",
    "classify_packing",
    "decomposition_violations",
    "find_good_decomposition",
    "kernelize",
    "partition_violations",
    "reduce_by_decomposition",
]
