"""Entanglement detection via a quadratic witness on local observables.

The package evaluates, for a bipartite density matrix, three expectation
values (h, p, q) built from a fixed observable set in locally rotated
measurement frames and combines them into the scalar w = h^2 - p^2 - q^2.
Every separable state satisfies w >= 0 in every frame, so a strictly
negative w certifies entanglement.  On top of that core test the package
provides a frame optimizer, standard state families, complementary
positivity criteria, a filtering-based distillability probe, plain-file
serialization, a command-line interface, and a self-check harness.
"""

from .criteria import PptResult, ReductionResult, ppt_check, reduction_check
from .distill import (
    DIM_CAP,
    MAX_COPIES,
    TAU_FILTER,
    CapExceededError,
    DistillReport,
    FilterAnnihilatesError,
    FilterPair,
    apply_filter,
    distill_search,
    example4_check,
    example4_frame,
    n_fold_copy,
)
from .qstate import (
    TAU_HERM,
    TAU_NORM,
    TAU_PSD,
    TAU_RANK,
    TAU_RECON,
    TAU_TRACE,
    TAU_UNIT,
    BipartiteDims,
    DensityMatrix,
    DensityValidationError,
    PureState,
    SchmidtForm,
    concurrence_pure,
    density_violations,
    haar_random_unitary,
    partial_trace,
    partial_transpose,
    schmidt_decompose,
    tensor_product,
    validate_density,
)
from .search import (
    ProductStateReport,
    SearchConfig,
    UnitaryParams,
    ViolationReport,
    constructive_pure_violation,
    max_violation,
    param_to_unitary,
    unitary_to_params,
)
from .witness import (
    TAU_VIOL,
    NumericResidueError,
    ObservableBasis,
    RotatedObservables,
    WitnessEvaluation,
    WitnessOperators,
    build_base_observables,
    build_hpq,
    evaluate_witness,
    identity_operators,
    pure_product_closed_form,
    rotate_observables,
    weighted_qutrit_sides,
    weighted_violation,
)
from .zoo import (
    example4_state,
    horodecki_state,
    isotropic_state,
    max_entangled,
    random_mixture,
    random_product_pure,
    random_pure,
    random_separable,
    swap01_unitary,
    werner_state,
)

__version__ = "0.1.0"

__all__ = [
    "BipartiteDims",
    "CapExceededError",
    "DIM_CAP",
    "DensityMatrix",
    "DensityValidationError",
    "DistillReport",
    "FilterAnnihilatesError",
    "FilterPair",
    "MAX_COPIES",
    "NumericResidueError",
    "ObservableBasis",
    "PptResult",
    "ProductStateReport",
    "PureState",
    "ReductionResult",
    "RotatedObservables",
    "SchmidtForm",
    "SearchConfig",
    "TAU_FILTER",
    "TAU_HERM",
    "TAU_NORM",
    "TAU_PSD",
    "TAU_RANK",
    "TAU_RECON",
    "TAU_TRACE",
    "TAU_UNIT",
    "TAU_VIOL",
    "UnitaryParams",
    "ViolationReport",
    "WitnessEvaluation",
    "WitnessOperators",
    "apply_filter",
    "build_base_observables",
    "build_hpq",
    "concurrence_pure",
    "constructive_pure_violation",
    "density_violations",
    "distill_search",
    "evaluate_witness",
    "example4_check",
    "example4_frame",
    "example4_state",
    "haar_random_unitary",
    "horodecki_state",
    "identity_operators",
    "isotropic_state",
    "max_entangled",
    "max_violation",
    "n_fold_copy",
    "param_to_unitary",
    "partial_trace",
    "partial_transpose",
    "ppt_check",
    "pure_product_closed_form",
    "random_mixture",
    "random_product_pure",
    "random_pure",
    "random_separable",
    "reduction_check",
    "rotate_observables",
    "schmidt_decompose",
    "swap01_unitary",
    "tensor_product",
    "unitary_to_params",
    "validate_density",
    "weighted_qutrit_sides",
    "weighted_violation",
    "werner_state",
    "__version__",
]
