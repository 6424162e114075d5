"""Sparse simulation of quantum perceptrons over finite fields and
superposition-based architecture learning."""

from .errors import (
    BudgetError,
    CounterOverflow,
    DivisionByZero,
    FieldMismatch,
    LabelError,
    LayoutError,
    NotPrimeError,
    PreconditionError,
    QPFError,
    SelectorWidth,
    SliceError,
    TooLarge,
)
from .field import AxiomReport, FieldElement, FieldSpec, add, inv, mul, neg, verify_field_axioms
from .gates import (
    CompareFlag,
    Controlled,
    IncrementIf,
    InverseP,
    InverseS,
    ProductP,
    Program,
    SumS,
    Telemetry,
    apply_gate,
    apply_P,
    apply_S,
    compare_flag,
    dense_matrix,
    increment_if,
    verify_permutation,
)
from .network import (
    ArchSelector,
    LayerSpec,
    NetworkArch,
    NeuronSpec,
    build_layer,
    build_network,
    build_neuron,
    controlled_network,
    forward,
    inverse,
    load_architectures,
)
from .oracle import OracleReport, dense_simulation_cost, enumerate_performance
from .sal import (
    SalConfig,
    SalResult,
    TrainingSet,
    evaluate_classically,
    nonlinear_search,
    nq,
    run_sal,
)
from .state import (
    RegisterLayout,
    SparseState,
    basis_state,
    inner_product,
    measure,
    superposition_norm_check,
    uniform_superpose,
)

__version__ = "0.1.0"
