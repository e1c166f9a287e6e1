"""Order-completion solver for equations T(A) = F over finite posets."""

from .completion import (
    CompletionLattice,
    Cut,
    cut_closure,
    density_decomposition,
    embed,
    enumerate_cuts,
    generated_cut,
    inf_cuts,
    is_cut,
    sup_cuts,
)
from .errors import (
    CycleError,
    DuplicateLabelError,
    EmptySubset,
    InputError,
    InternalInconsistency,
    NotACut,
    NotCompleteLattice,
    NotIncreasing,
    NotSurjective,
    OrderError,
    PosetMismatch,
    SizeCapExceeded,
    StencilUnderflow,
    UnknownElement,
)
from .extension import ExtendedMap, check_extension_properties, extend_on_cut, extend_on_subset, monotone_sandwich
from .poset import (
    FinitePoset,
    GroundMap,
    Subset,
    is_increasing,
    is_oie,
    lower_bounds,
    principal_down,
    principal_up,
    upper_bounds,
    validate_poset,
)
from .pullback import (
    EquationProblem,
    FactoredProblem,
    QuotientSpace,
    factor_problem,
    generalized_pullback_order,
    induced_injection,
    pullback_order,
    quotient_by_kernel,
)
from .solver import (
    SolveOutcome,
    SolverContext,
    build_context,
    check_chain,
    global_solvability,
    lower_aggregate,
    oracle_solve,
    solve,
    upper_aggregate,
)

__version__ = "0.1.0"
