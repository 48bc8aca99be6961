"""Quantum-walk search on Kronecker powers of the complete graph."""

from .analysis import (
    GammaChoice,
    PerturbationReport,
    critical_gamma,
    gamma_taylor_gap,
    perturbation_report,
    predicted_runtime,
    srg_closed_form,
    srg_search_conditions,
)
from .errors import (
    CapacityExceeded,
    DegenerateSRG,
    InvalidArgument,
    NotStronglyRegular,
    NumericalFailure,
    SingularFormula,
)
from .graph import (
    UNREACHABLE,
    Graph,
    SrgParams,
    common_neighbor_count,
    complete_graph,
    decode,
    diameter,
    encode,
    kron_complete,
    kron_power,
    read_edgelist,
    srg_params,
    write_edgelist,
)
from .reduce import (
    Partition,
    ReducedHamiltonian,
    equitable_partition,
    kronecker_partition,
    lift,
    project_uniform,
    reduce_hamiltonian,
    third_order_census,
)
from .state import StateVector
from .walk import (
    SearchProblem,
    SimulationResult,
    evolve,
    find_peak,
    probability_series,
    uniform_state,
)

__version__ = "0.1.0"
