"""Statistical performance of collaborative mean estimation over communication networks."""

__version__ = "0.1.0"

from .errors import CollabError
from .matrices import (
    CommGraph,
    GraphDiagnostics,
    StochasticMatrix,
    build_equal_neighbor,
    build_h_alpha,
    build_named,
    diagnostics,
    matrix_power_frobenius_sq,
)
from .ramanujan import (
    RamanujanVerdict,
    RegularGraph,
    generate_comm_matrix,
    ramanujan_verdict,
    random_regular_graph,
    sample_ramanujan,
)
from .simulator import (
    DelaySchedule,
    SimulationTrace,
    SourceDistribution,
    kappa,
    kappa_sequence,
    loglog_slope,
    run_asynchronous,
    run_synchronous,
)
from .sinkhorn import BalancingResult, SupportMatrix, has_total_support, sinkhorn_knopp
from .spectral import (
    SpectrumReport,
    StationaryDistribution,
    stationary_distribution,
    sym_eigenvalues,
    tau_bounds,
    tau_closed_form,
    tau_exact,
    tau_exact_curve,
    tau_limit,
)
from .tradeoff import (
    BudgetRecord,
    TradeoffRecord,
    budget_analysis,
    penalized_sweep,
    recommend,
    select_d_star,
)
