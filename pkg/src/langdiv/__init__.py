"""Coevolving language-change model on adaptive networks.

Agents carry discrete trait vectors, imitate neighbors they partly agree
with, and cut links to neighbors they share nothing with, reconnecting to a
neighbor-of-neighbor.  The package provides the dynamics, partition and
topology metrics, ensemble sweeps, and the empirical country-data binning.
"""
from .dynamics import (
    STRATEGIES,
    ModelConfig,
    RunResult,
    StepKind,
    StepOutcome,
    imitate,
    init_states,
    is_quiescent,
    overlap,
    run,
    select_rewire_target,
    step,
)
from .experiments import (
    EnsembleRow,
    SweepPlan,
    linear_fit,
    run_ensemble,
    sweep,
)
from .graph import (
    ContractError,
    Graph,
    ParameterError,
    distance_two_set,
    lattice_graph,
    random_graph,
    rewire,
)
from .metrics import (
    MetricsReport,
    PartitionReport,
    average_path_length,
    components,
    compute_metrics,
    domains,
    global_clustering,
    local_clustering,
)

__version__ = "0.1.0"
