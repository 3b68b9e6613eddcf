"""Adaptive lower-bound adversary for semi-streaming independent set, with baselines and exact oracles."""

from .adversary import (
    AdversaryConfig,
    AdversaryResult,
    AlreadyWrong,
    Broken,
    SmallOutput,
    Unbroken,
    breaking_graph,
    derive_params,
    run_adversary,
    simplified_threshold,
    regime_violations,
    threshold,
    verify_result,
)
from .cliques import (
    clique_bound,
    partition_and_compress,
    remove_cliques_low_degree,
    remove_cliques_partitioned,
    split,
)
from .compression import (
    GraphDistribution,
    classify,
    compression_bound,
    find_light_summary,
    missing_graph,
    sample,
)
from .errors import (
    AdversaryError,
    BudgetViolation,
    EmptyClassError,
    InternalConsistencyError,
    InvalidParameter,
    LasVegasFailure,
    ParameterDomainError,
    ProtocolViolation,
    ResourceLimitError,
    SamplingFailure,
)
from .graph import Graph, induced_subgraph, partition_fixed
from .harness import ExperimentSpec, Report, generate, run_experiment
from .oracles import (
    caro_wei_sum,
    clique_number,
    greedy_mis,
    is_clique,
    is_independent,
    max_clique,
    max_independent_set,
)
from .protocol import Message, Transcript, run_protocol, streaming_to_protocol
from .streaming import (
    StreamingAlgorithm,
    det_subsample_algorithm,
    make_algorithm,
    measure_peak_state,
    rand_permutation_algorithm,
)

__version__ = "0.1.0"
