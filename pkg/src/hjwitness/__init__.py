"""Random-graph construction and verification of layered digraphs whose
stability number survives the deletion of any k - 1 directed paths."""

from .cliques import (
    BudgetExceeded,
    clique_number,
    enumerate_cliques,
    greedy_disjoint_cliques,
    hitting_vertices,
    stability_number,
    subset_clique_certificate,
)
from .construction import ConstructionReport, Thresholds, construct_witness, theoretical_thresholds
from .graphs import (
    Digraph,
    LayeredDigraph,
    Layering,
    UGraph,
    build_layered_digraph,
    complement,
    induced_subgraph,
    is_directed_path,
)
from .random_model import (
    MCEstimate,
    ParamSet,
    delta,
    expected_clique_count,
    janson_upper_bound,
    mc_clique_count,
    mc_no_clique_probability,
    mu,
    sample_gnp,
)
from .verifier import (
    check_layer_path_property,
    gallai_milgram_partition,
    lower_bound_remaining,
    verify_adversarial,
    verify_exhaustive,
)

__version__ = "0.1.0"
