"""Steiner point removal toolkit.

Builds terminal-centered minors of weighted graphs with randomized
ball-growing partitions, and empirically verifies the decomposition and
distortion guarantees of the constructions at desk scale.
"""

from . import errors
from .decomp import (
    DecompositionStats,
    TruncExpParams,
    carve,
    carve_lambda,
    degree_of_separation,
    evaluate_requirements,
    far_ball_probability,
    sample_texp,
    separation_rate,
    texp_cdf,
    texp_pdf,
    verify_decomposition,
)
from .general import (
    GapCertificate,
    GeneralResult,
    LevelInfo,
    equivalence_classes,
    find_gap,
    rounded_distance_powers,
    spr_general,
)
from .graph import (
    UNREACHABLE,
    PathWitness,
    WeightedGraph,
    aspect_ratio,
    ball,
    format_edge_list,
    induced_subgraph,
    load_graph,
    parse_edge_list,
    save_graph,
    scale_weights,
    shortest_distances,
    shortest_path_witness,
    terminal_metric,
    terminal_rows,
)
from .harness import (
    AmplifiedResult,
    ComparisonReport,
    TrialReport,
    amplify,
    compare_baseline,
    distortion,
    evaluate_partition,
    generate,
    run_trial,
)
from .minor import (
    PartialPartition,
    TerminalMinor,
    contract,
    minor_distances,
    minor_to_edge_list,
    minor_to_json,
    nearest_terminal_partition,
    validate_partition,
)
from .seeds import mix, spawn
from .spr import (
    DEFAULT_ASPECT_THRESHOLD,
    GrowthStep,
    SprResult,
    assumption_holds,
    growth_factor,
    paper_aspect_threshold,
    rescale_to_unit_min,
    run_partition,
)

__version__ = "0.1.0"
