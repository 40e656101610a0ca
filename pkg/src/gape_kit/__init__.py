"""gape-kit: graph positional encodings from weighted graph-walking automata.

The package computes the automaton-based encoding (a k-dimensional vector
per node obtained from the fixed point P = mu P A + alpha l) next to the
classic baselines it relates to: sinusoidal, Laplacian-eigenvector, random
walk, personalized PageRank and PPR-power encodings.
"""

from gape_kit.graphs import (
    LabeledGraph,
    string_graph,
    cycle_graph,
    erdos_renyi,
    csl_graph,
    degree_matrix,
    laplacian,
    walk_matrix,
    label_matrix,
    load_graph,
    save_graph,
    graph_from_edges,
)
from gape_kit.numerics import (
    Tolerances,
    DEFAULT_TOL,
    EigenDecomposition,
    SchurDecomposition,
    eig_symmetric,
    real_schur,
    spectral_radius,
    kronecker,
    solve_dense,
)
from gape_kit.sylvester import (
    SolveReport,
    SolverError,
    solve_kronecker,
    solve_fixed_point,
    solve_schur,
    solve_gape_system,
)
from gape_kit.encoding import EncodingMatrix, encoding_to_csv, encoding_from_csv
from gape_kit.wgwa import (
    Wgwa,
    init_damped,
    softmax_variant,
    encode_gape,
    run_weight,
    sinusoidal_wgwa,
    encode_sinusoidal_via_wgwa,
)
from gape_kit.baselines import (
    reference_sinusoidal,
    lape,
    lape_wgwa_construction,
    rw_encoding,
    ppr_matrix,
    pprp_encoding,
    gape_as_ppr,
    minmax_normalize,
)
from gape_kit.fitting import (
    FitConfig,
    FitResult,
    gape_loss,
    gape_grad,
    fit_to_target,
    init_target_diff,
)

__version__ = "0.1.0"
