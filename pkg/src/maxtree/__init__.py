"""maxtree: max-algebra spanning-tree machinery.

Maximal rooted-spanning-tree vectors of max-stochastic matrices, Kleene stars
and critical structure, a dequantization convergence scheme, and
pairwise-comparison ranking.  The package core is pure and in-process; a
FastAPI service (maxtree.service) and a thin CLI client (maxtree.cli) expose
every pipeline over matrix files.
"""

from .arborescence import (
    RstReport,
    enumerate_itrees,
    max_arborescence,
    max_rst_vector,
    p_rst_vector,
    sum_rst_vector,
    verify_left_max_eigen,
)
from .dequantize import (
    DequantStep,
    build_Ap,
    convergence_run,
    default_p_sweep,
    p0_threshold,
    theoretical_error_bound,
)
from .digraph import (
    ITree,
    WeightedDigraph,
    from_matrix,
    is_irreducible,
    saturation_digraph,
    strongly_connected_components,
    tree_path,
    validate_itree,
)
from .errors import (
    DimensionMismatchError,
    DomainError,
    EnumerationCapError,
    MatrixParseError,
    ReducibleMatrixError,
)
from .ranking import (
    RankingResult,
    ahp_rank,
    error_functional,
    generalized_eigen_residual,
    is_sr_matrix,
    judge_competitor_rank,
)
from .semiring import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_vector,
    is_max_stochastic,
    is_p_stochastic,
    max_matmul,
    max_matvec,
    normalize_max_stochastic,
    p_add,
)
from .spectral import (
    BlockLawReport,
    CriticalStructure,
    KleeneStar,
    critical_column_eigenvectors,
    critical_structure,
    kleene_star,
    max_cycle_geometric_mean,
    min_critical_row,
    reduced_matrix,
    verify_vis_kleene_blocks,
)

__version__ = "0.1.0"
