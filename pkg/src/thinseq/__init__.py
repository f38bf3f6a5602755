"""thinseq: numerical laboratory for interpolating and thin sequences in the unit disc."""

from .disc import (
    DiscPoint,
    PointSequence,
    SeparationReport,
    NotDistinctError,
    pseudo_distance,
    mobius_apply,
    solve_delta_t,
    blaschke_factor,
    blaschke_eval,
    subproducts,
    separation_constants,
    thinness_trend,
    disc_grid,
)
from .eig import ConvergenceError, hermitian_spectrum
from .gram import (
    ClusteringError,
    GramMatrix,
    KernelCoefficients,
    evaluate_synthesis,
    gram_matrix,
    min_norm_interpolant,
    tail_bounds,
    unnormalized_gram,
)
from .carleson import (
    CarlesonBox,
    box_membership,
    box_sum,
    carleson_report,
    embedding_constant,
    kernel_embedding_constant,
    mu_measure,
    nu_measure,
    weierstrass_gap,
)
from .jones import (
    ContractionError,
    InterpolationProblem,
    JonesBasis,
    exactify,
    iterative_eis_solve,
    jones_interpolate,
    jones_weight,
    load_targets,
    splitting_pair,
)
from .pick import (
    PickMatrix,
    feasible_unit_ball,
    interpolation_constant_probe,
    max_feasible_scale,
    pick_matrix,
)
from .families import (
    FamilySpec,
    SequenceFileError,
    generate,
    load_sequence,
    save_sequence,
)

__version__ = "0.1.0"
