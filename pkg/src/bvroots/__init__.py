"""Bounded-variation selections of complex radicals and polynomial roots.

The package builds single-valued parameterizations of f^(1/r) and of the
roots of monic polynomial families over sampled 2D domains, places branch
cuts along sign-level curves minimizing the integrated jump height, and
measures the resulting variation, weak Lebesgue quasinorms, and level-set
integrals at desk scale.
"""

from .field_core import (
    ComplexField,
    Grid2D,
    HolderEstimate,
    build_field,
    field_to_csv,
    gradient,
    holder_norm_estimate,
    parse_descriptor,
    scale_field,
)
from .levelset import (
    CoareaReport,
    LevelCurveSet,
    bilinear_sample,
    coarea_check,
    curve_integral,
    curves_to_csv,
    curves_to_svg,
    extract_norm_level,
    extract_sign_level,
)
from .cut_select import (
    BranchCut,
    DirectionScan,
    scan_directions,
    scan_to_csv,
    verify_level_tail,
    verify_norm_level_growth,
)
from .radical import (
    Decision,
    MonodromyClass,
    RadicalCase,
    RadicalPlan,
    SbvField,
    classify_monodromy,
    construct_radical,
    loop_winding,
    reduce_exponent,
    zero_clusters,
)
from .variation import (
    GgReport,
    RatioReport,
    VariationReport,
    gg_check_1d,
    holder_norm_1d,
    raw_gradient_seminorm,
    variation_decompose,
    verify_radical_bound,
    weak_lp_quasinorm,
)
from .roots1d import (
    CoeffCurve,
    RootTrack,
    build_coeff_curve,
    magnitude_bound_excess,
    match_continuous,
    sobolev_check,
    solve_pointwise,
    track_to_csv,
)
from .roots2d import (
    HolonomyReport,
    RootField,
    build_root_field,
    discriminant_field,
    multiset_error,
    perm_to_cycles,
    plaquette_holonomy,
    solve_field_roots,
)
from .disks import (
    DisksCutReport,
    DisksSpec,
    build_disks_field,
    disks_cut_length,
    growth_table,
    harmonic_number,
)

__version__ = "0.1.0"
