"""Volumes of cut, metric and rooted-metric polytopes and the elliptope.

Constructors for the polytopes over graphs, exact rational volumes (closed
family formulas plus a recursive engine), elliptope volumes in log space,
and seeded Monte Carlo estimation.  See the cli module for the command-line
surface.
"""

from ._backend import BACKEND
from .elliptope import (
    LogVol,
    StirlingParams,
    asymptotic_log_volume,
    barnes_g_log,
    i_log_volume,
    joe_log_volume,
    lbeta,
    lgamma,
    ratio_log_i_over_rmet,
)
from .estimate import (
    EstimateStats,
    WalkConfig,
    chebyshev_center,
    elliptope_rejection,
    hit_and_run,
    sob_volume,
    vpolytope_estimate,
)
from .exactvol import (
    AndreTable,
    ExactVolume,
    andre_numbers,
    cut_volume,
    cycle_volume,
    formula_volume,
    lasserre_volume,
    rmet_volume,
    suspension_volume,
)
from .graphs import (
    FamilyTag,
    Graph,
    classify,
    graph,
    induced_cycles,
    make_cactus,
    make_complete,
    make_cycle,
    make_necklace,
    make_path,
    make_star,
    read_graph,
    suspension,
    write_graph,
)
from .polytope import (
    HPolytope,
    SymMatrix,
    VPolytope,
    cor_vertices,
    cos_map_check,
    covariance_map,
    covariance_map_inverse,
    cut_hrep_sparse,
    cut_vertices,
    elliptope_contains,
    met_hrep,
    read_ext,
    read_ine,
    rmet_hrep,
    write_ext,
    write_ine,
)
from .rng import SplitMix64

__version__ = "0.1.0"
