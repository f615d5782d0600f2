"""Computable starlike-body geometry in a sparse sequence space: Minkowski
gauges, radial diffeomorphisms, nested body towers, and maps that delete a
finite compactum while acting as the identity far away."""

__version__ = "0.1.0"

from .seqspace import (
    DiagonalInjection,
    NormKind,
    SUP_NORM,
    SparseVec,
    SummableFunctional,
    apply_injection,
    eval_functional,
    norm,
    p_norm_kind,
    sup_on_ball,
)
from .gauges import (
    Ball,
    Body,
    Certificate,
    ConeHull,
    PullbackBody,
    Recentered,
    Scaled,
    SlabNbhd,
    StarHull,
    Sublevel,
    Tolerances,
    Translated,
    UnionSet,
    cone_hull_gauge,
    gauge,
    pullback_gauge,
    slab_distance,
    star_hull_gauge,
    strict_inclusion_d,
    strict_inclusion_mu,
)
from .smoothing import (
    HomogenizedGauge,
    approximate_body,
    interpolate_bodies,
    make_homogenized,
    separate_compactum,
)
from .radial_maps import (
    ComposedMap,
    FourBodiesMap,
    ShiftMap,
    TransitionFn,
    four_bodies_forward,
    four_bodies_inverse,
    make_shift_map,
    smoothstep,
)
from .tower import (
    TowerScenario,
    build_functional_tower,
    build_reflexive_scenario,
    build_scenario,
    choose_centers,
)
from .deletion import (
    DeletionMap,
    TheoremMap,
    build_deletion_map,
    build_theorem_map,
    evaluate,
)
from .verify import (
    SUITES,
    VerificationReport,
    VerifyContext,
    brute_gauge_oracle,
    run_suite,
)
from .rng import SplitMix64, random_direction, random_sparse
