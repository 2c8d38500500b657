"""Exact-arithmetic analysis of piecewise-linear interval maps with
machine-checkable certificates bounding backward limit sets."""

from .exactnum import (
    EMPTY,
    Interval,
    IntervalSet,
    Rational,
    format_rational,
    parse_interval,
    parse_interval_set,
    parse_rational,
)
from .plmap import (
    InvalidMap,
    PLMap,
    compose,
    identity_map,
    image,
    iterate,
    make_plmap,
    map_digest,
    parse_map,
    preimage,
    serialize_map,
)
from .orbits import (
    EventualPeriod,
    PeriodicOrbit,
    PeriodicStructure,
    eventual_period,
    fixed_point_set,
    forward_orbit,
    periodic_orbits,
    periodic_points,
    sharkovsky_precedes,
)
from .markov import (
    CycleFailure,
    CycleOfIntervals,
    ExceptionalReport,
    MarkovSystem,
    Verdict,
    check_cycle_of_intervals,
    exceptional_set,
    is_mixing,
    is_transitive,
    markov_partition,
    orbit_closure,
)
from .backlimits import (
    AvoidanceCert,
    BackwardTree,
    Budget,
    ContractionCert,
    CycleMembershipCert,
    ExactTailCert,
    RejectedSeed,
    SalphaEnclosure,
    avoided_region,
    backward_tree,
    beta_upper,
    cert_from_obj,
    cert_to_obj,
    certified_period_set,
    cycle_membership,
    find_contraction,
    find_exact_tail,
    salpha_enclosure,
    verify_certificate,
)
from . import corpus

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
