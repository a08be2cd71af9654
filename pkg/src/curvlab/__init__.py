"""Exact curvature obstructions and the jet-orbit machinery behind them.

All arithmetic is over Q: polynomials have rational coefficients and every
pipeline is exact. ``KERNEL`` reports whether the compiled polynomial kernel
or the pure-Python fallback is in use (``CURVLAB_PURE_PYTHON=1`` forces the
fallback).
"""
from .actions import (
    checked_inverse,
    gauge_transform,
    pullback_acs,
    pullback_form,
    pullback_metric,
    pure_gauge,
)
from .curvature import (
    MetricField,
    covariant_differential,
    exterior_derivative,
    metric_curvature,
    nijenhuis,
    nijenhuis_vector_form,
    weyl,
    yang_mills_curvature,
)
from .errors import (
    ArgumentError,
    CurvlabError,
    DegenerateMetricError,
    InvalidSectionError,
    ParseError,
    UnsupportedInputError,
)
from .jets import (
    Jet1ACS,
    Jet1Connection,
    Jet1Super,
    Jet2Diffeo,
    Jet2VertAut,
    canonical_acs,
    prolong_acs,
    prolong_connection,
    prolong_diffeo,
    prolong_gauge,
    prolong_super,
)
from .orbits import (
    EQUIVALENT,
    OBSTRUCTED,
    UNDECIDED,
    AcsSplitting,
    acs_invariant,
    act_on_acs_jet,
    act_on_connection_jet,
    act_on_super_jet,
    decide_equivalence,
    reduce_connection_jet,
    reduce_super_jet,
)
from .polyfield import KERNEL, PolyMatrix, PolyScalar, SlotKind, TensorPolyField, coordinates
from .supergeometry import (
    GradedBundleSpec,
    SuperconnectionField,
    obstruction_supercurvature,
    quillen_supercurvature,
    super_gauge_transform,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
