"""Exact tropical geometry over the lexicographically ordered groups R^(k)."""

from .hahnseries import HahnSeries, hs_add, hs_mul, nu_mon, parse_hahn
from .lexgroup import (
    INF,
    CoefficientField,
    LexValue,
    Ordering,
    ParseError,
    RankContext,
    RankMismatch,
    integer_scale,
    lex_add,
    lex_cmp,
    lex_min,
    pair,
    parse_lexvalue,
    project,
)
from .paths import (
    Disconnected,
    GeneralizedInterval,
    OrientedInterval,
    PLPath,
    PointNotInComplex,
    Segment,
    build_adjacency,
    connect,
    verify_path,
)
from .polyhedra import (
    ComplexError,
    EuclideanPiece,
    LexComplex,
    LexHalfspace,
    LexPolyhedron,
    contains,
    euclidean_closure,
    faces,
    flatten,
    intersect,
    is_empty,
)
from .skeleton import (
    DisconnectedGraph,
    Edge,
    MalformedChart,
    MetricGraph,
    SkeletonPoint,
    edge_valuation,
    faithful_injectivity_check,
    marked_edge_valuation,
    skeleton_path,
)
from .tropicalize import (
    ValuatedPolynomial,
    banerjee_trop,
    extended_trop_membership,
    lift_point,
    monomial_valuation,
    trop_hypersurface,
    trop_membership,
    trop_project,
)

__version__ = "0.1.0"
