"""seplines: separating planar point sets by lines.

Exact-arithmetic library and CLI for computing, approximating, and
empirically studying point-set separability: the minimum number of lines
needed to strictly separate every pair of points.
"""

from .geom import (
    CanonicalLine,
    DegeneratePairError,
    DualLine,
    Point,
    SegmentCrossing,
    VerticalLineError,
    dualize_dual,
    dualize_line,
    dualize_point,
    intersect_lines,
    line_through,
    orient,
    pt,
    segment_crossing,
    side,
)
from .sepsys import (
    CandidateLines,
    GeneralPositionError,
    PointSet,
    PropernessError,
    SeparationMode,
    TooFewPointsError,
    candidate_lines,
    find_unseparated_pair,
    hits,
    properize,
)
from .solvers import (
    SizeCapError,
    SolveResult,
    SolverConfig,
    SolverError,
    VerificationError,
    WeightState,
    exact_separability,
    greedy_hitting_set,
    grid_separator,
    halving_separator,
    reweight_approx,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalLine",
    "CandidateLines",
    "DegeneratePairError",
    "DualLine",
    "GeneralPositionError",
    "Point",
    "PointSet",
    "PropernessError",
    "SegmentCrossing",
    "SeparationMode",
    "SizeCapError",
    "SolveResult",
    "SolverConfig",
    "SolverError",
    "TooFewPointsError",
    "VerificationError",
    "VerticalLineError",
    "WeightState",
    "candidate_lines",
    "dualize_dual",
    "dualize_line",
    "dualize_point",
    "exact_separability",
    "find_unseparated_pair",
    "greedy_hitting_set",
    "grid_separator",
    "halving_separator",
    "hits",
    "intersect_lines",
    "line_through",
    "orient",
    "properize",
    "pt",
    "reweight_approx",
    "segment_crossing",
    "side",
    "verify",
]
