"""Exact loneliness values for integer speed sets: engine, classifier, scans."""

from .analysis import (
    FamilyReport,
    TheoremScanReport,
    lemma3_min_speed,
    lemma4_condition,
    verify_family,
    verify_shifted_theorem2,
    verify_theorem1,
    verify_theorem3,
    verify_theorem4,
)
from .engine import (
    AT_LEAST_FLOOR,
    EXACT,
    MAX_SPEED,
    LonelinessResult,
    ShiftedInstance,
    SpeedSet,
    candidate_times,
    compute_ml,
    compute_ml_with_floor,
    min_circle_distance,
    normalize,
    oracle_ml,
    prejump_invariant,
    shifted_ml,
    shifted_objective,
    shifted_oracle,
)
from .rational import (
    CircleDistance,
    Rational,
    WidthError,
    circle_norm,
    compare,
    reduce,
)
from .scan import (
    CensusSummary,
    CheckpointMismatch,
    ScanConfig,
    ScanError,
    enumerate_primitive,
    merge_census,
    merge_jsonl,
    run_scan,
)
from .spectrum import SpectrumClass, classify, spectrum_value

__version__ = "0.1.0"
