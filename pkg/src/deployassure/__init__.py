"""Deployment-assurance engine.

Turns per-sample model evaluations (or precomputed instability signals)
into disagreement indices, threshold-stability profiles, assurance
scores, readiness classifications, escalation levels, and governed
state traces across remediation lifecycles.
"""

from .assurance import (
    DEFAULT_BANDS,
    DEFAULT_GES_THRESHOLDS,
    DEFAULT_WEIGHTS,
    AssuranceSignals,
    DeploymentState,
    DrcBands,
    EscalationLevel,
    GesThresholds,
    WeightVector,
    classify_drc,
    compute_das,
    compute_ges,
    less_favorable,
    remediation_progression,
    validate_weights,
)
from .config import EngineConfig, load_config
from .disagreement import (
    DEFAULT_PANEL_METRICS,
    DisparityPanel,
    FdiValue,
    PanelConfig,
    compute_fdi,
    panel_from_gaps,
)
from .errors import (
    ConfigInvalidError,
    EmptyFileError,
    EmptyInputError,
    EmptySequenceError,
    EngineError,
    InsufficientPanelError,
    InsufficientSubgroupsError,
    MalformedRowError,
    MalformedSampleError,
    MissingColumnError,
    MissingToleranceError,
    NegativeWeightError,
    SweepDegenerateError,
    WeightSumError,
)
from .evaluation import (
    ConfusionCounts,
    DisparityGaps,
    RatePanel,
    Sample,
    compute_confusion,
    compute_gaps,
    compute_rates,
    macro_mean,
    subgroup_sizes,
)
from .io import parse_predictions, parse_signals
from .lifecycle import (
    GovernanceTrace,
    RulesConfig,
    SnapshotAssessment,
    TraceEntry,
    TransitionRecord,
    build_assessments,
    emit_trace,
    replay,
    step,
)
from .stability import (
    FdiProfile,
    SensitivityPoint,
    SensitivityProfile,
    TszScalar,
    ZoneConfig,
    ZoneLabel,
    classify_zone,
    fdi_at_threshold,
    sensitivity,
    sweep,
    tsz_scalar,
    worst_zone,
)

__version__ = "0.1.0"
