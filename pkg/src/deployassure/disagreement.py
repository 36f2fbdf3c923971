"""Fairness disagreement index over a panel of disparity values.

Continuous mode scores the mean pairwise absolute difference between the
panel's disparities; verdict mode scores the fraction of metric pairs
whose fair/unfair verdicts (disparity <= tolerance) disagree. Both live
in [0, 1] and equal 0 exactly when the panel fully agrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import InsufficientPanelError, MissingToleranceError
from .evaluation import DEFAULT_MIN_SUPPORT, DisparityGaps

MODE_CONTINUOUS = "continuous"
MODE_VERDICT = "verdict"
MODES = (MODE_CONTINUOUS, MODE_VERDICT)

DEFAULT_PANEL_METRICS = ("delta_fpr", "delta_fnr", "delta_tpr", "delta_sr")
DEFAULT_VERDICT_TOLERANCE = 0.1


@dataclass(frozen=True)
class DisparityPanel:
    """Named disparities in [0, 1], with optional per-metric tolerances."""

    entries: tuple[tuple[str, float], ...]
    tolerances: Mapping[str, float] | None = None


@dataclass(frozen=True)
class FdiValue:
    value: float
    mode: str


@dataclass(frozen=True)
class PanelConfig:
    """Recipe for evaluating a disagreement index from raw samples."""

    metrics: tuple[str, ...] = DEFAULT_PANEL_METRICS
    mode: str = MODE_CONTINUOUS
    tolerances: Mapping[str, float] | None = None
    default_tolerance: float = DEFAULT_VERDICT_TOLERANCE
    min_support: int = DEFAULT_MIN_SUPPORT

    def resolved_tolerances(self) -> dict[str, float]:
        supplied = dict(self.tolerances) if self.tolerances else {}
        return {m: supplied.get(m, self.default_tolerance) for m in self.metrics}


def _validate_panel(panel: DisparityPanel) -> None:
    if len(panel.entries) < 2:
        raise InsufficientPanelError(
            f"panel needs at least 2 entries, got {len(panel.entries)}"
        )
    seen: set[str] = set()
    for name, disparity in panel.entries:
        if name in seen:
            raise ValueError(f"duplicate metric name {name!r} in panel")
        seen.add(name)
        if not 0.0 <= disparity <= 1.0:
            raise ValueError(
                f"disparity for {name!r} out of range [0, 1]: {disparity!r}"
            )


def compute_fdi(panel: DisparityPanel, mode: str = MODE_CONTINUOUS) -> FdiValue:
    """Score disagreement across the panel.

    Continuous mode: mean absolute difference over all metric pairs.
    Verdict mode: fraction of metric pairs with conflicting fairness
    verdicts, where metric k is "fair" iff its disparity <= its tolerance.

    Raises:
        InsufficientPanelError: fewer than two panel entries.
        MissingToleranceError: verdict mode without a tolerance for a metric.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    _validate_panel(panel)
    k = len(panel.entries)
    pairs = k * (k - 1) / 2

    if mode == MODE_CONTINUOUS:
        # Sum of |d_i - d_j| over pairs via the sorted linear form; fsum
        # keeps the symmetric products cancelling exactly on tied panels.
        ordered = sorted(d for _, d in panel.entries)
        total = math.fsum(d * (2 * i - (k - 1)) for i, d in enumerate(ordered))
        value = total / pairs
    else:
        tolerances = panel.tolerances or {}
        fair = 0
        for name, disparity in panel.entries:
            tau = tolerances.get(name)
            if tau is None:
                raise MissingToleranceError(name)
            if not 0.0 <= tau <= 1.0:
                raise ValueError(f"tolerance for {name!r} out of range [0, 1]: {tau!r}")
            fair += disparity <= tau
        value = fair * (k - fair) / pairs

    return FdiValue(value=min(1.0, max(0.0, value)), mode=mode)


def panel_from_gaps(
    gaps: DisparityGaps,
    metrics: tuple[str, ...] = DEFAULT_PANEL_METRICS,
    tolerances: Mapping[str, float] | None = None,
) -> DisparityPanel:
    """Build the default disparity panel from a set of computed gaps."""
    entries = tuple((m, gaps.value(m)) for m in metrics)
    return DisparityPanel(entries=entries, tolerances=tolerances)
