"""Per-subgroup confusion counting, rate panels, and disparity gaps.

The decision rule is fixed: a sample is predicted positive iff its score
is greater than or equal to the threshold, so a threshold of 0 selects
everything. All functions here are pure; none touch shared state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    EmptyInputError,
    InsufficientSubgroupsError,
    MalformedSampleError,
)

DEFAULT_MIN_SUPPORT = 30

EXCLUDE_BELOW_SUPPORT = "below_support"
EXCLUDE_UNDEFINED_RATE = "undefined_rate"

# Gap name -> the RatePanel attribute it spans.
GAP_METRICS: dict[str, str] = {
    "delta_fpr": "fpr",
    "delta_fnr": "fnr",
    "delta_tpr": "tpr",
    "delta_sr": "selection_rate",
}


@dataclass(frozen=True)
class Sample:
    """One scored, labelled, subgroup-annotated prediction."""

    sample_id: str
    score: float
    label: int
    subgroup: str


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class RatePanel:
    """Rates for one subgroup; ``None`` marks a zero-denominator rate.

    ``fpr`` is defined iff the subgroup has negatives, ``fnr``/``tpr`` iff
    it has positives, ``selection_rate`` iff it has any samples. Undefined
    rates are values, never errors, and never NaN.
    """

    fpr: float | None
    fnr: float | None
    tpr: float | None
    selection_rate: float | None


@dataclass(frozen=True)
class DisparityGaps:
    """Max-minus-min spread of each rate across eligible subgroups.

    ``excluded_subgroups`` records, per excluded subgroup, why it was left
    out of at least one gap: ``below_support`` or ``undefined_rate``.
    """

    delta_fpr: float
    delta_fnr: float
    delta_tpr: float
    delta_sr: float
    excluded_subgroups: tuple[tuple[str, str], ...] = ()

    def value(self, gap: str) -> float:
        if gap not in GAP_METRICS:
            raise KeyError(f"unknown gap {gap!r}")
        return getattr(self, gap)


def _check_sample(sample: Sample) -> None:
    if not 0.0 <= sample.score <= 1.0:
        raise MalformedSampleError(
            sample.sample_id, f"score out of range [0, 1]: {sample.score!r}"
        )
    if sample.label not in (0, 1):
        raise MalformedSampleError(
            sample.sample_id, f"label must be 0 or 1, got {sample.label!r}"
        )
    if not sample.subgroup:
        raise MalformedSampleError(sample.sample_id, "subgroup is empty")


def compute_confusion(
    samples: Iterable[Sample], threshold: float
) -> dict[str, ConfusionCounts]:
    """Count tp/fp/tn/fn per subgroup at the given decision threshold.

    Every sample lands in exactly one cell of its subgroup's matrix.

    Raises:
        EmptyInputError: the sample set is empty.
        MalformedSampleError: a score, label, or subgroup is out of domain.
        ValueError: threshold outside [0, 1].
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold!r}")
    samples = list(samples)
    if not samples:
        raise EmptyInputError("sample set is empty")

    cells: dict[str, list[int]] = {}
    for sample in samples:
        _check_sample(sample)
        counts = cells.setdefault(sample.subgroup, [0, 0, 0, 0])
        predicted = sample.score >= threshold
        if predicted:
            counts[0 if sample.label == 1 else 1] += 1
        else:
            counts[3 if sample.label == 1 else 2] += 1
    return {
        group: ConfusionCounts(tp=c[0], fp=c[1], tn=c[2], fn=c[3])
        for group, c in cells.items()
    }


def compute_rates(counts: ConfusionCounts) -> RatePanel:
    """Derive the rate panel from confusion counts.

    fpr = fp/(fp+tn), fnr = fn/(fn+tp), tpr = tp/(tp+fn),
    selection_rate = (tp+fp)/n; a zero denominator yields ``None``.
    """
    negatives = counts.fp + counts.tn
    positives = counts.tp + counts.fn
    n = counts.total
    return RatePanel(
        fpr=counts.fp / negatives if negatives else None,
        fnr=counts.fn / positives if positives else None,
        tpr=counts.tp / positives if positives else None,
        selection_rate=(counts.tp + counts.fp) / n if n else None,
    )


def compute_gaps(
    rates: Mapping[str, RatePanel],
    counts: Mapping[str, int],
    min_support: int = DEFAULT_MIN_SUPPORT,
) -> DisparityGaps:
    """Compute max-minus-min disparity gaps across subgroups.

    A subgroup participates in a gap only if its sample count reaches
    ``min_support`` and the underlying rate is defined; an undefined rate
    excludes a subgroup from that gap only.

    Raises:
        InsufficientSubgroupsError: fewer than two eligible subgroups
            remain for some gap (the error names the gap).
    """
    excluded: dict[tuple[str, str], None] = {}
    values: dict[str, float] = {}
    for gap_name, rate_attr in GAP_METRICS.items():
        eligible: list[float] = []
        for group in rates:
            if counts.get(group, 0) < min_support:
                excluded[(group, EXCLUDE_BELOW_SUPPORT)] = None
                continue
            rate = getattr(rates[group], rate_attr)
            if rate is None:
                excluded[(group, EXCLUDE_UNDEFINED_RATE)] = None
                continue
            eligible.append(rate)
        if len(eligible) < 2:
            detail = "; ".join(f"{g} {reason}" for (g, reason) in excluded)
            raise InsufficientSubgroupsError(
                gap_name,
                f"needs at least 2 eligible subgroups, found {len(eligible)}"
                + (f" ({detail})" if detail else ""),
            )
        values[gap_name] = max(eligible) - min(eligible)
    return DisparityGaps(
        delta_fpr=values["delta_fpr"],
        delta_fnr=values["delta_fnr"],
        delta_tpr=values["delta_tpr"],
        delta_sr=values["delta_sr"],
        excluded_subgroups=tuple(sorted(excluded)),
    )


def subgroup_sizes(confusion: Mapping[str, ConfusionCounts]) -> dict[str, int]:
    """Per-subgroup sample counts, as needed by :func:`compute_gaps`."""
    return {group: c.total for group, c in confusion.items()}


def macro_mean(rates: Mapping[str, RatePanel], attr: str) -> float | None:
    """Unweighted mean of a rate over the subgroups where it is defined."""
    defined = [
        getattr(panel, attr) for panel in rates.values()
        if getattr(panel, attr) is not None
    ]
    if not defined:
        return None
    return sum(defined) / len(defined)
