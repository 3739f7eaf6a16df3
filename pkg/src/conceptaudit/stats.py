"""Statistical characterization of label conflict.

Everything here is descriptive: conflict-ratio distributions, label
prevalence per active concept value with Wilson score intervals, boundary
enrichment of concept values, and pairwise joint-rate matrices. Counts
and point rates are exact fractions; interval endpoints are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist, fmean, stdev

from .dataset import Dataset
from .roughset import Partition, Profile, RegionAnalysis

HISTOGRAM_BINS = 10  # (0, 0.5] in equal steps of 1/20
_BIN_WIDTH = Fraction(1, 2 * HISTOGRAM_BINS)
TIER_HIGH = Fraction(2, 5)
TIER_MODERATE = Fraction(1, 5)


@dataclass(frozen=True)
class HistogramBin:
    low: Fraction   # exclusive
    high: Fraction  # inclusive
    count: int


@dataclass(frozen=True)
class DistributionSummary:
    """Moments and histogram of conflict ratios over conflicting profiles."""

    n_profiles: int
    mean: float | None
    stddev: float | None
    stddev_is_defined: bool
    histogram: tuple[HistogramBin, ...]
    n_at_maximum: int  # profiles with an exact 50/50 label split


def conflict_distribution(partition: Partition) -> DistributionSummary:
    ratios = [p.gamma_k for p in partition.conflicting]
    counts = [0] * HISTOGRAM_BINS
    for ratio in ratios:
        counts[math.ceil(ratio / _BIN_WIDTH) - 1] += 1
    histogram = tuple(
        HistogramBin(low=i * _BIN_WIDTH, high=(i + 1) * _BIN_WIDTH, count=c)
        for i, c in enumerate(counts)
    )
    if not ratios:
        return DistributionSummary(0, None, None, False, histogram, 0)
    values = [float(r) for r in ratios]
    return DistributionSummary(
        n_profiles=len(ratios),
        mean=fmean(values),
        stddev=stdev(values) if len(values) > 1 else 0.0,
        stddev_is_defined=len(values) > 1,
        histogram=histogram,
        n_at_maximum=sum(1 for r in ratios if r == Fraction(1, 2)),
    )


@dataclass(frozen=True)
class WilsonInterval:
    successes: int
    n: int
    confidence: float
    low: float
    high: float

    @property
    def point(self) -> float:
        return self.successes / self.n


def wilson_interval(successes: int, n: int, confidence: float = 0.95) -> WilsonInterval:
    """Wilson score interval for a binomial proportion.

    At successes == 0 the true lower bound is exactly 0 and at
    successes == n the upper bound is exactly 1; both are pinned rather
    than left to float round-off. Everything else is clamped to [0, 1].
    """
    if n < 1:
        raise ValueError("wilson interval requires n >= 1")
    if not 0 <= successes <= n:
        raise ValueError(f"successes {successes} outside [0, {n}]")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie strictly between 0 and 1")
    z = NormalDist().inv_cdf((1.0 + confidence) / 2.0)
    phat = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    center = (phat + z2 / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n))
    low = 0.0 if successes == 0 else max(0.0, center - half)
    high = 1.0 if successes == n else min(1.0, center + half)
    return WilsonInterval(successes, n, confidence, low, high)


def resolve_baselines(dataset: Dataset, baseline: dict[str, str] | None = None) -> dict[str, str | None]:
    """Background category per attribute: configured name, else a value
    literally called "absent" (any case), else None meaning every value
    of that attribute is treated as active."""
    chosen: dict[str, str | None] = {}
    overrides = baseline or {}
    for attr in dataset.schema.attributes:
        wanted = overrides.get(attr.name)
        if wanted is not None:
            if wanted not in attr.values:
                raise ValueError(f"baseline {wanted!r} is not a value of '{attr.name}'")
            chosen[attr.name] = wanted
            continue
        absent = [v for v in attr.values if v.lower() == "absent"]
        chosen[attr.name] = absent[0] if absent else None
    return chosen


def _active_values(dataset: Dataset, baselines: dict[str, str | None]):
    for ai, attr in enumerate(dataset.schema.attributes):
        for vi, value in enumerate(attr.values):
            if value != baselines[attr.name]:
                yield ai, attr.name, vi, value


@dataclass(frozen=True)
class PrevalenceEntry:
    attribute: str
    value: str
    successes: int  # label-1 records among carriers
    n: int          # records carrying the value
    rate: Fraction
    interval: WilsonInterval
    tier: str


def _tier(rate: Fraction) -> str:
    if rate > TIER_HIGH:
        return "high"
    if rate > TIER_MODERATE:
        return "moderate"
    return "low"


@dataclass(frozen=True)
class PrevalenceTable:
    entries: tuple[PrevalenceEntry, ...]
    overall: PrevalenceEntry  # attribute and value are empty strings
    confidence: float


def prevalence_table(dataset: Dataset, baseline: dict[str, str] | None = None,
                     confidence: float = 0.95) -> PrevalenceTable:
    """Label-1 rate among carriers of each active concept value.

    Values whose rate clears 0.40 are tiered "high", above 0.20
    "moderate", otherwise "low". Rows sort by rate, then carrier count,
    both descending, then attribute and value names.
    """
    if not dataset.records:
        raise ValueError("prevalence of an empty dataset is undefined")
    baselines = resolve_baselines(dataset, baseline)
    entries = []
    for ai, attr_name, vi, value in _active_values(dataset, baselines):
        carriers = [r for r in dataset.records if r.concepts[ai] == vi]
        if not carriers:
            continue  # declared domain value never observed
        successes = sum(1 for r in carriers if r.label == 1)
        rate = Fraction(successes, len(carriers))
        entries.append(PrevalenceEntry(
            attribute=attr_name,
            value=value,
            successes=successes,
            n=len(carriers),
            rate=rate,
            interval=wilson_interval(successes, len(carriers), confidence),
            tier=_tier(rate),
        ))
    entries.sort(key=lambda e: (-e.rate, -e.n, e.attribute, e.value))
    total1 = sum(1 for r in dataset.records if r.label == 1)
    overall = PrevalenceEntry(
        attribute="",
        value="",
        successes=total1,
        n=len(dataset.records),
        rate=Fraction(total1, len(dataset.records)),
        interval=wilson_interval(total1, len(dataset.records), confidence),
        tier=_tier(Fraction(total1, len(dataset.records))),
    )
    return PrevalenceTable(tuple(entries), overall, confidence)


@dataclass(frozen=True)
class EnrichmentEntry:
    attribute: str
    value: str
    boundary_count: int
    boundary_rate: Fraction
    positive_count: int
    positive_rate: Fraction

    @property
    def ratio(self) -> Fraction | None:
        if self.positive_rate == 0:
            return None
        return self.boundary_rate / self.positive_rate


def boundary_enrichment(dataset: Dataset, regions: RegionAnalysis,
                        baseline: dict[str, str] | None = None) -> tuple[EnrichmentEntry, ...]:
    """Carrier rate of each active value inside the boundary region versus
    inside the positive region. Rows sort by boundary rate descending."""
    baselines = resolve_baselines(dataset, baseline)
    boundary = set(regions.boundary_ids)
    positive = set(regions.positive_ids)
    n_boundary = len(boundary)
    n_positive = len(positive)
    entries = []
    for ai, attr_name, vi, value in _active_values(dataset, baselines):
        in_boundary = in_positive = 0
        for record in dataset.records:
            if record.concepts[ai] != vi:
                continue
            if record.id in boundary:
                in_boundary += 1
            elif record.id in positive:
                in_positive += 1
        entries.append(EnrichmentEntry(
            attribute=attr_name,
            value=value,
            boundary_count=in_boundary,
            boundary_rate=Fraction(in_boundary, n_boundary) if n_boundary else Fraction(0),
            positive_count=in_positive,
            positive_rate=Fraction(in_positive, n_positive) if n_positive else Fraction(0),
        ))
    entries.sort(key=lambda e: (-e.boundary_rate, -e.boundary_count, e.attribute, e.value))
    return tuple(entries)


@dataclass(frozen=True)
class JointCell:
    value_a: str
    value_b: str
    n: int
    label1: int
    rate: Fraction | None  # None when n is below the suppression floor
    boundary_count: int


@dataclass(frozen=True)
class JointMatrix:
    attribute_a: str
    attribute_b: str
    row_values: tuple[str, ...]
    col_values: tuple[str, ...]
    cells: tuple[tuple[JointCell, ...], ...]  # indexed [row][col]
    min_n: int


def joint_rate_matrix(dataset: Dataset, attribute_a: str, attribute_b: str,
                      regions: RegionAnalysis | None = None,
                      min_n: int = 3) -> JointMatrix:
    """Label-1 rate for every value pair of two attributes.

    Cells with fewer than `min_n` records keep their counts but carry no
    rate, so tiny denominators never print as if they were estimates.
    """
    names = dataset.schema.attribute_names
    for name in (attribute_a, attribute_b):
        if name not in names:
            raise ValueError(f"unknown attribute {name!r}")
    if attribute_a == attribute_b:
        raise ValueError("joint matrix needs two distinct attributes")
    ai = names.index(attribute_a)
    bi = names.index(attribute_b)
    attr_a = dataset.schema.attributes[ai]
    attr_b = dataset.schema.attributes[bi]
    boundary = set(regions.boundary_ids) if regions is not None else set()

    rows = []
    for va in range(len(attr_a.values)):
        row = []
        for vb in range(len(attr_b.values)):
            members = [r for r in dataset.records
                       if r.concepts[ai] == va and r.concepts[bi] == vb]
            label1 = sum(1 for r in members if r.label == 1)
            row.append(JointCell(
                value_a=attr_a.values[va],
                value_b=attr_b.values[vb],
                n=len(members),
                label1=label1,
                rate=Fraction(label1, len(members)) if len(members) >= min_n else None,
                boundary_count=sum(1 for r in members if r.id in boundary),
            ))
        rows.append(tuple(row))
    return JointMatrix(
        attribute_a=attribute_a,
        attribute_b=attribute_b,
        row_values=attr_a.values,
        col_values=attr_b.values,
        cells=tuple(rows),
        min_n=min_n,
    )


def top_ambiguous_profiles(partition: Partition, k: int = 5) -> tuple[Profile, ...]:
    """The k most conflicted profiles under a total order: conflict ratio
    descending, then size descending, then signature ascending."""
    ranked = sorted(partition.conflicting,
                    key=lambda p: (-p.gamma_k, -p.n, p.signature))
    return tuple(ranked[:k])
