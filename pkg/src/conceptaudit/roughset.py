"""Indiscernibility partitions, decision regions, and the accuracy ceiling.

Two records are indiscernible when their concept index vectors are equal.
The partition of the dataset by that relation, together with the binary
label, fixes everything this module computes: pure and conflicting
profiles, the quality-of-classification ratio, and the exact upper bound
on accuracy attainable by any classifier that only sees the concepts.

All ratios are exact `fractions.Fraction` values; callers choose how to
round for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dataset import Dataset, Record

Signature = tuple[int, ...]


@dataclass(frozen=True)
class Profile:
    """One equivalence class of the concept indiscernibility relation."""

    signature: Signature
    ids: tuple[str, ...]
    count_label1: int
    count_label0: int

    @property
    def n(self) -> int:
        return self.count_label1 + self.count_label0

    @property
    def is_pure(self) -> bool:
        return self.count_label1 == 0 or self.count_label0 == 0

    @property
    def majority_label(self) -> int:
        # Ties break toward label 1 so ambiguous profiles surface as positives.
        return 1 if self.count_label1 >= self.count_label0 else 0

    @property
    def is_tie(self) -> bool:
        return self.count_label1 == self.count_label0

    @property
    def gamma_k(self) -> Fraction:
        return conflict_ratio(self.count_label1, self.count_label0)

    @property
    def majority_count(self) -> int:
        return max(self.count_label1, self.count_label0)


@dataclass(frozen=True)
class Partition:
    """All profiles of a dataset, ordered by signature lexicographically."""

    profiles: tuple[Profile, ...]

    def __len__(self) -> int:
        return len(self.profiles)

    def profile_of(self, signature: Signature) -> Profile | None:
        for p in self.profiles:
            if p.signature == signature:
                return p
        return None

    @property
    def conflicting(self) -> tuple[Profile, ...]:
        return tuple(p for p in self.profiles if not p.is_pure)

    @property
    def pure(self) -> tuple[Profile, ...]:
        return tuple(p for p in self.profiles if p.is_pure)


@dataclass(frozen=True)
class RegionAnalysis:
    """Decision regions of a dataset plus the derived global ratios."""

    partition: Partition
    positive_ids: tuple[str, ...]
    boundary_ids: tuple[str, ...]
    n_records: int

    @property
    def gamma(self) -> Fraction:
        return Fraction(len(self.positive_ids), self.n_records)

    @property
    def ceiling(self) -> Fraction:
        attainable = len(self.positive_ids) + sum(
            p.majority_count for p in self.partition.conflicting)
        return Fraction(attainable, self.n_records)

    @property
    def boundary_profiles(self) -> tuple[Profile, ...]:
        return self.partition.conflicting


def conflict_ratio(count_label1: int, count_label0: int) -> Fraction:
    """Minority share of a profile: 0 for pure, at most 1/2 for even ties."""
    total = count_label1 + count_label0
    if total == 0:
        raise ValueError("conflict ratio of an empty profile is undefined")
    return Fraction(min(count_label1, count_label0), total)


def build_partition(dataset: Dataset) -> Partition:
    """Group records by signature. Profiles are canonical: ordered by
    signature, member ids sorted, so the partition is a pure function of
    the record set regardless of row order."""
    groups: dict[Signature, list[Record]] = {}
    for record in dataset.records:
        groups.setdefault(record.concepts, []).append(record)
    profiles = tuple(
        Profile(
            signature=signature,
            ids=tuple(sorted(r.id for r in members)),
            count_label1=sum(1 for r in members if r.label == 1),
            count_label0=sum(1 for r in members if r.label == 0),
        )
        for signature, members in sorted(groups.items())
    )
    return Partition(profiles)


def compute_regions(dataset: Dataset, partition: Partition | None = None) -> RegionAnalysis:
    """Split records into the positive region (pure profiles) and boundary."""
    if not dataset.records:
        raise ValueError("dataset has no records; regions are undefined")
    if partition is None:
        partition = build_partition(dataset)
    boundary_signatures = {p.signature for p in partition.conflicting}
    positive, boundary = [], []
    for record in dataset.records:  # dataset order, not profile order
        (boundary if record.concepts in boundary_signatures else positive).append(record.id)
    return RegionAnalysis(
        partition=partition,
        positive_ids=tuple(positive),
        boundary_ids=tuple(boundary),
        n_records=len(dataset.records),
    )


def accuracy_ceiling(dataset: Dataset) -> Fraction:
    """Best accuracy any concept-measurable classifier can reach."""
    return compute_regions(dataset).ceiling


@dataclass(frozen=True)
class MajorityVoteClassifier:
    """Per-profile majority vote; the optimum among concept-measurable rules.

    Signatures never seen during fitting fall back to `default_label`, the
    overall majority label of the fitting data.
    """

    votes: dict[Signature, int]
    default_label: int

    def predict_signature(self, signature: Signature) -> int:
        return self.votes.get(signature, self.default_label)

    def predict(self, record: Record) -> int:
        return self.predict_signature(record.concepts)

    def accuracy_on(self, dataset: Dataset) -> Fraction:
        if not dataset.records:
            raise ValueError("accuracy on an empty dataset is undefined")
        hits = sum(1 for r in dataset.records if self.predict(r) == r.label)
        return Fraction(hits, len(dataset.records))


def majority_vote_classifier(dataset: Dataset) -> MajorityVoteClassifier:
    partition = build_partition(dataset)
    total1 = sum(p.count_label1 for p in partition.profiles)
    total0 = sum(p.count_label0 for p in partition.profiles)
    return MajorityVoteClassifier(
        votes={p.signature: p.majority_label for p in partition.profiles},
        default_label=1 if total1 >= total0 else 0,
    )


@dataclass(frozen=True)
class SplitSummary:
    n_records: int
    n_profiles: int
    gamma: Fraction
    ceiling: Fraction


def per_split_ceiling(dataset: Dataset) -> dict[str, SplitSummary]:
    """Region analysis per split tag, each on its own partition.

    A profile can be pure inside one split yet conflicting globally, so
    these numbers are not projections of the whole-dataset analysis.
    """
    out: dict[str, SplitSummary] = {}
    for split in dataset.splits_present:
        part = dataset.split_of(split)
        regions = compute_regions(part)
        out[split] = SplitSummary(
            n_records=len(part.records),
            n_profiles=len(regions.partition),
            gamma=regions.gamma,
            ceiling=regions.ceiling,
        )
    return out


def brute_force_ceiling(dataset: Dataset, max_profiles: int = 16) -> Fraction:
    """Exhaustive accuracy maximum over all concept-measurable labelings.

    Enumerates every assignment of a binary label to each profile (2^|E|
    of them) and returns the best accuracy. Exponential by construction;
    exists as an independent check of the closed form, so it refuses
    datasets with more than `max_profiles` profiles.
    """
    partition = build_partition(dataset)
    n_profiles = len(partition)
    if n_profiles == 0:
        raise ValueError("dataset has no records; ceiling is undefined")
    if n_profiles > max_profiles:
        raise ValueError(
            f"{n_profiles} profiles exceed the exhaustive-search cap of {max_profiles}")
    ones = np.array([p.count_label1 for p in partition.profiles], dtype=np.int64)
    zeros = np.array([p.count_label0 for p in partition.profiles], dtype=np.int64)
    assignments = (
        (np.arange(1 << n_profiles, dtype=np.int64)[:, None]
         >> np.arange(n_profiles, dtype=np.int64)) & 1
    )
    correct = assignments @ ones + (1 - assignments) @ zeros
    total = int(ones.sum() + zeros.sum())
    return Fraction(int(correct.max()), total)
