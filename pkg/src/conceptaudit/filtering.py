"""Consistency filtering and retraining aids.

Two removal strategies operate on the boundary region:

* symmetric: drop every boundary record, leaving only pure profiles;
* asymmetric: drop only the label-0 members of boundary profiles, so
  every label-1 record survives at the cost of relabeling ambiguous
  profiles positive.

Each result carries the retained dataset, a per-record removal manifest,
and summary metrics including the residual ceiling: the accuracy of the
majority rule the retained set induces, evaluated over the retained
records plus every removed record whose profile still has retained
members. Under symmetric filtering removed profiles vanish entirely, so
that evaluation set is the retained set itself and the residual ceiling
is exactly 1; under asymmetric filtering it spans the whole original
dataset.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ._util import atomic_write_text, format_fraction, ratio_one_decimal
from .dataset import Dataset, Record, serialize_dataset
from .errors import AuditError, SchemaError
from .roughset import Profile, compute_regions

STRATEGIES = ("symmetric", "asymmetric")

MANIFEST_COLUMNS = ("id", "profile_signature", "n_k", "count_label1",
                    "count_label0", "gamma_k", "strategy")


@dataclass(frozen=True)
class ManifestRow:
    """Why one record was removed: its profile and that profile's conflict."""

    id: str
    profile_signature: str
    n_k: int
    count_label1: int
    count_label0: int
    gamma_k: Fraction
    strategy: str


@dataclass(frozen=True)
class FilterResult:
    strategy: str
    retained: Dataset
    removed_ids: tuple[str, ...]
    manifest: tuple[ManifestRow, ...]
    n_original: int
    label1_original: int
    residual_gamma: Fraction
    residual_ceiling: Fraction

    @property
    def n_retained(self) -> int:
        return len(self.retained.records)

    @property
    def n_removed(self) -> int:
        return len(self.removed_ids)

    @property
    def label1_retained(self) -> int:
        return sum(1 for r in self.retained.records if r.label == 1)

    @property
    def label1_retained_fraction(self) -> Fraction | None:
        if self.label1_original == 0:
            return None
        return Fraction(self.label1_retained, self.label1_original)

    @property
    def imbalance(self) -> str | None:
        """Retained class balance as "1:r", label-0 records per label-1."""
        ones = self.label1_retained
        if ones == 0:
            return None
        zeros = self.n_retained - ones
        return f"1:{ratio_one_decimal(Fraction(zeros, ones))}"


def _signature_text(dataset: Dataset, signature: tuple[int, ...]) -> str:
    return "|".join(dataset.signature_names(signature))


def _manifest_row(dataset: Dataset, record: Record, profile: Profile,
                  strategy: str) -> ManifestRow:
    return ManifestRow(
        id=record.id,
        profile_signature=_signature_text(dataset, record.concepts),
        n_k=profile.n,
        count_label1=profile.count_label1,
        count_label0=profile.count_label0,
        gamma_k=profile.gamma_k,
        strategy=strategy,
    )


def _residual_ceiling(retained: tuple[Record, ...],
                      removed: tuple[Record, ...]) -> Fraction:
    surviving = {r.concepts for r in retained}
    evaluated = len(retained) + sum(1 for r in removed if r.concepts in surviving)
    return Fraction(len(retained), evaluated)


def _filter(dataset: Dataset, strategy: str) -> FilterResult:
    if strategy not in STRATEGIES:
        raise SchemaError(f"unknown strategy {strategy!r}; expected one of "
                          f"{', '.join(STRATEGIES)}")
    regions = compute_regions(dataset)
    boundary_profiles: dict[tuple[int, ...], Profile] = {
        p.signature: p for p in regions.partition.conflicting}

    retained_records: list[Record] = []
    removed_records: list[Record] = []
    manifest: list[ManifestRow] = []
    for record in dataset.records:
        profile = boundary_profiles.get(record.concepts)
        keep = profile is None or (strategy == "asymmetric" and record.label == 1)
        if keep:
            retained_records.append(record)
        else:
            removed_records.append(record)
            manifest.append(_manifest_row(dataset, record, profile, strategy))
    if not retained_records:
        raise AuditError(f"{strategy} filtering removed every record")

    retained = Dataset(schema=dataset.schema, records=tuple(retained_records))
    return FilterResult(
        strategy=strategy,
        retained=retained,
        removed_ids=tuple(r.id for r in removed_records),
        manifest=tuple(manifest),
        n_original=len(dataset.records),
        label1_original=sum(1 for r in dataset.records if r.label == 1),
        residual_gamma=compute_regions(retained).gamma,
        residual_ceiling=_residual_ceiling(tuple(retained_records),
                                           tuple(removed_records)),
    )


def filter_symmetric(dataset: Dataset) -> FilterResult:
    return _filter(dataset, "symmetric")


def filter_asymmetric(dataset: Dataset) -> FilterResult:
    return _filter(dataset, "asymmetric")


def filter_split_aware(dataset: Dataset, strategy: str) -> dict[str, FilterResult]:
    """Apply one whole-dataset filtering decision, reported per split.

    The boundary is computed once over all records so the same profile is
    treated identically everywhere; each split then gets its own result
    restricted to its records. Requires split tags on every record.
    """
    if any(r.split is None for r in dataset.records):
        raise SchemaError("split-aware filtering requires a split tag on every record")
    whole = _filter(dataset, strategy)
    retained_ids = {r.id for r in whole.retained.records}
    manifest_by_id = {row.id: row for row in whole.manifest}
    out: dict[str, FilterResult] = {}
    for split in dataset.splits_present:
        part = dataset.split_of(split)
        kept = tuple(r for r in part.records if r.id in retained_ids)
        dropped = tuple(r for r in part.records if r.id not in retained_ids)
        if not kept:
            raise AuditError(f"{strategy} filtering removed every {split} record")
        retained = Dataset(schema=dataset.schema, records=kept)
        out[split] = FilterResult(
            strategy=strategy,
            retained=retained,
            removed_ids=tuple(r.id for r in dropped),
            manifest=tuple(manifest_by_id[r.id] for r in dropped),
            n_original=len(part.records),
            label1_original=sum(1 for r in part.records if r.label == 1),
            residual_gamma=compute_regions(retained).gamma,
            residual_ceiling=_residual_ceiling(kept, dropped),
        )
    return out


@dataclass(frozen=True)
class ClassWeights:
    """Inverse-frequency weights over labels and over each concept domain.

    Label weight: n / (2 * count of that label). Concept-value weight:
    n / (domain size * count of that value). A value with no carriers
    gets weight None and a warning instead of a division by zero.
    """

    n: int
    label_weights: tuple[Fraction | None, Fraction | None]  # (label 0, label 1)
    concept_weights: dict[str, tuple[Fraction | None, ...]]  # schema value order
    concept_domains: dict[str, tuple[str, ...]]
    warnings: tuple[str, ...]


def class_weights(dataset: Dataset) -> ClassWeights:
    if not dataset.records:
        raise ValueError("class weights of an empty dataset are undefined")
    n = len(dataset.records)
    warnings: list[str] = []

    def weight(count: int, parts: int, what: str) -> Fraction | None:
        if count == 0:
            warnings.append(f"{what} has no records; weight undefined")
            return None
        return Fraction(n, parts * count)

    ones = sum(1 for r in dataset.records if r.label == 1)
    label_weights = (weight(n - ones, 2, "label 0"), weight(ones, 2, "label 1"))

    concept_weights: dict[str, tuple[Fraction | None, ...]] = {}
    for ai, attr in enumerate(dataset.schema.attributes):
        counts = [0] * len(attr.values)
        for record in dataset.records:
            counts[record.concepts[ai]] += 1
        concept_weights[attr.name] = tuple(
            weight(c, len(attr.values), f"'{attr.name}' value {attr.values[vi]!r}")
            for vi, c in enumerate(counts))
    return ClassWeights(
        n=n,
        label_weights=label_weights,
        concept_weights=concept_weights,
        concept_domains={a.name: a.values for a in dataset.schema.attributes},
        warnings=tuple(warnings),
    )


def export_dataset(dataset: Dataset, path: str | Path) -> None:
    atomic_write_text(path, serialize_dataset(dataset))


def manifest_csv(result: FilterResult) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(MANIFEST_COLUMNS)
    for row in result.manifest:
        writer.writerow([row.id, row.profile_signature, row.n_k, row.count_label1,
                         row.count_label0, format_fraction(row.gamma_k), row.strategy])
    return out.getvalue()


def export_manifest(result: FilterResult, path: str | Path) -> None:
    atomic_write_text(path, manifest_csv(result))
