"""Audit report assembly and rendering.

`build_report` runs every analysis once and freezes the results;
the renderers only format what the report already holds. Exact ratios
appear in JSON as numerator/denominator plus a four-place decimal
string, and in the delimited and markdown forms as the decimal string,
so all three formats agree to the displayed precision.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction

from ._util import format_float, format_fraction, fraction_payload
from .dataset import Dataset
from .roughset import (Profile, RegionAnalysis, SplitSummary, compute_regions,
                       majority_vote_classifier, per_split_ceiling)
from .stats import (DistributionSummary, EnrichmentEntry, JointMatrix,
                    PrevalenceEntry, PrevalenceTable, boundary_enrichment,
                    conflict_distribution, joint_rate_matrix, prevalence_table,
                    top_ambiguous_profiles)

SCHEMA_VERSION = 1

# Attribute pairs worth crossing by default, matched after name
# normalization so "Blue-Whitish Veil" and "blue_whitish_veil" both hit.
DEFAULT_JOINT_PAIRS = (
    ("blue_whitish_veil", "dots_and_globules"),
    ("pigment_network", "streaks"),
)


def _canon(name: str) -> str:
    return re.sub(r"[\s-]+", "_", name.strip().lower())


def default_joint_pairs(dataset: Dataset) -> tuple[tuple[str, str], ...]:
    by_canon = {_canon(a.name): a.name for a in dataset.schema.attributes}
    pairs = []
    for a, b in DEFAULT_JOINT_PAIRS:
        if a in by_canon and b in by_canon:
            pairs.append((by_canon[a], by_canon[b]))
    return tuple(pairs)


@dataclass(frozen=True)
class AuditReport:
    name: str
    dataset: Dataset
    regions: RegionAnalysis
    majority_accuracy: Fraction
    distribution: DistributionSummary
    prevalence: PrevalenceTable
    enrichment: tuple[EnrichmentEntry, ...]
    joints: tuple[JointMatrix, ...]
    top_profiles: tuple[Profile, ...]
    top_k: int
    per_split: dict[str, SplitSummary]
    confidence: float

    @property
    def gamma(self) -> Fraction:
        return self.regions.gamma

    @property
    def ceiling(self) -> Fraction:
        return self.regions.ceiling

    @property
    def n_tie_profiles(self) -> int:
        return sum(1 for p in self.regions.partition.conflicting if p.is_tie)

    @property
    def label1_records(self) -> int:
        return sum(1 for r in self.dataset.records if r.label == 1)


def build_report(dataset: Dataset, name: str = "dataset", *,
                 confidence: float = 0.95, top_k: int = 5,
                 joints: tuple[tuple[str, str], ...] | None = None,
                 baseline: dict[str, str] | None = None) -> AuditReport:
    """Run the full audit. `joints` defaults to the attribute pairs in
    DEFAULT_JOINT_PAIRS that the schema actually has."""
    regions = compute_regions(dataset)
    if joints is None:
        joints = default_joint_pairs(dataset)
    return AuditReport(
        name=name,
        dataset=dataset,
        regions=regions,
        majority_accuracy=majority_vote_classifier(dataset).accuracy_on(dataset),
        distribution=conflict_distribution(regions.partition),
        prevalence=prevalence_table(dataset, baseline=baseline, confidence=confidence),
        enrichment=boundary_enrichment(dataset, regions, baseline=baseline),
        joints=tuple(joint_rate_matrix(dataset, a, b, regions=regions)
                     for a, b in joints),
        top_profiles=top_ambiguous_profiles(regions.partition, k=top_k),
        top_k=top_k,
        per_split=per_split_ceiling(dataset),
        confidence=confidence,
    )


def _signature_text(dataset: Dataset, profile: Profile) -> str:
    return "|".join(dataset.signature_names(profile.signature))


# ---------------------------------------------------------------- JSON

def _prevalence_entry_payload(entry: PrevalenceEntry) -> dict:
    return {
        "attribute": entry.attribute,
        "value": entry.value,
        "n": entry.n,
        "successes": entry.successes,
        "rate": fraction_payload(entry.rate),
        "interval": {"low": entry.interval.low, "high": entry.interval.high},
        "tier": entry.tier,
    }


def _profile_payload(report: AuditReport, profile: Profile) -> dict:
    return {
        "signature": list(report.dataset.signature_names(profile.signature)),
        "n_k": profile.n,
        "count_label1": profile.count_label1,
        "count_label0": profile.count_label0,
        "gamma_k": fraction_payload(profile.gamma_k),
        "majority_label": profile.majority_label,
        "is_tie": profile.is_tie,
    }


def render_json(report: AuditReport) -> str:
    dist = report.distribution
    payload = {
        "schema_version": SCHEMA_VERSION,
        "dataset": {
            "name": report.name,
            "n_records": len(report.dataset.records),
            "label1_records": report.label1_records,
            "attributes": [
                {"name": a.name, "values": list(a.values)}
                for a in report.dataset.schema.attributes
            ],
        },
        "regions": {
            "n_profiles": len(report.regions.partition),
            "n_conflicting_profiles": len(report.regions.partition.conflicting),
            "positive_size": len(report.regions.positive_ids),
            "boundary_size": len(report.regions.boundary_ids),
            "gamma": fraction_payload(report.gamma),
            "ceiling": fraction_payload(report.ceiling),
            "majority_vote": {
                "accuracy": fraction_payload(report.majority_accuracy),
                "attains_ceiling": report.majority_accuracy == report.ceiling,
                "tie_profiles": report.n_tie_profiles,
                "tie_rule": "label 1",
            },
        },
        "conflict_distribution": {
            "n_profiles": dist.n_profiles,
            "mean": dist.mean,
            "stddev": dist.stddev,
            "stddev_is_defined": dist.stddev_is_defined,
            "n_at_maximum": dist.n_at_maximum,
            "histogram": [
                {"low": fraction_payload(b.low), "high": fraction_payload(b.high),
                 "count": b.count}
                for b in dist.histogram
            ],
        },
        "prevalence": {
            "confidence": report.confidence,
            "overall": _prevalence_entry_payload(report.prevalence.overall),
            "entries": [_prevalence_entry_payload(e)
                        for e in report.prevalence.entries],
        },
        "enrichment": [
            {
                "attribute": e.attribute,
                "value": e.value,
                "boundary_count": e.boundary_count,
                "boundary_rate": fraction_payload(e.boundary_rate),
                "positive_count": e.positive_count,
                "positive_rate": fraction_payload(e.positive_rate),
            }
            for e in report.enrichment
        ],
        "joint_matrices": [
            {
                "attribute_a": m.attribute_a,
                "attribute_b": m.attribute_b,
                "min_n": m.min_n,
                "cells": [
                    {
                        "value_a": c.value_a,
                        "value_b": c.value_b,
                        "n": c.n,
                        "label1": c.label1,
                        "rate": fraction_payload(c.rate) if c.rate is not None else None,
                        "boundary_count": c.boundary_count,
                    }
                    for row in m.cells for c in row
                ],
            }
            for m in report.joints
        ],
        "top_profiles": {
            "k": report.top_k,
            "entries": [_profile_payload(report, p) for p in report.top_profiles],
        },
        "per_split": {
            split: {
                "n_records": s.n_records,
                "n_profiles": s.n_profiles,
                "gamma": fraction_payload(s.gamma),
                "ceiling": fraction_payload(s.ceiling),
            }
            for split, s in report.per_split.items()
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------ markdown

def _md_table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |",
             "| " + " | ".join("---" for _ in header) + " |"]
    lines.extend("| " + " | ".join(row) + " |" for row in rows)
    return lines


def render_markdown(report: AuditReport) -> str:
    dist = report.distribution
    lines = [f"# Concept consistency audit: {report.name}", ""]

    lines += ["## Dataset", ""]
    lines += [f"- records: {len(report.dataset.records)}",
              f"- concept attributes: {len(report.dataset.schema.attributes)}",
              f"- label-1 records: {report.label1_records} "
              f"({format_fraction(report.prevalence.overall.rate)})",
              ""]

    lines += ["## Regions and accuracy ceiling", ""]
    lines += [
        f"- profiles: {len(report.regions.partition)} "
        f"({len(report.regions.partition.conflicting)} conflicting)",
        f"- positive region: {len(report.regions.positive_ids)} records",
        f"- boundary region: {len(report.regions.boundary_ids)} records",
        f"- quality of classification (gamma): {format_fraction(report.gamma)} "
        f"({report.gamma.numerator}/{report.gamma.denominator})",
        f"- accuracy ceiling: {format_fraction(report.ceiling)} "
        f"({report.ceiling.numerator}/{report.ceiling.denominator})",
        f"- majority-vote accuracy: {format_fraction(report.majority_accuracy)} "
        f"(attains the ceiling: {'yes' if report.majority_accuracy == report.ceiling else 'no'})",
        f"- tie profiles (break toward label 1): {report.n_tie_profiles}",
        "",
    ]

    lines += ["## Conflict-ratio distribution", ""]
    if dist.n_profiles == 0:
        lines += ["No conflicting profiles; the dataset is concept-consistent.", ""]
    else:
        stddev = format_float(dist.stddev) if dist.stddev_is_defined else \
            "0.0000 (single profile)"
        lines += [f"- conflicting profiles: {dist.n_profiles}",
                  f"- mean conflict ratio: {format_float(dist.mean)}",
                  f"- sample stddev: {stddev}",
                  f"- profiles at the 0.5 maximum: {dist.n_at_maximum}",
                  ""]
        rows = [[f"({format_fraction(b.low, 2)}, {format_fraction(b.high, 2)}]",
                 str(b.count)] for b in dist.histogram]
        lines += _md_table(["conflict ratio bin", "profiles"], rows) + [""]

    pct = int(round(report.confidence * 100))
    lines += [f"## Label prevalence by active concept value ({pct}% Wilson interval)", ""]
    rows = [[e.attribute, e.value, str(e.n), format_fraction(e.rate),
             format_float(e.interval.low), format_float(e.interval.high), e.tier]
            for e in report.prevalence.entries]
    overall = report.prevalence.overall
    rows.append(["(all records)", "", str(overall.n), format_fraction(overall.rate),
                 format_float(overall.interval.low), format_float(overall.interval.high),
                 overall.tier])
    lines += _md_table(["attribute", "value", "n", "rate", "low", "high", "tier"],
                       rows) + [""]

    lines += ["## Boundary enrichment of active values", ""]
    rows = [[e.attribute, e.value,
             f"{format_fraction(e.boundary_rate)} ({e.boundary_count})",
             f"{format_fraction(e.positive_rate)} ({e.positive_count})"]
            for e in report.enrichment]
    lines += _md_table(["attribute", "value", "boundary rate (n)",
                        "positive rate (n)"], rows) + [""]

    for matrix in report.joints:
        lines += [f"## Joint label-1 rate: {matrix.attribute_a} x {matrix.attribute_b}", ""]
        header = [f"{matrix.attribute_a} \\ {matrix.attribute_b}", *matrix.col_values]
        rows = []
        for vi, value in enumerate(matrix.row_values):
            cells = []
            for cell in matrix.cells[vi]:
                if cell.rate is None:
                    cells.append(f"n={cell.n} (suppressed)")
                else:
                    cells.append(f"{format_fraction(cell.rate)} (n={cell.n})")
            rows.append([value, *cells])
        lines += _md_table(header, rows)
        lines += [f"Cells with n < {matrix.min_n} carry no rate estimate.", ""]

    lines += [f"## Most ambiguous profiles (top {report.top_k})", ""]
    if not report.top_profiles:
        lines += ["No conflicting profiles.", ""]
    else:
        rows = [[str(rank), _signature_text(report.dataset, p), str(p.n),
                 str(p.count_label1), str(p.count_label0),
                 format_fraction(p.gamma_k)]
                for rank, p in enumerate(report.top_profiles, start=1)]
        lines += _md_table(["rank", "profile", "n", "label 1", "label 0",
                            "conflict ratio"], rows) + [""]

    if report.per_split:
        lines += ["## Per-split regions (independent partitions)", ""]
        rows = [[split, str(s.n_records), str(s.n_profiles),
                 format_fraction(s.gamma), format_fraction(s.ceiling)]
                for split, s in report.per_split.items()]
        lines += _md_table(["split", "records", "profiles", "gamma", "ceiling"],
                           rows) + [""]

    return "\n".join(lines)


# ------------------------------------------------------------------ CSV

def _csv_text(header: list[str], rows: list[list]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def render_csv_bundle(report: AuditReport) -> dict[str, str]:
    """One delimited file per report section, keyed by file name."""
    dist = report.distribution
    bundle: dict[str, str] = {}

    bundle["summary.csv"] = _csv_text(["metric", "value"], [
        ["n_records", len(report.dataset.records)],
        ["n_attributes", len(report.dataset.schema.attributes)],
        ["label1_records", report.label1_records],
        ["n_profiles", len(report.regions.partition)],
        ["n_conflicting_profiles", len(report.regions.partition.conflicting)],
        ["positive_size", len(report.regions.positive_ids)],
        ["boundary_size", len(report.regions.boundary_ids)],
        ["gamma", format_fraction(report.gamma)],
        ["ceiling", format_fraction(report.ceiling)],
        ["majority_vote_accuracy", format_fraction(report.majority_accuracy)],
        ["tie_profiles", report.n_tie_profiles],
        ["conflict_mean", "" if dist.mean is None else format_float(dist.mean)],
        ["conflict_stddev", "" if dist.stddev is None else format_float(dist.stddev)],
        ["profiles_at_maximum", dist.n_at_maximum],
    ])

    bundle["conflict_histogram.csv"] = _csv_text(
        ["bin_low", "bin_high", "count"],
        [[format_fraction(b.low, 2), format_fraction(b.high, 2), b.count]
         for b in dist.histogram])

    rows = [[e.attribute, e.value, e.n, e.successes, format_fraction(e.rate),
             format_float(e.interval.low), format_float(e.interval.high), e.tier]
            for e in report.prevalence.entries]
    overall = report.prevalence.overall
    rows.append(["", "", overall.n, overall.successes, format_fraction(overall.rate),
                 format_float(overall.interval.low), format_float(overall.interval.high),
                 overall.tier])
    bundle["prevalence.csv"] = _csv_text(
        ["attribute", "value", "n", "successes", "rate", "low", "high", "tier"], rows)

    bundle["enrichment.csv"] = _csv_text(
        ["attribute", "value", "boundary_count", "boundary_rate",
         "positive_count", "positive_rate"],
        [[e.attribute, e.value, e.boundary_count, format_fraction(e.boundary_rate),
          e.positive_count, format_fraction(e.positive_rate)]
         for e in report.enrichment])

    for matrix in report.joints:
        name = f"joint_{_safe_name(matrix.attribute_a)}__{_safe_name(matrix.attribute_b)}.csv"
        bundle[name] = _csv_text(
            ["value_a", "value_b", "n", "label1", "rate", "boundary_count"],
            [[c.value_a, c.value_b, c.n, c.label1,
              "" if c.rate is None else format_fraction(c.rate), c.boundary_count]
             for row in matrix.cells for c in row])

    bundle["top_profiles.csv"] = _csv_text(
        ["rank", "profile_signature", "n_k", "count_label1", "count_label0", "gamma_k"],
        [[rank, _signature_text(report.dataset, p), p.n, p.count_label1,
          p.count_label0, format_fraction(p.gamma_k)]
         for rank, p in enumerate(report.top_profiles, start=1)])

    if report.per_split:
        bundle["per_split.csv"] = _csv_text(
            ["split", "n_records", "n_profiles", "gamma", "ceiling"],
            [[split, s.n_records, s.n_profiles, format_fraction(s.gamma),
              format_fraction(s.ceiling)]
             for split, s in report.per_split.items()])

    return bundle


FORMATS = ("json", "markdown", "csv")


def render_report(report: AuditReport, fmt: str) -> dict[str, str]:
    """Render one format to a mapping of file name to text content."""
    if fmt == "json":
        return {"audit.json": render_json(report)}
    if fmt == "markdown":
        return {"audit.md": render_markdown(report)}
    if fmt == "csv":
        return render_csv_bundle(report)
    raise ValueError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
