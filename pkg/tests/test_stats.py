"""Conflict distribution, Wilson intervals, prevalence, enrichment, joints.

The Wilson expectations below were frozen from an independent
high-precision evaluation of the closed form (60-digit arithmetic),
not from this package.
"""

from __future__ import annotations

from fractions import Fraction

import pytest

from conceptaudit.roughset import build_partition, compute_regions
from conceptaudit.stats import (boundary_enrichment, conflict_distribution,
                                joint_rate_matrix, prevalence_table,
                                resolve_baselines, top_ambiguous_profiles,
                                wilson_interval)
from conftest import dataset_from_plan

# (successes, n, confidence) -> (low, high), frozen from the reference
WILSON_REFERENCE = {
    (0, 10, 0.95): (0.0, 0.27753279986288917),
    (10, 10, 0.95): (0.72246720013711083, 1.0),
    (50, 100, 0.95): (0.40383153036599565, 0.59616846963400435),
    (136, 252, 0.95): (0.4780092132711127, 0.60016419963932943),
    (3, 7, 0.9): (0.18644319036395599, 0.71052290898640719),
}


def test_wilson_matches_frozen_reference_values():
    for (k, n, conf), (low, high) in WILSON_REFERENCE.items():
        interval = wilson_interval(k, n, conf)
        assert interval.low == pytest.approx(low, abs=1e-12)
        assert interval.high == pytest.approx(high, abs=1e-12)


def test_wilson_edges_are_exact():
    assert wilson_interval(0, 7).low == 0.0
    assert wilson_interval(7, 7).high == 1.0
    full = wilson_interval(5, 5, 0.999)
    assert full.high == 1.0
    assert 0.0 <= full.low <= 1.0


def test_wilson_contains_point_estimate_and_is_symmetric():
    for k, n in [(1, 9), (4, 9), (9, 9), (0, 3), (17, 40)]:
        interval = wilson_interval(k, n)
        assert interval.low <= k / n <= interval.high
        mirror = wilson_interval(n - k, n)
        assert interval.low == pytest.approx(1.0 - mirror.high, abs=1e-12)


def test_wilson_rejects_bad_arguments():
    with pytest.raises(ValueError):
        wilson_interval(1, 0)
    with pytest.raises(ValueError):
        wilson_interval(5, 4)
    with pytest.raises(ValueError):
        wilson_interval(-1, 4)
    with pytest.raises(ValueError):
        wilson_interval(1, 4, confidence=1.0)


def test_conflict_distribution_frozen_moments():
    # ratios 1/4 and 1/2: mean 0.375, sample stddev sqrt(0.03125)
    ds = dataset_from_plan([(1, 3), (2, 2)])
    summary = conflict_distribution(build_partition(ds))
    assert summary.n_profiles == 2
    assert summary.mean == pytest.approx(0.375)
    assert summary.stddev == pytest.approx(0.03125 ** 0.5)
    assert summary.stddev_is_defined
    assert summary.n_at_maximum == 1
    counts = [b.count for b in summary.histogram]
    assert len(counts) == 10
    assert counts[4] == 1  # (0.20, 0.25] holds 1/4
    assert counts[9] == 1  # (0.45, 0.50] holds 1/2
    assert sum(counts) == 2
    assert summary.histogram[0].low == 0
    assert summary.histogram[9].high == Fraction(1, 2)


def test_conflict_distribution_degenerate_cases():
    consistent = conflict_distribution(build_partition(dataset_from_plan([(2, 0)])))
    assert consistent.n_profiles == 0
    assert consistent.mean is None and consistent.stddev is None
    single = conflict_distribution(build_partition(dataset_from_plan([(1, 3)])))
    assert single.n_profiles == 1
    assert single.stddev == 0.0
    assert not single.stddev_is_defined


def test_prevalence_counts_rates_and_ordering():
    ds = dataset_from_plan([(1, 1), (2, 0)])
    table = prevalence_table(ds)
    assert [(e.attribute, e.value, e.n, e.rate) for e in table.entries] == [
        ("b", "v1", 2, Fraction(1)),
        ("a", "v0", 4, Fraction(3, 4)),
        ("b", "v0", 2, Fraction(1, 2)),
    ]
    assert table.overall.n == 4
    assert table.overall.rate == Fraction(3, 4)
    for entry in table.entries:
        assert entry.interval.low <= float(entry.rate) <= entry.interval.high


def test_tier_thresholds_are_strict():
    # 9 carriers of b=v0 with 4, 2, then 1 label-1: rates 4/9 within the
    # plan below give exact 0.4 and 0.2 boundary cases instead.
    high = prevalence_table(dataset_from_plan([(3, 2)])).entries
    assert all(e.tier == "high" for e in high if e.rate > Fraction(2, 5))
    exact_forty = prevalence_table(dataset_from_plan([(2, 3)]))
    assert [e.tier for e in exact_forty.entries] == ["moderate", "moderate"]
    exact_twenty = prevalence_table(dataset_from_plan([(1, 4)]))
    assert [e.tier for e in exact_twenty.entries] == ["low", "low"]


def test_baseline_absent_value_is_not_an_entry():
    import dataclasses
    ds = dataset_from_plan([(1, 1), (2, 0)])
    attrs = tuple(dataclasses.replace(a, values=("absent", "v1"))
                  for a in ds.schema.attributes)
    ds = dataclasses.replace(ds, schema=dataclasses.replace(ds.schema,
                                                            attributes=attrs))
    baselines = resolve_baselines(ds)
    assert baselines == {"a": "absent", "b": "absent"}
    table = prevalence_table(ds)
    assert [(e.attribute, e.value) for e in table.entries] == [("b", "v1")]
    explicit = resolve_baselines(ds, {"b": "v1"})
    assert explicit["b"] == "v1"
    with pytest.raises(ValueError):
        resolve_baselines(ds, {"b": "nope"})


def test_boundary_enrichment_rates():
    ds = dataset_from_plan([(1, 1), (2, 0)])  # boundary: profile (v0, v0)
    regions = compute_regions(ds)
    entries = {(e.attribute, e.value): e for e in boundary_enrichment(ds, regions)}
    assert entries[("b", "v0")].boundary_rate == Fraction(1)
    assert entries[("b", "v0")].positive_rate == Fraction(0)
    assert entries[("b", "v1")].boundary_rate == Fraction(0)
    assert entries[("b", "v1")].positive_rate == Fraction(1)
    assert entries[("a", "v0")].boundary_count == 2
    assert entries[("a", "v0")].positive_count == 2
    first = boundary_enrichment(ds, regions)[0]
    assert first.boundary_rate == Fraction(1)  # sorted by boundary rate


def test_joint_matrix_counts_and_suppression():
    ds = dataset_from_plan([(1, 1), (2, 0)])
    regions = compute_regions(ds)
    matrix = joint_rate_matrix(ds, "a", "b", regions=regions)
    cell = matrix.cells[0][0]
    assert (cell.n, cell.label1, cell.boundary_count) == (2, 1, 2)
    assert cell.rate is None  # n=2 under the default floor of 3
    loose = joint_rate_matrix(ds, "a", "b", regions=regions, min_n=2)
    assert loose.cells[0][0].rate == Fraction(1, 2)
    assert loose.cells[0][1].rate == Fraction(1)
    assert loose.cells[1][0].n == 0


def test_joint_matrix_rejects_bad_attribute_pairs():
    ds = dataset_from_plan([(1, 1)])
    with pytest.raises(ValueError):
        joint_rate_matrix(ds, "a", "a")
    with pytest.raises(ValueError):
        joint_rate_matrix(ds, "a", "missing")


def test_top_profiles_total_order():
    ds = dataset_from_plan([(1, 3), (2, 2), (5, 5), (1, 1), (1, 0)])
    partition = build_partition(ds)
    top = top_ambiguous_profiles(partition, k=3)
    assert [(p.count_label1, p.count_label0) for p in top] == \
        [(5, 5), (2, 2), (1, 1)]
    everything = top_ambiguous_profiles(partition, k=10)
    assert len(everything) == 4  # the pure profile never appears
    assert everything[-1].gamma_k == Fraction(1, 4)


def test_top_profiles_signature_tiebreak():
    ds = dataset_from_plan([(2, 2), (2, 2)])
    top = top_ambiguous_profiles(build_partition(ds), k=2)
    assert [p.signature for p in top] == [(0, 0), (0, 1)]
