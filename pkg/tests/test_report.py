"""Report assembly and the three renderings."""

from __future__ import annotations

import dataclasses
import json

import pytest

from conceptaudit.report import (build_report, default_joint_pairs,
                                 render_csv_bundle, render_json,
                                 render_markdown, render_report)
from conftest import dataset_from_plan


@pytest.fixture
def report():
    # last profile has n=2, below the joint suppression floor of 3
    ds = dataset_from_plan([(1, 3), (2, 2), (5, 0), (0, 2)],
                           splits=["train", "valid", "test"])
    return build_report(ds, name="toy", joints=(("a", "b"),))


def test_json_rendering_is_valid_and_complete(report):
    payload = json.loads(render_json(report))
    assert payload["schema_version"] == 1
    assert payload["dataset"]["n_records"] == 15
    regions = payload["regions"]
    assert regions["n_profiles"] == 4
    assert regions["n_conflicting_profiles"] == 2
    assert regions["positive_size"] == 7
    assert regions["gamma"]["num"] == 7
    assert regions["gamma"]["den"] == 15
    assert regions["majority_vote"]["attains_ceiling"] is True
    assert regions["majority_vote"]["tie_rule"] == "label 1"
    assert payload["conflict_distribution"]["n_profiles"] == 2
    assert len(payload["joint_matrices"]) == 1
    assert set(payload["per_split"]) == {"train", "valid", "test"}
    # ceiling: 7 pure + 3 + 2 majorities = 12 of 15, reduced to 4/5
    assert regions["ceiling"] == {"num": 4, "den": 5, "decimal": "0.8000"}


def test_markdown_has_every_section(report):
    text = render_markdown(report)
    for heading in ["# Concept consistency audit: toy",
                    "## Dataset",
                    "## Regions and accuracy ceiling",
                    "## Conflict-ratio distribution",
                    "## Label prevalence by active concept value",
                    "## Boundary enrichment of active values",
                    "## Joint label-1 rate: a x b",
                    "## Most ambiguous profiles (top 5)",
                    "## Per-split regions"]:
        assert heading in text
    assert "0.8000" in text


def test_csv_bundle_files(report):
    bundle = render_csv_bundle(report)
    assert set(bundle) == {"summary.csv", "conflict_histogram.csv",
                           "prevalence.csv", "enrichment.csv",
                           "joint_a__b.csv", "top_profiles.csv",
                           "per_split.csv"}
    assert "gamma,0.4667" in bundle["summary.csv"]
    assert bundle["conflict_histogram.csv"].splitlines()[0] == \
        "bin_low,bin_high,count"
    # suppressed joint cells leave the rate column empty
    assert any(line.split(",")[4] == "" for line
               in bundle["joint_a__b.csv"].splitlines()[1:])


def test_no_split_dataset_renders_no_split_artifacts():
    ds = dataset_from_plan([(2, 1)])
    report = build_report(ds, name="flat", joints=())
    assert report.per_split == {}
    assert "per_split.csv" not in render_csv_bundle(report)
    assert json.loads(render_json(report))["per_split"] == {}
    assert "Per-split" not in render_markdown(report)


def test_rendering_is_pure_and_deterministic(report):
    assert render_json(report) == render_json(report)
    assert render_markdown(report) == render_markdown(report)
    assert render_csv_bundle(report) == render_csv_bundle(report)


def test_render_report_dispatch(report):
    assert set(render_report(report, "json")) == {"audit.json"}
    assert set(render_report(report, "markdown")) == {"audit.md"}
    assert "summary.csv" in render_report(report, "csv")
    with pytest.raises(ValueError, match="nope"):
        render_report(report, "nope")


def test_default_joint_pairs_match_known_attribute_names():
    ds = dataset_from_plan([(1, 1)])
    renamed = dataclasses.replace(
        ds.schema.attributes[0], name="Blue-Whitish Veil")
    renamed2 = dataclasses.replace(
        ds.schema.attributes[1], name="dots and globules")
    schema = dataclasses.replace(ds.schema, attributes=(renamed, renamed2))
    ds = dataclasses.replace(ds, schema=schema)
    assert default_joint_pairs(ds) == (("Blue-Whitish Veil",
                                        "dots and globules"),)
    plain = dataset_from_plan([(1, 1)])
    assert default_joint_pairs(plain) == ()
    report = build_report(plain, name="plain")
    assert report.joints == ()


def test_top_k_is_respected():
    ds = dataset_from_plan([(1, 1), (2, 2), (3, 3), (1, 2)])
    report = build_report(ds, name="k", top_k=2, joints=())
    assert len(report.top_profiles) == 2
    assert report.top_profiles[0].n == 6
