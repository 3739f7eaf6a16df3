"""Ingestion, label mapping, serialization round trips, validation."""

from __future__ import annotations

import io

import pytest

from conceptaudit.dataset import (DEFAULT_CONFIG, Attribute, ConceptSchema,
                                  Dataset, IngestConfig, LabelMap, Record,
                                  parse_dataset, serialize_dataset, validate)
from conceptaudit.errors import LabelMapError, ParseError, SchemaError

MINI_CONFIG = IngestConfig(
    id_column="id",
    label_column="diagnosis",
    label_map=LabelMap((("melanoma*", 1),), default=0),
    concept_columns=("net", "veil"),
)

MINI_CSV = """\
id,net,veil,diagnosis
c1,typical,absent,nevus
c2,atypical,present,melanoma (in situ)
c3,atypical,present,Melanoma metastasis
c4,absent,absent,basal cell carcinoma
c5,typical,absent,MELANOMA
c6,atypical,absent,seborrheic keratosis
"""


def parse(text: str, config: IngestConfig = MINI_CONFIG) -> Dataset:
    return parse_dataset(io.StringIO(text), config)


def test_parse_maps_labels_case_insensitively_first_match_wins():
    ds = parse(MINI_CSV)
    assert [r.label for r in ds.records] == [0, 1, 1, 0, 1, 0]
    assert [r.raw_label for r in ds.records][:2] == ["nevus", "melanoma (in situ)"]


def test_domains_are_sorted_distinct_observed_values():
    ds = parse(MINI_CSV)
    assert ds.schema.attribute("net").values == ("absent", "atypical", "typical")
    assert ds.schema.attribute("veil").values == ("absent", "present")
    # indices are positions in those domains
    assert ds.records[0].concepts == (2, 0)
    assert ds.records[1].concepts == (1, 1)


def test_explicit_domain_keeps_config_order_and_rejects_strays():
    import dataclasses
    config = dataclasses.replace(MINI_CONFIG,
                                 domains={"net": ("typical", "atypical", "absent")})
    ds = parse(MINI_CSV, config)
    assert ds.schema.attribute("net").values == ("typical", "atypical", "absent")
    assert ds.records[0].concepts[0] == 0
    bad = MINI_CSV.replace("typical,absent,nevus", "blurry,absent,nevus")
    with pytest.raises(SchemaError, match="'blurry'|blurry"):
        parse(bad, config)


def test_label_without_rule_or_default_is_rejected():
    import dataclasses
    config = dataclasses.replace(
        MINI_CONFIG, label_map=LabelMap((("melanoma*", 1),), default=None))
    with pytest.raises(LabelMapError, match="nevus"):
        parse(MINI_CSV, config)


def test_missing_column_names_the_column():
    with pytest.raises(SchemaError, match="'veil'"):
        parse("id,net,diagnosis\nc1,typical,nevus\n")


def test_ragged_row_reports_line_number():
    text = "id,net,veil,diagnosis\nc1,typical,absent,nevus\nc2,typical\n"
    with pytest.raises(ParseError, match="line 3"):
        parse(text)


def test_duplicate_id_is_rejected():
    text = ("id,net,veil,diagnosis\n"
            "c1,typical,absent,nevus\n"
            "c1,atypical,present,melanoma\n")
    with pytest.raises(SchemaError, match="duplicate id"):
        parse(text)


def test_empty_concept_cell_requires_configured_category():
    text = "id,net,veil,diagnosis\nc1,,absent,nevus\n"
    with pytest.raises(SchemaError, match="'net'"):
        parse(text)
    import dataclasses
    config = dataclasses.replace(MINI_CONFIG, empty_as={"net": "absent"})
    ds = parse(text, config)
    assert ds.value_name(0, ds.records[0].concepts[0]) == "absent"


def test_empty_input_and_header_only():
    with pytest.raises(ParseError, match="header"):
        parse("")
    ds = parse("id,net,veil,diagnosis\n")
    assert len(ds) == 0
    assert any(f.kind == "empty-dataset" for f in validate(ds))


def test_quoted_fields_parse_per_csv_rules():
    text = ('id,net,veil,diagnosis\n'
            'c1,"typical, mostly",absent,"melanoma, nodular"\n')
    ds = parse(text)
    assert ds.records[0].label == 1
    assert ds.value_name(0, ds.records[0].concepts[0]) == "typical, mostly"


def test_split_tags_normalize_and_reject_unknown():
    import dataclasses
    config = dataclasses.replace(MINI_CONFIG, split_column="fold")
    text = ("id,net,veil,diagnosis,fold\n"
            "c1,typical,absent,nevus,TRAIN\n"
            "c2,atypical,present,melanoma,valid\n"
            "c3,typical,absent,nevus,test\n")
    ds = parse(text, config)
    assert [r.split for r in ds.records] == ["train", "valid", "test"]
    assert ds.splits_present == ("train", "valid", "test")
    with pytest.raises(SchemaError, match="holdout"):
        parse(text.replace("TRAIN", "holdout"), config)


def test_round_trip_serialize_then_parse_is_identity():
    ds = parse(MINI_CSV)
    again = parse(serialize_dataset(ds))
    assert again == ds


def test_round_trip_preserves_splits():
    import dataclasses
    config = dataclasses.replace(MINI_CONFIG, split_column="fold")
    text = ("id,net,veil,diagnosis,fold\n"
            "c1,typical,absent,nevus,train\n"
            "c2,atypical,present,melanoma,test\n")
    ds = parse(text, config)
    assert parse(serialize_dataset(ds), config) == ds


def test_validate_reports_constructed_violations():
    schema = ConceptSchema(
        attributes=(Attribute("a", ("x", "y")),),
        label_column="label", id_column="id")
    ds = Dataset(schema=schema, records=(
        Record("r1", (0,), 1),
        Record("r1", (5,), 2, split="fold"),
        Record("r3", (0, 1), 0),
    ))
    kinds = {f.kind for f in validate(ds)}
    assert kinds == {"duplicate-id", "out-of-domain", "bad-label", "bad-split",
                     "length-mismatch"}
    assert validate(parse(MINI_CSV)) == []


def test_config_from_dict_rejects_unknown_keys_and_bad_decisions():
    with pytest.raises(SchemaError, match="typo_key"):
        IngestConfig.from_dict({"id_column": "id", "label_column": "d",
                                "typo_key": 1})
    with pytest.raises(SchemaError, match="decision"):
        IngestConfig.from_dict({"id_column": "id", "label_column": "d",
                                "label_map": {"rules": [["x", 2]]}})
    with pytest.raises(SchemaError, match="id_column"):
        IngestConfig.from_dict({"label_column": "d"})


def test_default_config_covers_the_published_checklist_layout():
    assert DEFAULT_CONFIG.id_column == "case_num"
    assert DEFAULT_CONFIG.label_column == "diagnosis"
    assert len(DEFAULT_CONFIG.concept_columns) == 7
    assert DEFAULT_CONFIG.label_map.decide("melanoma (0.76 to 1.5 mm)") == 1
    assert DEFAULT_CONFIG.label_map.decide("clark nevus") == 0
