"""Tabular ingestion for concept-annotated datasets.

A dataset is a set of records, each carrying an id, one categorical value
per concept attribute, a binary decision label, and an optional split tag.
Concept values are stored as dense indices into per-attribute value
domains; all downstream set operations compare index vectors.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Iterable, TextIO

from .errors import LabelMapError, ParseError, SchemaError

VALID_SPLITS = ("train", "valid", "test")


@dataclass(frozen=True)
class Attribute:
    """One concept attribute: a name plus its ordered value domain."""

    name: str
    values: tuple[str, ...]

    def index_of(self, value: str) -> int:
        try:
            return self.values.index(value)
        except ValueError:
            raise KeyError(value) from None


@dataclass(frozen=True)
class ConceptSchema:
    attributes: tuple[Attribute, ...]
    label_column: str
    id_column: str
    split_column: str | None = None

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def attribute(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)


@dataclass(frozen=True)
class Record:
    """One sample. `concepts` holds one domain index per schema attribute.

    `raw_label` keeps the original label string so a dataset can be
    serialized back to the exact tabular form it was parsed from.
    """

    id: str
    concepts: tuple[int, ...]
    label: int
    split: str | None = None
    raw_label: str = ""


@dataclass(frozen=True)
class Dataset:
    schema: ConceptSchema
    records: tuple[Record, ...]

    def __len__(self) -> int:
        return len(self.records)

    def subset(self, ids: Iterable[str]) -> "Dataset":
        """Records whose id is in `ids`, original order preserved."""
        wanted = set(ids)
        return replace(self, records=tuple(r for r in self.records if r.id in wanted))

    def split_of(self, split: str) -> "Dataset":
        return replace(self, records=tuple(r for r in self.records if r.split == split))

    @property
    def splits_present(self) -> tuple[str, ...]:
        present = {r.split for r in self.records if r.split is not None}
        return tuple(s for s in VALID_SPLITS if s in present)

    def value_name(self, attr_index: int, value_index: int) -> str:
        return self.schema.attributes[attr_index].values[value_index]

    def signature_names(self, signature: tuple[int, ...]) -> tuple[str, ...]:
        return tuple(self.value_name(i, v) for i, v in enumerate(signature))


@dataclass(frozen=True)
class LabelMap:
    """Ordered first-match-wins rules mapping raw label strings to {0, 1}.

    Patterns are shell-style globs matched case-insensitively, so a rule
    like ("melanoma*", 1) covers every subtype string that starts with
    "melanoma". `default` applies when no rule matches; None means reject.
    """

    rules: tuple[tuple[str, int], ...]
    default: int | None = None

    def decide(self, raw: str) -> int | None:
        lowered = raw.lower()
        for pattern, decision in self.rules:
            if fnmatchcase(lowered, pattern.lower()):
                return decision
        return self.default


@dataclass(frozen=True)
class IngestConfig:
    """Column roles and mapping rules for one tabular source."""

    id_column: str
    label_column: str
    label_map: LabelMap
    split_column: str | None = None
    concept_columns: tuple[str, ...] | None = None  # None: all remaining columns
    domains: dict[str, tuple[str, ...]] = field(default_factory=dict)
    empty_as: dict[str, str] = field(default_factory=dict)
    baseline: dict[str, str] = field(default_factory=dict)

    _KEYS = {
        "id_column", "label_column", "label_map", "split_column",
        "concept_columns", "domains", "empty_as", "baseline",
    }

    @classmethod
    def from_dict(cls, data: dict) -> "IngestConfig":
        unknown = set(data) - cls._KEYS
        if unknown:
            raise SchemaError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for key in ("id_column", "label_column"):
            if not data.get(key):
                raise SchemaError(f"config is missing required key '{key}'")
        lm = data.get("label_map") or {}
        rules = []
        for entry in lm.get("rules", []):
            pattern, decision = entry
            if decision not in (0, 1):
                raise SchemaError(f"label-map decision must be 0 or 1, got {decision!r}")
            rules.append((str(pattern), int(decision)))
        default = lm.get("default")
        if default is not None and default not in (0, 1):
            raise SchemaError(f"label-map default must be 0, 1, or null, got {default!r}")
        for attr, domain in (data.get("domains") or {}).items():
            if not domain:
                raise SchemaError(f"declared domain for '{attr}' is empty")
        concept_columns = data.get("concept_columns")
        return cls(
            id_column=data["id_column"],
            label_column=data["label_column"],
            label_map=LabelMap(tuple(rules), default),
            split_column=data.get("split_column"),
            concept_columns=tuple(concept_columns) if concept_columns else None,
            domains={k: tuple(v) for k, v in (data.get("domains") or {}).items()},
            empty_as=dict(data.get("empty_as") or {}),
            baseline=dict(data.get("baseline") or {}),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "IngestConfig":
        try:
            with open(path, encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ParseError(f"config {path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise SchemaError(f"config {path}: expected a JSON object")
        return cls.from_dict(data)


# Derm7pt-style convention used when no config is supplied: id and diagnosis
# columns as published, the seven checklist attributes as concepts, and any
# diagnosis string starting with "melanoma" mapped to label 1.
DEFAULT_CONFIG = IngestConfig(
    id_column="case_num",
    label_column="diagnosis",
    label_map=LabelMap((("melanoma*", 1),), default=0),
    concept_columns=(
        "pigment_network",
        "streaks",
        "pigmentation",
        "regression_structures",
        "dots_and_globules",
        "blue_whitish_veil",
        "vascular_structures",
    ),
)


def _normalize_split(raw: str, line: int) -> str:
    tag = raw.strip().lower()
    if tag not in VALID_SPLITS:
        raise SchemaError(f"line {line}: unknown split tag {raw!r} "
                          f"(expected one of {', '.join(VALID_SPLITS)})")
    return tag


def parse_dataset(source: TextIO, config: IngestConfig) -> Dataset:
    """Parse delimited text with a header row into a Dataset.

    Value domains come from `config.domains` where given and are otherwise
    inferred as the sorted set of distinct observed strings per column, so
    the same input bytes always produce the same schema. Raw labels pass
    through the config's LabelMap; an unmapped label aborts ingestion.
    """
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: a header row is required") from None
    header = [h.strip() for h in header]

    def column(name: str) -> int:
        hits = [i for i, h in enumerate(header) if h == name]
        if not hits:
            raise SchemaError(f"missing column '{name}'")
        if len(hits) > 1:
            raise SchemaError(f"column '{name}' appears {len(hits)} times in the header")
        return hits[0]

    id_idx = column(config.id_column)
    label_idx = column(config.label_column)
    split_idx = column(config.split_column) if config.split_column else None
    if config.concept_columns is not None:
        concept_names = list(config.concept_columns)
    else:
        reserved = {config.id_column, config.label_column, config.split_column}
        concept_names = [h for h in header if h not in reserved]
        if not concept_names:
            raise SchemaError("no concept columns remain after removing role columns")
    concept_idx = [column(name) for name in concept_names]

    rows: list[tuple[str, list[str], int, str | None, str, int]] = []
    seen_ids: dict[str, int] = {}
    observed: list[set[str]] = [set() for _ in concept_names]
    for row in reader:
        line = reader.line_num
        if not row:
            continue  # blank line
        if len(row) != len(header):
            raise ParseError(f"line {line}: expected {len(header)} fields, found {len(row)}")
        record_id = row[id_idx].strip()
        if not record_id:
            raise SchemaError(f"line {line}: empty id in column '{config.id_column}'")
        if record_id in seen_ids:
            raise SchemaError(f"line {line}: duplicate id {record_id!r} "
                              f"(first seen at line {seen_ids[record_id]})")
        seen_ids[record_id] = line

        raw_label = row[label_idx].strip()
        decision = config.label_map.decide(raw_label)
        if decision is None:
            raise LabelMapError(f"line {line}: label {raw_label!r} matches no rule and "
                                "the label map has no default")

        split = _normalize_split(row[split_idx], line) if split_idx is not None else None

        values: list[str] = []
        for name, idx in zip(concept_names, concept_idx):
            cell = row[idx].strip()
            if not cell:
                cell = config.empty_as.get(name, "")
                if not cell:
                    raise SchemaError(f"line {line}: empty value for concept '{name}' and "
                                      "no empty-cell category is configured")
            declared = config.domains.get(name)
            if declared is not None and cell not in declared:
                raise SchemaError(f"line {line}: value {cell!r} for concept '{name}' "
                                  "is outside the declared domain")
            values.append(cell)
        for slot, cell in zip(observed, values):
            slot.add(cell)
        rows.append((record_id, values, decision, split, raw_label, line))

    attributes = []
    for name, slot in zip(concept_names, observed):
        domain = config.domains.get(name) or tuple(sorted(slot))
        if not domain and rows:
            raise SchemaError(f"concept '{name}' has an empty value domain")
        attributes.append(Attribute(name, tuple(domain)))
    schema = ConceptSchema(
        attributes=tuple(attributes),
        label_column=config.label_column,
        id_column=config.id_column,
        split_column=config.split_column,
    )

    index_maps = [{v: i for i, v in enumerate(a.values)} for a in attributes]
    records = tuple(
        Record(
            id=record_id,
            concepts=tuple(index_maps[i][v] for i, v in enumerate(values)),
            label=decision,
            split=split,
            raw_label=raw_label,
        )
        for record_id, values, decision, split, raw_label, _ in rows
    )
    return Dataset(schema=schema, records=records)


def load_dataset(path: str | Path, config: IngestConfig) -> Dataset:
    with open(path, encoding="utf-8", newline="") as handle:
        return parse_dataset(handle, config)


def serialize_dataset(dataset: Dataset) -> str:
    """Render a dataset back to delimited text in canonical column order.

    Columns: id, concepts in schema order, raw label, then the split column
    when the schema declares one. Re-parsing the output with the same
    config yields an identical Dataset.
    """
    schema = dataset.schema
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = [schema.id_column, *schema.attribute_names, schema.label_column]
    if schema.split_column:
        header.append(schema.split_column)
    writer.writerow(header)
    for record in dataset.records:
        row = [record.id,
               *(dataset.value_name(i, v) for i, v in enumerate(record.concepts)),
               record.raw_label]
        if schema.split_column:
            row.append(record.split or "")
        writer.writerow(row)
    return out.getvalue()


@dataclass(frozen=True)
class ValidationFinding:
    kind: str
    message: str
    record_id: str | None = None
    attribute: str | None = None
    row: int | None = None


def validate(dataset: Dataset) -> list[ValidationFinding]:
    """Report every invariant violation; an empty list means well-formed."""
    findings: list[ValidationFinding] = []
    schema = dataset.schema

    names = schema.attribute_names
    for name in names:
        if not name:
            findings.append(ValidationFinding("schema", "empty attribute name"))
    dupes = {n for n in names if names.count(n) > 1}
    for name in sorted(dupes):
        findings.append(ValidationFinding("schema", f"duplicate attribute name '{name}'",
                                          attribute=name))
    for attr in schema.attributes:
        if not attr.values:
            findings.append(ValidationFinding("schema", f"attribute '{attr.name}' has an "
                                              "empty value domain", attribute=attr.name))

    if not dataset.records:
        findings.append(ValidationFinding("empty-dataset",
                                          "dataset has no records; analysis requires at least one"))

    seen: dict[str, int] = {}
    for row, record in enumerate(dataset.records, start=1):
        if record.id in seen:
            findings.append(ValidationFinding(
                "duplicate-id", f"id {record.id!r} at row {row} duplicates row {seen[record.id]}",
                record_id=record.id, row=row))
        else:
            seen[record.id] = row
        if len(record.concepts) != len(schema.attributes):
            findings.append(ValidationFinding(
                "length-mismatch",
                f"row {row}: {len(record.concepts)} concept values for "
                f"{len(schema.attributes)} attributes", record_id=record.id, row=row))
        else:
            for attr, value in zip(schema.attributes, record.concepts):
                if not 0 <= value < len(attr.values):
                    findings.append(ValidationFinding(
                        "out-of-domain",
                        f"row {row}: value index {value} for attribute '{attr.name}' "
                        f"is outside its domain of {len(attr.values)}",
                        record_id=record.id, attribute=attr.name, row=row))
        if record.label not in (0, 1):
            findings.append(ValidationFinding(
                "bad-label", f"row {row}: label {record.label!r} is not 0 or 1",
                record_id=record.id, row=row))
        if record.split is not None and record.split not in VALID_SPLITS:
            findings.append(ValidationFinding(
                "bad-split", f"row {row}: split {record.split!r} is not one of "
                f"{', '.join(VALID_SPLITS)}", record_id=record.id, row=row))
    return findings
