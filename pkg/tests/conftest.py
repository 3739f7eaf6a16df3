"""Shared builders for tests.

`dataset_from_plan` constructs a dataset directly from (label-1, label-0)
profile counts without going through the parser or the synthesizer, so
tests that check those components against it stay independent.
"""

from __future__ import annotations

import math

import pytest

from conceptaudit.dataset import Attribute, ConceptSchema, Dataset, Record


def dataset_from_plan(plan: list[tuple[int, int]],
                      splits: list[str] | None = None) -> Dataset:
    """One profile per plan entry; signatures are distinct base-b pairs."""
    base = max(2, math.isqrt(max(len(plan) - 1, 0)) + 1)
    values = tuple(f"v{i}" for i in range(base))
    schema = ConceptSchema(
        attributes=(Attribute("a", values), Attribute("b", values)),
        label_column="label",
        id_column="id",
        split_column="split" if splits else None,
    )
    records = []
    counter = 0
    for i, (ones, zeros) in enumerate(plan):
        signature = (i // base, i % base)
        for label, count in ((1, ones), (0, zeros)):
            for _ in range(count):
                records.append(Record(
                    id=f"r{counter}",
                    concepts=signature,
                    label=label,
                    split=splits[counter % len(splits)] if splits else None,
                    raw_label=str(label),
                ))
                counter += 1
    return Dataset(schema=schema, records=tuple(records))


@pytest.fixture
def four_records() -> Dataset:
    """Two records on one mixed profile, two pure singletons.

    gamma = 2/4, ceiling = 3/4; the mixed profile is a 1-1 tie.
    """
    return dataset_from_plan([(1, 1), (1, 0), (1, 0)])
