"""Synthetic datasets with a planted partition structure.

A plan is a list of (label-1 count, label-0 count) pairs, one per
intended profile. Generation assigns each profile a distinct random
concept signature and emits one record per planned label, so the
partition of the output is the plan itself. The expected audit values
are computed from the plan in closed form, never by running the audit,
which makes the sidecar an independent check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ._util import fraction_payload
from .dataset import Attribute, ConceptSchema, Dataset, Record
from .errors import SynthSpecError

_MAX_DRAWS = 200_000


@dataclass(frozen=True)
class SynthSpec:
    """Plan for one synthetic dataset."""

    profiles: tuple[tuple[int, int], ...]  # (count_label1, count_label0)
    n_attributes: int = 4
    values_per_attribute: int = 3
    seed: int = 0

    def validate(self) -> None:
        if not self.profiles:
            raise SynthSpecError("plan needs at least one profile")
        for i, (ones, zeros) in enumerate(self.profiles):
            if ones < 0 or zeros < 0:
                raise SynthSpecError(f"profile {i}: negative count")
            if ones + zeros == 0:
                raise SynthSpecError(f"profile {i}: empty profile")
        if self.n_attributes < 1:
            raise SynthSpecError("need at least one concept attribute")
        if self.values_per_attribute < 2:
            raise SynthSpecError("each attribute needs at least two values")
        capacity = self.values_per_attribute ** self.n_attributes
        if len(self.profiles) > capacity:
            raise SynthSpecError(
                f"{len(self.profiles)} profiles cannot receive distinct signatures "
                f"from {capacity} possible concept vectors")


def parse_plan(text: str) -> tuple[tuple[int, int], ...]:
    """Parse "1:0,0:4,2:2" into ((1, 0), (0, 4), (2, 2))."""
    profiles = []
    for chunk in text.split(","):
        parts = chunk.strip().split(":")
        if len(parts) != 2:
            raise SynthSpecError(f"bad plan entry {chunk.strip()!r}; expected ones:zeros")
        try:
            profiles.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise SynthSpecError(f"bad plan entry {chunk.strip()!r}; counts must be "
                                 "integers") from None
    return tuple(profiles)


@dataclass(frozen=True)
class SynthResult:
    dataset: Dataset
    expected: dict
    config: dict


def expected_values(spec: SynthSpec) -> dict:
    """Closed-form audit outcome of the plan."""
    n = sum(a + b for a, b in spec.profiles)
    positive = sum(a + b for a, b in spec.profiles if a == 0 or b == 0)
    boundary = n - positive
    attainable = positive + sum(max(a, b) for a, b in spec.profiles if a and b)
    conflicting = [
        {
            "count_label1": a,
            "count_label0": b,
            "gamma_k": fraction_payload(Fraction(min(a, b), a + b)),
        }
        for a, b in spec.profiles if a and b
    ]
    return {
        "n_records": n,
        "n_profiles": len(spec.profiles),
        "n_conflicting_profiles": len(conflicting),
        "positive_size": positive,
        "boundary_size": boundary,
        "gamma": fraction_payload(Fraction(positive, n)),
        "ceiling": fraction_payload(Fraction(attainable, n)),
        "n_tie_profiles": sum(1 for a, b in spec.profiles if a and a == b),
        "conflicting_profiles": conflicting,
    }


def generate(spec: SynthSpec) -> SynthResult:
    spec.validate()
    rng = random.Random(spec.seed)
    signatures: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    draws = 0
    while len(signatures) < len(spec.profiles):
        candidate = tuple(rng.randrange(spec.values_per_attribute)
                          for _ in range(spec.n_attributes))
        draws += 1
        if draws > _MAX_DRAWS:
            raise SynthSpecError("could not draw enough distinct signatures; "
                                 "widen the attribute domains or shrink the plan")
        if candidate not in seen:
            seen.add(candidate)
            signatures.append(candidate)

    attributes = tuple(
        Attribute(name=f"c{i}",
                  values=tuple(f"v{j}" for j in range(spec.values_per_attribute)))
        for i in range(spec.n_attributes))
    schema = ConceptSchema(attributes=attributes, label_column="label", id_column="id")

    records = []
    counter = 0
    for signature, (ones, zeros) in zip(signatures, spec.profiles):
        for label, count in ((1, ones), (0, zeros)):
            for _ in range(count):
                records.append(Record(
                    id=f"r{counter:04d}",
                    concepts=signature,
                    label=label,
                    raw_label=str(label),
                ))
                counter += 1

    config = {
        "id_column": "id",
        "label_column": "label",
        "concept_columns": [a.name for a in attributes],
        "label_map": {"rules": [["1", 1], ["0", 0]]},
        # explicit domains so re-parsing reproduces this exact schema even
        # when the plan never uses some values
        "domains": {a.name: list(a.values) for a in attributes},
    }
    return SynthResult(
        dataset=Dataset(schema=schema, records=tuple(records)),
        expected=expected_values(spec),
        config=config,
    )
