"""Concept/label consistency auditing for annotated tabular datasets.

The library partitions records by their concept annotations, measures
how often identical annotations disagree on the binary label, derives
the exact accuracy ceiling that conflict imposes on any classifier
reading only the concepts, and produces consistency-filtered dataset
variants with removal manifests and retraining aids.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .dataset import (DEFAULT_CONFIG, Attribute, ConceptSchema, Dataset,
                      IngestConfig, LabelMap, Record, ValidationFinding,
                      load_dataset, parse_dataset, serialize_dataset, validate)
from .errors import (AuditError, LabelMapError, ParseError, SchemaError,
                     SynthSpecError)
from .filtering import (ClassWeights, FilterResult, ManifestRow, class_weights,
                        export_dataset, export_manifest, filter_asymmetric,
                        filter_split_aware, filter_symmetric)
from .report import AuditReport, build_report, render_report
from .roughset import (MajorityVoteClassifier, Partition, Profile,
                       RegionAnalysis, SplitSummary, accuracy_ceiling,
                       brute_force_ceiling, build_partition, compute_regions,
                       conflict_ratio, majority_vote_classifier,
                       per_split_ceiling)
from .stats import (DistributionSummary, EnrichmentEntry, JointCell, JointMatrix,
                    PrevalenceEntry, PrevalenceTable, WilsonInterval,
                    boundary_enrichment, conflict_distribution,
                    joint_rate_matrix, prevalence_table, top_ambiguous_profiles,
                    wilson_interval)
from .synth import SynthResult, SynthSpec, expected_values, generate, parse_plan

__all__ = [
    "__version__",
    "DEFAULT_CONFIG", "Attribute", "ConceptSchema", "Dataset", "IngestConfig",
    "LabelMap",
    "Record", "ValidationFinding", "load_dataset", "parse_dataset",
    "serialize_dataset", "validate",
    "AuditError", "LabelMapError", "ParseError", "SchemaError", "SynthSpecError",
    "ClassWeights", "FilterResult", "ManifestRow", "class_weights",
    "export_dataset", "export_manifest", "filter_asymmetric",
    "filter_split_aware", "filter_symmetric",
    "AuditReport", "build_report", "render_report",
    "MajorityVoteClassifier", "Partition", "Profile", "RegionAnalysis",
    "SplitSummary", "accuracy_ceiling", "brute_force_ceiling", "build_partition",
    "compute_regions", "conflict_ratio", "majority_vote_classifier",
    "per_split_ceiling",
    "DistributionSummary", "EnrichmentEntry", "JointCell", "JointMatrix",
    "PrevalenceEntry", "PrevalenceTable", "WilsonInterval",
    "boundary_enrichment", "conflict_distribution", "joint_rate_matrix",
    "prevalence_table", "top_ambiguous_profiles", "wilson_interval",
    "SynthResult", "SynthSpec", "expected_values", "generate", "parse_plan",
]
