"""Command-line interface.

Verbs: audit, filter, synth, version. Exit codes: 0 success, 2 flag or
usage errors (raised by the argument parser), 3 input parse failures,
4 schema or label-map violations, 5 filesystem errors. All outputs are
deterministic functions of the inputs and flags; nothing embeds clocks,
hostnames, or absolute paths.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from ._util import atomic_write_text, format_fraction, fraction_payload
from .dataset import (DEFAULT_CONFIG, Dataset, IngestConfig, load_dataset,
                      serialize_dataset, validate)
from .errors import AuditError, SchemaError
from .figures import render_figures
from .filtering import (STRATEGIES, ClassWeights, FilterResult, class_weights,
                        export_dataset, export_manifest, filter_asymmetric,
                        filter_split_aware, filter_symmetric)
from .report import FORMATS, build_report, render_report
from .synth import SynthSpec, generate, parse_plan


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _load_config(config_path: str | None) -> IngestConfig:
    if config_path is None:
        return DEFAULT_CONFIG
    return IngestConfig.from_json(config_path)


def _load_input(input_path: str, config: IngestConfig) -> Dataset:
    dataset = load_dataset(input_path, config)
    findings = validate(dataset)
    if findings:
        shown = "; ".join(f.message for f in findings[:3])
        raise SchemaError(f"{len(findings)} validation findings: {shown}")
    return dataset


def _echo_written(paths: list[Path]) -> None:
    for path in sorted(paths):
        click.echo(f"wrote {path}")


class _ErrorMappingGroup(click.Group):
    """Translate library and filesystem errors into the exit-code contract."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except AuditError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(exc.exit_code)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(5)


@click.group(cls=_ErrorMappingGroup)
def cli() -> None:
    """Audit concept-annotated datasets for label conflict, compute the
    accuracy ceiling, and emit consistency-filtered variants."""


@cli.command()
@click.option("--input", "-i", "input_path", required=True,
              help="Delimited dataset to audit.")
@click.option("--config", "-c", "config_path", envvar="CONCEPTAUDIT_CONFIG",
              help="Ingestion config JSON. Defaults to the built-in convention.")
@click.option("--out-dir", "-o", required=True, help="Directory for report files.")
@click.option("--format", "fmt", type=click.Choice([*FORMATS, "all"]),
              default="all", show_default=True, help="Report format to write.")
@click.option("--top-k", type=click.IntRange(min=1), default=5, show_default=True,
              help="How many most-ambiguous profiles to list.")
@click.option("--confidence", type=click.FloatRange(0.0, 1.0, min_open=True, max_open=True),
              default=0.95, show_default=True, help="Interval confidence level.")
@click.option("--joint", "joints", multiple=True, metavar="A,B",
              help="Attribute pair for a joint rate matrix; repeatable. "
                   "Defaults to known checklist pairs present in the schema.")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Also render chart PNGs for the report tables.")
@click.option("--name", default=None, help="Report name; defaults to the input stem.")
def audit(input_path: str, config_path: str | None, out_dir: str, fmt: str,
          top_k: int, confidence: float, joints: tuple[str, ...], figures: bool,
          name: str | None) -> None:
    """Analyze concept/label consistency and write an audit report."""
    pairs = None
    if joints:
        parsed = []
        for joint in joints:
            parts = [p.strip() for p in joint.split(",")]
            if len(parts) != 2 or not all(parts):
                raise click.BadParameter(f"expected A,B with two attribute names, "
                                         f"got {joint!r}", param_hint="--joint")
            parsed.append((parts[0], parts[1]))
        pairs = tuple(parsed)

    config = _load_config(config_path)
    dataset = _load_input(input_path, config)
    report = build_report(
        dataset,
        name=name or Path(input_path).stem,
        confidence=confidence,
        top_k=top_k,
        joints=pairs,
        baseline=config.baseline,
    )

    out = Path(out_dir)
    written: list[Path] = []
    formats = FORMATS if fmt == "all" else (fmt,)
    for chosen in formats:
        for file_name, text in render_report(report, chosen).items():
            path = out / file_name
            atomic_write_text(path, text)
            written.append(path)
    if figures:
        written.extend(render_figures(report, out))

    regions = report.regions
    click.echo(f"dataset: {report.name}")
    click.echo(f"records={len(dataset.records)} attributes={len(dataset.schema.attributes)} "
               f"label1={report.label1_records}")
    click.echo(f"profiles={len(regions.partition)} "
               f"conflicting={len(regions.partition.conflicting)} "
               f"boundary_records={len(regions.boundary_ids)}")
    click.echo(f"gamma={format_fraction(report.gamma)} "
               f"({report.gamma.numerator}/{report.gamma.denominator})")
    click.echo(f"ceiling={format_fraction(report.ceiling)} "
               f"({report.ceiling.numerator}/{report.ceiling.denominator})")
    _echo_written(written)


def _fraction_or_null(value: Fraction | None) -> dict | None:
    return None if value is None else fraction_payload(value)


def _metrics_payload(result: FilterResult) -> dict:
    return {
        "n_original": result.n_original,
        "n_retained": result.n_retained,
        "n_removed": result.n_removed,
        "label1_original": result.label1_original,
        "label1_retained": result.label1_retained,
        "label1_retained_fraction": _fraction_or_null(result.label1_retained_fraction),
        "imbalance": result.imbalance,
        "residual_gamma": fraction_payload(result.residual_gamma),
        "residual_ceiling": fraction_payload(result.residual_ceiling),
    }


def _weights_payload(weights: ClassWeights) -> dict:
    return {
        "n": weights.n,
        "labels": {
            "0": _fraction_or_null(weights.label_weights[0]),
            "1": _fraction_or_null(weights.label_weights[1]),
        },
        "concepts": {
            attr: {value: _fraction_or_null(w)
                   for value, w in zip(weights.concept_domains[attr],
                                       weights.concept_weights[attr])}
            for attr in weights.concept_domains
        },
        "warnings": list(weights.warnings),
    }


def _echo_metrics(label: str, result: FilterResult) -> None:
    fraction = result.label1_retained_fraction
    kept = "n/a" if fraction is None else format_fraction(fraction)
    click.echo(f"{label}: retained={result.n_retained}/{result.n_original} "
               f"label1_retained={result.label1_retained}/{result.label1_original} "
               f"({kept}) imbalance={result.imbalance or 'n/a'} "
               f"residual_gamma={format_fraction(result.residual_gamma)} "
               f"residual_ceiling={format_fraction(result.residual_ceiling)}")


@cli.command("filter")
@click.option("--input", "-i", "input_path", required=True,
              help="Delimited dataset to filter.")
@click.option("--config", "-c", "config_path", envvar="CONCEPTAUDIT_CONFIG",
              help="Ingestion config JSON. Defaults to the built-in convention.")
@click.option("--out-dir", "-o", required=True, help="Directory for output files.")
@click.option("--strategy", type=click.Choice(STRATEGIES), required=True,
              help="Boundary removal strategy.")
@click.option("--split-aware", is_flag=True, default=False,
              help="One whole-dataset decision, outputs and metrics per split.")
def filter_cmd(input_path: str, config_path: str | None, out_dir: str,
               strategy: str, split_aware: bool) -> None:
    """Remove boundary records and export the retained dataset, a removal
    manifest, and retraining metrics."""
    config = _load_config(config_path)
    dataset = _load_input(input_path, config)
    out = Path(out_dir)
    written: list[Path] = []

    if split_aware:
        results = filter_split_aware(dataset, strategy)
        for split, result in results.items():
            retained_path = out / f"retained_{split}.csv"
            manifest_path = out / f"removal_manifest_{split}.csv"
            export_dataset(result.retained, retained_path)
            export_manifest(result, manifest_path)
            written += [retained_path, manifest_path]
            _echo_metrics(split, result)
        weight_source = results["train"].retained if "train" in results else None
        payload = {
            "schema_version": 1,
            "strategy": strategy,
            "split_aware": True,
            "splits": {split: _metrics_payload(r) for split, r in results.items()},
        }
    else:
        result = filter_symmetric(dataset) if strategy == "symmetric" \
            else filter_asymmetric(dataset)
        retained_path = out / "retained.csv"
        manifest_path = out / "removal_manifest.csv"
        export_dataset(result.retained, retained_path)
        export_manifest(result, manifest_path)
        written += [retained_path, manifest_path]
        _echo_metrics(strategy, result)
        weight_source = result.retained
        payload = {
            "schema_version": 1,
            "strategy": strategy,
            "split_aware": False,
            "metrics": _metrics_payload(result),
        }

    if weight_source is not None:
        payload["class_weights"] = _weights_payload(class_weights(weight_source))
    metrics_path = out / "filter.json"
    atomic_write_text(metrics_path, _json_text(payload))
    written.append(metrics_path)
    _echo_written(written)


@cli.command()
@click.option("--plan", required=True, metavar="ONES:ZEROS,...",
              help="Planted profiles as label-1:label-0 pairs, e.g. 5:0,0:4,2:2.")
@click.option("--attributes", type=click.IntRange(min=1), default=4,
              show_default=True, help="Number of concept attributes.")
@click.option("--values", type=click.IntRange(min=2), default=3,
              show_default=True, help="Domain size of every attribute.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for signature assignment.")
@click.option("--out-dir", "-o", required=True, help="Directory for output files.")
def synth(plan: str, attributes: int, values: int, seed: int, out_dir: str) -> None:
    """Generate a synthetic dataset with a planted partition, its parsing
    config, and a sidecar of closed-form expected audit values."""
    spec = SynthSpec(
        profiles=parse_plan(plan),
        n_attributes=attributes,
        values_per_attribute=values,
        seed=seed,
    )
    result = generate(spec)
    out = Path(out_dir)
    written = []
    for file_name, text in (
        ("dataset.csv", serialize_dataset(result.dataset)),
        ("expected.json", _json_text(result.expected)),
        ("config.json", _json_text(result.config)),
    ):
        path = out / file_name
        atomic_write_text(path, text)
        written.append(path)
    click.echo(f"records={result.expected['n_records']} "
               f"profiles={result.expected['n_profiles']} "
               f"conflicting={result.expected['n_conflicting_profiles']}")
    click.echo(f"gamma={result.expected['gamma']['decimal']} "
               f"ceiling={result.expected['ceiling']['decimal']}")
    _echo_written(written)


@cli.command()
def version() -> None:
    """Print the package version."""
    click.echo(f"conceptaudit {__version__}")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
