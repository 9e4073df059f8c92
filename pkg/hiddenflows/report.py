"""Report documents: building, JSON/CSV emission, reading back and re-checking."""
from __future__ import annotations

import csv
import io
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import orjson

from hiddenflows import __version__
from hiddenflows.analysis import AnalysisResult, Endpoint, TaintFlow
from hiddenflows.catalog import DataClass, SinkCategory
from hiddenflows.conformance import (
    ConformanceCase,
    ConformanceResult,
    CorpusSummary,
    aggregate,
)
from hiddenflows.corpus import LocStats, PackageId, ValidityStatus
from hiddenflows.risk import RiskFinding, RiskSummary, Severity, summarize_risk

SCHEMA_VERSION = "1.0"
JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2
CSV_COLUMNS = [
    "package",
    "version",
    "validity",
    "nodes",
    "unparsable_nodes",
    "loc",
    "s_in",
    "s_out",
    "d_src",
    "d_snk",
    "case",
    "extra_src",
    "extra_snk",
    "flows",
    "low",
    "medium",
    "high",
    "error",
]


class ReportError(Exception):
    """The report cannot be written, read or does not check out."""


@dataclass
class PackageOutcome:
    """Everything one package contributes to a report."""

    package: PackageId
    validity: Optional[ValidityStatus] = None
    conformance: Optional[ConformanceResult] = None
    analysis: Optional[AnalysisResult] = None
    findings: list[RiskFinding] = field(default_factory=list)
    loc: Optional[LocStats] = None
    diagnostics: list[str] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def classified(self) -> bool:
        return self.conformance is not None


def _endpoint(endpoint: Endpoint) -> dict:
    return {
        "kind": endpoint.kind.value,
        "entry": endpoint.entry_id,
        "file": endpoint.location.file,
        "line": endpoint.location.line,
        "symbol": endpoint.location.symbol,
    }


def _flow(flow: TaintFlow) -> dict:
    return {
        "source": _endpoint(flow.source),
        "sink": _endpoint(flow.sink),
        "data_class": flow.data_class.value if flow.data_class is not None else None,
        "sink_category": flow.sink_category.value,
        "steps": [
            {"file": s.file, "line": s.line, "description": s.description, "rule": s.rule.value}
            for s in flow.steps
        ],
    }


def _finding(finding: RiskFinding) -> dict:
    record = {
        "data_class": finding.data_class.value,
        "action": finding.action.value,
        "severity": finding.severity.value,
        "group": finding.group,
        "extrapolated": finding.extrapolated,
        "warning": finding.warning,
    }
    if finding.flow is not None:
        record["source"] = str(finding.flow.source.location)
        record["sink"] = str(finding.flow.sink.location)
    return record


def package_record(outcome: PackageOutcome) -> dict:
    """The JSON record of one package."""
    record: dict[str, Any] = {
        "package": str(outcome.package),
        "name": outcome.package.name,
        "version": outcome.package.version,
        "validity": outcome.validity.value if outcome.validity is not None else None,
        "diagnostics": list(outcome.diagnostics),
        "error": outcome.error,
    }
    if outcome.loc is not None:
        record["loc"] = {"total": outcome.loc.total_loc, "per_extension": outcome.loc.per_extension}
    result = outcome.conformance
    if result is not None:
        record.update(
            {
                "nodes": result.node_count,
                "unparsable_nodes": result.unparsable_nodes,
                "spec": {"inputs": result.s_in, "outputs": result.s_out},
                "detected": {"sources": result.d_src, "sinks": result.d_snk},
                "case": result.case.value,
                "extra_sources": result.extra_src,
                "extra_sinks": result.extra_snk,
                "flow_count": result.flow_count,
            }
        )
    if outcome.analysis is not None:
        record["flows"] = [_flow(f) for f in outcome.analysis.flows]
    if outcome.classified:
        record["findings"] = [_finding(f) for f in outcome.findings]
    return record


def summary_block(corpus: Optional[CorpusSummary], risk: RiskSummary) -> dict:
    """The summary section, with every map keyed by strings."""
    conformance = None
    if corpus is not None:
        conformance = asdict(corpus)
        conformance["divergence_histogram"] = {
            str(k): v for k, v in corpus.divergence_histogram.items()
        }
    return {"conformance": conformance, "risk": asdict(risk)}


def build_report(outcomes: list[PackageOutcome], catalog_version: str) -> dict:
    """Assemble the report document of a run

    Args:
        outcomes (list[PackageOutcome]): One outcome per package, in any order
        catalog_version (str): Version of the endpoint catalog used

    Returns:
        dict: The document, packages ordered by id
    """
    outcomes = sorted(outcomes, key=lambda o: o.package)
    classified = [o for o in outcomes if o.classified]
    failures = sum(1 for o in outcomes if o.error is not None)
    corpus = None
    if classified:
        corpus = aggregate(
            [o.conformance for o in classified],
            {o.package: o.loc for o in classified if o.loc is not None},
            {o.package: o.conformance.node_count for o in classified},
            failures=failures,
        )
    risk = summarize_risk(f for o in classified for f in o.findings)
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "catalog_version": catalog_version,
        "packages": [package_record(o) for o in outcomes],
        "summary": summary_block(corpus, risk),
    }


def _results_from_records(records: list[dict]) -> list[tuple[ConformanceResult, LocStats]]:
    parsed = []
    for record in records:
        if record.get("case") is None:
            continue
        package = PackageId(record["name"], record["version"])
        result = ConformanceResult(
            package=package,
            s_in=record["spec"]["inputs"],
            s_out=record["spec"]["outputs"],
            d_src=record["detected"]["sources"],
            d_snk=record["detected"]["sinks"],
            case=ConformanceCase(record["case"]),
            unparsable_nodes=record["unparsable_nodes"],
            node_count=record["nodes"],
            flow_count=record["flow_count"],
        )
        loc = record.get("loc") or {"total": 0, "per_extension": {}}
        parsed.append((result, LocStats(loc["total"], loc["per_extension"])))
    return parsed


def _findings_from_records(records: list[dict]) -> list[RiskFinding]:
    return [
        RiskFinding(
            data_class=DataClass(f["data_class"]),
            action=SinkCategory(f["action"]),
            severity=Severity(f["severity"]),
            group=f["group"],
            extrapolated=f["extrapolated"],
            warning=f["warning"],
        )
        for record in records
        if record.get("case") is not None
        for f in record.get("findings", [])
    ]


def recompute_summary(document: dict) -> dict:
    """Rebuild the summary block from the per-package records alone

    Raises:
        ReportError: If a record lacks a field the summary depends on
    """
    records = document.get("packages", [])
    try:
        parsed = _results_from_records(records)
        findings = _findings_from_records(records)
    except (KeyError, TypeError, ValueError) as e:
        raise ReportError(f"Malformed package record: {e}") from e
    failures = sum(1 for r in records if r.get("error") is not None)
    corpus = None
    if parsed:
        corpus = aggregate(
            [result for result, _ in parsed],
            {result.package: loc for result, loc in parsed},
            {result.package: result.node_count for result, _ in parsed},
            failures=failures,
        )
    return summary_block(corpus, summarize_risk(findings))


def verify_report(document: dict) -> None:
    """Raise ReportError unless the embedded summary recomputes exactly."""
    if document.get("schema_version") != SCHEMA_VERSION:
        raise ReportError(
            f"Unsupported schema_version {document.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    if recompute_summary(document) != document.get("summary"):
        raise ReportError("Embedded summary does not match the package records")


def _csv_row(record: dict) -> list:
    severities = {s.value: 0 for s in Severity}
    for finding in record.get("findings", []):
        severities[finding["severity"]] += 1
    classified = record.get("case") is not None
    spec = record.get("spec", {})
    detected = record.get("detected", {})
    row = [
        record["name"],
        record["version"],
        record.get("validity") or "",
        record.get("nodes", ""),
        record.get("unparsable_nodes", ""),
        (record.get("loc") or {}).get("total", ""),
        spec.get("inputs", ""),
        spec.get("outputs", ""),
        detected.get("sources", ""),
        detected.get("sinks", ""),
        record.get("case") or "",
        record.get("extra_sources", ""),
        record.get("extra_sinks", ""),
        record.get("flow_count", ""),
    ]
    row += [severities[s.value] if classified else "" for s in Severity]
    row.append(record.get("error") or "")
    return row


def emit_report(document: dict, fmt: str = "json") -> bytes:
    """Serialize a report document

    Args:
        document (dict): A document from build_report or load_report
        fmt (str): "json" for the full document, "csv" for one row per package

    Returns:
        bytes: Identical bytes for identical documents
    """
    if fmt == "json":
        return orjson.dumps(document, option=JSON_OPTIONS) + b"\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in document.get("packages", []):
            writer.writerow(_csv_row(record))
        return buffer.getvalue().encode("utf-8")
    raise ValueError(f"Unknown report format: {fmt}")


def write_report(document: dict, out_dir: str | Path, fmt: str = "json") -> Path:
    """Write report.<fmt> into out_dir and return its path."""
    out_dir = Path(out_dir)
    target = out_dir / f"report.{fmt}"
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        target.write_bytes(emit_report(document, fmt))
    except OSError as e:
        raise ReportError(f"Cannot write {target}: {e}") from e
    return target


def load_report(path: str | Path) -> dict:
    """Read a JSON report

    Raises:
        ReportError: If the file is unreadable or not a JSON object
    """
    try:
        document = orjson.loads(Path(path).read_bytes())
    except (OSError, orjson.JSONDecodeError) as e:
        raise ReportError(f"Cannot read report {path}: {e}") from e
    if not isinstance(document, dict):
        raise ReportError(f"Report {path} is not a JSON object")
    return document
