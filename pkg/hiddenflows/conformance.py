"""Comparison of detected endpoints with the ports a node package declares."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from hiddenflows.analysis import AnalysisResult, Location, TaintFlow
from hiddenflows.catalog import EndpointKind
from hiddenflows.corpus import LocStats, NodePackage, PackageId
from hiddenflows.spec import SpecTotals, spec_totals
from hiddenflows.utils import mean, percentage

# Endpoint identity is the (file, line, symbol) triple of its location
EndpointKey = Location


class ConformanceCase(str, Enum):
    CONVERGENCE = "convergence"
    DIVERGENCE = "divergence"
    ABSENCE = "absence"


@dataclass(frozen=True)
class ConformanceResult:
    package: PackageId
    s_in: int
    s_out: int
    d_src: int
    d_snk: int
    case: ConformanceCase
    unparsable_nodes: int = 0
    node_count: int = 0
    flow_count: int = 0

    @property
    def extra_src(self) -> int:
        return max(0, self.d_src - self.s_in)

    @property
    def extra_snk(self) -> int:
        return max(0, self.d_snk - self.s_out)

    @property
    def extras(self) -> int:
        return self.extra_src + self.extra_snk


@dataclass(frozen=True)
class CaseStats:
    packages: int
    percentage: float
    nodes: int
    node_percentage: float
    mean_nodes: float
    mean_loc: float
    loc_per_node: float


@dataclass(frozen=True)
class CorpusSummary:
    packages: int
    nodes: int
    cases: dict[str, CaseStats]
    divergence_histogram: dict[int, int]
    mean_extra_sources: float
    mean_extra_sinks: float
    mean_extras: float
    extras_per_node: float
    total_flows: int
    total_endpoints: int
    packages_with_unparsable_nodes: int
    failures: int = field(default=0)


def merge_endpoints(flows: Iterable[TaintFlow]) -> tuple[set[EndpointKey], set[EndpointKey]]:
    """Distinct sources and sinks taking part in at least one flow

    Args:
        flows (Iterable[TaintFlow]): Flows of one package

    Returns:
        tuple[set[EndpointKey], set[EndpointKey]]: Source keys and sink keys
    """
    sources: set[EndpointKey] = set()
    sinks: set[EndpointKey] = set()
    for flow in flows:
        sources.add(flow.source.location)
        sinks.add(flow.sink.location)
    return sources, sinks


def classify(s_in: int, s_out: int, d_src: int, d_snk: int) -> ConformanceCase:
    """Conformance case of detected counts against declared counts

    More detected sources or sinks than declared ports is a divergence, even
    when the other side shows absences. Otherwise fewer detected than declared
    is an absence, and equality on both sides is a convergence.
    """
    for name, value in (("s_in", s_in), ("s_out", s_out), ("d_src", d_src), ("d_snk", d_snk)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")
    if d_src > s_in or d_snk > s_out:
        return ConformanceCase.DIVERGENCE
    if d_src < s_in or d_snk < s_out:
        return ConformanceCase.ABSENCE
    return ConformanceCase.CONVERGENCE


def check_conformance(
    pkg: NodePackage, analysis: AnalysisResult, count_syntactic: bool = False
) -> ConformanceResult:
    """Classify one analyzed package

    Args:
        pkg (NodePackage): The package, with its parsed node specs
        analysis (AnalysisResult): Flows found in the package
        count_syntactic (bool): Count every matched endpoint instead of flow participants

    Returns:
        ConformanceResult: Declared and detected counts with the resulting case
    """
    totals: SpecTotals = spec_totals(pkg.specs)
    if count_syntactic:
        endpoints = analysis.endpoints_syntactic
        d_src = len({e.location for e in endpoints if e.kind is EndpointKind.SOURCE})
        d_snk = len({e.location for e in endpoints if e.kind is EndpointKind.SINK})
    else:
        sources, sinks = merge_endpoints(analysis.flows)
        d_src, d_snk = len(sources), len(sinks)
    return ConformanceResult(
        package=pkg.id,
        s_in=totals.s_in,
        s_out=totals.s_out,
        d_src=d_src,
        d_snk=d_snk,
        case=classify(totals.s_in, totals.s_out, d_src, d_snk),
        unparsable_nodes=totals.unparsable_nodes,
        node_count=pkg.node_count,
        flow_count=len(analysis.flows),
    )


def aggregate(
    results: list[ConformanceResult],
    loc: Mapping[PackageId, LocStats],
    nodes_per_pkg: Mapping[PackageId, int],
    failures: int = 0,
) -> CorpusSummary:
    """Corpus statistics over classified packages

    Args:
        results (list[ConformanceResult]): One result per package
        loc (Mapping[PackageId, LocStats]): Lines of code per package
        nodes_per_pkg (Mapping[PackageId, int]): Node count per package
        failures (int): Packages that failed before classification

    Returns:
        CorpusSummary: Case distribution, per-case means and the divergence histogram

    Raises:
        ValueError: If results is empty
    """
    if not results:
        raise ValueError("Cannot aggregate an empty list of results")

    def nodes_of(result: ConformanceResult) -> int:
        return nodes_per_pkg.get(result.package, result.node_count)

    def loc_of(result: ConformanceResult) -> int:
        stats = loc.get(result.package)
        return stats.total_loc if stats is not None else 0

    total_nodes = sum(nodes_of(r) for r in results)
    cases = {}
    for case in ConformanceCase:
        members = [r for r in results if r.case is case]
        nodes = sum(nodes_of(r) for r in members)
        lines = sum(loc_of(r) for r in members)
        cases[case.value] = CaseStats(
            packages=len(members),
            percentage=percentage(len(members), len(results)),
            nodes=nodes,
            node_percentage=percentage(nodes, total_nodes),
            mean_nodes=mean(nodes_of(r) for r in members),
            mean_loc=mean(loc_of(r) for r in members),
            loc_per_node=round(lines / nodes, 4) if nodes else 0.0,
        )

    divergent = [r for r in results if r.case is ConformanceCase.DIVERGENCE]
    divergent_nodes = sum(nodes_of(r) for r in divergent)
    histogram = Counter(r.extras for r in divergent)
    return CorpusSummary(
        packages=len(results),
        nodes=total_nodes,
        cases=cases,
        divergence_histogram=dict(sorted(histogram.items())),
        mean_extra_sources=mean(r.extra_src for r in divergent),
        mean_extra_sinks=mean(r.extra_snk for r in divergent),
        mean_extras=mean(r.extras for r in divergent),
        extras_per_node=(
            round(sum(r.extras for r in divergent) / divergent_nodes, 4) if divergent_nodes else 0.0
        ),
        total_flows=sum(r.flow_count for r in results),
        total_endpoints=sum(r.d_src + r.d_snk for r in results),
        packages_with_unparsable_nodes=sum(1 for r in results if r.unparsable_nodes),
        failures=failures,
    )
