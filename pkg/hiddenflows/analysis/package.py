"""Package-level analysis: every script of a node package, file by file."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from hiddenflows.analysis.jsparser import SyntaxTree, parse_js
from hiddenflows.analysis.taint import Endpoint, FileAnalysis, TaintFlow, analyze_file
from hiddenflows.analysis.typescript import strip_types
from hiddenflows.catalog import Catalog
from hiddenflows.logs import logger
from hiddenflows.spec.scripts import script_regions

if TYPE_CHECKING:
    from hiddenflows.corpus.package import NodePackage, PackageId

SKIPPED_DIRECTORIES = ("node_modules/",)
SKIPPED_SUFFIXES = (".min.js", ".d.ts")


@dataclass
class AnalysisResult:
    package: PackageId
    flows: list[TaintFlow] = field(default_factory=list)
    endpoints_syntactic: list[Endpoint] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)
    files_analyzed: int = 0


def _wanted(path: str) -> bool:
    lowered = path.lower()
    if any(lowered.startswith(d) or f"/{d}" in lowered for d in SKIPPED_DIRECTORIES):
        return False
    if lowered.endswith(SKIPPED_SUFFIXES):
        return False
    return lowered.endswith((".js", ".cjs", ".mjs", ".ts", ".html"))


def package_trees(pkg: NodePackage) -> tuple[list[SyntaxTree], list[str]]:
    """Syntax trees of every script in the package, one per file or HTML script region."""
    trees: list[SyntaxTree] = []
    diagnostics: list[str] = []
    for entry in pkg.files:
        if not _wanted(entry.path):
            continue
        try:
            text = (pkg.root / entry.path).read_text(encoding="utf-8", errors="replace")
        except OSError as e:
            diagnostics.append(f"{entry.path}: unreadable ({e})")
            continue
        lowered = entry.path.lower()
        if lowered.endswith(".html"):
            for region in script_regions(text):
                if region.is_javascript and region.text.strip():
                    trees.append(parse_js(region.padded_text(), entry.path))
        elif lowered.endswith(".ts"):
            trees.append(parse_js(strip_types(text), entry.path))
        else:
            trees.append(parse_js(text, entry.path))
    return trees, diagnostics


def analyze_package(pkg: NodePackage, catalog: Catalog) -> AnalysisResult:
    """Analyze every .js/.ts file and HTML script region of a package

    Flows are found per file; nothing links one file to another.

    Args:
        pkg (NodePackage): A loaded package
        catalog (Catalog): Sources and sinks to match

    Returns:
        AnalysisResult: Flows and endpoints of all files, ordered by location
    """
    trees, diagnostics = package_trees(pkg)
    result = AnalysisResult(pkg.id, diagnostics=diagnostics)
    endpoints: dict[Endpoint, None] = {}
    for tree in trees:
        analysis: FileAnalysis = analyze_file(tree, catalog)
        result.flows.extend(analysis.flows)
        result.diagnostics.extend(analysis.diagnostics)
        endpoints.update(dict.fromkeys(analysis.endpoints))
    result.files_analyzed = len({tree.file for tree in trees})
    result.flows.sort(key=TaintFlow.sort_key)
    result.endpoints_syntactic = sorted(endpoints, key=Endpoint.sort_key)
    logger.debug(
        f"{pkg.id}: {len(result.flows)} flow(s), {len(result.endpoints_syntactic)} endpoint(s)"
        f" in {result.files_analyzed} file(s)",
        "ANALYSIS",
    )
    return result
