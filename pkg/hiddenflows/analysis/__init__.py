"""Parsing of node scripts and taint analysis from sources to sinks."""
from hiddenflows.analysis.jsparser import ParseError, SyntaxTree, parse_js
from hiddenflows.analysis.package import AnalysisResult, analyze_package, package_trees
from hiddenflows.analysis.taint import (
    Endpoint,
    FileAnalysis,
    Location,
    Rule,
    Step,
    TaintFlow,
    analyze_file,
)
from hiddenflows.analysis.typescript import strip_types

__all__ = [
    "AnalysisResult",
    "Endpoint",
    "FileAnalysis",
    "Location",
    "ParseError",
    "Rule",
    "Step",
    "SyntaxTree",
    "TaintFlow",
    "analyze_file",
    "analyze_package",
    "package_trees",
    "parse_js",
    "strip_types",
]
