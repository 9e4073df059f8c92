"""Parsing of node specifications (HTML) into declared port counts."""
from hiddenflows.spec.registrations import (
    NodeSpec,
    RawRegistration,
    SpecTotals,
    extract_registrations,
    parse_html_specs,
    parse_port_counts,
    spec_totals,
)
from hiddenflows.spec.scripts import ScriptRegion, script_regions

__all__ = [
    "NodeSpec",
    "RawRegistration",
    "ScriptRegion",
    "SpecTotals",
    "extract_registrations",
    "parse_html_specs",
    "parse_port_counts",
    "script_regions",
    "spec_totals",
]
