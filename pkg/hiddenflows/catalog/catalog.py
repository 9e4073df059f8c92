"""The catalog of sources and sinks driving the flow analysis."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import yaml
from jsonschema import Draft7Validator

from hiddenflows.config import Config
from hiddenflows.logs import logger

CFG = Config()

SCHEMA_PATH = Path(__file__).resolve().parent / "catalog_schema.json"
SEGMENT = re.compile(r"^(\*\*|\*|[A-Za-z_$][\w$]*)$")
ROLE = re.compile(r"^(node-object|framework-object|any|required-module:[^\s]+)$")
TAINT_ANY = "any"
CALLBACK_ANY = "any"


class CatalogError(ValueError):
    """The catalog file violates the schema; issues lists every offending entry."""

    def __init__(self, message: str, issues: Optional[list[str]] = None):
        self.issues = issues or []
        detail = "".join(f"\n  - {issue}" for issue in self.issues)
        super().__init__(f"{message}{detail}")


class EndpointKind(str, Enum):
    SOURCE = "source"
    SINK = "sink"


class SourceKind(str, Enum):
    CALLBACK_PARAMETER = "callback-parameter"
    RETURN_VALUE = "return-value"
    PROPERTY_READ = "property-read"
    NAME_PATTERN = "name-pattern"
    CATCH_PARAMETER = "catch-parameter"


class SinkCategory(str, Enum):
    OTHER_NODE = "other-node"
    TERMINAL = "terminal"
    DASHBOARD = "dashboard"
    LOG = "log"
    FILE = "file"
    EXTERNAL_SERVER = "external-server"
    FRAMEWORK = "framework"
    HARDWARE = "hardware"


class DataClass(str, Enum):
    SENSITIVE_INFORMATION = "sensitive-information"
    ERROR_MESSAGE = "error-message"
    INPUT_MESSAGE = "input-message"
    MISC = "misc"


@dataclass(frozen=True)
class MatchPattern:
    callee_path: tuple[str, ...]
    receiver_role: Optional[str] = None
    literal_arg_constraints: tuple[tuple[int, str], ...] = ()


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: EndpointKind
    match: Optional[MatchPattern] = None
    source_kind: Optional[SourceKind] = None
    taint_positions: Union[frozenset[int], str, None] = None
    sink_category: Optional[SinkCategory] = None
    data_class_hint: Optional[DataClass] = None
    description: str = ""
    callback_index: Union[int, str] = CALLBACK_ANY
    param_indices: tuple[int, ...] = (0,)
    param_pattern: Optional[re.Pattern] = field(default=None, compare=False)
    name_regex: Optional[re.Pattern] = field(default=None, compare=False)


@dataclass(frozen=True)
class Catalog:
    entries: tuple[CatalogEntry, ...]
    version: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {e.id: e for e in self.entries})

    def get(self, entry_id: str) -> CatalogEntry:
        return self._by_id[entry_id]

    @property
    def sources(self) -> tuple[CatalogEntry, ...]:
        return tuple(e for e in self.entries if e.kind is EndpointKind.SOURCE)

    @property
    def sinks(self) -> tuple[CatalogEntry, ...]:
        return tuple(e for e in self.entries if e.kind is EndpointKind.SINK)

    def sink_categories(self) -> set[SinkCategory]:
        return {e.sink_category for e in self.sinks}


def _schema_issues(document: object) -> list[str]:
    with open(SCHEMA_PATH, "r", encoding="utf-8") as f:
        schema = json.load(f)
    validator = Draft7Validator(schema)
    issues = []
    for error in sorted(validator.iter_errors(document), key=lambda e: list(e.path)):
        path = list(error.path)
        where = "catalog"
        if len(path) >= 2 and path[0] == "entries" and isinstance(path[1], int):
            entries = document.get("entries", []) if isinstance(document, dict) else []
            entry_id = entries[path[1]].get("id") if isinstance(entries[path[1]], dict) else None
            where = f"entry {path[1]} ({entry_id or 'no id'})"
        issues.append(f"{where}: {error.message}")
    return issues


def _compile(pattern: str, where: str, issues: list[str]) -> Optional[re.Pattern]:
    try:
        return re.compile(pattern, re.IGNORECASE)
    except re.error as e:
        issues.append(f"{where}: invalid regex {pattern!r} ({e})")
        return None


def _parse_match(raw: dict, where: str, issues: list[str]) -> MatchPattern:
    segments = tuple(raw["callee"].split("."))
    for position, segment in enumerate(segments):
        if not SEGMENT.match(segment):
            issues.append(f"{where}: callee segment {segment!r} is not a name or a whole-segment wildcard")
        elif segment == "**" and position != 0:
            issues.append(f"{where}: '**' may only lead the callee path")
    role = raw.get("receiver")
    if role is not None and not ROLE.match(role):
        issues.append(f"{where}: unknown receiver role {role!r}")
    constraints = tuple(
        sorted((int(key[3:]), str(value)) for key, value in (raw.get("args") or {}).items())
    )
    return MatchPattern(segments, None if role == "any" else role, constraints)


def _parse_entry(raw: dict, default_regex: Optional[str], issues: list[str]) -> Optional[CatalogEntry]:
    where = f"entry {raw.get('id')!r}"
    kind = EndpointKind(raw["kind"])
    source_fields = {"source_kind", "callback_index", "param_indices", "param_pattern", "name_regex"}
    sink_fields = {"taint_positions", "sink_category"}
    before = len(issues)

    present_wrong = (sink_fields if kind is EndpointKind.SOURCE else source_fields) & raw.keys()
    if present_wrong:
        issues.append(f"{where}: fields {sorted(present_wrong)} do not apply to a {kind.value}")

    match = _parse_match(raw["match"], where, issues) if "match" in raw else None
    entry = dict(
        id=raw["id"],
        kind=kind,
        match=match,
        description=raw.get("description", ""),
        data_class_hint=DataClass(raw["data_class"]) if raw.get("data_class") else None,
    )

    if kind is EndpointKind.SOURCE:
        if "source_kind" not in raw:
            issues.append(f"{where}: sources require source_kind")
            return None
        source_kind = SourceKind(raw["source_kind"])
        entry["source_kind"] = source_kind
        needs_match = source_kind in (
            SourceKind.CALLBACK_PARAMETER,
            SourceKind.RETURN_VALUE,
            SourceKind.PROPERTY_READ,
        )
        if needs_match and match is None:
            issues.append(f"{where}: {source_kind.value} sources require a match pattern")
        if not needs_match and match is not None:
            issues.append(f"{where}: {source_kind.value} sources take no match pattern")
        if source_kind is SourceKind.CALLBACK_PARAMETER:
            entry["callback_index"] = raw.get("callback_index", CALLBACK_ANY)
            entry["param_indices"] = tuple(raw.get("param_indices", [0]))
            if raw.get("param_pattern"):
                entry["param_pattern"] = _compile(f"(?:{raw['param_pattern']})", where, issues)
        elif {"callback_index", "param_indices", "param_pattern"} & raw.keys():
            issues.append(f"{where}: callback fields only apply to callback-parameter sources")
        if source_kind is SourceKind.NAME_PATTERN:
            pattern = raw.get("name_regex") or default_regex
            if not pattern:
                issues.append(f"{where}: name-pattern sources require name_regex")
            else:
                entry["name_regex"] = _compile(pattern, where, issues)
        elif "name_regex" in raw:
            issues.append(f"{where}: name_regex only applies to name-pattern sources")
    else:
        if match is None or "taint_positions" not in raw or "sink_category" not in raw:
            issues.append(f"{where}: sinks require match, taint_positions and sink_category")
            return None
        positions = raw["taint_positions"]
        entry["taint_positions"] = TAINT_ANY if positions == TAINT_ANY else frozenset(positions)
        entry["sink_category"] = SinkCategory(raw["sink_category"])

    if len(issues) > before:
        return None
    return CatalogEntry(**entry)


def parse_catalog(document: object) -> Catalog:
    """Validate a decoded catalog document and build the Catalog

    Raises:
        CatalogError: With one issue per offending entry
    """
    issues = _schema_issues(document)
    if issues:
        raise CatalogError("Catalog does not match the schema", issues)

    entries = []
    seen: dict[str, int] = {}
    for raw in document["entries"]:
        seen[raw["id"]] = seen.get(raw["id"], 0) + 1
    duplicates = sorted(entry_id for entry_id, count in seen.items() if count > 1)
    for entry_id in duplicates:
        issues.append(f"entry {entry_id!r}: duplicate id")

    for raw in document["entries"]:
        entry = _parse_entry(raw, document.get("name_regex"), issues)
        if entry is not None:
            entries.append(entry)
    if issues:
        raise CatalogError("Catalog entries are invalid", issues)
    return Catalog(entries=tuple(entries), version=str(document["version"]))


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Load and validate a catalog file

    Args:
        path (str | Path, optional): Catalog file, defaults to the configured catalog

    Returns:
        Catalog: The validated catalog

    Raises:
        CatalogError: If the file cannot be read or violates the schema
    """
    path = Path(path or CFG.catalog_path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            document = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise CatalogError(f"Catalog file '{path}' not found") from e
    except yaml.YAMLError as e:
        raise CatalogError(f"Catalog file '{path}' is not valid YAML: {e}") from e
    catalog = parse_catalog(document)
    logger.debug(f"{len(catalog.entries)} entries, version {catalog.version}", "CATALOG")
    return catalog
