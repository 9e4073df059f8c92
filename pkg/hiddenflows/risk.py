"""Severity of information flows by the data they carry and where it goes."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

import yaml

from hiddenflows.analysis import TaintFlow
from hiddenflows.catalog import DataClass, SinkCategory
from hiddenflows.logs import logger
from hiddenflows.utils import percentage

SEVERITY_TABLE_VERSION = "1.0"


class Severity(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return list(Severity).index(self)


L, M, H = Severity.LOW, Severity.MEDIUM, Severity.HIGH
S = SinkCategory

PUBLISHED: dict[DataClass, dict[SinkCategory, Severity]] = {
    DataClass.SENSITIVE_INFORMATION: {
        S.TERMINAL: H,
        S.DASHBOARD: M,
        S.LOG: H,
        S.EXTERNAL_SERVER: H,
        S.FILE: H,
        S.FRAMEWORK: M,
    },
    DataClass.ERROR_MESSAGE: {
        S.LOG: H,
        S.DASHBOARD: M,
        S.TERMINAL: H,
    },
    DataClass.INPUT_MESSAGE: {
        S.OTHER_NODE: L,
        S.LOG: H,
        S.HARDWARE: H,
        S.DASHBOARD: M,
        S.FILE: H,
        S.EXTERNAL_SERVER: H,
        S.TERMINAL: H,
    },
}

MISC_LOW_ACTIONS = (S.OTHER_NODE, S.FRAMEWORK)

DATA_WORDS = {
    DataClass.SENSITIVE_INFORMATION: "sensitive information",
    DataClass.ERROR_MESSAGE: "error message",
    DataClass.INPUT_MESSAGE: "input message",
}

ACTION_TEMPLATES = {
    S.TERMINAL: "Display {} in terminal",
    S.DASHBOARD: "Display {} in dashboard",
    S.LOG: "Log {}",
    S.EXTERNAL_SERVER: "Send {} to external server",
    S.FILE: "Write {} to file",
    S.FRAMEWORK: "Send {} to framework",
    S.OTHER_NODE: "Send {} to other node",
    S.HARDWARE: "Send {} to external hardware device",
}


@dataclass(frozen=True)
class RiskFinding:
    data_class: DataClass
    action: SinkCategory
    severity: Severity
    group: str
    extrapolated: bool = False
    warning: Optional[str] = None
    flow: Optional[TaintFlow] = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class RiskSummary:
    total: int
    severity_counts: dict[str, int]
    severity_percentages: dict[str, float]
    groups: dict[str, int]
    group_severities: dict[str, str]
    unresolved: int = 0
    extrapolated: int = 0


def _worst_for(action: SinkCategory) -> Severity:
    listed = [cells[action] for cells in PUBLISHED.values() if action in cells]
    return max(listed, key=lambda s: s.rank)


def severity_of(data_class: DataClass, action: SinkCategory) -> tuple[Severity, str, bool]:
    """Severity, group label and whether the cell is filled by the worst-case rule."""
    if data_class is DataClass.MISC:
        if action in MISC_LOW_ACTIONS:
            return L, "Misc. low severity", False
        return H, "Misc. high severity", False
    group = ACTION_TEMPLATES[action].format(DATA_WORDS[data_class])
    published = PUBLISHED[data_class].get(action)
    if published is not None:
        return published, group, False
    return _worst_for(action), group, True


def classify_flow(flow: TaintFlow) -> RiskFinding:
    """Assign a flow its group and severity

    Args:
        flow (TaintFlow): A flow with a resolved sink category

    Returns:
        RiskFinding: The finding; a flow whose source declares no data class is
            treated as misc and carries a provenance warning
    """
    data_class = flow.data_class
    warning = None
    if data_class is None:
        data_class = DataClass.MISC
        warning = (
            f"data class of source '{flow.source.entry_id}' at {flow.source.location} "
            "is not declared, treated as misc"
        )
        logger.debug(warning, "RISK")
    severity, group, extrapolated = severity_of(data_class, flow.sink_category)
    return RiskFinding(
        flow=flow,
        data_class=data_class,
        action=flow.sink_category,
        severity=severity,
        group=group,
        extrapolated=extrapolated,
        warning=warning,
    )


def summarize_risk(findings: Iterable[RiskFinding]) -> RiskSummary:
    """Counts and percentages per severity and per group."""
    findings = list(findings)
    severities = Counter(f.severity.value for f in findings)
    groups = Counter(f.group for f in findings)
    return RiskSummary(
        total=len(findings),
        severity_counts={s.value: severities.get(s.value, 0) for s in Severity},
        severity_percentages={
            s.value: percentage(severities.get(s.value, 0), len(findings)) for s in Severity
        },
        groups=dict(sorted(groups.items())),
        group_severities=dict(sorted({f.group: f.severity.value for f in findings}.items())),
        unresolved=sum(1 for f in findings if f.warning is not None),
        extrapolated=sum(1 for f in findings if f.extrapolated),
    )


def severity_table() -> list[dict]:
    """Every (data class, action) cell with its severity, in a stable order."""
    rows = []
    for data_class in DataClass:
        for action in SinkCategory:
            severity, group, extrapolated = severity_of(data_class, action)
            rows.append(
                {
                    "data_class": data_class.value,
                    "action": action.value,
                    "severity": severity.value,
                    "group": group,
                    "extrapolated": extrapolated,
                }
            )
    return rows


def export_severity_table() -> str:
    """The severity table as YAML, for audit next to the endpoint catalog."""
    document = {
        "version": SEVERITY_TABLE_VERSION,
        "description": "Severity per data class and sink category",
        "severities": severity_table(),
    }
    return yaml.safe_dump(document, sort_keys=False, default_flow_style=False)
