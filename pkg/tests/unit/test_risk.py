import unittest

import pytest
import yaml

from hiddenflows.analysis import Endpoint, Location, TaintFlow
from hiddenflows.catalog import DataClass, EndpointKind, SinkCategory
from hiddenflows.risk import (
    RiskFinding,
    Severity,
    classify_flow,
    export_severity_table,
    severity_of,
    severity_table,
    summarize_risk,
)

D = DataClass
S = SinkCategory


def flow(data_class, category, source_id="node-credentials") -> TaintFlow:
    return TaintFlow(
        source=Endpoint(EndpointKind.SOURCE, source_id, Location("a.js", 1, "x")),
        sink=Endpoint(EndpointKind.SINK, "console", Location("a.js", 2, "console.log")),
        steps=(),
        data_class=data_class,
        sink_category=category,
    )


def finding(severity: Severity, group: str = "g") -> RiskFinding:
    return RiskFinding(D.MISC, S.FILE, severity, group)


@pytest.mark.parametrize(
    "data_class,action,severity,group",
    [
        (D.SENSITIVE_INFORMATION, S.TERMINAL, Severity.HIGH, "Display sensitive information in terminal"),
        (D.SENSITIVE_INFORMATION, S.DASHBOARD, Severity.MEDIUM, "Display sensitive information in dashboard"),
        (D.SENSITIVE_INFORMATION, S.LOG, Severity.HIGH, "Log sensitive information"),
        (D.SENSITIVE_INFORMATION, S.EXTERNAL_SERVER, Severity.HIGH, "Send sensitive information to external server"),
        (D.SENSITIVE_INFORMATION, S.FILE, Severity.HIGH, "Write sensitive information to file"),
        (D.SENSITIVE_INFORMATION, S.FRAMEWORK, Severity.MEDIUM, "Send sensitive information to framework"),
        (D.ERROR_MESSAGE, S.LOG, Severity.HIGH, "Log error message"),
        (D.ERROR_MESSAGE, S.DASHBOARD, Severity.MEDIUM, "Display error message in dashboard"),
        (D.ERROR_MESSAGE, S.TERMINAL, Severity.HIGH, "Display error message in terminal"),
        (D.INPUT_MESSAGE, S.OTHER_NODE, Severity.LOW, "Send input message to other node"),
        (D.INPUT_MESSAGE, S.LOG, Severity.HIGH, "Log input message"),
        (D.INPUT_MESSAGE, S.HARDWARE, Severity.HIGH, "Send input message to external hardware device"),
        (D.INPUT_MESSAGE, S.DASHBOARD, Severity.MEDIUM, "Display input message in dashboard"),
        (D.INPUT_MESSAGE, S.FILE, Severity.HIGH, "Write input message to file"),
        (D.INPUT_MESSAGE, S.EXTERNAL_SERVER, Severity.HIGH, "Send input message to external server"),
        (D.INPUT_MESSAGE, S.TERMINAL, Severity.HIGH, "Display input message in terminal"),
        (D.MISC, S.OTHER_NODE, Severity.LOW, "Misc. low severity"),
        (D.MISC, S.FILE, Severity.HIGH, "Misc. high severity"),
    ],
)
def test_published_cells(data_class, action, severity, group):
    assert severity_of(data_class, action) == (severity, group, False)


class TestExtrapolatedCells(unittest.TestCase):
    def test_unlisted_cell_takes_the_worst_of_its_action(self):
        self.assertEqual(
            severity_of(D.ERROR_MESSAGE, S.FILE),
            (Severity.HIGH, "Write error message to file", True),
        )

    def test_framework_is_medium(self):
        severity, _, extrapolated = severity_of(D.INPUT_MESSAGE, S.FRAMEWORK)
        self.assertEqual(severity, Severity.MEDIUM)
        self.assertTrue(extrapolated)

    def test_misc_framework_is_low(self):
        self.assertEqual(severity_of(D.MISC, S.FRAMEWORK), (Severity.LOW, "Misc. low severity", False))

    def test_every_cell_is_covered(self):
        table = severity_table()
        self.assertEqual(len(table), len(DataClass) * len(SinkCategory))
        published = {row["group"] for row in table if not row["extrapolated"]}
        self.assertEqual(len(published), 18)

    def test_export_is_yaml(self):
        document = yaml.safe_load(export_severity_table())
        self.assertEqual(document["severities"], severity_table())


class TestClassifyFlow(unittest.TestCase):
    def test_credentials_in_terminal(self):
        found = classify_flow(flow(D.SENSITIVE_INFORMATION, S.TERMINAL))
        self.assertEqual(found.severity, Severity.HIGH)
        self.assertEqual(found.group, "Display sensitive information in terminal")
        self.assertIsNone(found.warning)

    def test_input_to_other_node(self):
        found = classify_flow(flow(D.INPUT_MESSAGE, S.OTHER_NODE, "input-listener"))
        self.assertEqual((found.severity, found.group), (Severity.LOW, "Send input message to other node"))

    def test_undeclared_data_class_is_misc(self):
        found = classify_flow(flow(None, S.LOG, "custom"))
        self.assertEqual(found.data_class, D.MISC)
        self.assertEqual(found.severity, Severity.HIGH)
        self.assertIn("custom", found.warning)


class TestSummarizeRisk:
    def test_percentages(self):
        findings = [finding(Severity.HIGH)] * 2 + [finding(Severity.MEDIUM), finding(Severity.LOW)]
        summary = summarize_risk(findings)
        assert summary.severity_percentages == {"low": 25.0, "medium": 25.0, "high": 50.0}

    def test_rounding(self):
        findings = (
            [finding(Severity.LOW)] * 333 + [finding(Severity.MEDIUM)] * 342 + [finding(Severity.HIGH)] * 264
        )
        summary = summarize_risk(findings)
        assert summary.total == 939
        assert summary.severity_percentages == {"low": 35.5, "medium": 36.4, "high": 28.1}

    def test_empty(self):
        summary = summarize_risk([])
        assert summary.total == 0
        assert summary.severity_counts == {"low": 0, "medium": 0, "high": 0}
        assert summary.severity_percentages == {"low": 0.0, "medium": 0.0, "high": 0.0}
        assert summary.groups == {}

    def test_groups(self):
        summary = summarize_risk([finding(Severity.HIGH, "b"), finding(Severity.HIGH, "a"), finding(Severity.HIGH, "a")])
        assert summary.groups == {"a": 2, "b": 1}
        assert list(summary.groups) == ["a", "b"]
