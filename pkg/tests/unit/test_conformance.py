import itertools
import random
import unittest

import pytest

from hiddenflows.analysis import Endpoint, Location, Rule, Step, TaintFlow, analyze_package
from hiddenflows.catalog import DataClass, EndpointKind, SinkCategory
from hiddenflows.conformance import (
    ConformanceCase,
    ConformanceResult,
    aggregate,
    check_conformance,
    classify,
    merge_endpoints,
)
from hiddenflows.corpus import LocStats, PackageId, load_package
from tests.fixture_corpus import FIXTURES, write_package


def flow(source_line: int, sink_line: int, file: str = "a.js", sink_symbol: str = "node.send") -> TaintFlow:
    source = Endpoint(EndpointKind.SOURCE, "input-listener", Location(file, source_line, "msg"))
    sink = Endpoint(EndpointKind.SINK, "node-send", Location(file, sink_line, sink_symbol))
    return TaintFlow(
        source=source,
        sink=sink,
        steps=(Step(file, sink_line, "sink node-send: node.send", Rule.SINK),),
        data_class=DataClass.INPUT_MESSAGE,
        sink_category=SinkCategory.OTHER_NODE,
    )


def result(name: str, s_in: int, s_out: int, d_src: int, d_snk: int, nodes: int = 1):
    return ConformanceResult(
        package=PackageId(name, "1.0.0"),
        s_in=s_in,
        s_out=s_out,
        d_src=d_src,
        d_snk=d_snk,
        case=classify(s_in, s_out, d_src, d_snk),
        node_count=nodes,
    )


class TestClassify(unittest.TestCase):
    def test_equal_counts_converge(self):
        self.assertIs(classify(1, 1, 1, 1), ConformanceCase.CONVERGENCE)

    def test_extra_sink_diverges(self):
        self.assertIs(classify(1, 1, 2, 1), ConformanceCase.DIVERGENCE)

    def test_extras_win_over_absences(self):
        self.assertIs(classify(2, 1, 1, 3), ConformanceCase.DIVERGENCE)

    def test_missing_sink_is_an_absence(self):
        self.assertIs(classify(1, 2, 1, 1), ConformanceCase.ABSENCE)

    def test_negative_counts(self):
        with self.assertRaises(ValueError):
            classify(-1, 0, 0, 0)


@pytest.mark.parametrize("counts", list(itertools.product(range(5), repeat=4)))
def test_classify_matches_the_case_definitions(counts):
    s_in, s_out, d_src, d_snk = counts
    if d_src > s_in or d_snk > s_out:
        expected = ConformanceCase.DIVERGENCE
    elif d_src == s_in and d_snk == s_out:
        expected = ConformanceCase.CONVERGENCE
    else:
        expected = ConformanceCase.ABSENCE
    assert classify(*counts) is expected


class TestMergeEndpoints(unittest.TestCase):
    def test_shared_endpoints_count_once(self):
        sources, sinks = merge_endpoints([flow(3, 4), flow(3, 7)])
        self.assertEqual(len(sources), 1)
        self.assertEqual(len(sinks), 2)

    def test_location_identifies_an_endpoint(self):
        sources, sinks = merge_endpoints([flow(3, 4), flow(3, 4, file="b.js")])
        self.assertEqual(len(sources), 2)
        self.assertEqual(len(sinks), 2)

    def test_no_flows(self):
        self.assertEqual(merge_endpoints([]), (set(), set()))

    def test_random_flow_lists(self):
        """Duplicating or reordering flows never changes the merged endpoints."""
        rng = random.Random(2024)
        for _ in range(1000):
            flows = [
                flow(
                    rng.randint(1, 6),
                    rng.randint(1, 6),
                    file=rng.choice(["a.js", "b.js", "c.html"]),
                    sink_symbol=rng.choice(["node.send", "console.log"]),
                )
                for _ in range(rng.randint(0, 12))
            ]
            merged = merge_endpoints(flows)
            shuffled = list(flows)
            rng.shuffle(shuffled)
            self.assertEqual(merge_endpoints(shuffled), merged)
            self.assertEqual(merge_endpoints(flows + shuffled), merged)
            sources, sinks = merged
            self.assertLessEqual(len(sources) + len(sinks), 2 * len(flows))
            self.assertEqual(sources, {f.source.location for f in flows})

    def test_result_extras(self):
        r = result("demo", 2, 1, 1, 3)
        self.assertEqual((r.extra_src, r.extra_snk, r.extras), (0, 2, 2))


def fixture_result(tmp_path, catalog, name, count_syntactic=False):
    fixture = next(f for f in FIXTURES if f.name == name)
    pkg = load_package(write_package(tmp_path, fixture))
    return check_conformance(pkg, analyze_package(pkg, catalog), count_syntactic)


@pytest.mark.parametrize(
    "name,case",
    [
        ("fx-passthrough", ConformanceCase.CONVERGENCE),
        ("fx-constant", ConformanceCase.ABSENCE),
        ("fx-os-info", ConformanceCase.DIVERGENCE),
    ],
)
def test_check_conformance_of_fixtures(tmp_path, catalog, name, case):
    assert fixture_result(tmp_path, catalog, name).case is case


def test_syntactic_counting(tmp_path, catalog):
    by_flows = fixture_result(tmp_path, catalog, "fx-constant")
    syntactic = fixture_result(tmp_path, catalog, "fx-constant", count_syntactic=True)
    assert (by_flows.d_src, by_flows.d_snk) == (0, 0)
    assert (syntactic.d_src, syntactic.d_snk) == (1, 1)
    assert syntactic.case is ConformanceCase.CONVERGENCE


class TestAggregate:
    def test_case_percentages(self):
        results = (
            [result(f"c{i}", 1, 1, 1, 1) for i in range(40)]
            + [result(f"d{i}", 1, 1, 2, 1) for i in range(50)]
            + [result(f"a{i}", 1, 1, 0, 1) for i in range(10)]
        )
        summary = aggregate(results, {}, {})
        assert summary.packages == 100
        assert {k: v.percentage for k, v in summary.cases.items()} == {
            "convergence": 40.0,
            "divergence": 50.0,
            "absence": 10.0,
        }

    def test_divergence_histogram(self):
        results = [
            result("x", 1, 1, 2, 1),
            result("y", 1, 1, 1, 2),
            result("z", 0, 0, 1, 1),
            result("w", 1, 1, 1, 1),
        ]
        summary = aggregate(results, {}, {})
        assert summary.divergence_histogram == {1: 2, 2: 1}
        assert summary.mean_extras == 1.3333
        assert summary.mean_extra_sources == 0.6667

    def test_single_result(self):
        summary = aggregate([result("only", 1, 1, 1, 1)], {}, {})
        assert summary.cases["convergence"].percentage == 100.0
        assert summary.cases["divergence"].packages == 0
        assert summary.cases["divergence"].mean_nodes == 0.0

    def test_loc_and_nodes(self):
        results = [result("p", 1, 1, 1, 1, nodes=2), result("q", 1, 1, 1, 1, nodes=2)]
        loc = {PackageId("p", "1.0.0"): LocStats(100, {"js": 100}), PackageId("q", "1.0.0"): LocStats(300, {"js": 300})}
        stats = aggregate(results, loc, {PackageId("q", "1.0.0"): 6}).cases["convergence"]
        assert stats.nodes == 8
        assert stats.mean_nodes == 4.0
        assert stats.mean_loc == 200.0
        assert stats.loc_per_node == 50.0

    def test_empty(self):
        with pytest.raises(ValueError):
            aggregate([], {}, {})
