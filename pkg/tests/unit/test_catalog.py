import unittest

import pytest
import yaml

from hiddenflows.catalog import (
    TAINT_ANY,
    CatalogError,
    DataClass,
    SinkCategory,
    SourceKind,
    load_catalog,
    parse_catalog,
)
from hiddenflows.config.config import DEFAULT_CATALOG


def document(*entries, **extra):
    return {"version": "test", "entries": list(entries), **extra}


SEND = {
    "id": "node-send",
    "kind": "sink",
    "match": {"callee": "node.send", "receiver": "node-object"},
    "taint_positions": "any",
    "sink_category": "other-node",
}


class TestDefaultCatalog(unittest.TestCase):
    def setUp(self):
        self.catalog = load_catalog(DEFAULT_CATALOG)

    def test_size_and_version(self):
        """The shipped catalog is large enough to be useful and is versioned."""
        self.assertGreaterEqual(len(self.catalog.entries), 30)
        self.assertEqual(self.catalog.version, "1.0.0")

    def test_every_sink_category_is_covered(self):
        self.assertEqual(self.catalog.sink_categories(), set(SinkCategory))

    def test_every_source_kind_is_covered(self):
        kinds = {entry.source_kind for entry in self.catalog.sources}
        self.assertEqual(kinds, set(SourceKind))

    def test_every_source_has_a_data_class(self):
        hints = {entry.data_class_hint for entry in self.catalog.sources}
        self.assertNotIn(None, hints)
        self.assertEqual(hints, set(DataClass))

    def test_lookup_by_id(self):
        entry = self.catalog.get("console")
        self.assertEqual(entry.taint_positions, TAINT_ANY)
        self.assertEqual(entry.sink_category, SinkCategory.TERMINAL)
        self.assertEqual(self.catalog.get("rpio-write").taint_positions, frozenset({1}))

    def test_ids_are_unique(self):
        ids = [entry.id for entry in self.catalog.entries]
        self.assertEqual(len(ids), len(set(ids)))

    def test_default_name_regex_is_applied(self):
        entry = self.catalog.get("sensitive-name")
        self.assertTrue(entry.name_regex.search("apiKey"))
        self.assertTrue(entry.name_regex.search("PASSWORD"))
        self.assertFalse(entry.name_regex.search("counter"))


class TestCatalogValidation(unittest.TestCase):
    def test_duplicate_id_is_named(self):
        with self.assertRaises(CatalogError) as cm:
            parse_catalog(document(SEND, dict(SEND)))
        self.assertIn("node-send", str(cm.exception))
        self.assertIn("duplicate", str(cm.exception))

    def test_empty_entry_list(self):
        with self.assertRaises(CatalogError):
            parse_catalog(document())

    def test_unknown_field(self):
        with self.assertRaises(CatalogError):
            parse_catalog(document({**SEND, "colour": "red"}))

    def test_partial_wildcard_segment(self):
        entry = {**SEND, "match": {"callee": "node.se*d"}}
        with self.assertRaises(CatalogError) as cm:
            parse_catalog(document(entry))
        self.assertIn("se*d", str(cm.exception))

    def test_inner_double_wildcard(self):
        entry = {**SEND, "match": {"callee": "node.**.send"}}
        with self.assertRaises(CatalogError):
            parse_catalog(document(entry))

    def test_sink_requires_positions(self):
        entry = {key: value for key, value in SEND.items() if key != "taint_positions"}
        with self.assertRaises(CatalogError):
            parse_catalog(document(entry))

    def test_source_fields_on_sink(self):
        with self.assertRaises(CatalogError):
            parse_catalog(document({**SEND, "source_kind": "return-value"}))

    def test_name_pattern_takes_no_match(self):
        entry = {
            "id": "names",
            "kind": "source",
            "source_kind": "name-pattern",
            "name_regex": "secret",
            "match": {"callee": "x"},
        }
        with self.assertRaises(CatalogError):
            parse_catalog(document(entry))

    def test_name_pattern_needs_a_regex(self):
        entry = {"id": "names", "kind": "source", "source_kind": "name-pattern"}
        with self.assertRaises(CatalogError):
            parse_catalog(document(entry))

    def test_invalid_regex(self):
        entry = {"id": "names", "kind": "source", "source_kind": "name-pattern", "name_regex": "("}
        with self.assertRaises(CatalogError) as cm:
            parse_catalog(document(entry))
        self.assertIn("invalid regex", str(cm.exception))

    def test_every_offending_entry_is_reported(self):
        bad_sink = {key: value for key, value in SEND.items() if key != "sink_category"}
        bad_source = {"id": "names", "kind": "source", "source_kind": "name-pattern"}
        with self.assertRaises(CatalogError) as cm:
            parse_catalog(document({**bad_sink, "id": "a"}, bad_source))
        self.assertEqual(len(cm.exception.issues), 2)

    def test_receiver_any_means_no_constraint(self):
        catalog = parse_catalog(document({**SEND, "match": {"callee": "node.send", "receiver": "any"}}))
        self.assertIsNone(catalog.get("node-send").match.receiver_role)

    def test_literal_arguments(self):
        entry = {
            "id": "listener",
            "kind": "source",
            "source_kind": "callback-parameter",
            "match": {"callee": "node.on", "receiver": "node-object", "args": {"arg0": "input"}},
            "callback_index": 1,
        }
        catalog = parse_catalog(document(entry))
        self.assertEqual(catalog.get("listener").match.literal_arg_constraints, ((0, "input"),))
        self.assertEqual(catalog.get("listener").param_indices, (0,))


def test_missing_file(tmp_path):
    with pytest.raises(CatalogError):
        load_catalog(tmp_path / "absent.yaml")


def test_invalid_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("entries: [unclosed")
    with pytest.raises(CatalogError):
        load_catalog(path)


def test_custom_catalog_file(tmp_path):
    path = tmp_path / "catalog.yaml"
    path.write_text(yaml.safe_dump(document(SEND, version=2)))
    catalog = load_catalog(path)
    assert catalog.version == "2"
    assert [entry.id for entry in catalog.sinks] == ["node-send"]
    assert catalog.sources == ()


if __name__ == "__main__":
    unittest.main()
