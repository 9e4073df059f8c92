import io
import json
import tarfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest

from hiddenflows.corpus import (
    NodePackage,
    PackageId,
    PackageLoadError,
    ValidityStatus,
    load_package,
    read_id_list,
    unpack_archive,
)
from tests.fixture_corpus import FIXTURES, write_package

REGISTRATION = """<script type="text/javascript">
    RED.nodes.registerType("demo", {inputs: 1, outputs: @OUTPUTS@});
</script>
"""


def make_package(root: Path, manifest, files: dict[str, str]) -> Path:
    root.mkdir(parents=True, exist_ok=True)
    if manifest is not None:
        text = manifest if isinstance(manifest, str) else json.dumps(manifest)
        (root / "package.json").write_text(text, encoding="utf-8")
    for name, text in files.items():
        (root / name).parent.mkdir(parents=True, exist_ok=True)
        (root / name).write_text(text, encoding="utf-8")
    return root


def make_tarball(entries: dict[str, bytes], symlinks: dict[str, str] = None) -> bytes:
    buffer = io.BytesIO()
    with tarfile.open(fileobj=buffer, mode="w:gz") as tar:
        for name, data in entries.items():
            info = tarfile.TarInfo(name)
            info.size = len(data)
            tar.addfile(info, io.BytesIO(data))
        for name, target in (symlinks or {}).items():
            info = tarfile.TarInfo(name)
            info.type = tarfile.SYMTYPE
            info.linkname = target
            tar.addfile(info)
    return buffer.getvalue()


DEMO_MANIFEST = {"name": "node-red-contrib-demo", "version": "1.2.3", "node-red": {"nodes": {"demo": "demo.js"}}}


class TestPackageId:
    def test_parse_plain_and_versioned(self):
        assert PackageId.parse("node-red-dashboard") == PackageId("node-red-dashboard", "latest")
        assert PackageId.parse("node-red-dashboard@3.6.0") == PackageId("node-red-dashboard", "3.6.0")

    def test_parse_scoped(self):
        package = PackageId.parse("@flowfuse/node-red-dashboard@1.0.0")
        assert package.name == "@flowfuse/node-red-dashboard"
        assert package.version == "1.0.0"
        assert package.fs_name == "@flowfuse__node-red-dashboard@1.0.0"

    @pytest.mark.parametrize("name", ["", "has space", "a/b/c", "..", "x@y"])
    def test_invalid_names(self, name):
        with pytest.raises(ValueError):
            PackageId(name)

    def test_read_id_list(self, tmp_path):
        id_list = tmp_path / "ids.txt"
        id_list.write_text("# corpus\nnode-red-dashboard\n\nnode-red-node-serialport@2.0.2\n")
        assert read_id_list(id_list) == [
            PackageId("node-red-dashboard"),
            PackageId("node-red-node-serialport", "2.0.2"),
        ]


class TestLoadPackage:
    def test_valid_package(self, tmp_path):
        root = make_package(
            tmp_path / "demo",
            DEMO_MANIFEST,
            {"demo.js": "module.exports = function (RED) {};\n", "demo.html": REGISTRATION.replace("@OUTPUTS@", "2")},
        )
        pkg = load_package(root)
        assert pkg.validity is ValidityStatus.VALID
        assert pkg.id == PackageId("node-red-contrib-demo", "1.2.3")
        assert pkg.node_count == 1
        assert (pkg.specs[0].inputs, pkg.specs[0].outputs) == (1, 2)
        assert [f.path for f in pkg.files] == ["demo.html", "demo.js", "package.json"]

    def test_package_without_node_section(self, tmp_path):
        root = make_package(tmp_path / "theme", {"name": "node-red-contrib-theme", "version": "1.0.0"}, {})
        assert load_package(root).validity is ValidityStatus.NO_NODES

    def test_computed_port_counts_are_unparsable(self, tmp_path):
        root = make_package(
            tmp_path / "switch",
            DEMO_MANIFEST,
            {"demo.js": "", "demo.html": REGISTRATION.replace("@OUTPUTS@", "this.rules.length")},
        )
        pkg = load_package(root)
        assert pkg.validity is ValidityStatus.UNPARSABLE_SPEC
        assert pkg.diagnostics

    def test_spec_without_registration_is_unparsable(self, tmp_path):
        root = make_package(tmp_path / "bare", DEMO_MANIFEST, {"demo.js": "", "demo.html": "<p>help</p>"})
        assert load_package(root).validity is ValidityStatus.UNPARSABLE_SPEC

    def test_malformed_manifest(self, tmp_path):
        root = make_package(tmp_path / "broken", "{ not json", {})
        pkg = load_package(root)
        assert pkg.validity is ValidityStatus.UNPARSABLE_SPEC
        assert "malformed" in pkg.diagnostics[0]

    def test_missing_path(self, tmp_path):
        with pytest.raises(PackageLoadError):
            load_package(tmp_path / "absent")

    def test_fixture_package(self, tmp_path):
        fixture = FIXTURES[0]
        pkg = load_package(write_package(tmp_path, fixture))
        assert pkg.validity is ValidityStatus.VALID
        assert pkg.id == PackageId(fixture.name, "1.0.0")
        assert pkg.specs[0].node_name == fixture.name

    def test_negative_downloads_rejected(self, tmp_path):
        root = make_package(tmp_path / "demo", DEMO_MANIFEST, {})
        with pytest.raises(ValueError):
            load_package(root, weekly_downloads=-1)


class TestUnpackArchive:
    def test_archive_prefix_is_stripped(self, tmp_path):
        data = make_tarball(
            {
                "package/package.json": json.dumps(DEMO_MANIFEST).encode(),
                "package/demo.js": b"module.exports = function (RED) {};\n",
                "package/demo.html": REGISTRATION.replace("@OUTPUTS@", "1").encode(),
            }
        )
        archive = tmp_path / "node-red-contrib-demo-1.2.3.tgz"
        archive.write_bytes(data)
        pkg = load_package(archive)
        assert pkg.validity is ValidityStatus.VALID
        assert (pkg.root / "demo.js").is_file()
        assert pkg.root.is_relative_to((tmp_path / "workspace").resolve())

    def test_parent_traversal_is_refused(self, tmp_path):
        data = make_tarball({"package/package.json": b"{}", "../evil.js": b"boom"})
        with pytest.raises(PackageLoadError):
            unpack_archive(data, tmp_path / "out")
        assert not (tmp_path / "evil.js").exists()

    def test_links_are_refused(self, tmp_path):
        data = make_tarball({"package/package.json": b"{}"}, symlinks={"package/link": "/etc/passwd"})
        with pytest.raises(PackageLoadError):
            unpack_archive(data, tmp_path / "out")

    def test_garbage_is_unreadable(self, tmp_path):
        with pytest.raises(PackageLoadError):
            unpack_archive(b"definitely not a tarball", tmp_path / "out")


def test_node_registrations_of_loaded_manifest():
    pkg = NodePackage(
        id=PackageId("x"),
        root=Path("."),
        manifest=DEMO_MANIFEST,
        files=(),
        validity=ValidityStatus.VALID,
    )
    assert pkg.node_registrations == {"demo": "demo.js"}


@pytest.mark.parametrize("section", [[], "nodes", {"nodes": ["demo.js"]}])
def test_node_registrations_of_malformed_section(tmp_path, section):
    root = tmp_path / "odd"
    root.mkdir()
    (root / "package.json").write_text(json.dumps({"name": "odd", "version": "1.0.0", "node-red": section}))
    pkg = load_package(root)
    assert pkg.node_registrations == {}
    assert pkg.validity is ValidityStatus.NO_NODES


def test_archives_sharing_a_stem_unpack_apart(tmp_path):
    for suffix, outputs in ((".tgz", "1"), (".tar.gz", "2")):
        data = make_tarball(
            {
                "package/package.json": json.dumps(DEMO_MANIFEST).encode(),
                "package/demo.js": b"module.exports = function (RED) {};",
                "package/demo.html": REGISTRATION.replace("@OUTPUTS@", outputs).encode(),
            }
        )
        (tmp_path / f"demo{suffix}").write_bytes(data)
    first = load_package(tmp_path / "demo.tgz")
    second = load_package(tmp_path / "demo.tar.gz")
    assert first.root != second.root
    assert [spec.outputs for spec in first.specs] == [1]
    assert "outputs: 2" in (second.root / "demo.html").read_text()
    assert "outputs: 1" in (first.root / "demo.html").read_text()


def test_archives_load_concurrently(tmp_path):
    archives = []
    for i in range(8):
        manifest = dict(DEMO_MANIFEST, name=f"node-red-contrib-demo{i}")
        data = make_tarball(
            {
                "package/package.json": json.dumps(manifest).encode(),
                "package/demo.js": b"module.exports = function (RED) {};",
                "package/demo.html": REGISTRATION.replace("@OUTPUTS@", "1").encode(),
            }
        )
        archive = tmp_path / f"demo{i}.tgz"
        archive.write_bytes(data)
        archives.append(archive)
    with ThreadPoolExecutor(max_workers=8) as pool:
        packages = list(pool.map(load_package, archives))
    assert [p.validity for p in packages] == [ValidityStatus.VALID] * 8
    assert len({p.root for p in packages}) == 8
