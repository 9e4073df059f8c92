import pytest

from hiddenflows.corpus import PackageId, ValidityStatus, load_package, unpack_archive
from hiddenflows.corpus.registry import fetch_package, fetch_weekly_downloads
from hiddenflows.pipeline import process_package
from hiddenflows.workspace import workspace_dir


@pytest.mark.integration_test
def test_fetch_and_scan_a_published_package(catalog) -> None:
    archive = fetch_package(PackageId("node-red-node-ping"))
    assert archive.integrity_checked
    assert archive.id.version != "latest"

    root = unpack_archive(archive.data, workspace_dir("unpacked", archive.id.fs_name))
    pkg = load_package(root, package_id=archive.id)
    assert pkg.validity is ValidityStatus.VALID
    assert pkg.node_count >= 1

    outcome = process_package(pkg, catalog)
    assert outcome.conformance is not None
    assert outcome.loc.total_loc > 0


@pytest.mark.integration_test
def test_weekly_downloads_of_a_published_package() -> None:
    downloads = fetch_weekly_downloads("node-red-node-ping")
    assert downloads is None or downloads >= 0
