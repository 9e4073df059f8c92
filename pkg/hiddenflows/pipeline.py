"""Run orchestration for the scan, corpus, fetch and report commands."""
from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Optional, TypeVar, Union

import click
import orjson
from colorama import Fore

from hiddenflows.analysis import analyze_package
from hiddenflows.catalog import Catalog, CatalogError, load_catalog
from hiddenflows.configurator import Mode, RunConfig
from hiddenflows.conformance import check_conformance
from hiddenflows.corpus import (
    NodePackage,
    PackageId,
    PackageLoadError,
    ValidityStatus,
    count_loc,
    load_package,
    read_id_list,
    sample_packages,
    unpack_archive,
)
from hiddenflows.corpus.registry import RegistryError, fetch_package, fetch_weekly_downloads
from hiddenflows.logs import logger
from hiddenflows.report import (
    JSON_OPTIONS,
    PackageOutcome,
    ReportError,
    build_report,
    load_report,
    verify_report,
    write_report,
)
from hiddenflows.risk import classify_flow, export_severity_table
from hiddenflows.workspace import workspace_dir

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
ARCHIVE_SUFFIXES = (".tgz", ".tar.gz")

Task = Union[Path, PackageId]
T = TypeVar("T")
R = TypeVar("R")


def process_package(
    pkg: NodePackage, catalog: Catalog, count_syntactic: bool = False
) -> PackageOutcome:
    """Analyze, classify and risk-rate one loaded package

    Packages that are not valid are recorded with their status and skipped.
    """
    outcome = PackageOutcome(pkg.id, validity=pkg.validity, diagnostics=list(pkg.diagnostics))
    if pkg.validity is not ValidityStatus.VALID:
        return outcome
    analysis = analyze_package(pkg, catalog)
    outcome.analysis = analysis
    outcome.conformance = check_conformance(pkg, analysis, count_syntactic)
    outcome.findings = [classify_flow(flow) for flow in analysis.flows]
    outcome.loc = count_loc(pkg)
    outcome.diagnostics += analysis.diagnostics + list(outcome.loc.warnings)
    return outcome


def _id_for_path(path: Path) -> PackageId:
    stem = path.name
    for suffix in ARCHIVE_SUFFIXES:
        stem = stem.removesuffix(suffix)
    try:
        return PackageId.parse(stem)
    except ValueError:
        return PackageId(re.sub(r"[\s/\\@]+", "_", stem) or "unnamed")


def _failure(task: Task, error: Exception) -> PackageOutcome:
    package = task if isinstance(task, PackageId) else _id_for_path(task)
    logger.error(f"{task}: ", str(error))
    return PackageOutcome(package, validity=ValidityStatus.BROKEN_DOWNLOAD, error=str(error))


def _load_remote(package_id: PackageId, registry_base: str) -> NodePackage:
    archive = fetch_package(package_id, registry_base)
    root = unpack_archive(archive.data, workspace_dir("unpacked", archive.id.fs_name))
    downloads = fetch_weekly_downloads(package_id.name)
    return load_package(root, package_id=archive.id, weekly_downloads=downloads)


def _load(task: Task, config: RunConfig) -> tuple[Optional[NodePackage], Optional[PackageOutcome]]:
    try:
        if isinstance(task, PackageId):
            return _load_remote(task, config.registry_base), None
        return load_package(task), None
    except (RegistryError, PackageLoadError, OSError, ValueError) as e:
        return None, _failure(task, e)


def _process(pkg: NodePackage, catalog: Catalog, config: RunConfig) -> PackageOutcome:
    try:
        outcome = process_package(pkg, catalog, config.count_syntactic)
        logger.package_diagnostics(pkg.id, outcome.diagnostics)
        return outcome
    except Exception as e:
        logger.error(f"{pkg.id}: ", f"analysis failed: {e}")
        return PackageOutcome(
            pkg.id, validity=pkg.validity, diagnostics=list(pkg.diagnostics), error=str(e)
        )


def _parallel(function: Callable[[T], R], items: Iterable[T], jobs: int) -> list[R]:
    # map keeps input order whatever the completion order
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(function, items))


def corpus_tasks(source: Path, max_packages: Optional[int] = None) -> list[Task]:
    """The packages a corpus input names

    A directory contributes its package directories and archives, a file is read
    as a list of registry ids.
    """
    if source.is_dir():
        tasks: list[Task] = [
            child
            for child in sorted(source.iterdir())
            if child.is_dir() or child.name.endswith(ARCHIVE_SUFFIXES)
        ]
    else:
        tasks = list(read_id_list(source))
    if max_packages is not None:
        tasks = tasks[:max_packages]
    return tasks


def _report(outcomes: list[PackageOutcome], catalog: Catalog, config: RunConfig) -> int:
    document = build_report(outcomes, catalog.version)
    try:
        target = write_report(document, config.out_dir, config.fmt)
    except ReportError as e:
        logger.error("Report: ", str(e))
        return EXIT_PARTIAL
    logger.typewriter_log("Report written to ", Fore.GREEN, str(target))
    conformance = document["summary"]["conformance"]
    if conformance is not None:
        for case, stats in conformance["cases"].items():
            logger.typewriter_log(
                f"{case.upper()}: ", Fore.CYAN, f"{stats['packages']} ({stats['percentage']}%)"
            )
    risk = document["summary"]["risk"]
    for severity, count in risk["severity_counts"].items():
        logger.typewriter_log(
            f"{severity.upper()} severity flows: ",
            Fore.YELLOW,
            f"{count} ({risk['severity_percentages'][severity]}%)",
        )
    failed = [o for o in outcomes if o.error is not None]
    if failed:
        logger.typewriter_log("FAILED: ", Fore.RED, ", ".join(str(o.package) for o in failed))
        return EXIT_PARTIAL
    return EXIT_OK


def run_scan(config: RunConfig, catalog: Catalog) -> int:
    pkg, failure = _load(config.inputs[0], config)
    if pkg is None:
        return _report([failure], catalog, config)
    return _report([_process(pkg, catalog, config)], catalog, config)


def run_corpus(config: RunConfig, catalog: Catalog) -> int:
    tasks = corpus_tasks(config.inputs[0], config.max_packages)
    logger.typewriter_log("Corpus: ", Fore.GREEN, f"{len(tasks)} package(s), {config.jobs} worker(s)")
    loaded = _parallel(lambda task: _load(task, config), tasks, config.jobs)
    packages = [pkg for pkg, _ in loaded if pkg is not None]
    failures = [failure for _, failure in loaded if failure is not None]

    if config.sample is not None:
        valid = [p for p in packages if p.validity is ValidityStatus.VALID]
        size = min(config.sample, len(valid))
        if size < config.sample:
            logger.warn(f"Only {size} valid package(s) to sample from, {config.sample} requested")
        chosen = set(sample_packages(valid, size, config.strategy, config.seed))
        packages = [p for p in packages if p.id in chosen]

    outcomes = _parallel(lambda pkg: _process(pkg, catalog, config), packages, config.jobs)
    return _report(outcomes + failures, catalog, config)


def run_fetch(config: RunConfig) -> int:
    ids = read_id_list(config.inputs[0])
    if config.max_packages is not None:
        ids = ids[: config.max_packages]

    def fetch(package_id: PackageId) -> dict:
        entry = {"package": str(package_id)}
        try:
            archive = fetch_package(package_id, config.registry_base)
        except RegistryError as e:
            logger.error(f"{package_id}: ", str(e))
            entry["error"] = str(e)
            return entry
        target = config.out_dir / f"{archive.id.fs_name}.tgz"
        target.write_bytes(archive.data)
        entry.update(
            {
                "package": str(archive.id),
                "archive": target.name,
                "tarball_url": archive.tarball_url,
                "integrity_checked": archive.integrity_checked,
                "weekly_downloads": fetch_weekly_downloads(package_id.name),
            }
        )
        return entry

    entries = _parallel(fetch, ids, config.jobs)
    manifest = config.out_dir / "fetched.json"
    entries.sort(key=lambda e: e["package"])
    manifest.write_bytes(orjson.dumps(entries, option=JSON_OPTIONS))
    failed = sum(1 for e in entries if "error" in e)
    logger.typewriter_log("Fetched: ", Fore.GREEN, f"{len(entries) - failed} of {len(entries)}")
    return EXIT_PARTIAL if failed else EXIT_OK


def run_report(config: RunConfig) -> int:
    if config.severity_table:
        click.echo(export_severity_table(), nl=False)
        return EXIT_OK
    try:
        document = load_report(config.inputs[0])
        verify_report(document)
        target = write_report(document, config.out_dir, config.fmt)
    except ReportError as e:
        logger.error("Report: ", str(e))
        return EXIT_PARTIAL
    logger.typewriter_log("Report verified and written to ", Fore.GREEN, str(target))
    return EXIT_OK


def run(config: RunConfig) -> int:
    """Execute a configured run

    Args:
        config (RunConfig): A validated configuration

    Returns:
        int: 0 on success, 1 when some packages or outputs failed, 2 when the
            catalog cannot be used
    """
    if config.mode is Mode.REPORT:
        return run_report(config)
    try:
        if config.mode is Mode.FETCH:
            return run_fetch(config)
        catalog = load_catalog(config.catalog_path)
        if config.mode is Mode.SCAN:
            return run_scan(config, catalog)
        return run_corpus(config, catalog)
    except CatalogError as e:
        logger.error("Catalog: ", str(e))
        return EXIT_CONFIG
    except (OSError, ValueError) as e:
        # unreadable or malformed id list
        logger.error(f"{config.inputs[0]}: ", str(e))
        return EXIT_CONFIG
