"""Configurator module."""
from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

import click
from colorama import Fore

from hiddenflows import utils
from hiddenflows.config import Config
from hiddenflows.corpus import SampleStrategy
from hiddenflows.logs import logger

CFG = Config()


class Mode(str, Enum):
    SCAN = "scan"
    CORPUS = "corpus"
    FETCH = "fetch"
    REPORT = "report"


@dataclass(frozen=True)
class RunConfig:
    mode: Mode
    inputs: tuple[Path, ...]
    catalog_path: Path
    registry_base: str
    jobs: int
    out_dir: Path
    fmt: str = "json"
    seed: int = 0
    count_syntactic: bool = False
    max_packages: Optional[int] = None
    sample: Optional[int] = None
    strategy: SampleStrategy = SampleStrategy.HALF_HALF
    severity_table: bool = False


def create_config(
    mode: str,
    inputs: tuple[str, ...],
    debug: bool = False,
    catalog: Optional[str] = None,
    registry: Optional[str] = None,
    jobs: Optional[int] = None,
    out: str = "out",
    fmt: str = "json",
    seed: int = 0,
    max_packages: Optional[int] = None,
    count_syntactic: bool = False,
    sample: Optional[int] = None,
    strategy: str = SampleStrategy.HALF_HALF.value,
    severity_table: bool = False,
) -> RunConfig:
    """Updates the config object with the given arguments and builds the run configuration.

    Args:
        mode (str): One of scan, corpus, fetch, report
        inputs (tuple[str, ...]): Package path, corpus directory, id list or report file
        debug (bool): Whether to enable debug mode
        catalog (str): Path of the endpoint catalog, defaults to the configured one
        registry (str): Registry base URL, defaults to the configured one
        jobs (int): Number of packages processed concurrently
        out (str): Output directory
        fmt (str): Report format, json or csv
        seed (int): Seed of the random sample draws
        max_packages (int): Process at most this many corpus entries
        count_syntactic (bool): Count all matched endpoints instead of flow participants
        sample (int): Analyze a sample of this many valid packages
        strategy (str): Sampling strategy
        severity_table (bool): Print the severity table instead of re-emitting a report

    Raises:
        click.UsageError: On any invalid combination of arguments
    """
    CFG.set_debug_mode(False)
    if debug:
        logger.typewriter_log("Debug Mode: ", Fore.GREEN, "ENABLED")
        CFG.set_debug_mode(True)

    mode = Mode(mode)
    paths = tuple(Path(i) for i in inputs)
    if mode is not Mode.REPORT or not severity_table:
        if len(paths) != 1:
            raise click.UsageError(f"{mode.value} takes exactly one input")
        if not paths[0].exists():
            raise click.UsageError(f"Input '{paths[0]}' does not exist")
    if mode in (Mode.FETCH, Mode.REPORT) and paths and not paths[0].is_file():
        raise click.UsageError(f"{mode.value} expects a file, got '{paths[0]}'")

    if catalog:
        (validated, message) = utils.validate_yaml_file(catalog)
        if not validated:
            logger.typewriter_log("FAILED FILE VALIDATION", Fore.RED, message)
            raise click.UsageError(f"Catalog '{catalog}' cannot be used")
        logger.typewriter_log("Using Catalog File:", Fore.GREEN, catalog)
        CFG.set_catalog_path(catalog)

    if registry:
        if not registry.startswith(("http://", "https://")):
            raise click.UsageError(f"--registry must be an http(s) URL, got '{registry}'")
        CFG.set_registry_base(registry)

    if jobs is not None:
        if jobs < 1:
            raise click.UsageError(f"--jobs must be >= 1, got {jobs}")
        CFG.set_jobs(jobs)

    if max_packages is not None and max_packages < 1:
        raise click.UsageError(f"--max-packages must be >= 1, got {max_packages}")
    if sample is not None:
        if mode is not Mode.CORPUS:
            raise click.UsageError("--sample can only be used with corpus")
        if sample < 1:
            raise click.UsageError(f"--sample must be >= 1, got {sample}")
    if severity_table and mode is not Mode.REPORT:
        raise click.UsageError("--severity-table can only be used with report")

    out_dir = Path(out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise click.UsageError(f"Output directory '{out_dir}' cannot be created: {e}")
    if not os.access(out_dir, os.W_OK):
        raise click.UsageError(f"Output directory '{out_dir}' is not writable")

    return RunConfig(
        mode=mode,
        inputs=paths,
        catalog_path=CFG.catalog_path,
        registry_base=CFG.registry_base,
        jobs=CFG.jobs,
        out_dir=out_dir,
        fmt=fmt,
        seed=seed,
        count_syntactic=count_syntactic,
        max_packages=max_packages,
        sample=sample,
        strategy=SampleStrategy(strategy),
        severity_table=severity_table,
    )
