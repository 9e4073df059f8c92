from pathlib import Path

import pytest

from hiddenflows.catalog import Catalog, load_catalog
from hiddenflows.config import Config
from hiddenflows.config.config import DEFAULT_CATALOG, DEFAULT_REGISTRY


@pytest.fixture(autouse=True)
def config(tmp_path: Path) -> Config:
    """Point the workspace at a temporary directory and restore the shared settings."""
    config = Config()
    saved = (config.catalog_path, config.registry_base, config.jobs, config.workspace_path)
    config.set_workspace_path(tmp_path / "workspace")
    config.set_catalog_path(DEFAULT_CATALOG)
    config.set_registry_base(DEFAULT_REGISTRY)
    config.set_jobs(1)
    config.set_debug_mode(False)
    yield config
    (config.catalog_path, config.registry_base, config.jobs, config.workspace_path) = saved


@pytest.fixture(scope="session")
def catalog() -> Catalog:
    return load_catalog(DEFAULT_CATALOG)
