"""Configuration class holding the process-wide settings of a run."""
import os
from pathlib import Path

from dotenv import load_dotenv

from hiddenflows.config.singleton import Singleton

load_dotenv(verbose=False, override=False)

DEFAULT_REGISTRY = "https://registry.npmjs.org"
DEFAULT_DOWNLOADS_API = "https://api.npmjs.org/downloads/point/last-week"
DEFAULT_CATALOG = Path(__file__).resolve().parent.parent / "catalog" / "default_catalog.yaml"


class Config(metaclass=Singleton):
    """
    Configuration class to store the settings shared by every stage of the pipeline.
    """

    def __init__(self) -> None:
        """Initialize the Config class"""
        self.debug_mode = False

        self.registry_base = os.getenv("HIDDENFLOWS_REGISTRY", DEFAULT_REGISTRY)
        self.downloads_api = os.getenv("HIDDENFLOWS_DOWNLOADS_API", DEFAULT_DOWNLOADS_API)
        self.catalog_path = Path(os.getenv("HIDDENFLOWS_CATALOG", str(DEFAULT_CATALOG)))
        self.jobs = int(os.getenv("HIDDENFLOWS_JOBS", 1))
        self.workspace_path = Path(
            os.getenv("HIDDENFLOWS_WORKSPACE", os.path.join(os.getcwd(), "hiddenflows_workspace"))
        )
        self.log_dir = Path(os.getenv("HIDDENFLOWS_LOG_DIR", os.path.join(os.getcwd(), "logs")))
        self.http_timeout = float(os.getenv("HIDDENFLOWS_HTTP_TIMEOUT", 30))
        self.http_retries = int(os.getenv("HIDDENFLOWS_HTTP_RETRIES", 3))
        self.restrict_to_workspace = (
            os.getenv("HIDDENFLOWS_RESTRICT_TO_WORKSPACE", "True") == "True"
        )

        # Some registries and mirrors refuse requests without a user agent
        self.user_agent = os.getenv("USER_AGENT", "hiddenflows/0.1 (+conformance analysis)")

        # Analysis bounds
        self.max_call_depth = int(os.getenv("HIDDENFLOWS_MAX_CALL_DEPTH", 8))
        self.max_iterations = int(os.getenv("HIDDENFLOWS_MAX_ITERATIONS", 64))

    def set_debug_mode(self, value: bool) -> None:
        """Set the debug mode value."""
        self.debug_mode = value

    def set_registry_base(self, value: str) -> None:
        """Set the registry base URL."""
        self.registry_base = value.rstrip("/")

    def set_catalog_path(self, value: str | Path) -> None:
        """Set the catalog file used for endpoint matching."""
        self.catalog_path = Path(value)

    def set_jobs(self, value: int) -> None:
        """Set the worker count."""
        self.jobs = value

    def set_workspace_path(self, value: str | Path) -> None:
        """Set the directory archives are unpacked into."""
        self.workspace_path = Path(value)
