from __future__ import annotations

import os
from pathlib import Path

from hiddenflows.config import Config

CFG = Config()


def workspace_dir(*parts: str) -> Path:
    """Get a directory inside the workspace, creating it on first use

    Parameters:
        *parts (str): Path components below the workspace root

    Returns:
        Path: Absolute path of the directory
    """
    path = safe_path_join(CFG.workspace_path, *parts)
    os.makedirs(path, exist_ok=True)
    return path


def safe_path_join(base: Path, *paths: str | Path, enforce: bool = False) -> Path:
    """Join one or more path components, asserting the resulting path is within base.

    Args:
        base (Path): The base path
        *paths (str): The paths to join to the base path
        enforce (bool): Check containment even when the workspace is unrestricted

    Returns:
        Path: The joined path

    Raises:
        ValueError: If the joined path escapes base
    """
    base = Path(base).resolve()
    joined_path = base.joinpath(*paths).resolve()

    if (enforce or CFG.restrict_to_workspace) and not joined_path.is_relative_to(base):
        raise ValueError(
            f"Attempted to access path '{joined_path}' outside of workspace '{base}'."
        )

    return joined_path
