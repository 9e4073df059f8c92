"""Lines-of-code measurement of node packages"""
from __future__ import annotations

from dataclasses import dataclass, field

from hiddenflows.corpus.package import NodePackage
from hiddenflows.logs import logger

COUNTED_EXTENSIONS = ("js", "ts", "html")


@dataclass(frozen=True)
class LocStats:
    total_loc: int
    per_extension: dict[str, int]
    warnings: tuple[str, ...] = field(default=(), compare=False)


def count_lines(text: str) -> int:
    """Number of newline-separated lines holding anything besides whitespace."""
    return sum(1 for line in text.split("\n") if line.strip())


def count_loc(pkg: NodePackage) -> LocStats:
    """Count non-empty lines of the package's .js, .ts and .html files

    Args:
        pkg (NodePackage): An unpacked package

    Returns:
        LocStats: Totals per extension; unreadable files count as 0 with a warning
    """
    per_extension = {ext: 0 for ext in COUNTED_EXTENSIONS}
    warnings = []
    for entry in pkg.files:
        ext = entry.path.rsplit(".", 1)[-1].lower() if "." in entry.path else ""
        if ext not in per_extension:
            continue
        try:
            text = (pkg.root / entry.path).read_text(encoding="utf-8", errors="replace")
        except OSError as e:
            message = f"{entry.path}: unreadable, counted as 0 ({e})"
            logger.warn(message)
            warnings.append(message)
            continue
        per_extension[ext] += count_lines(text)
    return LocStats(sum(per_extension.values()), per_extension, tuple(warnings))
