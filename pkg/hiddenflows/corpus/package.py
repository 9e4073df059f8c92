"""Unpacking, inventory and validity of node packages."""
from __future__ import annotations

import io
import os
import re
import shutil
import tarfile
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path, PurePosixPath
from typing import Optional

import orjson

from hiddenflows.logs import logger
from hiddenflows.spec.registrations import NodeSpec, parse_html_specs
from hiddenflows.workspace import safe_path_join, workspace_dir

PACKAGE_NAME = re.compile(r"^(?:@[^\s/\\@]+/)?[^\s/\\@]+$")
MANIFEST = "package.json"


class PackageLoadError(Exception):
    """The path cannot be read as a package or the archive is unsafe."""


class ValidityStatus(str, Enum):
    VALID = "valid"
    BROKEN_DOWNLOAD = "broken-download"
    NO_NODES = "no-nodes"
    UNPARSABLE_SPEC = "unparsable-spec"


@dataclass(frozen=True, order=True)
class PackageId:
    name: str
    version: str = "latest"

    def __post_init__(self) -> None:
        if not self.name or not PACKAGE_NAME.match(self.name) or self.name in (".", ".."):
            raise ValueError(f"Invalid package name: {self.name!r}")
        if not self.version or any(c.isspace() for c in self.version):
            raise ValueError(f"Invalid version for {self.name}: {self.version!r}")

    @classmethod
    def parse(cls, text: str) -> "PackageId":
        """Parse 'name' or 'name@version', scoped names included."""
        text = text.strip()
        at = text.rfind("@")
        if at > 0:
            return cls(text[:at], text[at + 1 :])
        return cls(text)

    @property
    def fs_name(self) -> str:
        """A single path component naming this id."""
        return f"{self.name.replace('/', '__')}@{self.version}"

    def __str__(self) -> str:
        return f"{self.name}@{self.version}"


@dataclass(frozen=True)
class FileEntry:
    path: str
    size: int


def _registrations(manifest: dict) -> dict:
    section = manifest.get("node-red")
    if isinstance(section, dict) and isinstance(section.get("nodes"), dict):
        return section["nodes"]
    return {}


@dataclass(frozen=True)
class NodePackage:
    id: PackageId
    root: Path
    manifest: dict
    files: tuple[FileEntry, ...]
    validity: ValidityStatus
    weekly_downloads: Optional[int] = None
    specs: tuple[NodeSpec, ...] = ()
    resolved_version: Optional[str] = None
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    @property
    def node_registrations(self) -> dict:
        return _registrations(self.manifest)

    @property
    def node_count(self) -> int:
        return len(self.specs)


def read_id_list(path: str | Path) -> list[PackageId]:
    """Read a newline-delimited list of 'name' or 'name@version' entries

    Blank lines and lines starting with '#' are ignored.
    """
    ids = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#"):
                ids.append(PackageId.parse(line))
    return ids


def _strip_prefix(names: list[str]) -> str:
    firsts = {PurePosixPath(n).parts[0] for n in names if PurePosixPath(n).parts}
    return firsts.pop() if len(firsts) == 1 else ""


def unpack_archive(data: bytes, dest: Path) -> Path:
    """Extract a gzip tarball into dest, refusing entries that escape it

    The single top-level directory npm archives carry ('package/') is stripped.

    Args:
        data (bytes): The tarball
        dest (Path): Target directory, emptied first

    Returns:
        Path: dest

    Raises:
        PackageLoadError: If the archive is unreadable or holds unsafe entries
    """
    try:
        if os.path.exists(dest):
            shutil.rmtree(dest)
        os.makedirs(dest)
        with tarfile.open(fileobj=io.BytesIO(data), mode="r:*") as tar:
            members = tar.getmembers()
            prefix = _strip_prefix([m.name for m in members if m.isfile()])
            for member in members:
                if member.issym() or member.islnk() or member.isdev():
                    raise PackageLoadError(f"Archive entry '{member.name}' is a link or device")
                parts = PurePosixPath(member.name).parts
                if prefix and parts and parts[0] == prefix:
                    parts = parts[1:]
                if not parts:
                    continue
                if PurePosixPath(member.name).is_absolute():
                    raise PackageLoadError(f"Archive entry '{member.name}' is absolute")
                try:
                    target = safe_path_join(dest, *parts, enforce=True)
                except ValueError as e:
                    raise PackageLoadError(str(e)) from e
                if member.isdir():
                    os.makedirs(target, exist_ok=True)
                elif member.isfile():
                    os.makedirs(target.parent, exist_ok=True)
                    source = tar.extractfile(member)
                    with open(target, "wb") as f:
                        f.write(source.read() if source else b"")
    except (tarfile.TarError, EOFError, OSError) as e:
        raise PackageLoadError(f"Unreadable archive: {e}") from e
    return dest


def _inventory(root: Path) -> tuple[FileEntry, ...]:
    entries = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for filename in sorted(filenames):
            full = os.path.join(dirpath, filename)
            if os.path.islink(full) or not os.path.isfile(full):
                continue
            rel = Path(full).relative_to(root).as_posix()
            entries.append(FileEntry(rel, os.path.getsize(full)))
    return tuple(sorted(entries, key=lambda e: e.path))


def _spec_files(root: Path, registrations: dict, files: tuple[FileEntry, ...]) -> list[str]:
    """HTML files that accompany the registered implementation files."""
    paths = {f.path for f in files}
    html = []
    for impl in registrations.values():
        if not isinstance(impl, str):
            continue
        rel = PurePosixPath(os.path.normpath(impl).replace(os.sep, "/"))
        candidate = str(rel.with_suffix(".html"))
        if candidate in paths and candidate not in html:
            html.append(candidate)
    if not html:
        html = [f.path for f in files if f.path.lower().endswith(".html")]
    return sorted(html)


def load_package(
    path: str | Path,
    package_id: Optional[PackageId] = None,
    weekly_downloads: Optional[int] = None,
) -> NodePackage:
    """Load an unpacked package directory or a tarball and assess its validity

    Args:
        path (str | Path): A package directory or a .tgz archive
        package_id (PackageId, optional): Identity to record, defaults to the manifest's
        weekly_downloads (int, optional): Popularity figure to carry along

    Returns:
        NodePackage: The loaded package

    Raises:
        PackageLoadError: If the path is unreadable or the archive is unsafe
    """
    path = Path(path)
    if weekly_downloads is not None and weekly_downloads < 0:
        raise ValueError(f"weekly_downloads must be >= 0, got {weekly_downloads}")
    if not path.exists():
        raise PackageLoadError(f"Path '{path}' does not exist")
    if path.is_file():
        try:
            data = path.read_bytes()
        except OSError as e:
            raise PackageLoadError(f"Cannot read '{path}': {e}") from e
        root = unpack_archive(data, workspace_dir("unpacked", "local") / path.name)
    elif path.is_dir():
        root = path.resolve()
    else:
        raise PackageLoadError(f"Path '{path}' is neither a directory nor an archive")

    diagnostics: list[str] = []
    files = _inventory(root)

    manifest: dict = {}
    manifest_ok = True
    try:
        loaded = orjson.loads((root / MANIFEST).read_bytes())
        if not isinstance(loaded, dict):
            raise ValueError("manifest is not an object")
        manifest = loaded
    except FileNotFoundError:
        manifest_ok = False
        diagnostics.append(f"{MANIFEST}: missing")
    except (orjson.JSONDecodeError, ValueError, OSError) as e:
        manifest_ok = False
        diagnostics.append(f"{MANIFEST}: malformed ({e})")

    if package_id is None:
        try:
            package_id = PackageId(
                str(manifest.get("name") or root.name), str(manifest.get("version") or "latest")
            )
        except ValueError:
            package_id = PackageId(re.sub(r"[\s/\\@]+", "_", root.name) or "unnamed")

    registrations = _registrations(manifest) if manifest_ok else {}

    specs: list[NodeSpec] = []
    if not manifest_ok:
        validity = ValidityStatus.UNPARSABLE_SPEC
    elif not registrations:
        validity = ValidityStatus.NO_NODES
    else:
        for html in _spec_files(root, registrations, files):
            try:
                text = (root / html).read_text(encoding="utf-8", errors="replace")
            except OSError as e:
                diagnostics.append(f"{html}: unreadable ({e})")
                continue
            specs.extend(parse_html_specs(text, html, diagnostics))
        if any(spec.parsable for spec in specs):
            validity = ValidityStatus.VALID
        else:
            validity = ValidityStatus.UNPARSABLE_SPEC

    if validity is not ValidityStatus.VALID:
        logger.debug(f"{package_id} is {validity.value}", "LOAD")

    return NodePackage(
        id=package_id,
        root=root,
        manifest=manifest,
        files=files,
        validity=validity,
        weekly_downloads=weekly_downloads,
        specs=tuple(specs),
        resolved_version=package_id.version,
        diagnostics=tuple(diagnostics),
    )
