"""Registry client: package metadata, tarballs and download counts"""
from __future__ import annotations

import base64
import hashlib
from dataclasses import dataclass
from typing import Optional
from urllib.parse import quote

import requests
from requests.adapters import HTTPAdapter, Retry

from hiddenflows.config import Config
from hiddenflows.corpus.package import PackageId
from hiddenflows.logs import logger
from hiddenflows.utils import readable_file_size

CFG = Config()


class RegistryError(Exception):
    """The registry could not deliver the requested package."""

    retryable = False


class PackageNotFoundError(RegistryError):
    """The package or version does not exist; maps to a broken download."""


class RegistryNetworkError(RegistryError):
    """A transport failure; trying again later may succeed."""

    retryable = True


class IntegrityError(RegistryError):
    """The tarball does not match the checksum published by the registry."""


@dataclass(frozen=True)
class FetchedArchive:
    id: PackageId
    requested_version: str
    tarball_url: str
    data: bytes
    integrity_checked: bool

    @property
    def resolved_version(self) -> str:
        return self.id.version


def create_session() -> requests.Session:
    session = requests.Session()
    session.headers.update({"User-Agent": CFG.user_agent})
    retry = Retry(
        total=CFG.http_retries, backoff_factor=1, status_forcelist=[502, 503, 504]
    )
    adapter = HTTPAdapter(max_retries=retry)
    session.mount("http://", adapter)
    session.mount("https://", adapter)
    return session


session = create_session()


def _get(url: str, what: str) -> requests.Response:
    try:
        response = session.get(url, timeout=CFG.http_timeout, allow_redirects=True)
    except requests.exceptions.RequestException as e:
        raise RegistryNetworkError(f"Fetching {what} failed: {e}") from e
    if response.status_code == 404:
        raise PackageNotFoundError(f"{what} not found ({url})")
    if response.status_code >= 500:
        raise RegistryNetworkError(f"Fetching {what} failed: HTTP {response.status_code}")
    if response.status_code >= 400:
        raise RegistryError(f"Fetching {what} failed: HTTP {response.status_code}")
    return response


def verify_integrity(data: bytes, dist: dict) -> bool:
    """Check data against the dist checksums; False when none is published

    Raises:
        IntegrityError: If a published checksum does not match
    """
    integrity = dist.get("integrity") or ""
    if integrity.startswith("sha512-"):
        expected = integrity.split("-", 1)[1]
        actual = base64.b64encode(hashlib.sha512(data).digest()).decode("ascii")
        if actual != expected:
            raise IntegrityError(f"sha512 mismatch: expected {expected}, got {actual}")
        return True
    shasum = dist.get("shasum")
    if shasum:
        actual = hashlib.sha1(data).hexdigest()
        if actual != shasum:
            raise IntegrityError(f"sha1 mismatch: expected {shasum}, got {actual}")
        return True
    return False


def fetch_package(package_id: PackageId, registry_base: Optional[str] = None) -> FetchedArchive:
    """Download the tarball of a package version

    "latest" is resolved through the registry's dist-tags and the concrete
    version is recorded in the returned id.

    Args:
        package_id (PackageId): The package to fetch
        registry_base (str, optional): Registry URL, defaults to the configured one

    Returns:
        FetchedArchive: The tarball bytes and the resolved identity

    Raises:
        PackageNotFoundError: If the package, version or tarball is missing
        RegistryNetworkError: On transport failures
        IntegrityError: If the tarball fails its published checksum
    """
    base = (registry_base or CFG.registry_base).rstrip("/")
    metadata_url = f"{base}/{quote(package_id.name, safe='@')}"
    try:
        metadata = _get(metadata_url, f"metadata of {package_id.name}").json()
    except ValueError as e:
        raise RegistryError(f"Metadata of {package_id.name} is not JSON: {e}") from e

    version = package_id.version
    if version == "latest":
        version = (metadata.get("dist-tags") or {}).get("latest")
        if not version:
            raise PackageNotFoundError(f"{package_id.name} has no latest version")
    manifest = (metadata.get("versions") or {}).get(version)
    if not manifest:
        raise PackageNotFoundError(f"{package_id.name}@{version} not found")
    dist = manifest.get("dist") or {}
    tarball_url = dist.get("tarball")
    if not tarball_url:
        raise PackageNotFoundError(f"{package_id.name}@{version} has no tarball")

    data = _get(tarball_url, f"tarball of {package_id.name}@{version}").content
    checked = verify_integrity(data, dist)
    logger.debug(
        f"{package_id.name}@{version} ({readable_file_size(len(data))})", "FETCHED"
    )
    return FetchedArchive(
        id=PackageId(package_id.name, version),
        requested_version=package_id.version,
        tarball_url=tarball_url,
        data=data,
        integrity_checked=checked,
    )


def fetch_weekly_downloads(name: str, api_base: Optional[str] = None) -> Optional[int]:
    """Last-week download count of a package, or None if unavailable."""
    base = (api_base or CFG.downloads_api).rstrip("/")
    try:
        response = _get(f"{base}/{quote(name, safe='@')}", f"downloads of {name}")
        downloads = response.json().get("downloads")
    except (RegistryError, ValueError, AttributeError) as e:
        logger.warn(f"No download count for {name}: {e}")
        return None
    if isinstance(downloads, int) and downloads >= 0:
        return downloads
    return None
