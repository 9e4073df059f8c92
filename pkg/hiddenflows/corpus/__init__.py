"""Fetching, loading, measuring and sampling node packages."""
from hiddenflows.corpus.loc import LocStats, count_loc
from hiddenflows.corpus.package import (
    NodePackage,
    PackageId,
    PackageLoadError,
    ValidityStatus,
    load_package,
    read_id_list,
    unpack_archive,
)
from hiddenflows.corpus.sampling import SampleStrategy, sample_packages

__all__ = [
    "LocStats",
    "NodePackage",
    "PackageId",
    "PackageLoadError",
    "SampleStrategy",
    "ValidityStatus",
    "count_loc",
    "load_package",
    "read_id_list",
    "sample_packages",
    "unpack_archive",
]
