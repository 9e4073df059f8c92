"""Selection of evaluation samples from a corpus"""
from __future__ import annotations

import random
from enum import Enum
from typing import Sequence

from hiddenflows.corpus.package import NodePackage, PackageId, ValidityStatus


class SampleStrategy(str, Enum):
    TOP_DOWNLOADS = "top-downloads"
    UNIFORM_RANDOM = "uniform-random"
    HALF_HALF = "half-half"


def _popularity_order(corpus: Sequence[NodePackage]) -> list[NodePackage]:
    # descending downloads, ties by name, unknown counts last
    return sorted(
        corpus,
        key=lambda p: (
            p.weekly_downloads is None,
            -(p.weekly_downloads or 0),
            p.id.name,
            p.id.version,
        ),
    )


def sample_packages(
    corpus: Sequence[NodePackage],
    n: int,
    strategy: SampleStrategy | str,
    seed: int,
) -> list[PackageId]:
    """Select n distinct packages from a corpus of valid packages

    half-half takes ceil(n/2) packages by popularity and draws floor(n/2)
    uniformly from the rest, so both popular and long-tail packages are covered.

    Args:
        corpus (Sequence[NodePackage]): Valid packages to draw from
        n (int): Sample size
        strategy (SampleStrategy | str): How to select
        seed (int): Seed of the random draws

    Returns:
        list[PackageId]: The selected ids, popular part first

    Raises:
        ValueError: If n is negative or exceeds the corpus, or a package is not valid
    """
    strategy = SampleStrategy(strategy)
    corpus = list({p.id: p for p in corpus}.values())
    if n < 0 or n > len(corpus):
        raise ValueError(f"Cannot sample {n} packages from a corpus of {len(corpus)}")
    invalid = [str(p.id) for p in corpus if p.validity is not ValidityStatus.VALID]
    if invalid:
        raise ValueError(f"Corpus contains packages that are not valid: {', '.join(invalid)}")

    rng = random.Random(seed)
    by_name = sorted(corpus, key=lambda p: (p.id.name, p.id.version))

    if strategy is SampleStrategy.TOP_DOWNLOADS:
        chosen = _popularity_order(corpus)[:n]
    elif strategy is SampleStrategy.UNIFORM_RANDOM:
        chosen = rng.sample(by_name, n)
    else:
        top_count = (n + 1) // 2
        chosen = _popularity_order(corpus)[:top_count]
        taken = {p.id for p in chosen}
        remainder = [p for p in by_name if p.id not in taken]
        chosen += rng.sample(remainder, n // 2)
    return [p.id for p in chosen]
