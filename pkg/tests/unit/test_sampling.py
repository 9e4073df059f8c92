from pathlib import Path

import pytest

from hiddenflows.corpus import NodePackage, PackageId, SampleStrategy, ValidityStatus, sample_packages


def package(name, downloads, validity=ValidityStatus.VALID):
    return NodePackage(
        id=PackageId(name, "1.0.0"),
        root=Path("."),
        manifest={},
        files=(),
        validity=validity,
        weekly_downloads=downloads,
    )


@pytest.fixture
def corpus():
    # p0 is the least popular, p9 the most popular
    return [package(f"p{i}", 100 * i) for i in range(10)]


def test_top_downloads(corpus):
    chosen = sample_packages(corpus, 3, SampleStrategy.TOP_DOWNLOADS, seed=0)
    assert [p.name for p in chosen] == ["p9", "p8", "p7"]


def test_half_half_is_disjoint_and_reproducible(corpus):
    chosen = sample_packages(corpus, 4, "half-half", seed=42)
    assert len(chosen) == 4
    assert len(set(chosen)) == 4
    assert [p.name for p in chosen[:2]] == ["p9", "p8"]
    assert not {p.name for p in chosen[2:]} & {"p9", "p8"}
    assert sample_packages(corpus, 4, "half-half", seed=42) == chosen


def test_half_half_odd_size_favours_popular(corpus):
    chosen = sample_packages(corpus, 3, "half-half", seed=7)
    assert [p.name for p in chosen[:2]] == ["p9", "p8"]


def test_uniform_random_depends_only_on_seed(corpus):
    first = sample_packages(corpus, 5, SampleStrategy.UNIFORM_RANDOM, seed=3)
    again = sample_packages(list(reversed(corpus)), 5, SampleStrategy.UNIFORM_RANDOM, seed=3)
    assert first == again
    assert len(set(first)) == 5


def test_empty_sample(corpus):
    assert sample_packages(corpus, 0, "top-downloads", seed=0) == []


def test_unknown_downloads_rank_last():
    corpus = [package("a", None), package("b", 5), package("c", 5)]
    chosen = sample_packages(corpus, 3, "top-downloads", seed=0)
    assert [p.name for p in chosen] == ["b", "c", "a"]


@pytest.mark.parametrize("n", [-1, 11])
def test_size_out_of_range(corpus, n):
    with pytest.raises(ValueError):
        sample_packages(corpus, n, "uniform-random", seed=0)


def test_invalid_packages_are_refused(corpus):
    corpus.append(package("theme", 1, ValidityStatus.NO_NODES))
    with pytest.raises(ValueError):
        sample_packages(corpus, 1, "top-downloads", seed=0)
