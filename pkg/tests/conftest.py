import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import EMOTIONS  # noqa: F401  (re-exported for fixtures below)

from elex import (
    ClusterModel,
    compute_cluster_stats,
    fit_gmm,
    fit_pca,
    load_embeddings,
    load_lexicon,
    project,
)

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        verdict = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {verdict}: {name}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def table():
    return load_embeddings(FIXTURES / "embeddings_8d.txt")


@pytest.fixture(scope="session")
def seed_lexicon():
    return load_lexicon(FIXTURES / "seed_lexicon.tsv")


@pytest.fixture(scope="session")
def fitted_model(table, seed_lexicon):
    words = [w for w in seed_lexicon.words() if w in table]
    pca = fit_pca(table, words, out_dim=3)
    gmm = fit_gmm(project(pca, table.matrix(words)), k=3, seed=7)
    model = ClusterModel(dim=table.dim, pca=pca, gmm=gmm)
    model.stats = compute_cluster_stats(table, seed_lexicon, model)
    return model


@pytest.fixture(scope="session")
def candidates():
    path = FIXTURES / "candidates.txt"
    return [w for w in path.read_text().split() if w]
