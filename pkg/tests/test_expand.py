import random
from decimal import Decimal

import numpy as np
import pytest

from helpers import (
    EMOTIONS,
    make_blob_embeddings,
    random_lexicon_flags,
    write_embtxt,
    write_lexicon_tsv,
)
from elex.calibrate import compute_cluster_stats
from elex.cluster import fit_gmm, fit_pca, project
from elex.embeddings import load_embeddings
from elex.errors import UsageError
from elex.expand import (
    diagnostics,
    expand_at,
    result_at,
    score_candidates,
    sweep,
    theta_grid,
)
from elex.lexicon import Lexicon, LexiconEntry, load_lexicon
from elex.modelio import ClusterModel
from oracles import avg_hamming_pairs, brute_force_expand, entropy_bits_pure


def build_setup(tmp_path, seed=50, n_seed=30, n_cand=20, dim=5, p_extra=0.3):
    """Synthetic seed lexicon + candidates + fitted model for oracle tests."""
    rng = np.random.default_rng(seed)
    rnd = random.Random(seed)
    per_blob = (n_seed + n_cand + 2) // 3 + 1
    vectors, blob_of = make_blob_embeddings(
        rng,
        n_per_blob=(per_blob, per_blob, per_blob),
        dim=dim,
        noise=(0.2, 0.6, 1.1),
    )
    words = sorted(vectors)
    rnd.shuffle(words)
    seed_words = sorted(words[:n_seed])
    cand_words = sorted(words[n_seed : n_seed + n_cand])

    flags = random_lexicon_flags(seed_words, rnd, p_extra=p_extra)
    write_lexicon_tsv(tmp_path / "lex.tsv", flags)
    lexicon = load_lexicon(tmp_path / "lex.tsv")
    write_embtxt(tmp_path / "emb.txt", vectors, fmt=".17g")
    table = load_embeddings(tmp_path / "emb.txt")

    pca = fit_pca(table, seed_words)
    gmm = fit_gmm(project(pca, table.matrix(seed_words)), seed=seed, restarts=3)
    model = ClusterModel(dim=dim, pca=pca, gmm=gmm)
    stats = compute_cluster_stats(table, lexicon, model)
    return table, lexicon, model, stats, cand_words, vectors, flags


def _oracle(table, lexicon, model, stats, cand_words, vectors, flags, theta):
    valid = [stats.is_valid(i) for i in range(stats.n_clusters)]
    return brute_force_expand(
        cand_words,
        flags,
        {w: list(map(float, v)) for w, v in vectors.items()},
        model.pca.mean.tolist(),
        model.pca.components.tolist(),
        model.gmm.weights.tolist(),
        model.gmm.means.tolist(),
        model.gmm.covariances.tolist(),
        stats.mu.tolist(),
        stats.sigma.tolist(),
        valid,
        EMOTIONS,
        theta,
    )


@pytest.mark.parametrize("theta", [0.1, 0.4, 0.9])
def test_expand_matches_brute_force_oracle(tmp_path, theta):
    table, lexicon, model, stats, cands, vectors, flags = build_setup(tmp_path)
    result = expand_at(cands, lexicon, table, model, stats, theta=theta)
    got = {(a.word, a.emotion, a.nearest) for a in result.assignments}
    want, scores = _oracle(table, lexicon, model, stats, cands, vectors, flags, theta)
    assert got == want
    for a in result.assignments:
        assert a.sim == pytest.approx(scores[(a.word, a.emotion, a.nearest)], abs=1e-9)


def test_expand_high_threshold_empty(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    scores = score_candidates(cands, lexicon, table, model, stats)
    top = max(s for best in scores.best.values() for _, s in best.values())
    assert top <= 0.9  # fixture precondition: nothing clears 0.9
    result = expand_at(cands, lexicon, table, model, stats, theta=0.95)
    assert result.assignments == set()
    assert len(result.expanded_lexicon) == 0
    assert result.diagnostics.total_new_assignments == 0


def test_candidate_in_seed_lexicon_skipped(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    seed_word = lexicon.words()[0]
    result = expand_at([seed_word] + cands, lexicon, table, model, stats, theta=0.4)
    assert seed_word in result.skipped_in_seed
    assert all(a.word != seed_word for a in result.assignments)
    assert set(result.expanded_lexicon.entries).isdisjoint(lexicon.entries)


def test_missing_candidates_reported(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    result = expand_at(cands + ["notinvocab"], lexicon, table, model, stats, theta=0.4)
    assert result.candidate_coverage.missing == ["notinvocab"]
    assert result.candidate_coverage.coverage_ratio < 1.0


def test_expand_theta_validation(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    for bad in (0.0, 1.0, -0.3, 1.7):
        with pytest.raises(UsageError, match="theta"):
            expand_at(cands, lexicon, table, model, stats, theta=bad)


def test_expanded_entries_carry_support(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    result = expand_at(cands, lexicon, table, model, stats, theta=0.4)
    assert result.assignments  # fixture expands something at 0.4
    for w, entry in result.expanded_lexicon.entries.items():
        assert entry.source == "expanded"
        flagged = {EMOTIONS[i] for i, f in enumerate(entry.flags) if f}
        assert set(entry.support) == flagged
        for emo, sup in entry.support.items():
            assert sup.sim > 0.4
            assert sup.nearest in lexicon.entries


def test_threads_do_not_change_results(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path)
    r1 = expand_at(cands, lexicon, table, model, stats, theta=0.4, threads=1)
    r8 = expand_at(cands, lexicon, table, model, stats, theta=0.4, threads=8)
    assert {(a.word, a.emotion, a.nearest, a.sim) for a in r1.assignments} == {
        (a.word, a.emotion, a.nearest, a.sim) for a in r8.assignments
    }
    assert r1.expanded_lexicon.entries == r8.expanded_lexicon.entries


# ------------------------------------------------------------- sweep


def test_theta_grid_default_has_19_points():
    grid = theta_grid()
    assert len(grid) == 19
    assert grid[0] == Decimal("0.05")
    assert grid[-1] == Decimal("0.95")
    assert all(b - a == Decimal("0.05") for a, b in zip(grid, grid[1:]))


def test_theta_grid_validation():
    with pytest.raises(UsageError):
        theta_grid(0.0, 0.9, 0.05)
    with pytest.raises(UsageError):
        theta_grid(0.5, 0.4, 0.05)
    with pytest.raises(UsageError):
        theta_grid(0.1, 0.9, 0.0)
    with pytest.raises(UsageError):
        theta_grid(0.1, 1.0, 0.1)
    assert [str(t) for t in theta_grid(0.3, 0.3, 0.05)] == ["0.30"]


def test_sweep_rows_match_independent_expand_at(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path, seed=51)
    report = sweep(cands, lexicon, table, model, stats)
    assert len(report.rows) == 19
    for row in report.rows:
        single = expand_at(cands, lexicon, table, model, stats, theta=row.theta)
        d = single.diagnostics
        assert row.total_new_assignments == d.total_new_assignments
        assert row.unique_words_expanded == d.unique_words_expanded
        assert row.unique_patterns == d.unique_patterns
        assert row.avg_hamming == d.avg_hamming
        assert row.overall_entropy == d.overall_entropy
        assert row.per_emotion == d.per_emotion


def test_sweep_monotone_and_nested(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path, seed=52)
    scores = score_candidates(cands, lexicon, table, model, stats)
    grid = theta_grid()
    prev_set = None
    prev_total = None
    for t in grid:
        res = result_at(scores, float(t))
        cur = {(a.word, a.emotion, a.nearest) for a in res.assignments}
        if prev_set is not None:
            assert cur <= prev_set
            assert res.diagnostics.total_new_assignments <= prev_total
        prev_set, prev_total = cur, res.diagnostics.total_new_assignments


def test_sweep_csv_shape(tmp_path):
    table, lexicon, model, stats, cands, _, _ = build_setup(tmp_path, seed=53)
    report = sweep(cands, lexicon, table, model, stats)
    csv = report.to_csv()
    lines = csv.strip().split("\n")
    assert len(lines) == 20  # header + 19 rows
    header = lines[0].split(",")
    assert header[:7] == [
        "theta",
        "total_new_assignments",
        "unique_words_expanded",
        "unique_patterns",
        "avg_hamming",
        "avg_hamming_norm",
        "overall_entropy_bits",
    ]
    assert header[7:] == [
        f"{kind}_{e}" for e in EMOTIONS for kind in ("count", "bent")
    ]
    assert [ln.split(",")[0] for ln in lines[1:]] == [
        "0.05", "0.10", "0.15", "0.20", "0.25", "0.30", "0.35", "0.40", "0.45",
        "0.50", "0.55", "0.60", "0.65", "0.70", "0.75", "0.80", "0.85", "0.90",
        "0.95",
    ]


# ------------------------------------------------------- diagnostics


def _result_with(entries, assignments, theta=0.4):
    from elex.expand import Assignment, ExpansionResult
    from elex.embeddings import CoverageReport

    lex = Lexicon(entries=entries)
    res = ExpansionResult(
        theta=theta,
        assignments=assignments,
        expanded_lexicon=lex,
        diagnostics=None,
        candidate_coverage=CoverageReport(missing=[], total=len(entries)),
        lexicon_coverage=CoverageReport(missing=[], total=1),
        unexpandable_emotions=[],
        skipped_in_seed=[],
    )
    return res


def _mk_entry(word, flags):
    from elex.lexicon import SOURCE_EXPANDED, Support

    support = {
        EMOTIONS[i]: Support(nearest="x", sim=0.9) for i, f in enumerate(flags) if f
    }
    return LexiconEntry(
        word=word, flags=tuple(flags), source=SOURCE_EXPANDED, support=support
    )


def _mk_assignments(entries):
    from elex.expand import Assignment

    out = set()
    for w, e in entries.items():
        for i, f in enumerate(e.flags):
            if f:
                out.add(Assignment(word=w, emotion=EMOTIONS[i], nearest="x", sim=0.9))
    return out


def test_diagnostics_identical_patterns():
    pat = (1, 0, 1, 0, 0, 0, 0, 0)
    entries = {w: _mk_entry(w, pat) for w in ("aa", "bb", "cc")}
    res = _result_with(entries, _mk_assignments(entries))
    d = diagnostics(res)
    assert d.avg_hamming == 0.0
    assert d.unique_patterns == 1
    assert d.unique_words_expanded == 3
    assert d.total_new_assignments == 6


def test_diagnostics_complementary_pair():
    entries = {
        "aa": _mk_entry("aa", (1, 0, 1, 0, 1, 0, 1, 0)),
        "bb": _mk_entry("bb", (0, 1, 0, 1, 0, 1, 0, 1)),
    }
    res = _result_with(entries, _mk_assignments(entries))
    d = diagnostics(res)
    assert d.avg_hamming == 8.0
    assert d.avg_hamming_norm == 1.0
    assert d.unique_patterns == 2


def test_diagnostics_entropy_extremes():
    # one word per emotion: uniform assignment distribution
    entries = {}
    for i, e in enumerate(EMOTIONS):
        flags = [0] * 8
        flags[i] = 1
        entries[f"w{i}"] = _mk_entry(f"w{i}", flags)
    res = _result_with(entries, _mk_assignments(entries))
    d = diagnostics(res)
    assert d.overall_entropy == 3.0  # exactly

    solo = {"w0": _mk_entry("w0", (1, 0, 0, 0, 0, 0, 0, 0))}
    res = _result_with(solo, _mk_assignments(solo))
    assert diagnostics(res).overall_entropy == 0.0


def test_diagnostics_empty_result():
    res = _result_with({}, set())
    d = diagnostics(res)
    assert d.total_new_assignments == 0
    assert d.avg_hamming == 0.0
    assert d.overall_entropy == 0.0
    assert all(v["binary_entropy"] == 0.0 for v in d.per_emotion.values())


def test_diagnostics_hamming_vs_pairwise_oracle(tmp_path):
    rnd = random.Random(54)
    entries = {}
    for i in range(17):
        flags = [rnd.randint(0, 1) for _ in range(8)]
        if not any(flags):
            flags[0] = 1
        entries[f"w{i:02d}"] = _mk_entry(f"w{i:02d}", flags)
    res = _result_with(entries, _mk_assignments(entries))
    d = diagnostics(res)
    pats = [entries[w].flags for w in sorted(entries)]
    assert d.avg_hamming == pytest.approx(avg_hamming_pairs(pats), abs=1e-12)
    counts = [sum(e.flags[i] for e in entries.values()) for i in range(8)]
    assert d.overall_entropy == pytest.approx(entropy_bits_pure(counts), abs=1e-12)


def test_degradation_direction_towards_low_theta(tmp_path):
    # Lowering theta below the fixture's optimum blurs category structure:
    # pattern diversity and pairwise Hamming separation collapse as every
    # candidate saturates toward the same dense emotion pattern.
    table, lexicon, model, stats, cands, _, _ = build_setup(
        tmp_path, seed=55, n_cand=25, p_extra=0.15
    )
    scores = score_candidates(cands, lexicon, table, model, stats)
    grid = [float(t) for t in theta_grid()]
    rows = [result_at(scores, t) for t in grid]
    pats = [r.diagnostics.unique_patterns for r in rows]
    hams = [r.diagnostics.avg_hamming for r in rows]
    best = max(range(len(rows)), key=lambda i: pats[i])
    assert pats[0] < pats[best]  # corruption at the bottom of the grid
    for i in range(best):  # monotone trend, 1 pattern of jitter allowed
        assert pats[i] <= pats[i + 1] + 1
        assert hams[i] <= hams[i + 1] + 0.25
