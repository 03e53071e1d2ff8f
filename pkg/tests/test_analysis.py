"""Family structure and correction scoping of the statistical battery."""

import pytest

from pumleval.analysis import analyze
from pumleval.corpus import scan_corpus
from pumleval.stats import holm_adjust


@pytest.fixture(scope="module")
def bundle(synthetic_corpus):
    index = scan_corpus(synthetic_corpus.corpus_dir,
                        synthetic_corpus.baseline_path)
    return analyze(index, seeds=(17, 42))


def test_every_family_represented(bundle):
    families = {family for family, _ in bundle.stat_results}
    assert {"MQ", "SR", "AC", "SC", "TMC", "CMC", "SPC"} <= families
    # SF appears via whichever categories had variance; the flat ones are noted
    assert families <= {"MQ", "SR", "AC", "SF", "SC", "TMC", "CMC", "SPC"}
    assert any(note.startswith("SF/") for note in bundle.notes)


def test_holm_applied_within_family_only(bundle):
    by_family = {}
    for family, result in bundle.stat_results:
        by_family.setdefault(family, []).append(result)
    for results in by_family.values():
        expected = holm_adjust([r.p_raw for r in results])
        assert [r.p_adjusted for r in results] == expected
    for _, result in bundle.stat_results:
        assert result.p_adjusted >= result.p_raw - 1e-15


def test_mq_kruskal_detects_model_differences(bundle):
    mq = next(r for family, r in bundle.stat_results
              if family == "MQ" and r.test_name == "kruskal_wallis")
    assert mq.df == 8
    assert mq.p_adjusted < 0.001  # synthetic models differ by construction


def test_posthoc_pairs_cover_families(bundle):
    mq_pairs = [p for p in bundle.posthoc if p.family == "MQ"]
    assert len(mq_pairs) == 36  # 9 choose 2
    holm = holm_adjust([p.p_raw for p in mq_pairs])
    assert [p.p_holm for p in mq_pairs] == holm
    for pair in mq_pairs:
        assert pair.r_rb == pytest.approx(pair.cliffs, abs=1e-12)


def test_bootstrap_rows_per_seed_and_model(bundle):
    mq_rows = [b for b in bundle.bootstrap if b.metric == "mq"]
    assert len(mq_rows) == 9 * 2  # models x seeds
    for row in mq_rows:
        assert row.ci_low <= row.mean <= row.ci_high


def test_model_summaries_align_with_sc_counts(bundle):
    for summary in bundle.model_summaries:
        correct, errored = bundle.sc_counts[summary.model]
        assert summary.syntax_errors == errored
        assert summary.runs_valid <= summary.runs_total == correct + errored


def test_ac_contingency_uses_three_columns(bundle):
    ac = next(r for family, r in bundle.stat_results if family == "AC")
    assert ac.extra["columns"] == ["full", "uc_only", "none"]
    assert ac.df == (9 - 1) * (3 - 1)
