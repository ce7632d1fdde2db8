from finram.report import canonical_json
from finram.verify import SUITES, expansion_corpus, run_suite


def test_all_suite_names_run_clean():
    for name in SUITES:
        result = run_suite(name)
        assert result["ok"], f"suite {name}: {result['violations']} violations"
        assert result["checked"] > 0


def test_expansion_corpus_is_deterministic():
    names1 = [(name, u.source.objects) for name, u, _ in expansion_corpus()]
    names2 = [(name, u.source.objects) for name, u, _ in expansion_corpus()]
    assert names1 == names2


def test_arrows_suite_parallel_and_pruned_identical():
    base = canonical_json(run_suite("arrows", workers=1, pruning=False))
    for workers, pruning in [(8, False), (1, True), (8, True)]:
        assert canonical_json(run_suite("arrows", workers=workers, pruning=pruning)) == base


def test_suites_report_case_rows():
    result = run_suite("mult")
    row = result["cases"][0]
    assert {"case", "holds", "lhs", "rhs"} <= set(row)
