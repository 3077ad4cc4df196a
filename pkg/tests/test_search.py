import numpy as np
import pytest

from relfrag import bitrel
from relfrag.rewriting import figure1_rules, make_system
from relfrag.search import (OracleConfig, run_search, verify_rules,
                            word_equiv_oracle, word_fingerprint)
from relfrag.words import CONV, DOT_D, LETTERS, parse_word

CFG = OracleConfig()


def test_oracle_config_validation():
    with pytest.raises(ValueError):
        OracleConfig(exhaustive_size=9)
    with pytest.raises(ValueError):
        OracleConfig(sample_sizes=(0,))
    with pytest.raises(ValueError):
        OracleConfig(samples_per_size=0)


def test_fingerprint_examples():
    assert word_fingerprint((CONV, CONV), CFG) == word_fingerprint((), CFG)
    assert word_fingerprint(parse_word("iI"), CFG) != word_fingerprint(parse_word("iD"), CFG)
    assert word_fingerprint(parse_word("cD cv"), CFG) == word_fingerprint(parse_word("cD cv"), OracleConfig())


def test_oracle_examples():
    assert word_equiv_oracle(parse_word("cD cD"), parse_word("cD cD cD"), CFG)
    assert not word_equiv_oracle((DOT_D,), (CONV, DOT_D), CFG)
    w = parse_word("iI cD cv")
    assert word_equiv_oracle(w, w, CFG)


def test_oracle_fast_path_never_changes_verdict():
    rng = np.random.default_rng(21)
    for _ in range(400):
        w1 = tuple(LETTERS[i] for i in rng.integers(0, 4, size=int(rng.integers(0, 7))))
        w2 = tuple(LETTERS[i] for i in rng.integers(0, 4, size=int(rng.integers(0, 7))))
        assert word_equiv_oracle(w1, w2, CFG, use_fingerprint=True) == \
            word_equiv_oracle(w1, w2, CFG, use_fingerprint=False)


def test_matrix_equality_matches_brute_scan():
    # the transfer-matrix decision agrees with the full scan
    rng = np.random.default_rng(5)
    for n in (2, 3, 4):
        for _ in range(60):
            w1 = tuple(LETTERS[i] for i in rng.integers(0, 4, size=int(rng.integers(0, 6))))
            w2 = tuple(LETTERS[i] for i in rng.integers(0, 4, size=int(rng.integers(0, 6))))
            fast = bitrel.words_equal_all_relations(w1, w2, n)
            slow = bitrel.exhaustive_counterexample(w1, w2, n, threads=1) is None
            assert fast == slow, (w1, w2, n)


def test_matrix_equality_matches_brute_scan_size5_spot():
    pairs = [(parse_word("cD cD"), parse_word("cD cD cD")),
             (parse_word("iI"), parse_word("cv iI")),
             (parse_word("cD"), parse_word("cv cD")),
             (parse_word("cv cD iI cD"), parse_word("iD cv cD cD iD"))]
    for w1, w2 in pairs:
        fast = bitrel.words_equal_all_relations(w1, w2, 5)
        slow = bitrel.exhaustive_counterexample(w1, w2, 5, threads=1) is None
        assert fast == slow


def test_search_budget_zero():
    report = run_search(CFG, max_len=4, budget=0)
    assert report.rules.rules == ()
    assert not report.cofinite
    assert report.stop_reason == "budget"


def test_search_len2_matches_builtin_short_rules():
    report = run_search(CFG, max_len=2, budget=10**6)
    got = {(r.small, r.large) for r in report.rules.rules}
    expected = {(r.small, r.large) for r in figure1_rules().rules if len(r.large) <= 2}
    assert got == expected
    assert len(got) == 7
    assert not report.cofinite
    assert report.stop_reason == "exhausted"


def test_search_deterministic():
    a = run_search(CFG, max_len=3, budget=10**5)
    b = run_search(CFG, max_len=3, budget=10**5)
    assert a == b


def test_search_completes_to_cofinite():
    report = run_search(CFG, max_len=15, budget=10**6)
    assert report.cofinite
    assert report.stop_reason == "cofinite"
    assert report.candidates_examined <= 10**6
    # every admitted rule is oracle-certified at sizes >= 5
    admission = OracleConfig(sample_sizes=(6,))
    for rule in report.rules.rules:
        assert word_equiv_oracle(rule.small, rule.large, admission)
    # freshness: no admitted large side contains an earlier one
    larges = [r.large for r in report.rules.rules]
    for i, later in enumerate(larges):
        for earlier in larges[:i]:
            assert not any(later[j:j + len(earlier)] == earlier
                           for j in range(len(later) - len(earlier) + 1))


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("RELFRAG_THREADS", "3")
    assert bitrel.default_threads() == 3
    monkeypatch.setenv("RELFRAG_THREADS", "junk")
    assert bitrel.default_threads() >= 1
    monkeypatch.delenv("RELFRAG_THREADS")
    assert bitrel.default_threads() >= 1


def test_search_with_seed_rules():
    seven = make_system([(r.small, r.large) for r in figure1_rules().rules[:7]])
    report = run_search(CFG, max_len=2, budget=10**6, seed_rules=seven)
    # the seven short pairs are already present, so nothing new of
    # length <= 2 can be admitted
    assert len(report.rules.rules) == 7
    assert report.stop_reason == "exhausted"

    full = run_search(CFG, max_len=2, budget=10**6, seed_rules=figure1_rules())
    # a cofinite seed system short-circuits before any candidate
    assert full.stop_reason == "cofinite" and full.candidates_examined == 0


def test_search_seeded_cofinite_short_circuit():
    cfg = OracleConfig()
    complete = run_search(cfg, max_len=15, budget=10**6).rules
    again = run_search(cfg, max_len=15, budget=10**6, seed_rules=complete)
    assert again.cofinite
    assert len(again.rules.rules) == len(complete.rules)
    assert again.candidates_examined == 0


def test_verify_rules_passes_builtin_small():
    # exhaustive certification at size 4 is quick and already rules out
    # most transcription mistakes
    checks = verify_rules(figure1_rules(), exhaustive_size=4, sample_sizes=(5,),
                          samples_per_size=5000, seed=0, threads=1)
    assert all(c.exhaustive_ok and c.sampled_ok for c in checks)


def test_verify_rules_reports_failures():
    bogus = make_system([(parse_word("iI"), parse_word("iD iD"))])
    checks = verify_rules(bogus, exhaustive_size=3, sample_sizes=(4,),
                          samples_per_size=1000, seed=0, threads=1)
    assert not checks[0].exhaustive_ok
    assert checks[0].exhaustive_counterexample is not None
    assert not checks[0].sampled_ok
