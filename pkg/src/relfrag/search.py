"""Equation search over the core alphabet, with a bounded-model
equivalence oracle.

The oracle for two context words compares their values on every
relation at one exhaustive size (default five) and on seeded random
panels at the sample sizes.  Exhaustive equality is decided through the
Boolean transfer matrices of the words, which agree exactly when the
words agree on all 2^(n^2) relations (cross-checked against the brute
scan in the tests); a 64-bit panel fingerprint serves as a cheap
rejection fast path that never changes the verdict.

``run_search`` is the possibly non-terminating completion loop: it
draws candidate pairs (u, v), with v ascending in shortlex order over
the words that are irreducible under the rules admitted so far, and u
ascending over the previously surviving words below v.  Restricting u
to survivors loses nothing: the oracle relation is equality of values
on a fixed model panel, hence transitive, and every discarded word is
oracle-equal to some survivor.  A pair that passes the oracle becomes a
rule; the loop stops as soon as the admitted large sides make the
irreducible language finite, or when the budget or length bound runs
out.  Each stopping cause is reported.

Verdicts are bounded-certified only: agreement on the checked models.
``verify_rules`` re-certifies any rule set the expensive way, with the
full exhaustive scan plus large sampled panels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import bitrel
from .rewriting import RewriteSystem, Rule, make_system
from .words import LETTERS, Word


@dataclass(frozen=True)
class OracleConfig:
    exhaustive_size: int = 5
    sample_sizes: tuple[int, ...] = (3, 4, 6)
    samples_per_size: int = 2048
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.exhaustive_size <= bitrel.MAX_SIZE:
            raise ValueError(f"exhaustive_size must be in 1..{bitrel.MAX_SIZE}")
        if any(not 1 <= s <= bitrel.MAX_SIZE for s in self.sample_sizes):
            raise ValueError(f"sample sizes must be in 1..{bitrel.MAX_SIZE}")
        if self.samples_per_size < 1:
            raise ValueError("samples_per_size must be positive")
        object.__setattr__(self, "sample_sizes", tuple(self.sample_sizes))


def _panel(cfg: OracleConfig, n: int) -> np.ndarray:
    return bitrel.sample_panel(n, cfg.samples_per_size, cfg.seed)


def word_fingerprint(w: Word, cfg: OracleConfig) -> int:
    """64-bit digest of the word's values over the seeded panels at the
    sample sizes; words that agree on those panels collide by
    construction."""
    chunks = []
    for n in cfg.sample_sizes:
        out = bitrel.apply_word_packed(_panel(cfg, n), w, n)
        chunks.append(np.ascontiguousarray(out, dtype=np.uint64).tobytes())
    return bitrel.fnv64(chunks)


def word_equiv_oracle(w1: Word, w2: Word, cfg: OracleConfig,
                      use_fingerprint: bool = True) -> bool:
    """True iff the words agree on every relation at the exhaustive
    size and on every panel relation at the sample sizes."""
    if w1 == w2:
        return True
    if use_fingerprint and word_fingerprint(w1, cfg) != word_fingerprint(w2, cfg):
        return False
    if not bitrel.words_equal_all_relations(w1, w2, cfg.exhaustive_size):
        return False
    for n in cfg.sample_sizes:
        panel = _panel(cfg, n)
        a = bitrel.apply_word_packed(panel, w1, n)
        b = bitrel.apply_word_packed(panel, w2, n)
        if not np.array_equal(a, b):
            return False
    return True


@dataclass(frozen=True)
class SearchReport:
    rules: RewriteSystem
    cofinite: bool
    candidates_examined: int
    oracle_calls: int
    stop_reason: str  # "cofinite" | "budget" | "exhausted"
    max_complement_length: Optional[int] = None
    survivors: int = 0


def run_search(cfg: OracleConfig, max_len: int, budget: int,
               seed_rules: Optional[RewriteSystem] = None) -> SearchReport:
    """Deterministic completion loop up to the given candidate-pair
    budget and large-side length bound.

    A word is fresh when all its proper factors survived earlier rounds
    and it is not itself an admitted large side; fresh words are drawn
    in shortlex order.  Each fresh word is compared (fingerprint first)
    against the surviving words below it, in shortlex order, and the
    first oracle hit admits the pair as a rule.

    Admission targets the word monoid on universes of size >= the
    exhaustive size, so sample sizes below it are dropped here: several
    true rules of that monoid (e.g. three of the built-in ones) are
    false on 3-element universes, and sampling there would veto them
    and leave the loop unable to ever reach cofiniteness.
    """
    from .automata import is_cofinite

    cfg = OracleConfig(cfg.exhaustive_size,
                       tuple(s for s in cfg.sample_sizes if s >= cfg.exhaustive_size)
                       or (min(cfg.exhaustive_size + 1, bitrel.MAX_SIZE),),
                       cfg.samples_per_size, cfg.seed)

    rules: list[Rule] = list(seed_rules.rules) if seed_rules else []
    larges = {r.large for r in rules}

    def report(reason: str) -> SearchReport:
        rep = is_cofinite([r.large for r in rules])
        return SearchReport(make_system([(r.small, r.large) for r in rules]),
                            rep.cofinite, examined, oracle_calls, reason,
                            rep.max_complement_length,
                            survivors=len(survivors))

    survivors: list[Word] = []
    survivor_set: set[Word] = set()
    by_fp: dict[int, list[Word]] = {}
    by_len: dict[int, list[Word]] = {}
    examined = 0
    oracle_calls = 0

    def admit_or_keep(v: Word) -> Optional[Rule]:
        nonlocal examined, oracle_calls
        fp = word_fingerprint(v, cfg)
        examined_here = len(survivors)
        for u in by_fp.get(fp, ()):  # ascending shortlex by construction
            oracle_calls += 1
            if word_equiv_oracle(u, v, cfg, use_fingerprint=False):
                examined += examined_here
                return Rule(u, v, len(rules) + 1)
        examined += examined_here
        survivors.append(v)
        survivor_set.add(v)
        by_fp.setdefault(fp, []).append(v)
        by_len.setdefault(len(v), []).append(v)
        return None

    if is_cofinite([r.large for r in rules]).cofinite:
        return report("cofinite")

    # the empty word always survives (nothing is below it)
    survivors.append(())
    survivor_set.add(())
    by_fp.setdefault(word_fingerprint((), cfg), []).append(())
    by_len.setdefault(0, []).append(())

    for length in range(1, max_len + 1):
        parents = by_len.get(length - 1, [])
        if not parents:
            break
        for p in parents:
            for letter in LETTERS:
                v = p + (letter,)
                if v[1:] not in survivor_set or v in larges:
                    continue
                if examined >= budget:
                    return report("budget")
                rule = admit_or_keep(v)
                if rule is not None:
                    rules.append(rule)
                    larges.add(rule.large)
                    if is_cofinite([r.large for r in rules]).cofinite:
                        return report("cofinite")
    return report("exhausted")


# ---------------------------------------------------------------------------
# Heavyweight certification


@dataclass(frozen=True)
class RuleCheck:
    index: int
    small: Word
    large: Word
    exhaustive_size: int
    exhaustive_ok: bool
    exhaustive_counterexample: Optional[int]
    sampled_ok: bool
    sampled_failures: tuple[tuple[int, int], ...]  # (size, packed relation)


def verify_rules(rs: RewriteSystem, exhaustive_size: int = 5,
                 sample_sizes: Sequence[int] = (6, 7),
                 samples_per_size: int = 100_000, seed: int = 0,
                 threads: Optional[int] = None) -> list[RuleCheck]:
    """Certify every rule by brute force: equality of both sides on all
    2^(n^2) relations at the exhaustive size (chunked scan, optionally
    threaded) and on seeded sampled panels at the remaining sizes."""
    pairs = [(r.small, r.large) for r in rs.rules]
    exhaustive = bitrel.scan_rule_pairs(pairs, exhaustive_size, threads=threads)
    out = []
    for rule, bad in zip(rs.rules, exhaustive):
        failures = []
        for n in sample_sizes:
            hit = bitrel.sampled_counterexample(rule.small, rule.large, n,
                                                samples_per_size, seed)
            if hit is not None:
                failures.append((n, hit))
        out.append(RuleCheck(rule.index, rule.small, rule.large,
                             exhaustive_size, bad is None, bad,
                             not failures, tuple(failures)))
    return out
