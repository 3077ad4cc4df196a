"""String rewriting on context words, oriented by shortlex.

A rule is an ordered pair of words with the small side strictly below
the large side in shortlex order; rewriting replaces an occurrence of a
large side by the corresponding small side, so every step strictly
shrinks the word in a well-founded order and normalization terminates.
The strategy is fixed for reproducibility: leftmost occurrence first,
ties at the same position broken by the lowest rule index.

No confluence is assumed anywhere: distinct irreducible words may well
denote the same map, and nothing here claims otherwise.

Rule files hold one ``small = large`` line per rule in the word token
syntax (e.g. ``iI = iI iI``); ``#`` starts a comment line.  The name
``builtin:figure1`` denotes the embedded 21-rule system.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from . import automata
from .words import (Word, WordError, format_word, parse_word, shortlex_key,
                    LETTERS)


class RewriteError(ValueError):
    pass


class InfiniteIrreducibleSet(RewriteError):
    """The words containing no large side of any rule form an infinite
    language, so they cannot be enumerated or counted."""


@dataclass(frozen=True)
class Rule:
    small: Word
    large: Word
    index: int

    def __post_init__(self) -> None:
        if not shortlex_key(self.small) < shortlex_key(self.large):
            raise RewriteError(
                f"rule {self.index}: {format_word(self.small)!r} must be "
                f"shortlex-below {format_word(self.large)!r}")


@dataclass(frozen=True)
class RewriteSystem:
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        for pos, rule in enumerate(self.rules, start=1):
            if rule.index != pos:
                raise RewriteError(f"rule indices must be 1..n in order, got {rule.index} at {pos}")

    def large_sides(self) -> list[Word]:
        return [r.large for r in self.rules]

    def by_index(self, index: int) -> Rule:
        return self.rules[index - 1]


def make_system(pairs: Sequence[tuple[Word, Word]]) -> RewriteSystem:
    return RewriteSystem(tuple(Rule(s, l, i) for i, (s, l) in enumerate(pairs, start=1)))


_BUILTIN_FIGURE1 = (
    ("iI", "iI iI"),
    ("iD", "iD iD"),
    ("iI", "iI cv"),
    ("iI", "cv iI"),
    ("iI iD", "iD iI"),
    ("iD cv", "cv iD"),
    ("eps", "cv cv"),
    ("iD iI", "cD iI iD"),
    ("iD iI", "iI cD iI"),
    ("iI cD", "iI cD iD"),
    ("cD iI", "iD cD iI"),
    ("cD cD", "cD iD cD"),
    ("cD cD", "cD cD cD"),
    ("cD cD iD", "cD cD iI cD"),
    ("iD cD cD", "cD iI cD cD"),
    ("cv cD iI", "iD cv cD iI"),
    ("cD cv cD cv", "cv cD cv cD"),
    ("cv cD iI cD", "iD cv cD cD iD"),
    ("cD cv cD cD cv", "cv cD cD cv cD"),
    ("cD iD cv cD iD cv cD iD cv cD iD cv cD iD",
     "cv cD iD cv cD iD cv cD iD cv cD iD cv cD iD cv"),
    ("cD iI cD cv cD iI cD cv cD",
     "cv cD iI cD cv cD iI cD cv cD"),
)


def figure1_rules() -> RewriteSystem:
    """The embedded 21-rule system over the core alphabet."""
    return make_system([(parse_word(s), parse_word(l)) for s, l in _BUILTIN_FIGURE1])


# ---------------------------------------------------------------------------
# Matching and normalization


@lru_cache(maxsize=64)
def _matcher(rs: RewriteSystem):
    """Aho-Corasick machine over the large sides, with, per accepting
    trie state, the matched (pattern length, rule index) pairs."""
    pats = [(r.large, r.index) for r in rs.rules]
    children: list[list[int]] = [[-1] * automata.ALPHABET_SIZE]
    outputs: list[list[tuple[int, int]]] = [[]]
    for word, index in pats:
        node = 0
        for letter in word:
            c = int(letter)
            if children[node][c] < 0:
                children.append([-1] * automata.ALPHABET_SIZE)
                outputs.append([])
                children[node][c] = len(children) - 1
            node = children[node][c]
        outputs[node].append((len(word), index))
    from collections import deque
    fail = [0] * len(children)
    order = deque()
    for c in range(automata.ALPHABET_SIZE):
        child = children[0][c]
        if child >= 0:
            order.append(child)
        else:
            children[0][c] = 0
    while order:
        node = order.popleft()
        outputs[node] = sorted(outputs[node] + outputs[fail[node]])
        for c in range(automata.ALPHABET_SIZE):
            child = children[node][c]
            if child >= 0:
                fail[child] = children[fail[node]][c]
                order.append(child)
            else:
                children[node][c] = children[fail[node]][c]
    return [tuple(row) for row in children], [tuple(o) for o in outputs]


def _first_match(w: Word, rs: RewriteSystem) -> Optional[tuple[int, int]]:
    # (start position, rule index) of the leftmost match, lowest rule
    # index on position ties
    children, outputs = _matcher(rs)
    best: Optional[tuple[int, int]] = None
    state = 0
    for end, letter in enumerate(w):
        state = children[state][int(letter)]
        for length, index in outputs[state]:
            start = end + 1 - length
            cand = (start, index)
            if best is None or cand < best:
                best = cand
        if best is not None and best[0] <= end + 1 - _max_len(rs):
            break
    return best


@lru_cache(maxsize=64)
def _max_len(rs: RewriteSystem) -> int:
    return max((len(r.large) for r in rs.rules), default=0)


def rewrite_step(w: Word, rs: RewriteSystem) -> Optional[tuple[Word, int, int]]:
    """One rewrite at the leftmost matching position (lowest rule index
    on ties): (new word, rule index, position), or None if irreducible.
    """
    hit = _first_match(w, rs)
    if hit is None:
        return None
    start, index = hit
    rule = rs.by_index(index)
    new = w[:start] + rule.small + w[start + len(rule.large):]
    return new, index, start


def normalize(w: Word, rs: RewriteSystem) -> tuple[Word, list[tuple[int, int]]]:
    """Rewrite to an irreducible word, returning it with the replayable
    trace of (rule index, position) steps.  Each step is checked to
    strictly decrease shortlex order."""
    trace: list[tuple[int, int]] = []
    while True:
        step = rewrite_step(w, rs)
        if step is None:
            return w, trace
        new, index, pos = step
        if not shortlex_key(new) < shortlex_key(w):
            raise RewriteError(f"rewrite step did not decrease shortlex order: "
                               f"{format_word(w)} -> {format_word(new)}")  # pragma: no cover
        trace.append((index, pos))
        w = new


def replay_trace(w: Word, rs: RewriteSystem, trace: Sequence[tuple[int, int]]) -> Word:
    """Re-apply a recorded trace step by step, verifying each large
    side actually occurs where recorded."""
    for index, pos in trace:
        rule = rs.by_index(index)
        if w[pos:pos + len(rule.large)] != rule.large:
            raise RewriteError(f"trace step (rule {index}, pos {pos}) does not match "
                               f"{format_word(w)}")
        w = w[:pos] + rule.small + w[pos + len(rule.large):]
    return w


def is_irreducible(w: Word, rs: RewriteSystem) -> bool:
    """No rule's large side occurs as a contiguous factor."""
    return _first_match(w, rs) is None


# ---------------------------------------------------------------------------
# The irreducible language


def _complement_dfa(rs: RewriteSystem) -> automata.Dfa:
    if not rs.rules:
        raise InfiniteIrreducibleSet("with no rules every word is irreducible")
    trimmed = automata.complement_and_trim(automata.build_pattern_dfa(rs.large_sides()))
    finite, _, _ = automata.is_finite_language(trimmed)
    if not finite:
        raise InfiniteIrreducibleSet("the irreducible language is infinite")
    return trimmed


def count_irreducibles(rs: RewriteSystem) -> int:
    """Number of irreducible words, by path counting over the acyclic
    complement automaton; errors out when infinite."""
    trimmed = _complement_dfa(rs)
    _, _, count = automata.is_finite_language(trimmed)
    return count or 0


def enumerate_irreducibles(rs: RewriteSystem) -> Iterator[Word]:
    """All irreducible words exactly once in shortlex order; errors out
    when the set is infinite."""
    d = _complement_dfa(rs)
    finite, longest, count = automata.is_finite_language(d)
    if count == 0:
        return
    assert longest is not None

    # distances-to-acceptance per state, as a bitmask over lengths
    masks: dict[int, int] = {}

    def mask(s: int) -> int:
        if s in masks:
            return masks[s]
        m = 1 if s in d.accepting else 0
        masks[s] = m  # provisional; graph is acyclic so no real cycles
        for c in range(automata.ALPHABET_SIZE):
            t = d.delta[s][c]
            if t != d.dead:
                m |= mask(t) << 1
        masks[s] = m
        return m

    prefix: list = []

    def walk(s: int, remaining: int) -> Iterator[Word]:
        if remaining == 0:
            if s in d.accepting:
                yield tuple(prefix)
            return
        for letter in LETTERS:
            t = d.delta[s][int(letter)]
            if t == d.dead:
                continue
            if (mask(t) >> (remaining - 1)) & 1:
                prefix.append(letter)
                yield from walk(t, remaining - 1)
                prefix.pop()

    for length in range(longest + 1):
        if (mask(d.start) >> length) & 1:
            yield from walk(d.start, length)


# ---------------------------------------------------------------------------
# Rule files


def parse_rules(text: str) -> RewriteSystem:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.count("=") != 1:
            raise RewriteError(f"line {lineno}: expected 'small = large'")
        left, right = line.split("=")
        try:
            pairs.append((parse_word(left.strip()), parse_word(right.strip())))
        except WordError as e:
            raise RewriteError(f"line {lineno}: {e}") from None
    return make_system(pairs)


def format_rules(rs: RewriteSystem) -> str:
    return "".join(f"{format_word(r.small)} = {format_word(r.large)}\n" for r in rs.rules)


def load_rules(source: str) -> RewriteSystem:
    """Resolve a rule source: ``builtin:figure1`` or a file path."""
    if source == "builtin:figure1":
        return figure1_rules()
    if source.startswith("builtin:"):
        raise RewriteError(f"unknown builtin rule system {source!r}")
    with open(source, "r", encoding="utf-8") as fh:
        return parse_rules(fh.read())
