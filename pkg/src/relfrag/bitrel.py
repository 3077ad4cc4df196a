"""Vectorized kernels for context words on packed relations.

A relation on n points (n <= 8) is one machine word: bit ``x*n + y``
for the pair (x, y).  The four context letters act on whole numpy
arrays of packed relations:

* ``iI`` / ``iD`` are single mask operations;
* ``cv`` (converse) is a bit permutation, done through per-chunk
  lookup tables;
* ``cD`` uses a per-row table: a row composed with the difference
  relation is full when it has two or more bits, full-minus-that-column
  when it has exactly one, and empty when it is empty.

Every letter is also a union-preserving (Boolean-linear) map on
relations, so a word acts as a Boolean n^2 x n^2 transfer matrix and
two words agree on *every* relation of size n exactly when their
matrices are equal.  ``words_equal_all_relations`` decides exhaustive
equality that way; the brute-force chunked scan over all 2^(n^2)
relations is available as ``exhaustive_counterexample`` /
``scan_rule_pairs`` and the two are cross-checked in the test suite.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .semantics import diag_mask, full_mask
from .words import CAP_D, CAP_I, CONV, DOT_D, Letter, Word

MAX_SIZE = 8
_CHUNK = 1 << 19


def default_threads() -> int:
    env = os.environ.get("RELFRAG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(4, os.cpu_count() or 1))


def _dtype(n: int):
    return np.uint32 if n * n <= 32 else np.uint64


def _check_size(n: int) -> None:
    if not 1 <= n <= MAX_SIZE:
        raise ValueError(f"packed relations support sizes 1..{MAX_SIZE}, got {n}")


@lru_cache(maxsize=None)
def _transpose_tables(n: int) -> tuple[tuple[int, int, np.ndarray], ...]:
    # chunk the n^2 bit positions into <= 13-bit groups; each table maps
    # a group value to its transposed bit pattern
    nn = n * n
    dt = _dtype(n)
    tables = []
    lo = 0
    while lo < nn:
        width = min(13, nn - lo)
        vals = np.arange(1 << width, dtype=dt)
        out = np.zeros_like(vals)
        for p in range(width):
            x, y = divmod(lo + p, n)
            bit = (vals >> dt(p)) & dt(1)
            out |= bit << dt(y * n + x)
        tables.append((lo, width, out))
        lo += width
    return tuple(tables)


@lru_cache(maxsize=None)
def _rowd_tables(n: int) -> tuple[tuple[int, int, np.ndarray], ...]:
    # rows composed with D, grouped so each lookup covers <= 13 bits
    full_row = (1 << n) - 1
    single = np.zeros(1 << n, dtype=_dtype(n))
    for r in range(1 << n):
        pop = bin(r).count("1")
        single[r] = 0 if pop == 0 else (full_row ^ r if pop == 1 else full_row)
    rows_per = max(1, 13 // n)
    tables = []
    row = 0
    while row < n:
        rows = min(rows_per, n - row)
        width = rows * n
        vals = np.arange(1 << width, dtype=_dtype(n))
        out = np.zeros_like(vals)
        for k in range(rows):
            rr = ((vals >> _dtype(n)(k * n)) & _dtype(n)(full_row)).astype(np.intp)
            out |= single[rr] << _dtype(n)(k * n)
        out.setflags(write=False)
        tables.append((row * n, width, out))
        row += rows
    return tuple(tables)


def apply_letter(arr: np.ndarray, letter: Letter, n: int) -> np.ndarray:
    dt = _dtype(n)
    if letter is CAP_I:
        return arr & dt(diag_mask(n))
    if letter is CAP_D:
        return arr & dt(full_mask(n) ^ diag_mask(n))
    if letter is CONV:
        out = None
        for lo, width, table in _transpose_tables(n):
            idx = ((arr >> dt(lo)) & dt((1 << width) - 1)).astype(np.intp)
            part = table[idx]
            out = part if out is None else out | part
        return out
    if letter is DOT_D:
        out = None
        for lo, width, table in _rowd_tables(n):
            idx = ((arr >> dt(lo)) & dt((1 << width) - 1)).astype(np.intp)
            part = table[idx] << dt(lo)
            out = part if out is None else out | part
        return out
    raise ValueError(f"unknown letter {letter!r}")


def apply_word_packed(arr: np.ndarray, w: Word, n: int) -> np.ndarray:
    """Value of w filled with each relation of ``arr``; the last letter
    acts first (it is innermost)."""
    _check_size(n)
    for letter in reversed(w):
        arr = apply_letter(arr, letter, n)
    return arr


def apply_word_single(bits: int, w: Word, n: int) -> int:
    return int(apply_word_packed(np.array([bits], dtype=_dtype(n)), w, n)[0])


# ---------------------------------------------------------------------------
# Seeded panels


@lru_cache(maxsize=32)
def sample_panel(n: int, count: int, seed: int) -> np.ndarray:
    """Deterministic panel of packed relations: each pair present with
    probability 1/2, with empty, full, identity and difference forced
    into the first four slots."""
    _check_size(n)
    rng = np.random.default_rng([seed, n])
    total = max(count, 4)
    lo = rng.integers(0, 1 << 32, size=total, dtype=np.uint64)
    hi = rng.integers(0, 1 << 32, size=total, dtype=np.uint64)
    vals = (lo | (hi << np.uint64(32))) & np.uint64(full_mask(n))
    vals[0] = 0
    vals[1] = full_mask(n)
    vals[2] = diag_mask(n)
    vals[3] = full_mask(n) ^ diag_mask(n)
    arr = vals.astype(_dtype(n))
    arr.setflags(write=False)
    return arr


def fnv64(chunks: Iterable[bytes]) -> int:
    h = 0xCBF29CE484222325
    for chunk in chunks:
        for b in chunk:
            h ^= b
            h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def digest_array(arr: np.ndarray) -> int:
    return fnv64([np.ascontiguousarray(arr, dtype=np.uint64).tobytes()])


# ---------------------------------------------------------------------------
# Exhaustive scans over all relations of a given size


def _chunks(n: int, chunk: int = _CHUNK):
    count = 1 << (n * n)
    dt = _dtype(n)
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        yield start, np.arange(start, stop, dtype=dt)


def exhaustive_counterexample(w1: Word, w2: Word, n: int,
                              threads: Optional[int] = None) -> Optional[int]:
    """First packed relation R (in increasing numeric order) with
    w1[R] != w2[R], scanning all 2^(n^2) relations; None if equal
    everywhere.  The verdict does not depend on the thread count."""
    _check_size(n)
    threads = threads or default_threads()

    def scan(item):
        start, arr = item
        a = apply_word_packed(arr, w1, n)
        b = apply_word_packed(arr, w2, n)
        bad = np.nonzero(a != b)[0]
        return start + int(bad[0]) if bad.size else None

    if threads <= 1:
        for item in _chunks(n):
            hit = scan(item)
            if hit is not None:
                return hit
        return None
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for hit in pool.map(scan, _chunks(n)):
            if hit is not None:
                return hit
    return None


def scan_rule_pairs(pairs: Sequence[tuple[Word, Word]], n: int,
                    threads: Optional[int] = None) -> list[Optional[int]]:
    """One pass over all relations of size n evaluating every pair on
    each chunk; per pair, the first differing packed relation or None.
    Distinct sides are evaluated once per chunk and shared.
    """
    _check_size(n)
    threads = threads or default_threads()
    sides = sorted({w for pair in pairs for w in pair}, key=lambda w: (len(w), w))

    def scan(item):
        start, arr = item
        values = {w: apply_word_packed(arr, w, n) for w in sides}
        hits: list[Optional[int]] = []
        for w1, w2 in pairs:
            bad = np.nonzero(values[w1] != values[w2])[0]
            hits.append(start + int(bad[0]) if bad.size else None)
        return hits

    results: list[Optional[int]] = [None] * len(pairs)

    def fold(hits):
        for i, h in enumerate(hits):
            if h is not None and (results[i] is None or h < results[i]):
                results[i] = h

    if threads <= 1:
        for item in _chunks(n):
            fold(scan(item))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for hits in pool.map(scan, _chunks(n)):
                fold(hits)
    return results


def sampled_counterexample(w1: Word, w2: Word, n: int, count: int,
                           seed: int) -> Optional[int]:
    """First panel relation separating the two words, or None."""
    panel = sample_panel(n, count, seed)
    a = apply_word_packed(panel, w1, n)
    b = apply_word_packed(panel, w2, n)
    bad = np.nonzero(a != b)[0]
    return int(panel[int(bad[0])]) if bad.size else None


# ---------------------------------------------------------------------------
# Transfer matrices


@lru_cache(maxsize=None)
def _letter_matrix(letter: Letter, n: int) -> np.ndarray:
    nn = n * n
    m = np.zeros((nn, nn), dtype=np.uint8)
    for x in range(n):
        for y in range(n):
            out = x * n + y
            if letter is CAP_I:
                if x == y:
                    m[out, out] = 1
            elif letter is CAP_D:
                if x != y:
                    m[out, out] = 1
            elif letter is CONV:
                m[out, y * n + x] = 1
            else:  # DOT_D: output (x,y) is the union of inputs (x,z), z != y
                for z in range(n):
                    if z != y:
                        m[out, x * n + z] = 1
    m.setflags(write=False)
    return m


def word_matrix(w: Word, n: int) -> np.ndarray:
    """Boolean transfer matrix of the word: bit j of the input feeds
    bit i of the output iff entry (i, j) is set."""
    _check_size(n)
    m = np.eye(n * n, dtype=np.uint8)
    for letter in w:
        m = (m @ _letter_matrix(letter, n) > 0).astype(np.uint8)
    return m


def words_equal_all_relations(w1: Word, w2: Word, n: int) -> bool:
    """Whether the words agree on every relation of size n.  Words act
    Boolean-linearly, so this is transfer-matrix equality; equivalent to
    (and cross-checked against) the full 2^(n^2) scan."""
    return bool(np.array_equal(word_matrix(w1, n), word_matrix(w2, n)))
