"""Finite-structure semantics for relation terms.

A relation on an n-element universe is a packed bitset: bit ``x*n + y``
set iff the pair (x, y) is in the relation (row-major).  A structure is
a universe size plus one relation per variable.  Evaluation follows the
binary-relation reading of each operator: composition is relative
product, dagger is relative sum ((x,y) in R dagger S iff for every z,
(x,z) in R or (z,y) in S), projections re-read coordinates, boolean
operators and complement act inside the full square.

Equivalence oracles come in two flavours: ``exhaustive_check`` scans
every labeled structure at the given sizes (vectorized, chunked, with a
structure-count budget) and ``random_check`` samples seeded random
structures.  Both return the first counterexample in a documented
deterministic order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .terms import (Bot, Comp, Compl, Dagger, Di, Id, Inter, Proj, Term, TermError,
                    Top, Union, Var, variables)


class SemanticsError(ValueError):
    pass


class BudgetExceeded(SemanticsError):
    """An exhaustive scan would need more structures than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} structures, budget is {budget}")


def full_mask(n: int) -> int:
    return (1 << (n * n)) - 1


def diag_mask(n: int) -> int:
    m = 0
    for x in range(n):
        m |= 1 << (x * n + x)
    return m


@dataclass(frozen=True)
class Rel:
    """A binary relation on [0, size) as a packed row-major bitset."""

    size: int
    bits: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise SemanticsError("universe size must be at least 1")
        if not 0 <= self.bits <= full_mask(self.size):
            raise SemanticsError("relation bits out of range for the universe size")

    @staticmethod
    def empty(n: int) -> "Rel":
        return Rel(n, 0)

    @staticmethod
    def full(n: int) -> "Rel":
        return Rel(n, full_mask(n))

    @staticmethod
    def identity(n: int) -> "Rel":
        return Rel(n, diag_mask(n))

    @staticmethod
    def difference(n: int) -> "Rel":
        return Rel(n, full_mask(n) ^ diag_mask(n))

    @staticmethod
    def from_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> "Rel":
        bits = 0
        for x, y in pairs:
            if not (0 <= x < n and 0 <= y < n):
                raise SemanticsError(f"pair ({x}, {y}) out of range for size {n}")
            bits |= 1 << (x * n + y)
        return Rel(n, bits)

    def contains(self, x: int, y: int) -> bool:
        return bool(self.bits >> (x * self.size + y) & 1)

    def pairs(self) -> list[tuple[int, int]]:
        n = self.size
        return [(x, y) for x in range(n) for y in range(n) if self.contains(x, y)]

    def row(self, x: int) -> int:
        n = self.size
        return (self.bits >> (x * n)) & ((1 << n) - 1)

    def union(self, other: "Rel") -> "Rel":
        return Rel(self.size, self.bits | other.bits)

    def inter(self, other: "Rel") -> "Rel":
        return Rel(self.size, self.bits & other.bits)

    def compl(self) -> "Rel":
        return Rel(self.size, self.bits ^ full_mask(self.size))

    def comp(self, other: "Rel") -> "Rel":
        # relative product: row x of the result is the union of the
        # rows of `other` indexed by the bits of row x of self
        n = self.size
        out = 0
        for x in range(n):
            r = self.row(x)
            acc = 0
            z = 0
            while r:
                if r & 1:
                    acc |= other.row(z)
                r >>= 1
                z += 1
            out |= acc << (x * n)
        return Rel(n, out)

    def dagger(self, other: "Rel") -> "Rel":
        # relative sum: (x,y) present iff every z has (x,z) in self or
        # (z,y) in other, computed per row straight from that clause
        n = self.size
        row_full = (1 << n) - 1
        cols = [0] * n
        for z in range(n):
            r = other.row(z)
            for y in range(n):
                cols[y] |= ((r >> y) & 1) << z
        out = 0
        for x in range(n):
            r = self.row(x)
            acc = 0
            for y in range(n):
                need = row_full & ~r  # the z's with (x,z) missing
                if need & ~cols[y] == 0:
                    acc |= 1 << y
            out |= acc << (x * n)
        return Rel(n, out)

    def converse(self) -> "Rel":
        n = self.size
        out = 0
        for x in range(n):
            for y in range(n):
                if self.contains(x, y):
                    out |= 1 << (y * n + x)
        return Rel(n, out)

    def project(self, img1: int, img2: int) -> "Rel":
        if (img1, img2) == (1, 2):
            return self
        if (img1, img2) == (2, 1):
            return self.converse()
        n = self.size
        out = 0
        if (img1, img2) == (1, 1):
            # (x,y) present iff (x,x) in self
            for x in range(n):
                if self.contains(x, x):
                    out |= ((1 << n) - 1) << (x * n)
        else:
            # (x,y) present iff (y,y) in self
            col = 0
            for y in range(n):
                if self.contains(y, y):
                    col |= 1 << y
            for x in range(n):
                out |= col << (x * n)
        return Rel(n, out)


@dataclass(frozen=True)
class Structure:
    """A finite universe plus one relation per variable."""

    size: int
    assignment: Mapping[str, Rel]

    def __post_init__(self) -> None:
        if self.size < 1:
            raise SemanticsError("universe size must be at least 1")
        for name, rel in self.assignment.items():
            if rel.size != self.size:
                raise SemanticsError(f"relation for {name!r} has size {rel.size}, structure has {self.size}")
        object.__setattr__(self, "assignment", dict(self.assignment))


@dataclass(frozen=True)
class SizeWindow:
    """The universe sizes a bounded verdict actually covered."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.hi:
            raise SemanticsError(f"invalid size window [{self.lo}, {self.hi}]")


def structure_to_json(m: Structure) -> str:
    relations = {name: sorted(rel.pairs()) for name, rel in sorted(m.assignment.items())}
    return json.dumps({"size": m.size, "relations": relations})


def structure_from_json(text: str) -> Structure:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SemanticsError(f"invalid structure JSON: {e}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("size"), int):
        raise SemanticsError("structure object needs an integer 'size'")
    n = obj["size"]
    if n < 1:
        raise SemanticsError("structure size must be at least 1")
    rels = obj.get("relations", {})
    if not isinstance(rels, dict):
        raise SemanticsError("'relations' must map variable names to pair lists")
    assignment = {}
    for name, pairs in rels.items():
        seen = set()
        for p in pairs:
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(c, int) for c in p)):
                raise SemanticsError(f"relation {name!r}: pairs must be [x, y] integer lists")
            x, y = p
            if not (0 <= x < n and 0 <= y < n):
                raise SemanticsError(f"relation {name!r}: pair ({x}, {y}) out of range for size {n}")
            if (x, y) in seen:
                raise SemanticsError(f"relation {name!r}: duplicate pair ({x}, {y})")
            seen.add((x, y))
        assignment[name] = Rel.from_pairs(n, (tuple(p) for p in pairs))
    return Structure(n, assignment)


def eval_term(t: Term, m: Structure) -> Rel:
    """Evaluate a term in a structure.  Every variable of t must be
    assigned."""
    n = m.size
    if isinstance(t, Var):
        try:
            return m.assignment[t.name]
        except KeyError:
            raise SemanticsError(f"variable {t.name!r} is not assigned in the structure") from None
    if isinstance(t, Bot):
        return Rel.empty(n)
    if isinstance(t, Top):
        return Rel.full(n)
    if isinstance(t, Id):
        return Rel.identity(n)
    if isinstance(t, Di):
        return Rel.difference(n)
    if isinstance(t, Union):
        return eval_term(t.left, m).union(eval_term(t.right, m))
    if isinstance(t, Inter):
        return eval_term(t.left, m).inter(eval_term(t.right, m))
    if isinstance(t, Compl):
        return eval_term(t.arg, m).compl()
    if isinstance(t, Comp):
        return eval_term(t.left, m).comp(eval_term(t.right, m))
    if isinstance(t, Dagger):
        return eval_term(t.left, m).dagger(eval_term(t.right, m))
    if isinstance(t, Proj):
        return eval_term(t.arg, m).project(t.proj.img1, t.proj.img2)
    raise TermError(f"unexpected term {t!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Structure enumeration
#
# Order: variables sorted by name; the concatenation of their row-major
# bit matrices (first variable first, bit (0,0) first) is read as a
# big-endian binary string, and structures are yielded in increasing
# order of that string, i.e. lexicographically.

DEFAULT_BUDGET = 1 << 28


def structure_count(num_vars: int, size: int) -> int:
    return 1 << (size * size * num_vars)


def _bitrev_table(nbits: int) -> np.ndarray:
    # maps a big-endian bit block to the packed little-endian relation
    vals = np.arange(1 << nbits, dtype=np.uint64)
    out = np.zeros_like(vals)
    for p in range(nbits):
        bit = (vals >> np.uint64(nbits - 1 - p)) & np.uint64(1)
        out |= bit << np.uint64(p)
    return out


def _structure_from_index(index: int, names: list[str], size: int) -> Structure:
    nn = size * size
    assignment = {}
    for slot, name in enumerate(names):
        block = (index >> (nn * (len(names) - 1 - slot))) & ((1 << nn) - 1)
        bits = 0
        for p in range(nn):
            if (block >> (nn - 1 - p)) & 1:
                bits |= 1 << p
        assignment[name] = Rel(size, bits)
    return Structure(size, assignment)


def enumerate_structures(var_names: Iterable[str], size: int,
                         budget: int = DEFAULT_BUDGET) -> Iterator[Structure]:
    """All labeled structures of the given size over the given
    variables, each exactly once, in the documented lexicographic
    order."""
    names = sorted(set(var_names))
    count = structure_count(len(names), size)
    if count > budget:
        raise BudgetExceeded(count, budget)
    for index in range(count):
        yield _structure_from_index(index, names, size)


# ---------------------------------------------------------------------------
# Vectorized term evaluation on batches of packed relations


def _batch_comp(r: np.ndarray, s: np.ndarray, n: int) -> np.ndarray:
    one = np.uint64(1)
    row_mask = np.uint64((1 << n) - 1)
    out = np.zeros_like(r)
    srows = [(s >> np.uint64(n * z)) & row_mask for z in range(n)]
    for x in range(n):
        rx = (r >> np.uint64(n * x)) & row_mask
        acc = np.zeros_like(r)
        for z in range(n):
            take = (rx >> np.uint64(z)) & one
            acc |= srows[z] * take
        out |= acc << np.uint64(n * x)
    return out


def _batch_dagger(r: np.ndarray, s: np.ndarray, n: int) -> np.ndarray:
    one = np.uint64(1)
    row_mask = np.uint64((1 << n) - 1)
    # column y of s, packed over z
    scols = []
    for y in range(n):
        col = np.zeros_like(s)
        for z in range(n):
            col |= ((s >> np.uint64(n * z + y)) & one) << np.uint64(z)
        scols.append(col)
    out = np.zeros_like(r)
    for x in range(n):
        rx = (r >> np.uint64(n * x)) & row_mask
        acc = np.zeros_like(r)
        for y in range(n):
            missing = row_mask & ~rx
            ok = (missing & ~scols[y]) == 0
            acc |= ok.astype(np.uint64) << np.uint64(y)
        out |= acc << np.uint64(n * x)
    return out


def _batch_converse(r: np.ndarray, n: int) -> np.ndarray:
    one = np.uint64(1)
    out = np.zeros_like(r)
    for x in range(n):
        for y in range(n):
            out |= ((r >> np.uint64(x * n + y)) & one) << np.uint64(y * n + x)
    return out


def _batch_project(r: np.ndarray, img1: int, img2: int, n: int) -> np.ndarray:
    if (img1, img2) == (1, 2):
        return r
    if (img1, img2) == (2, 1):
        return _batch_converse(r, n)
    one = np.uint64(1)
    row_mask = np.uint64((1 << n) - 1)
    out = np.zeros_like(r)
    if (img1, img2) == (1, 1):
        for x in range(n):
            loop = (r >> np.uint64(x * n + x)) & one
            out |= (loop * row_mask) << np.uint64(x * n)
    else:
        col = np.zeros_like(r)
        for y in range(n):
            col |= ((r >> np.uint64(y * n + y)) & one) << np.uint64(y)
        for x in range(n):
            out |= col << np.uint64(x * n)
    return out


def eval_term_batch(t: Term, assignment: Mapping[str, np.ndarray], n: int) -> np.ndarray:
    """Evaluate a term on a whole batch of structures at once; each
    variable maps to a uint64 array of packed relations.  Packing
    limits the universe to 8 points."""
    if n > 8:
        raise SemanticsError("batched evaluation packs relations into 64-bit words; size must be <= 8")
    fm = np.uint64(full_mask(n))
    if isinstance(t, Var):
        try:
            return assignment[t.name]
        except KeyError:
            raise SemanticsError(f"variable {t.name!r} is not assigned") from None
    some = next(iter(assignment.values()), None)
    shape = some.shape if some is not None else (1,)
    if isinstance(t, Bot):
        return np.zeros(shape, dtype=np.uint64)
    if isinstance(t, Top):
        return np.full(shape, fm, dtype=np.uint64)
    if isinstance(t, Id):
        return np.full(shape, np.uint64(diag_mask(n)), dtype=np.uint64)
    if isinstance(t, Di):
        return np.full(shape, np.uint64(full_mask(n) ^ diag_mask(n)), dtype=np.uint64)
    if isinstance(t, Union):
        return eval_term_batch(t.left, assignment, n) | eval_term_batch(t.right, assignment, n)
    if isinstance(t, Inter):
        return eval_term_batch(t.left, assignment, n) & eval_term_batch(t.right, assignment, n)
    if isinstance(t, Compl):
        return eval_term_batch(t.arg, assignment, n) ^ fm
    if isinstance(t, Comp):
        return _batch_comp(eval_term_batch(t.left, assignment, n),
                           eval_term_batch(t.right, assignment, n), n)
    if isinstance(t, Dagger):
        return _batch_dagger(eval_term_batch(t.left, assignment, n),
                             eval_term_batch(t.right, assignment, n), n)
    if isinstance(t, Proj):
        return _batch_project(eval_term_batch(t.arg, assignment, n), t.proj.img1, t.proj.img2, n)
    raise TermError(f"unexpected term {t!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Equivalence oracles

_CHUNK = 1 << 20


def exhaustive_check(t1: Term, t2: Term, sizes: Iterable[int],
                     budget: int = DEFAULT_BUDGET) -> Optional[Structure]:
    """First structure (sizes ascending, then enumeration order) where
    the two terms evaluate differently; None if there is none."""
    names = sorted(variables(t1) | variables(t2))
    for size in sorted(set(sizes)):
        count = structure_count(len(names), size)
        if count > budget:
            raise BudgetExceeded(count, budget)
        idx = _scan_size(t1, t2, names, size, count)
        if idx is not None:
            return _structure_from_index(idx, names, size)
    return None


def _scan_size(t1: Term, t2: Term, names: list[str], size: int, count: int) -> Optional[int]:
    nn = size * size
    rev = _bitrev_table(nn) if nn <= 20 else None
    block_mask = np.uint64((1 << nn) - 1)
    k = len(names)
    for start in range(0, count, _CHUNK):
        stop = min(start + _CHUNK, count)
        idx = np.arange(start, stop, dtype=np.uint64)
        assignment = {}
        for slot, name in enumerate(names):
            block = (idx >> np.uint64(nn * (k - 1 - slot))) & block_mask
            assignment[name] = rev[block] if rev is not None else _bitrev_big(block, nn)
        v1 = eval_term_batch(t1, assignment, size)
        v2 = eval_term_batch(t2, assignment, size)
        diff = np.nonzero(v1 != v2)[0]
        if diff.size:
            return start + int(diff[0])
    return None


def _bitrev_big(block: np.ndarray, nbits: int) -> np.ndarray:
    out = np.zeros_like(block)
    for p in range(nbits):
        bit = (block >> np.uint64(nbits - 1 - p)) & np.uint64(1)
        out |= bit << np.uint64(p)
    return out


def random_check(t1: Term, t2: Term, size: int, samples: int,
                 seed: int) -> Optional[Structure]:
    """Seeded random search for a separating structure: each pair is
    present independently with probability 1/2, with the empty, full,
    identity and difference assignments forced into every batch."""
    if size > 8:
        raise SemanticsError("random_check packs relations into 64-bit words; size must be <= 8")
    names = sorted(variables(t1) | variables(t2))
    if not names:
        names = ["a"]  # constant terms still need one dummy slot for batching
    rng = np.random.default_rng(seed)
    fm = np.uint64(full_mask(size))
    forced = [np.uint64(0), fm, np.uint64(diag_mask(size)), np.uint64(full_mask(size) ^ diag_mask(size))]
    total = max(samples, len(forced))
    assignment = {}
    for name in names:
        lo = rng.integers(0, 1 << 32, size=total, dtype=np.uint64)
        hi = rng.integers(0, 1 << 32, size=total, dtype=np.uint64)
        vals = (lo | (hi << np.uint64(32))) & fm
        vals[: len(forced)] = forced
        assignment[name] = vals
    v1 = eval_term_batch(t1, assignment, size)
    v2 = eval_term_batch(t2, assignment, size)
    diff = np.nonzero(v1 != v2)[0]
    if not diff.size:
        return None
    i = int(diff[0])
    return Structure(size, {name: Rel(size, int(vals[i])) for name, vals in assignment.items()})
