"""Terms of the calculus of relations.

A term is built from variables and the constants bot, top, I (identity)
and D (difference/diversity) with union, intersection, complement,
composition, dagger (relative sum) and the four binary-relation
projections.  Converse is not a separate constructor: it is the
projection that swaps both coordinates.

Concrete syntax (tightest first): postfix ``^`` (converse), ``~``
(complement) and ``[d,d]`` (projection), then ``;`` (composition),
``$`` (dagger), ``&`` (intersection), ``|`` (union).  All infixes are
left-associative.  Example: ``a ; (b $ c) & I`` parses as
``(a ; (b $ c)) & I``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


class TermError(ValueError):
    """Raised for malformed terms or violated operation preconditions."""


@dataclass(frozen=True)
class Projection:
    """A total map on {1, 2}: coordinate i of the result reads input
    coordinate ``img(i)``.  Exactly four values exist."""

    img1: int
    img2: int

    def __post_init__(self) -> None:
        if self.img1 not in (1, 2) or self.img2 not in (1, 2):
            raise TermError(f"projection images must be 1 or 2, got {self!r}")

    def img(self, i: int) -> int:
        return self.img1 if i == 1 else self.img2


PROJ_IDENTITY = Projection(1, 2)
PROJ_SWAP = Projection(2, 1)
PROJ_BOTH_1 = Projection(1, 1)
PROJ_BOTH_2 = Projection(2, 2)
ALL_PROJECTIONS = (PROJ_IDENTITY, PROJ_SWAP, PROJ_BOTH_1, PROJ_BOTH_2)


def compose_projections(inner: Projection, outer: Projection) -> Projection:
    """The single projection equivalent to applying ``inner`` first and
    ``outer`` on top of the result: i -> inner-image of outer(i) read
    through outer, i.e. combined(i) = outer-then-inner lookup.

    Semantically ``(R^inner)^outer = R^combined`` with
    ``combined(i) = outer(inner(i))``; validated exhaustively in the
    test suite over all 16 pairs.
    """
    return Projection(outer.img(inner.img1), outer.img(inner.img2))


class Term:
    """Base class; concrete terms are the frozen dataclasses below."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_term(self)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __post_init__(self) -> None:
        if not self.name or not self.name[0].islower() or not self.name.isidentifier():
            raise TermError(f"variable names are lowercase-initial identifiers: {self.name!r}")


@dataclass(frozen=True)
class Bot(Term):
    pass


@dataclass(frozen=True)
class Top(Term):
    pass


@dataclass(frozen=True)
class Id(Term):
    pass


@dataclass(frozen=True)
class Di(Term):
    pass


@dataclass(frozen=True)
class Union(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inter(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Compl(Term):
    arg: Term


@dataclass(frozen=True)
class Comp(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Dagger(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Proj(Term):
    arg: Term
    proj: Projection


BOT = Bot()
TOP = Top()
ID = Id()
DI = Di()

_BINARY = (Union, Inter, Comp, Dagger)


def converse(t: Term) -> Term:
    return Proj(t, PROJ_SWAP)


def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, _BINARY):
        return (t.left, t.right)
    if isinstance(t, Compl):
        return (t.arg,)
    if isinstance(t, Proj):
        return (t.arg,)
    return ()


def subterms(t: Term) -> Iterator[Term]:
    """All subterms, preorder."""
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(reversed(children(s)))


def variables(t: Term) -> set[str]:
    return {s.name for s in subterms(t) if isinstance(s, Var)}


def vo(t: Term) -> int:
    """Number of variable occurrences: 1 for a variable, the sum over
    children otherwise (constants contribute 0)."""
    return sum(1 for s in subterms(t) if isinstance(s, Var))


def substitute(t: Term, name: str, replacement: Term) -> Term:
    """Replace every occurrence of the variable ``name``."""
    if isinstance(t, Var):
        return replacement if t.name == name else t
    if isinstance(t, _BINARY):
        return type(t)(substitute(t.left, name, replacement), substitute(t.right, name, replacement))
    if isinstance(t, Compl):
        return Compl(substitute(t.arg, name, replacement))
    if isinstance(t, Proj):
        return Proj(substitute(t.arg, name, replacement), t.proj)
    return t


# ---------------------------------------------------------------------------
# Dot-dagger alternation levels


@dataclass(frozen=True)
class FragmentInfo:
    """Variable-occurrence count and least alternation levels.

    ``sigma_level``/``pi_level`` are the least n such that the term lies
    in the n-th existential/universal alternation class.  They are None
    for terms outside every class (complement applied above a
    composition or dagger), and otherwise differ by at most one.
    """

    vo: int
    sigma_level: Optional[int]
    pi_level: Optional[int]


def _levels(t: Term) -> tuple[Optional[int], Optional[int]]:
    if not any(isinstance(s, (Comp, Dagger)) for s in subterms(t)):
        return 0, 0
    if isinstance(t, (Union, Inter)):
        ls, lp = _levels(t.left)
        rs, rp = _levels(t.right)
        if ls is None or rs is None:
            return None, None
        return max(ls, rs, 1), max(lp, rp, 1)
    if isinstance(t, Proj):
        s, p = _levels(t.arg)
        if s is None:
            return None, None
        return max(s, 1), max(p, 1)
    if isinstance(t, Comp):
        ls, lp = _levels(t.left)
        rs, rp = _levels(t.right)
        if ls is None or rs is None:
            return None, None
        sigma = max(ls, rs, 1)
        return sigma, sigma + 1
    if isinstance(t, Dagger):
        ls, lp = _levels(t.left)
        rs, rp = _levels(t.right)
        if ls is None or rs is None:
            return None, None
        pi = max(lp, rp, 1)
        return pi + 1, pi
    if isinstance(t, Compl):
        # Complement above a composition or dagger lies in no class.
        return None, None
    raise TermError(f"unexpected term {t!r}")  # pragma: no cover


def dotdagger_level(t: Term) -> FragmentInfo:
    sigma, pi = _levels(t)
    return FragmentInfo(vo(t), sigma, pi)


def in_fragment(t: Term, n: int, k: int, side: str = "sigma") -> bool:
    """Whether t has at most k variable occurrences and lies in the n-th
    sigma (side="sigma") or pi (side="pi") alternation class."""
    if side not in ("sigma", "pi"):
        raise TermError(f"side must be 'sigma' or 'pi', got {side!r}")
    info = dotdagger_level(t)
    if info.vo > k:
        return False
    level = info.sigma_level if side == "sigma" else info.pi_level
    return level is not None and level <= n


# ---------------------------------------------------------------------------
# k-occurrence decomposition


@dataclass(frozen=True)
class Head:
    """Constructor tag for a decomposition: which node builds the
    children back together."""

    kind: str  # union | inter | comp | dagger | compl | proj
    proj: Optional[Projection] = None

    def build(self, parts: tuple[Term, ...]) -> Term:
        if self.kind == "union":
            return Union(*parts)
        if self.kind == "inter":
            return Inter(*parts)
        if self.kind == "comp":
            return Comp(*parts)
        if self.kind == "dagger":
            return Dagger(*parts)
        if self.kind == "compl":
            return Compl(*parts)
        if self.kind == "proj":
            assert self.proj is not None
            return Proj(parts[0], self.proj)
        raise TermError(f"unknown head kind {self.kind!r}")


def _head_of(t: Term) -> Head:
    if isinstance(t, Union):
        return Head("union")
    if isinstance(t, Inter):
        return Head("inter")
    if isinstance(t, Comp):
        return Head("comp")
    if isinstance(t, Dagger):
        return Head("dagger")
    if isinstance(t, Compl):
        return Head("compl")
    if isinstance(t, Proj):
        return Head("proj", t.proj)
    raise TermError(f"leaf term has no head: {t!r}")


def decompose_kvo(t: Term, fresh: str) -> tuple[Term, Head, list[Term]]:
    """Split a term with k >= 2 variable occurrences as
    ``t0[head(children)/fresh]`` where t0 has at most one occurrence
    (of ``fresh``) and every child has at most k-1.

    Recurses into the unique child carrying all k occurrences while one
    exists; the caller supplies the fresh variable and it must not
    occur in t.
    """
    k = vo(t)
    if k < 2:
        raise TermError(f"decompose_kvo needs at least 2 variable occurrences, got {k}")
    if fresh in variables(t):
        raise TermError(f"fresh variable {fresh!r} occurs in the term")
    kids = children(t)
    counts = [vo(c) for c in kids]
    full = [i for i, c in enumerate(counts) if c == k]
    if not full:
        return Var(fresh), _head_of(t), list(kids)
    i = full[0]
    t0, head, parts = decompose_kvo(kids[i], fresh)
    rebuilt = list(kids)
    rebuilt[i] = t0
    outer = _head_of(t).build(tuple(rebuilt))
    return outer, head, parts


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    """Syntax error, carrying the byte offset and the expected tokens."""

    def __init__(self, offset: int, expected: frozenset[str], found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        want = ", ".join(sorted(expected))
        super().__init__(f"syntax error at offset {offset}: expected one of {{{want}}}, found {found}")


_PUNCT = "|&$;^~[](),"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    # (kind, value, offset); kinds: ident, const, punct, digit, end
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _PUNCT:
            out.append(("punct", c, i))
            i += 1
            continue
        if c in "12" :
            out.append(("digit", c, i))
            i += 1
            continue
        if c.isalpha() and c.islower():
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            out.append(("const" if word in ("bot", "top") else "ident", word, i))
            i = j
            continue
        if c in "ID":
            out.append(("const", c, i))
            i += 1
            continue
        raise ParseError(i, frozenset({"term"}), repr(c))
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_punct(self, value: str) -> None:
        kind, val, off = self.peek()
        if kind != "punct" or val != value:
            raise ParseError(off, frozenset({repr(value)}), repr(val) if val else "end of input")
        self.take()

    def term(self) -> Term:
        node = self.inter_level()
        while self.peek()[:2] == ("punct", "|"):
            self.take()
            node = Union(node, self.inter_level())
        return node

    def inter_level(self) -> Term:
        node = self.dagger_level()
        while self.peek()[:2] == ("punct", "&"):
            self.take()
            node = Inter(node, self.dagger_level())
        return node

    def dagger_level(self) -> Term:
        node = self.comp_level()
        while self.peek()[:2] == ("punct", "$"):
            self.take()
            node = Dagger(node, self.comp_level())
        return node

    def comp_level(self) -> Term:
        node = self.postfix_level()
        while self.peek()[:2] == ("punct", ";"):
            self.take()
            node = Comp(node, self.postfix_level())
        return node

    def postfix_level(self) -> Term:
        node = self.atom()
        while True:
            kind, val, off = self.peek()
            if kind != "punct" or val not in ("^", "~", "["):
                return node
            self.take()
            if val == "^":
                node = Proj(node, PROJ_SWAP)
            elif val == "~":
                node = Compl(node)
            else:
                node = Proj(node, self.projection_body())

    def projection_body(self) -> Projection:
        d1 = self.digit()
        self.expect_punct(",")
        d2 = self.digit()
        self.expect_punct("]")
        return Projection(d1, d2)

    def digit(self) -> int:
        kind, val, off = self.peek()
        if kind != "digit":
            raise ParseError(off, frozenset({"'1'", "'2'"}), repr(val) if val else "end of input")
        self.take()
        return int(val)

    def atom(self) -> Term:
        kind, val, off = self.take()
        if kind == "ident":
            return Var(val)
        if kind == "const":
            return {"bot": BOT, "top": TOP, "I": ID, "D": DI}[val]
        if kind == "punct" and val == "(":
            node = self.term()
            self.expect_punct(")")
            return node
        raise ParseError(off, frozenset({"identifier", "'bot'", "'top'", "'I'", "'D'", "'('"}),
                         repr(val) if val else "end of input")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    node = p.term()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(off, frozenset({"operator", "end of input"}), repr(val))
    return node


# ---------------------------------------------------------------------------
# Printing

_LEVEL_UNION = 1
_LEVEL_INTER = 2
_LEVEL_DAGGER = 3
_LEVEL_COMP = 4
_LEVEL_POSTFIX = 5
_LEVEL_ATOM = 6

_INFIX = {Union: ("|", _LEVEL_UNION), Inter: ("&", _LEVEL_INTER),
          Dagger: ("$", _LEVEL_DAGGER), Comp: (";", _LEVEL_COMP)}


def _print(t: Term, minimum: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Bot):
        return "bot"
    if isinstance(t, Top):
        return "top"
    if isinstance(t, Id):
        return "I"
    if isinstance(t, Di):
        return "D"
    if isinstance(t, _BINARY):
        op, level = _INFIX[type(t)]
        text = f"{_print(t.left, level)} {op} {_print(t.right, level + 1)}"
        return f"({text})" if level < minimum else text
    if isinstance(t, Compl):
        return f"{_print(t.arg, _LEVEL_POSTFIX)}~"
    if isinstance(t, Proj):
        body = _print(t.arg, _LEVEL_POSTFIX)
        if t.proj == PROJ_SWAP:
            return f"{body}^"
        return f"{body}[{t.proj.img1},{t.proj.img2}]"
    raise TermError(f"unexpected term {t!r}")  # pragma: no cover


def print_term(t: Term) -> str:
    """Minimal-parenthesization rendering; parses back to the same tree."""
    return _print(t, _LEVEL_UNION)
