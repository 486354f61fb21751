"""Free noncommutative algebra on generators a_ij over Z[lambda^+-1, mu^+-1].

A word is a tuple of ``(i, j)`` letters; the empty tuple is the unit word.
Words are ordered length-lexicographically, which fixes both the canonical
term order and the text form used for golden files.
"""
from __future__ import annotations

import contextlib
import re
from typing import Iterable, Mapping

from .errors import MissingImageError, RankMismatchError, TermBudgetExceeded
from .laurent import LaurentPoly, ONE

Letter = tuple[int, int]
Word = tuple[Letter, ...]

DEFAULT_TERM_BUDGET = 10**6
_term_budget = DEFAULT_TERM_BUDGET


def get_term_budget() -> int:
    return _term_budget


def set_term_budget(limit: int) -> None:
    global _term_budget
    _term_budget = int(limit)


@contextlib.contextmanager
def term_budget(limit: int):
    old = _term_budget
    set_term_budget(limit)
    try:
        yield
    finally:
        set_term_budget(old)


def _check_budget(n: int) -> None:
    if n > _term_budget:
        raise TermBudgetExceeded(f"{n} terms exceeds budget of {_term_budget}")


def word_key(w: Word):
    return (len(w), w)


def check_letter(letter: Letter, rank: int) -> None:
    i, j = letter
    if i == j or not (1 <= i <= rank and 1 <= j <= rank):
        raise ValueError(f"invalid generator a_{i},{j} for rank {rank}")


class NcPoly:
    """Element of A_N (x) R_0: a finite sum of coefficient * word."""

    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[Word, LaurentPoly] | Iterable[tuple[Word, LaurentPoly]] = ()):
        self.rank = int(rank)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Word, LaurentPoly] = {}
        for w, c in items:
            w = tuple((int(i), int(j)) for i, j in w)
            for letter in w:
                check_letter(letter, self.rank)
            if isinstance(c, int):
                c = LaurentPoly.const(c)
            acc[w] = acc[w] + c if w in acc else c
        self._terms = {w: c for w, c in acc.items() if not c.is_zero()}
        self._hash = None
        _check_budget(len(self._terms))

    @classmethod
    def _raw(cls, rank: int, terms: dict[Word, LaurentPoly]) -> "NcPoly":
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        _check_budget(len(terms))
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "NcPoly":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "NcPoly":
        return cls._raw(rank, {(): ONE})

    @classmethod
    def scalar(cls, rank: int, c: LaurentPoly | int) -> "NcPoly":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return cls._raw(rank, {(): c} if c else {})

    @classmethod
    def gen(cls, i: int, j: int, rank: int) -> "NcPoly":
        check_letter((i, j), rank)
        return cls._raw(rank, {((i, j),): ONE})

    @classmethod
    def word(cls, w: Word, rank: int, coeff: LaurentPoly | int = 1) -> "NcPoly":
        return cls(rank, {tuple(w): coeff})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[Word, LaurentPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> list[tuple[Word, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def letters(self) -> set[Letter]:
        return {letter for w in self._terms for letter in w}

    def with_rank(self, rank: int) -> "NcPoly":
        """Reinterpret in a larger algebra (inclusion A_N -> A_rank)."""
        if rank < self.rank:
            for letter in self.letters():
                check_letter(letter, rank)
        return NcPoly._raw(rank, dict(self._terms))

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            if other.rank != self.rank:
                raise RankMismatchError(f"rank {self.rank} vs {other.rank}")
            return other
        if isinstance(other, (int, LaurentPoly)):
            return NcPoly.scalar(self.rank, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            if w in out:
                s = out[w] + c
                if s.is_zero():
                    del out[w]
                else:
                    out[w] = s
            else:
                out[w] = c
        return NcPoly._raw(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return NcPoly._raw(self.rank, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Word, LaurentPoly] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                c = c1 * c2
                if w in out:
                    out[w] = out[w] + c
                else:
                    out[w] = c
            _check_budget(len(out))
        return NcPoly._raw(self.rank, {w: c for w, c in out.items() if not c.is_zero()})

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: LaurentPoly | int) -> "NcPoly":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        if c.is_zero():
            return NcPoly.zero(self.rank)
        return NcPoly._raw(self.rank, {w: v * c for w, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            other = NcPoly.scalar(self.rank, other)
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        return format_ncpoly(self)

    def __repr__(self) -> str:
        return f"NcPoly({self.rank}, {format_ncpoly(self)!r})"


def substitute(p: NcPoly, images: Mapping[Letter, NcPoly], rank: int | None = None) -> NcPoly:
    """Apply the unital algebra homomorphism determined by ``images``.

    Every letter of ``p`` must have an image. All images share one rank,
    which is the rank of the result (``rank`` is needed only when ``p``
    has no letters and the target rank differs from ``p.rank``).
    """
    target = rank
    for img in images.values():
        if target is None:
            target = img.rank
        elif img.rank != target:
            raise RankMismatchError("images live in different ranks")
    if target is None:
        target = p.rank

    out: dict[Word, LaurentPoly] = {}
    cache: dict[Word, NcPoly] = {}
    for w, c in p.items():
        if w in cache:
            prod = cache[w]
        else:
            prod = None
            for letter in w:
                try:
                    img = images[letter]
                except KeyError:
                    raise MissingImageError(f"no image for a{letter[0]}{letter[1]}") from None
                prod = img if prod is None else prod * img
            if prod is None:
                prod = NcPoly.one(target)
            cache[w] = prod
        for w2, c2 in prod.items():
            v = c * c2
            if w2 in out:
                s = out[w2] + v
                if s.is_zero():
                    del out[w2]
                else:
                    out[w2] = s
            else:
                out[w2] = v
        _check_budget(len(out))
    return NcPoly._raw(target, out)


def all_letters(rank: int) -> list[Letter]:
    return [(i, j) for i in range(1, rank + 1) for j in range(1, rank + 1) if i != j]


def identity_images(rank: int) -> dict[Letter, NcPoly]:
    return {g: NcPoly.gen(*g, rank) for g in all_letters(rank)}


# -- text form -------------------------------------------------------------

def format_letter(letter: Letter) -> str:
    i, j = letter
    if i < 10 and j < 10:
        return f"a{i}{j}"
    return f"a{i}_{j}"


def format_word(w: Word) -> str:
    return ".".join(format_letter(x) for x in w)


def format_ncpoly(p: NcPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for w, c in p.sorted_items():
        coeff = str(c)
        if not w:
            parts.append(f"({coeff})")
        elif c == ONE:
            parts.append(format_word(w))
        else:
            parts.append(f"({coeff})*{format_word(w)}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(a\d+_\d+|a\d\d)|([lm])|(\*\*|[-+*^().]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected input at {text[pos:]!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    """Recursive-descent parser shared by the Laurent and noncommutative forms."""

    def __init__(self, text: str, rank: int | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.rank = rank

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise ValueError(f"expected {expect!r}, got {tok!r}")
        self.i += 1
        return tok

    def lift(self, v):
        if self.rank is None or isinstance(v, NcPoly):
            return v
        return NcPoly.scalar(self.rank, v)

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input {self.toks[self.i:]}")
        return v

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        v = self.term()
        v = -v if sign < 0 else v
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            v = self.lift(v) + self.lift(t) if op == "+" else self.lift(v) - self.lift(t)
        return v

    def term(self):
        v = self.factor()
        while self.peek() in ("*", "."):
            self.take()
            f = self.factor()
            if isinstance(v, NcPoly) or isinstance(f, NcPoly):
                v = self.lift(v) * self.lift(f)
            else:
                v = v * f
        return v

    def factor(self):
        tok = self.peek()
        if tok == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            e = int(self.take())
            e = -e if neg else e
            if isinstance(base, NcPoly):
                if e < 0:
                    raise ValueError("negative power of an algebra element")
                out = NcPoly.one(base.rank)
                for _ in range(e):
                    out = out * base
                return out
            return base ** e
        return base

    def atom(self):
        tok = self.take()
        if tok == "(":
            v = self.expr()
            self.take(")")
            return v
        if tok.isdigit():
            return LaurentPoly.const(int(tok))
        if tok == "l":
            return LaurentPoly.monomial(1, 0)
        if tok == "m":
            return LaurentPoly.monomial(0, 1)
        if tok.startswith("a"):
            if self.rank is None:
                raise ValueError("algebra generator in a Laurent polynomial")
            body = tok[1:]
            i, j = (body.split("_") if "_" in body else (body[0], body[1]))
            return NcPoly.gen(int(i), int(j), self.rank)
        raise ValueError(f"unexpected token {tok!r}")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse text such as ``"l*m^8 - 1"`` or ``"(l*m^3 + 1)*(l - 1)"``."""
    return _Parser(text, None).parse()


def parse_ncpoly(text: str, rank: int) -> NcPoly:
    """Parse the debug text form, e.g. ``"(1 - m) + (l*m^3)*a12.a21"``."""
    v = _Parser(text, rank).parse()
    return v if isinstance(v, NcPoly) else NcPoly.scalar(rank, v)
