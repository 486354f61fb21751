"""Integer Laurent polynomials in the commuting variables lambda and mu.

Values are immutable. A polynomial is a mapping ``(e_lambda, e_mu) -> int``
with every stored coefficient nonzero, so equality is structural.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


Exponent = tuple[int, int]


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, int] | Iterable[tuple[Exponent, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, int] = {}
        for (el, em), c in items:
            key = (int(el), int(em))
            acc[key] = acc.get(key, 0) + int(c)
        self._terms = {k: v for k, v in acc.items() if v != 0}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, el: int = 0, em: int = 0, c: int = 1) -> "LaurentPoly":
        return cls({(el, em): c})

    @classmethod
    def _raw(cls, terms: dict[Exponent, int]) -> "LaurentPoly":
        # caller guarantees canonical form
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def coefficient(self, el: int, em: int) -> int:
        return self._terms.get((el, em), 0)

    def sorted_items(self) -> list[tuple[Exponent, int]]:
        return sorted(self._terms.items())

    def min_exponents(self) -> Exponent:
        return (min(e[0] for e in self._terms), min(e[1] for e in self._terms))

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._terms.items()})

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
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponent, int] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            ((el, em), c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible over Z")
            return LaurentPoly._raw({(el * e, em * e): c ** (-e)})
        result = LaurentPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, el: int, em: int) -> "LaurentPoly":
        """Multiply by the monomial lambda^el mu^em."""
        return LaurentPoly._raw({(a + el, b + em): c for (a, b), c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation ---------------------------------------------------
    def __call__(self, lam, mu):
        """Evaluate at numbers ``lam``, ``mu``.

        Integer and Fraction inputs evaluate exactly; complex inputs in floating point.
        """
        total = 0
        for (el, em), c in self._terms.items():
            total += c * _power(lam, el) * _power(mu, em)
        return total

    def restrict_mu(self, mu) -> dict[int, complex]:
        """Collapse to a polynomial in lambda with mu substituted."""
        out: dict[int, complex] = {}
        for (el, em), c in self._terms.items():
            out[el] = out.get(el, 0) + c * _power(mu, em)
        return out

    # -- text ---------------------------------------------------------
    def __str__(self) -> str:
        return format_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_laurent(self)!r})"


def _power(x, e: int):
    if e >= 0:
        return x ** e
    if isinstance(x, int):
        return Fraction(1, x ** (-e))
    return 1 / x ** (-e)


def _format_monomial(el: int, em: int) -> str:
    parts = []
    for name, e in (("l", el), ("m", em)):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_laurent(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for i, ((el, em), c) in enumerate(p.sorted_items()):
        mono = _format_monomial(el, em)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()
LAMBDA = LaurentPoly.monomial(1, 0)
MU = LaurentPoly.monomial(0, 1)
