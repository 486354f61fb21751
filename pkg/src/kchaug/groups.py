"""Free words and knot group presentations for the torus, 2-bridge and pretzel families."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


Letter = tuple[str, int]


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError("word letters carry exponent +1 or -1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


class GroupWord:
    """A freely reduced word in named generators."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        self.letters = _reduce(letters)

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "GroupWord":
        e = 1 if power >= 0 else -1
        return cls([(name, e)] * abs(power))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        """Parse ``m.b^-1.m^-1.b``; ``e`` or an empty string is the identity."""
        text = text.strip()
        if text in ("", "e", "1"):
            return cls()
        letters: list[Letter] = []
        for part in text.split("."):
            m = re.fullmatch(r"\s*([A-Za-z]\w*)\s*(?:\^\s*(-?\d+))?\s*", part)
            if not m:
                raise ValueError(f"bad word token {part!r}")
            p = int(m.group(2)) if m.group(2) else 1
            letters.extend([(m.group(1), 1 if p > 0 else -1)] * abs(p))
        return cls(letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord((g, -e) for g, e in reversed(self.letters))

    def __invert__(self):
        return self.inverse()

    def __pow__(self, k: int) -> "GroupWord":
        base = self if k >= 0 else self.inverse()
        out = GroupWord()
        for _ in range(abs(k)):
            out = out * base
        return out

    def reversed(self) -> "GroupWord":
        """Letters in reverse order with exponents kept (not the inverse)."""
        return GroupWord(reversed(self.letters))

    def generators(self) -> set[str]:
        return {g for g, _ in self.letters}

    def exponent_sum(self, name: str) -> int:
        return sum(e for g, e in self.letters if g == name)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        if not self.letters:
            return "e"
        return ".".join(g if e == 1 else f"{g}^-1" for g, e in self.letters)

    def __repr__(self):
        return f"GroupWord({str(self)!r})"


def word(text: str) -> GroupWord:
    return GroupWord.parse(text)


@dataclass
class Presentation:
    name: str
    generators: tuple[str, ...]
    weights: dict[str, int]
    relators: list[GroupWord]
    meridian: GroupWord
    longitude: GroupWord | None = None
    params: dict = field(default_factory=dict)
    family: str = ""

    def weight(self, u: GroupWord) -> int:
        return linking_number(u, self)

    def check(self) -> None:
        """Raise if the abelianisation weights are inconsistent."""
        for r in self.relators:
            if self.weight(r) != 0:
                raise ValueError(f"relator {r} has nonzero weight")
        if self.weight(self.meridian) != 1:
            raise ValueError("meridian must have weight 1")
        if self.longitude is not None and self.weight(self.longitude) != 0:
            raise ValueError("longitude must have weight 0")


def linking_number(u: GroupWord, pres: Presentation) -> int:
    return sum(e * pres.weights[g] for g, e in u.letters)


def bezout_torus(p: int, q: int) -> tuple[int, int]:
    """(r, s) with r*p + s*q = 1 and 0 < s <= p."""
    for s in range(1, p + 1):
        if (1 - s * q) % p == 0:
            return (1 - s * q) // p, s
    raise ValueError(f"{p}, {q} not coprime")


def torus_presentation(p: int, q: int) -> Presentation:
    if not (1 <= p < q) or math.gcd(p, q) != 1:
        raise ValueError(f"invalid torus parameters ({p}, {q})")
    r, s = bezout_torus(p, q)
    x, y = GroupWord.gen("x"), GroupWord.gen("y")
    m = x ** s * y ** r
    pres = Presentation(
        name=f"torus:{p},{q}",
        generators=("x", "y"),
        weights={"x": q, "y": p},
        relators=[x ** p * y ** (-q)],
        meridian=m,
        longitude=x ** p * m ** (-p * q),
        params={"p": p, "q": q, "r": r, "s": s},
        family="torus",
    )
    pres.check()
    return pres


def schubert_signs(p: int, q: int) -> list[int]:
    return [1 if ((i * q) // p) % 2 == 0 else -1 for i in range(1, p)]


def two_bridge_presentation(p: int, q: int) -> Presentation:
    """Schubert normal form <m, b | w m = b w>.

    The longitude is ``rev(w) . w . m^(-2 sigma)`` with ``sigma`` the sign sum.
    """
    if p < 3 or p % 2 == 0 or q % 2 == 0 or not (-p < q < p) or math.gcd(p, abs(q)) != 1:
        raise ValueError(f"invalid 2-bridge parameters ({p}, {q})")
    eps = schubert_signs(p, q)
    letters = []
    for i, e in enumerate(eps):
        letters.append(("m" if i % 2 == 0 else "b", e))
    w = GroupWord(letters)
    m, b = GroupWord.gen("m"), GroupWord.gen("b")
    sigma = sum(eps)
    pres = Presentation(
        name=f"twobridge:{p},{q}",
        generators=("m", "b"),
        weights={"m": 1, "b": 1},
        relators=[w * m * w.inverse() * b.inverse()],
        meridian=m,
        longitude=w.reversed() * w * m ** (-2 * sigma),
        params={"p": p, "q": q, "eps": eps, "w": w},
        family="twobridge",
    )
    pres.check()
    return pres


def pretzel_words(k: int) -> dict[str, GroupWord]:
    m, w = GroupWord.gen("m"), GroupWord.gen("w")
    E = m * w * m.inverse() * w.inverse() * m.inverse()
    F = m.inverse() * w.inverse() * m * w * m * w.inverse()
    Ew = E * w
    Einv = E.inverse()
    conj_m_E = Einv * m * E
    conj_m_Ew = Ew.inverse() * m * Ew
    L = (Ew * conj_m_E * E ** k * w ** k * conj_m_Ew * conj_m_E * Ew ** (-k) * w ** k
         * conj_m_Ew * Einv)
    return {"m": m, "w": w, "E": E, "F": F, "L": L}


def pretzel_presentation(k: int) -> Presentation:
    """The (-2, 3, 2k+1) pretzel knot, <m, w | w^k E = F w^k>."""
    if k in (-1, 0):
        raise ValueError("pretzel parameter k must avoid -1 and 0")
    W = pretzel_words(k)
    m, w, E, F, L = W["m"], W["w"], W["E"], W["F"], W["L"]
    pres = Presentation(
        name=f"pretzel:{k}",
        generators=("m", "w"),
        weights={"m": 1, "w": 2},
        relators=[w ** k * E * (F * w ** k).inverse()],
        meridian=m,
        longitude=m ** (-(2 * k + 6)) * L,
        params={"k": k, **W},
        family="pretzel",
    )
    pres.check()
    return pres


def parse_presentation(spec: str) -> Presentation:
    """Build from ``torus:p,q``, ``twobridge:p,q`` or ``pretzel:k``."""
    fam, _, args = spec.partition(":")
    nums = [int(t) for t in args.split(",") if t.strip()]
    fam = fam.strip().lower()
    if fam == "torus" and len(nums) == 2:
        return torus_presentation(*nums)
    if fam in ("twobridge", "2bridge") and len(nums) == 2:
        return two_bridge_presentation(*nums)
    if fam == "pretzel" and len(nums) == 1:
        return pretzel_presentation(nums[0])
    raise ValueError(f"unknown presentation {spec!r}")


def random_word(rng, generators: Sequence[str], max_len: int) -> GroupWord:
    n = int(rng.integers(0, max_len + 1))
    return GroupWord((generators[int(rng.integers(len(generators)))], int(rng.choice([-1, 1])))
                     for _ in range(n))
