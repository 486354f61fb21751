"""Braid group action on A_n and the generators of the degree-zero ideal.

Convention for words: for ``b = b1 b2 ... br`` the automorphism is
``phi_b = phi_br o ... o phi_b1``, i.e. the leftmost letter is substituted
first. Inverse letters use the closed-form inverse of the printed case table.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ExtractionShapeError, MultiComponentClosure, RankMismatchError
from .laurent import LaurentPoly, ONE, MU, LAMBDA
from .ncpoly import Letter, NcPoly, all_letters, format_letter, substitute


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        if self.strands < 2:
            raise ValueError("a braid needs at least 2 strands")
        if not self.letters:
            raise ValueError("empty braid word")
        for k in self.letters:
            if k == 0 or abs(k) > self.strands - 1:
                raise ValueError(f"letter {k} out of range for B_{self.strands}")

    @property
    def writhe(self) -> int:
        return sum(1 if k > 0 else -1 for k in self.letters)

    @classmethod
    def parse(cls, strands: int, text: str) -> "BraidWord":
        parts = [t for t in text.replace(" ", "").split(",") if t]
        return cls(int(strands), tuple(int(t) for t in parts))

    def permutation(self) -> list[int]:
        """Strand permutation (0-based) induced by the braid."""
        perm = list(range(self.strands))
        for k in self.letters:
            a = abs(k) - 1
            perm[a], perm[a + 1] = perm[a + 1], perm[a]
        return perm

    def components(self) -> int:
        perm, seen, count = self.permutation(), set(), 0
        for s in range(self.strands):
            if s in seen:
                continue
            count += 1
            while s not in seen:
                seen.add(s)
                s = perm[s]
        return count

    def is_knot(self) -> bool:
        return self.components() == 1

    def __str__(self) -> str:
        return f"B{self.strands}[{','.join(map(str, self.letters))}]"


@lru_cache(maxsize=None)
def phi_letter(k: int, n: int) -> dict[Letter, NcPoly]:
    """Generator images of ``phi_{sigma_k}`` (``k < 0``: its inverse) on A_n."""
    if k == 0 or abs(k) > n - 1:
        raise ValueError(f"sigma_{k} not defined on {n} strands")
    a = lambda i, j: NcPoly.gen(i, j, n)  # noqa: E731
    kk = abs(k)
    k1 = kk + 1
    images: dict[Letter, NcPoly] = {}
    for (i, j) in all_letters(n):
        images[(i, j)] = a(i, j)
    images[(kk, k1)] = -a(k1, kk)
    images[(k1, kk)] = -a(kk, k1)
    for i in range(1, n + 1):
        if i in (kk, k1):
            continue
        if k > 0:
            images[(k1, i)] = a(kk, i)
            images[(i, k1)] = a(i, kk)
            images[(kk, i)] = a(k1, i) - a(k1, kk) * a(kk, i)
            images[(i, kk)] = a(i, k1) - a(i, kk) * a(kk, k1)
        else:
            images[(kk, i)] = a(k1, i)
            images[(i, kk)] = a(i, k1)
            images[(k1, i)] = a(kk, i) - a(kk, k1) * a(k1, i)
            images[(i, k1)] = a(i, kk) - a(i, k1) * a(k1, kk)
    return images


def braid_images(b: BraidWord, rank: int | None = None) -> dict[Letter, NcPoly]:
    """Images of every generator of A_rank under phi_b (rank >= strands)."""
    rank = b.strands if rank is None else rank
    if rank < b.strands:
        raise RankMismatchError(f"rank {rank} smaller than {b.strands} strands")
    images = {g: NcPoly.gen(*g, rank) for g in all_letters(rank)}
    for k in b.letters:
        step = phi_letter(k, rank)
        images = {g: substitute(img, step, rank) for g, img in images.items()}
    return images


def apply_phi(b: BraidWord, p: NcPoly) -> NcPoly:
    if p.rank < b.strands:
        raise RankMismatchError(f"polynomial of rank {p.rank} vs braid on {b.strands} strands")
    out = p
    for k in b.letters:
        out = substitute(out, phi_letter(k, p.rank), p.rank)
    return out


def phi_star_matrices(b: BraidWord) -> tuple[list[list[NcPoly]], list[list[NcPoly]]]:
    """Coefficient matrices of phi*_b on the arcs ending at the extra puncture."""
    n = b.strands
    ext = n + 1
    images = braid_images(b, ext)
    left = [[NcPoly.zero(n) for _ in range(n)] for _ in range(n)]
    right = [[NcPoly.zero(n) for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        acc_l: list[dict] = [dict() for _ in range(n)]
        for w, c in images[(i, ext)].items():
            hits = [pos for pos, (x, y) in enumerate(w) if ext in (x, y)]
            if len(hits) != 1 or hits[0] != len(w) - 1 or w[-1][1] != ext:
                raise ExtractionShapeError(f"bad monomial in phi*(a{i},{ext}): {w}")
            j = w[-1][0]
            acc_l[j - 1][w[:-1]] = c
        for j in range(n):
            left[i - 1][j] = NcPoly(n, acc_l[j])

        acc_r: list[dict] = [dict() for _ in range(n)]
        for w, c in images[(ext, i)].items():
            hits = [pos for pos, (x, y) in enumerate(w) if ext in (x, y)]
            if len(hits) != 1 or hits[0] != 0 or w[0][0] != ext:
                raise ExtractionShapeError(f"bad monomial in phi*(a{ext},{i}): {w}")
            j = w[0][1]
            acc_r[j - 1][w[1:]] = c
        for j in range(n):
            right[j][i - 1] = NcPoly(n, acc_r[j])
    return left, right


def a_matrix(n: int) -> list[list[NcPoly]]:
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i < j:
                row.append(NcPoly.gen(i, j, n))
            elif i > j:
                row.append(NcPoly.gen(i, j, n).scale(-MU))
            else:
                row.append(NcPoly.scalar(n, ONE - MU))
        out.append(row)
    return out


def lambda_diagonal(b: BraidWord) -> list[LaurentPoly]:
    return [LAMBDA * MU ** b.writhe] + [ONE] * (b.strands - 1)


@dataclass(frozen=True)
class IdealPresentation:
    n: int
    braid: BraidWord
    generators: tuple[NcPoly, ...]
    tags: tuple[tuple[str, int, int], ...] = field(default=())

    def tag_str(self, idx: int) -> str:
        fam, i, j = self.tags[idx]
        return f"{fam}[{i},{j}]"

    def dump(self) -> str:
        lines = []
        for idx, g in enumerate(self.generators):
            lines.append(f"{self.tag_str(idx)}: {g}")
        return "\n".join(lines) + "\n"


def ideal_generators(b: BraidWord) -> IdealPresentation:
    """The 3n^2 entries generating the ideal whose quotient is HC_0 of the closure."""
    if not b.is_knot():
        raise MultiComponentClosure(f"closure of {b} has {b.components()} components")
    n = b.strands
    A = a_matrix(n)
    lam = lambda_diagonal(b)
    lam_inv = [c ** -1 for c in lam]
    imgs = braid_images(b, n)
    phiL, phiR = phi_star_matrices(b)

    gens, tags = [], []
    for i in range(n):
        for j in range(n):
            phiA = substitute(A[i][j], imgs, n)
            gens.append(A[i][j] - phiA.scale(lam[i] * lam_inv[j]))
            tags.append(("phi", i + 1, j + 1))
    for i in range(n):
        for j in range(n):
            acc = NcPoly.zero(n)
            for k in range(n):
                acc = acc + phiL[i][k] * A[k][j]
            gens.append(A[i][j] - acc.scale(lam[i]))
            tags.append(("L", i + 1, j + 1))
    for i in range(n):
        for j in range(n):
            acc = NcPoly.zero(n)
            for k in range(n):
                acc = acc + A[i][k] * phiR[k][j]
            gens.append(A[i][j] - acc.scale(lam_inv[j]))
            tags.append(("R", i + 1, j + 1))
    return IdealPresentation(n, b, tuple(gens), tuple(tags))


def generator_name(letter: Letter) -> str:
    return format_letter(letter)
