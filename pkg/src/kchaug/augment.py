"""Evaluating the ideal at complex points and searching for augmentations.

An augmentation of HC_0 sends every a_ij to a number so that all ideal
generators vanish. Since the target is commutative, each generator lowers
to an ordinary polynomial in the a_ij and lambda, with coefficients in mu.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _kernels
from .braid import IdealPresentation
from .errors import MissingImageError, NoConvergence, RankMismatchError
from .laurent import LaurentPoly
from .ncpoly import Letter, NcPoly, all_letters, format_letter


@dataclass
class AugAssignment:
    n: int
    values: dict[Letter, complex]
    lambda0: complex
    mu0: complex
    residual: float | None = None

    def __post_init__(self):
        if self.mu0 == 0 or self.lambda0 == 0:
            raise ValueError("lambda0 and mu0 must be nonzero")
        for v in (self.lambda0, self.mu0, *self.values.values()):
            if isinstance(v, complex) and not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError("non-finite assignment value")

    @classmethod
    def canonical(cls, n: int, lambda0=1) -> "AugAssignment":
        """The augmentation with every a_ij = 0 and mu = 1."""
        return cls(n, {g: 0 for g in all_letters(n)}, lambda0, 1)

    def named_values(self) -> dict[str, complex]:
        return {format_letter(g): v for g, v in sorted(self.values.items())}

    def to_json(self) -> dict:
        return {
            "lambda0": [complex(self.lambda0).real, complex(self.lambda0).imag],
            "values": {k: [complex(v).real, complex(v).imag] for k, v in self.named_values().items()},
            "residual": self.residual,
        }


@dataclass
class ResidualReport:
    max_abs: float
    per_generator: list[tuple[str, float]]
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs <= self.tol

    def __bool__(self) -> bool:
        return self.passed


def evaluate(p: NcPoly, a: AugAssignment):
    """Value of ``p`` under the algebra map fixed by ``a``.

    Exact when the assignment holds ints or Fractions.
    """
    total = 0
    for w, c in p.items():
        term = c(a.lambda0, a.mu0)
        if term == 0:
            continue
        for letter in w:
            try:
                term = term * a.values[letter]
            except KeyError:
                raise MissingImageError(f"no value for {format_letter(letter)}") from None
        total += term
    if isinstance(total, (float, complex)) and not cmath.isfinite(total):
        raise ValueError("non-finite evaluation")
    return total


def is_augmentation(ideal: IdealPresentation, a: AugAssignment, tol: float = 1e-8) -> ResidualReport:
    if ideal.n != a.n:
        raise RankMismatchError(f"ideal rank {ideal.n} vs assignment rank {a.n}")
    per = []
    for idx, g in enumerate(ideal.generators):
        per.append((ideal.tag_str(idx), abs(evaluate(g, a))))
    worst = max((v for _, v in per), default=0.0)
    return ResidualReport(worst, per, tol)


# -- commutative lowering -----------------------------------------------------

@dataclass
class CommutativeSystem:
    """Generators as commuting polynomials.

    ``polys[e]`` maps an exponent tuple (one entry per variable, lambda last)
    to a Laurent polynomial in mu alone.
    """

    n: int
    variables: list[Letter]
    polys: list[dict[tuple[int, ...], LaurentPoly]]
    tags: list[str] = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.variables) + 1

    def evaluate(self, values: Mapping[Letter, complex], lambda0, mu0) -> np.ndarray:
        z = [values[g] for g in self.variables] + [lambda0]
        out = []
        for poly in self.polys:
            s = 0
            for ex, c in poly.items():
                term = c(1, mu0)
                for zi, e in zip(z, ex):
                    if e:
                        term = term * zi ** e
                s += term
            out.append(s)
        return np.array(out, dtype=complex)

    def lower(self, mu0: complex) -> "LoweredSystem":
        coef, expo, eq = [], [], []
        for k, poly in enumerate(self.polys):
            for ex, c in poly.items():
                val = complex(c(1, mu0))
                if val != 0:
                    coef.append(val)
                    expo.append(ex)
                    eq.append(k)
        return LoweredSystem(
            np.array(coef, dtype=np.complex128),
            np.array(expo, dtype=np.int64).reshape(len(coef), self.n_vars),
            np.array(eq, dtype=np.int64),
            len(self.polys),
        )


@dataclass
class LoweredSystem:
    coef: np.ndarray
    expo: np.ndarray
    eq: np.ndarray
    n_eq: int

    def __call__(self, z: np.ndarray, backend: str | None = None):
        return _kernels.eval_system(np.asarray(z, dtype=np.complex128), self.coef, self.expo, self.eq,
                                    self.n_eq, backend)


def commutative_system(ideal: IdealPresentation) -> CommutativeSystem:
    variables = all_letters(ideal.n)
    index = {g: i for i, g in enumerate(variables)}
    nv = len(variables)
    polys = []
    for g in ideal.generators:
        acc: dict[tuple[int, ...], LaurentPoly] = {}
        for w, c in g.items():
            counts = [0] * nv
            for letter in w:
                counts[index[letter]] += 1
            for (el, em), k in c.items():
                key = tuple(counts) + (el,)
                piece = LaurentPoly.monomial(0, em, k)
                acc[key] = acc[key] + piece if key in acc else piece
        polys.append({k: v for k, v in acc.items() if not v.is_zero()})
    tags = [ideal.tag_str(i) for i in range(len(ideal.generators))]
    return CommutativeSystem(ideal.n, variables, polys, tags)


# -- damped Gauss-Newton --------------------------------------------------------

def _random_start(rng: np.random.Generator, size: int) -> np.ndarray:
    r = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size))
    theta = rng.uniform(0.0, 2 * math.pi, size)
    return r * np.exp(1j * theta)


def gauss_newton(system: LoweredSystem, z0: np.ndarray, tol: float, max_iter: int = 200,
                 backend: str | None = None) -> tuple[np.ndarray, float, bool]:
    """Levenberg-damped Gauss-Newton from ``z0``; returns (z, max|F|, converged)."""
    z = np.array(z0, dtype=np.complex128)
    F, J = system(z, backend)
    cost = float(np.vdot(F, F).real)
    damp = 1e-3
    V = z.size
    for _ in range(max_iter):
        if not np.isfinite(cost):
            return z, math.inf, False
        if np.max(np.abs(F)) <= tol * 1e-3:
            break
        JH = J.conj().T
        g = JH @ F
        H = JH @ J
        improved = False
        for _ in range(12):
            try:
                step = np.linalg.solve(H + damp * (np.diag(np.diag(H).real) + np.eye(V)), -g)
            except np.linalg.LinAlgError:
                damp *= 10
                continue
            zt = z + step
            Ft, Jt = system(zt, backend)
            ct = float(np.vdot(Ft, Ft).real)
            if np.isfinite(ct) and ct < cost:
                z, F, J, cost = zt, Ft, Jt, ct
                damp = max(damp / 5, 1e-12)
                improved = True
                break
            damp *= 8
        if not improved:
            break
        if np.max(np.abs(z)) > 1e8:
            return z, math.inf, False
    # polish with undamped least-squares Newton steps
    for _ in range(6):
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        zt = z + step
        Ft, Jt = system(zt, backend)
        ct = float(np.vdot(Ft, Ft).real)
        if not (np.isfinite(ct) and ct < cost):
            break
        z, F, J, cost = zt, Ft, Jt, ct
    res = float(np.max(np.abs(F))) if F.size else 0.0
    return z, res, res <= tol


def _cluster(points: list[np.ndarray], rel: float = 1e-5) -> list[tuple[np.ndarray, int]]:
    order = sorted(range(len(points)), key=lambda i: tuple(
        x for c in points[i][::-1] for x in (round(c.real, 9), round(c.imag, 9))))
    clusters: list[list] = []
    for i in order:
        p = points[i]
        for cl in clusters:
            rep = cl[0]
            if np.linalg.norm(p - rep) <= rel * max(1.0, np.linalg.norm(rep)):
                cl[1] += 1
                break
        else:
            clusters.append([p, 1])
    return [(c[0], c[1]) for c in clusters]


@dataclass
class SolveResult:
    solutions: list[AugAssignment]
    multiplicities: list[int]
    attempts: int
    converged: int

    def lambda_values(self) -> list[complex]:
        return [s.lambda0 for s in self.solutions]


def solve_augmentations(ideal: IdealPresentation, mu0: complex, attempts: int = 200, tol: float = 1e-8,
                        seed: int = 0, backend: str | None = None, system: CommutativeSystem | None = None,
                        return_result: bool = False):
    """Sample the augmentations with ``mu = mu0`` by multi-start Gauss-Newton.

    Returns deduplicated assignments, each passing ``is_augmentation`` at ``tol``.
    Raises NoConvergence when no start converges.
    """
    mu0 = complex(mu0)
    if mu0 == 0 or abs(mu0 - 1) < 1e-12:
        raise ValueError("mu0 must avoid 0 and 1")
    system = system or commutative_system(ideal)
    lowered = system.lower(mu0)
    rng = np.random.default_rng(seed)
    V = system.n_vars
    found = []
    for _ in range(attempts):
        z0 = _random_start(rng, V)
        z, res, ok = gauss_newton(lowered, z0, tol, backend=backend)
        if ok and abs(z[-1]) > 1e-8:
            found.append(z)
    if not found:
        raise NoConvergence(f"none of {attempts} starts converged at mu0={mu0}")
    clusters = _cluster(found)
    sols, mult = [], []
    for z, count in clusters:
        values = {g: complex(v) for g, v in zip(system.variables, z[:-1])}
        F, _ = lowered(z, backend)
        a = AugAssignment(ideal.n, values, complex(z[-1]), mu0, float(np.max(np.abs(F))))
        if is_augmentation(ideal, a, tol).passed:
            sols.append(a)
            mult.append(count)
    if return_result:
        return SolveResult(sols, mult, attempts, len(found))
    return sols


def distinct_lambdas(solutions: list[AugAssignment], rel: float = 1e-6) -> list[tuple[complex, int]]:
    """Cluster solutions by lambda0 alone; returns (lambda, count) sorted by value."""
    out: list[list] = []
    for s in sorted(solutions, key=lambda s: (round(s.lambda0.real, 8), round(s.lambda0.imag, 8))):
        for c in out:
            if abs(s.lambda0 - c[0]) <= rel * max(1.0, abs(c[0])):
                c[1] += 1
                break
        else:
            out.append([s.lambda0, 1])
    return [(c[0], c[1]) for c in out]
