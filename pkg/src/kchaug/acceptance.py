"""The eight end-to-end acceptance checks, shared by the test suite and ``kch verify all``."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .augment import AugAssignment, distinct_lambdas, evaluate, solve_augmentations
from .braid import BraidWord, braid_images, ideal_generators
from .curve import default_grid, torus_factor
from .errors import KCHError
from .groups import two_bridge_presentation
from .ncpoly import NcPoly, all_letters
from .reps.core import (
    KCHRep,
    cord_relation_check,
    direct_sum,
    irreducibility,
    is_verified,
    reduce_rep,
    trivial_rep,
    verify,
)
from .reps.pretzel import pretzel_identity_suite, pretzel_reps
from .reps.torus import torus_reps, torus_residuals
from .reps.core import relator_residuals
from .reps.twobridge import b_invariants, beta_from_u, riley_polynomial, two_bridge_reps


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    budget: float
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] AC{self.number} {self.name} ({self.elapsed:.2f}s / {self.budget:.0f}s) {self.detail}"


def _timed(number: int, name: str, budget: float, fn: Callable[[], tuple[bool, dict]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    return CriterionResult(number, name, bool(ok) and dt < budget, dt, budget, detail)


def _compose(b: BraidWord, rank: int) -> dict:
    return braid_images(b, rank)


def _is_identity(images: dict, rank: int) -> bool:
    return all(images[g] == NcPoly.gen(*g, rank) for g in all_letters(rank))


# -- 1 ------------------------------------------------------------------------------

def braid_exactness(max_rank: int = 4) -> tuple[bool, dict]:
    checks = failures = 0
    for n in range(2, max_rank + 1):
        for k in range(1, n):
            for s in (1, -1):
                checks += 1
                if not _is_identity(_compose(BraidWord(n, (s * k, -s * k)), n), n):
                    failures += 1
        for k in range(1, n - 1):
            for s in (1, -1):
                a, b = s * k, s * (k + 1)
                checks += 1
                if _compose(BraidWord(n, (a, b, a)), n) != _compose(BraidWord(n, (b, a, b)), n):
                    failures += 1
        for j, k in itertools.combinations(range(1, n), 2):
            if k - j >= 2:
                for s, t in itertools.product((1, -1), repeat=2):
                    checks += 1
                    if _compose(BraidWord(n, (s * j, t * k)), n) != _compose(BraidWord(n, (t * k, s * j)), n):
                        failures += 1
    return failures == 0, {"checks": checks, "failures": failures}


# -- 2 ------------------------------------------------------------------------------

def random_knot_braid(rng: np.random.Generator, strands: int, max_len: int) -> BraidWord:
    while True:
        length = int(rng.integers(1, max_len + 1))
        letters = tuple(int(rng.choice([-1, 1])) * int(rng.integers(1, strands)) for _ in range(length))
        b = BraidWord(strands, letters)
        if b.is_knot():
            return b


def canonical_augmentation(seed: int = 7) -> tuple[bool, dict]:
    rng = np.random.default_rng(seed)
    braids = [BraidWord(2, (1, 1, 1)), BraidWord(3, (1, -2, 1, -2))]
    braids += [random_knot_braid(rng, 3, 6) for _ in range(3)]
    lambdas = [1, -1, 7, Fraction(-1, 8), Fraction(3, 5)]
    worst = 0
    for b in braids:
        ideal = ideal_generators(b)
        for lam in lambdas:
            a = AugAssignment(b.strands, {g: 0 for g in all_letters(b.strands)}, lam, 1)
            for g in ideal.generators:
                v = evaluate(g, a)
                if v != 0:
                    worst = max(worst, abs(v))
    return worst == 0, {"braids": [str(b) for b in braids], "max_residual": worst}


# -- 3 ------------------------------------------------------------------------------

def _same_set(a: list[complex], b: list[complex], tol: float) -> bool:
    near = lambda x, ys: any(abs(x - y) <= tol * max(1.0, abs(y)) for y in ys)  # noqa: E731
    return all(near(x, b) for x in a) and all(near(y, a) for y in b)


def trefoil_fiber(npts: int = 10, attempts: int = 40, seed: int = 0) -> tuple[bool, dict]:
    ideal = ideal_generators(BraidWord(2, (1, 1, 1)))
    from .augment import commutative_system

    system = commutative_system(ideal)
    bad = []
    for gi, mu in enumerate(default_grid(npts)):
        sols = solve_augmentations(ideal, mu, attempts=attempts, tol=1e-8, seed=seed + gi, system=system)
        solver = [lam for lam, _ in distinct_lambdas(sols)]
        expected = [1.0 + 0j, -mu ** -3]
        reps = [1.0 + 0j] + [r.lambda0 for r in torus_reps(2, 3, 2, mu)]
        reps += [r.lambda0 for r in two_bridge_reps(3, 1, mu)]
        if not (_same_set(solver, expected, 1e-6) and _same_set(reps, expected, 1e-6)):
            bad.append(mu)
    return not bad, {"grid": npts, "mismatches": bad}


# -- 4 ------------------------------------------------------------------------------

TORUS_CASES = ((2, 3), (2, 5), (3, 4), (3, 5))


def torus_stable(npts: int = 25, tol: float = 1e-8) -> tuple[bool, dict]:
    g = default_grid(npts)
    worst_construct = worst_factor = 0.0
    count = 0
    not_irreducible = []
    missing = []
    for p, q in TORUS_CASES:
        for mu in g:
            for n in range(1, p + 1):
                try:
                    reps = torus_reps(p, q, n, mu)
                except KCHError as exc:
                    missing.append((p, q, n, mu, type(exc).__name__))
                    continue
                for rep in reps:
                    count += 1
                    res = torus_residuals(rep)
                    worst_construct = max(worst_construct, res["xp"], res["yq"], res["meridian"])
                    f = abs(complex(torus_factor(p, q, n)(rep.lambda0, rep.mu0)))
                    worst_factor = max(worst_factor, f)
                    if n in (2, 3):
                        irr, span = irreducibility(rep)
                        if not irr:
                            not_irreducible.append((p, q, n, mu, span))
    ok = worst_construct <= tol and worst_factor <= tol and not not_irreducible and not missing
    return ok, {"reps": count, "construct": worst_construct, "factor": worst_factor,
                "reducible": not_irreducible, "missing": missing}


# -- 5 ------------------------------------------------------------------------------

def two_bridge(npts: int = 5, trials: int = 200) -> tuple[bool, dict]:
    g = default_grid(npts)
    beta_err = 0.0
    counts = []
    worst_rel = worst_cord = worst_inv = 0.0
    for mu in g:
        _, r31 = riley_polynomial(3, 1, mu)
        beta_err = max(beta_err, max(abs(beta_from_u(mu, u) - 1) for u in r31))
        _, r53 = riley_polynomial(5, 3, mu)
        counts.append(len(r53))
        for p, q in ((3, 1), (5, 3)):
            for rep in two_bridge_reps(p, q, mu):
                worst_rel = max(worst_rel, max(relator_residuals(rep)))
                worst_cord = max(worst_cord, cord_relation_check(rep, trials, seed=1))
                worst_inv = max(worst_inv, *b_invariants(rep).values())
    ok = beta_err <= 1e-10 and all(c == 2 for c in counts) and worst_rel <= 1e-8 and worst_cord <= 1e-8 \
        and worst_inv <= 1e-10
    return ok, {"beta_err": beta_err, "k53_roots": counts, "relator": worst_rel, "cord": worst_cord,
                "detB_trB": worst_inv}


# -- 6 ------------------------------------------------------------------------------

def pretzel(npts: int = 10, ks=(1, 2, 3), tol: float = 1e-8) -> tuple[bool, dict]:
    g = default_grid(npts)
    worst = {"R": 0.0, "lambda": 0.0, "suite": 0.0}
    no_root, reducible = [], []
    count = 0
    for k in ks:
        for mu in g:
            try:
                reps = pretzel_reps(k, mu)
            except KCHError:
                no_root.append((k, mu))
                continue
            for rep in reps:
                count += 1
                worst["R"] = max(worst["R"], rep.params["R"])
                suite = pretzel_identity_suite(rep)
                worst["lambda"] = max(worst["lambda"], abs(rep.lambda0 - mu ** (-(2 * k + 6))))
                worst["suite"] = max(worst["suite"], max(suite.values()))
                irr, span = irreducibility(rep)
                if span != 9:
                    reducible.append((k, mu, span))
    ok = not no_root and not reducible and all(v <= tol for v in worst.values())
    return ok, {"reps": count, **worst, "no_root": no_root, "reducible": reducible}


# -- 7 ------------------------------------------------------------------------------

def conjugate(rep: KCHRep, P: np.ndarray) -> KCHRep:
    """The same representation written in another basis: X -> P X P^-1."""
    Pinv = np.linalg.inv(P)
    imgs = {g: P @ X @ Pinv for g, X in rep.images.items()}
    return KCHRep(rep.presentation, rep.mu0, imgs, basis=P @ rep.basis, family=rep.family, params=dict(rep.params))


def nonsplit_trefoil_rep(mu0: complex, c: complex) -> KCHRep:
    """m -> [[mu0, 0], [1, 1]], b -> [[mu0, 0], [c, 1]]; a representation iff c = 1 or mu0^2 - mu0 + 1 = 0."""
    pres = two_bridge_presentation(3, 1)
    Mm = np.array([[mu0, 0], [1, 1]], dtype=complex)
    Bm = np.array([[mu0, 0], [c, 1]], dtype=complex)
    basis = np.array([[mu0 - 1, 0], [1, 1]], dtype=complex)
    return KCHRep(pres, mu0, {"m": Mm, "b": Bm}, basis=basis, family="fixture")


def reduction_fixtures(mu0: complex = 0.8 * np.exp(0.7j), seed: int = 3) -> list[tuple[str, KCHRep, complex]]:
    """Reducible representations paired with the lambda0 the reduction must keep."""
    rng = np.random.default_rng(seed)
    out = []
    pres31 = two_bridge_presentation(3, 1)
    D = np.diag([mu0, 1]).astype(complex)
    out.append(("abelian-2dim K(3,1)", KCHRep(pres31, mu0, {"m": D, "b": D.copy()}), 1.0 + 0j))

    t2 = torus_reps(2, 3, 2, mu0)[0]
    triv = trivial_rep(t2.presentation, 1)
    s = direct_sum(t2, triv)
    out.append(("torus(2,3)+trivial", s, t2.lambda0))

    # a random change of basis that keeps e_1 and mixes the other two directions
    P = np.eye(3, dtype=complex)
    P[:, 1:] = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    P[0, 1:] = 0
    out.append(("torus(2,3)+trivial, conjugated", conjugate(s, P), t2.lambda0))

    # A non-split extension of the abelian rep by the trivial one exists at a root of
    # t^2 - t + 1. The trivial line is invariant and misses e_1, so only a quotient works.
    zeta = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    out.append(("non-split K(3,1) at t^2-t+1 root", nonsplit_trefoil_rep(zeta, 2.0), 1.0 + 0j))

    t3 = torus_reps(3, 4, 3, mu0)[0]
    out.append(("torus(3,4)n3+trivial^2", direct_sum(t3, trivial_rep(t3.presentation, 2)), t3.lambda0))
    return out


def reduction(tol: float = 1e-8) -> tuple[bool, dict]:
    rows = []
    ok = True
    for name, rep, lam in reduction_fixtures():
        if not is_verified(verify(rep, tol, with_span=False), tol):
            ok = False
            rows.append((name, "fixture is not a KCH representation"))
            continue
        red = rep
        while True:
            try:
                nxt = reduce_rep(red)
            except KCHError:
                break
            if nxt.dim >= red.dim:
                ok = False
                break
            red = nxt
        irr, _ = irreducibility(red)
        err = abs(red.lambda0 - lam) / max(1.0, abs(lam))
        good = red.dim < rep.dim and err <= tol and abs(red.mu0 - rep.mu0) <= tol and irr
        ok = ok and good
        rows.append((name, rep.dim, red.dim, err))
    return ok, {"fixtures": rows}


# -- 8 ------------------------------------------------------------------------------

def dimension_bound(mu_grid=None) -> tuple[bool, dict]:
    mu_grid = mu_grid if mu_grid is not None else default_grid(3)
    violations = []
    certified = 0
    for p in range(2, 6):
        for q in range(p + 1, 14):
            if math.gcd(p, q) != 1:
                continue
            for mu in mu_grid:
                for n in range(1, p + 1):
                    try:
                        reps = torus_reps(p, q, n, mu)
                    except KCHError:
                        continue
                    for rep in reps:
                        irr, _ = irreducibility(rep)
                        if irr:
                            certified += 1
                            if rep.dim > p:
                                violations.append(("torus", p, q, rep.dim))
    for p in (3, 5, 7, 9, 11, 13):
        for q in range(-p + 2, p, 2):
            if math.gcd(p, abs(q)) != 1:
                continue
            for mu in mu_grid:
                for rep in two_bridge_reps(p, q, mu):
                    if irreducibility(rep)[0]:
                        certified += 1
                        if rep.dim > 2:
                            violations.append(("twobridge", p, q, rep.dim))
    for k in (-5, -4, -3, -2, 1, 2, 3, 4, 5):
        for mu in mu_grid:
            try:
                reps = pretzel_reps(k, mu)
            except KCHError:
                continue
            for rep in reps:
                if irreducibility(rep)[0]:
                    certified += 1
                    if rep.dim > 3:
                        violations.append(("pretzel", k, rep.dim))
    return not violations and certified > 0, {"certified": certified, "violations": violations}


CRITERIA = [
    (1, "braid action exactness", 10.0, braid_exactness),
    (2, "canonical augmentation", 10.0, canonical_augmentation),
    (3, "trefoil fiber", 60.0, trefoil_fiber),
    (4, "torus stable A-polynomial", 120.0, torus_stable),
    (5, "2-bridge Riley reps", 60.0, two_bridge),
    (6, "pretzel reps and identities", 120.0, pretzel),
    (7, "reduction", 10.0, reduction),
    (8, "dimension bound", 600.0, dimension_bound),
]


def run(number: int) -> CriterionResult:
    for num, name, budget, fn in CRITERIA:
        if num == number:
            return _timed(num, name, budget, fn)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run(num) for num, *_ in CRITERIA]
