"""Sampling (lambda, mu) points of the augmentation variety and checking factors.

Points come from two independent sources: the representation constructions
in :mod:`kchaug.reps` and the numerical solver on the braid-side ideal.
Candidate factors are checked by evaluating them on the sampled points.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

from .augment import distinct_lambdas, solve_augmentations
from .braid import BraidWord, ideal_generators
from .errors import KCHError
from .groups import parse_presentation
from .laurent import LAMBDA, MU, ONE, LaurentPoly
from .reps.core import (
    CONSTRUCT_TOL,
    KCHRep,
    abelian_rep,
    longitude_residual,
    meridian_residual,
    relator_residuals,
)
from .reps.pretzel import pretzel_reps
from .reps.torus import torus_reps, torus_residuals
from .reps.twobridge import b_invariants, two_bridge_reps

log = logging.getLogger(__name__)

FAMILIES = ("torus", "twobridge", "pretzel", "braid-solver", "abelian")
CSV_COLUMNS = ["family", "degree", "p", "q", "k", "mu_re", "mu_im", "lambda_re", "lambda_im", "residual"]


@dataclass
class CurvePoint:
    lambda0: complex
    mu0: complex
    family: str
    degree: int
    params: dict = field(default_factory=dict)
    residual: float = 0.0

    def __post_init__(self):
        self.lambda0 = complex(self.lambda0)
        self.mu0 = complex(self.mu0)
        if self.lambda0 == 0 or self.mu0 == 0:
            raise ValueError("lambda0 and mu0 must be nonzero")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def row(self) -> dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "p": self.params.get("p", ""),
            "q": self.params.get("q", ""),
            "k": self.params.get("k", ""),
            "mu_re": repr(self.mu0.real),
            "mu_im": repr(self.mu0.imag),
            "lambda_re": repr(self.lambda0.real),
            "lambda_im": repr(self.lambda0.imag),
            "residual": repr(float(self.residual)),
        }

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "params": {k: v for k, v in self.params.items() if isinstance(v, (int, str))},
            "mu0": [self.mu0.real, self.mu0.imag],
            "lambda0": [self.lambda0.real, self.lambda0.imag],
            "residual": float(self.residual),
        }

    @classmethod
    def from_json(cls, d: dict) -> "CurvePoint":
        return cls(complex(*d["lambda0"]), complex(*d["mu0"]), d["family"], int(d["degree"]),
                   dict(d.get("params", {})), float(d["residual"]))


# -- grids ---------------------------------------------------------------------

_GOLDEN = (math.sqrt(5) - 1) / 2


def default_grid(npts: int = 25, radii: Sequence[float] = (0.8, 1.25), offset: float = math.sqrt(2) - 1) -> list[complex]:
    """Points on circles |mu| in ``radii`` at angles 2 pi frac(offset + j * golden)."""
    out = []
    for j in range(npts):
        r = radii[j % len(radii)]
        theta = 2 * math.pi * ((offset + j * _GOLDEN) % 1.0)
        out.append(complex(r * math.cos(theta), r * math.sin(theta)))
    return out


def parse_grid(text: str) -> list[complex]:
    """``"25"`` for the default grid of that size, or ``"re,im;re,im;..."``."""
    text = text.strip()
    if text.isdigit():
        return default_grid(int(text))
    pts = []
    for part in text.split(";"):
        if part.strip():
            pts.append(parse_complex(part))
    return pts


def parse_complex(text: str) -> complex:
    bits = [b for b in text.replace(" ", "").split(",") if b]
    if len(bits) == 1:
        return complex(bits[0].replace("i", "j"))
    if len(bits) == 2:
        return complex(float(bits[0]), float(bits[1]))
    raise ValueError(f"cannot read a complex number from {text!r}")


# -- residuals of each producing module --------------------------------------

def rep_residual(rep: KCHRep) -> float:
    """The largest construction residual of a representation, family checks included."""
    vals = list(relator_residuals(rep)) + [meridian_residual(rep)]
    lres = longitude_residual(rep)
    if lres is not None:
        vals.append(lres)
    if rep.family == "torus":
        vals.extend(torus_residuals(rep).values())
    elif rep.family == "twobridge":
        vals.extend(b_invariants(rep).values())
    elif rep.family == "pretzel":
        vals.append(rep.params.get("R", 0.0))
    return float(max(vals))


def _point_from_rep(rep: KCHRep, family: str, params: dict) -> CurvePoint:
    return CurvePoint(rep.lambda0, rep.mu0, family, rep.dim, params, rep_residual(rep))


def _reps_at(family: str, params: dict, mu0: complex, n: int, tol: float) -> list[KCHRep]:
    pres = parse_presentation(_presentation_name(family, params))
    if n == 1:
        return [abelian_rep(pres, mu0)]
    if family == "torus":
        return torus_reps(params["p"], params["q"], n, mu0)
    if family == "twobridge" and n == 2:
        return two_bridge_reps(params["p"], params["q"], mu0, tol)
    if family == "pretzel" and n == 3:
        return pretzel_reps(params["k"], mu0, tol)
    return []


def _presentation_name(family: str, params: dict) -> str:
    if family == "pretzel":
        return f"pretzel:{params['k']}"
    return f"{family}:{params['p']},{params['q']}"


def default_dims(family: str, params: dict) -> list[int]:
    if family == "torus":
        return list(range(1, params["p"] + 1))
    if family == "twobridge":
        return [1, 2]
    if family == "pretzel":
        return [1, 3]
    raise ValueError(f"unknown family {family!r}")


def sample_curve(family: str, params: dict, mu_grid: Iterable[complex], dims: Sequence[int] | None = None,
                 tol: float = CONSTRUCT_TOL, retries: int = 3) -> list[CurvePoint]:
    """Points (lambda0, mu0) from every representation built at every grid value.

    Construction failures at a grid value are retried at slightly perturbed
    mu0 and otherwise logged and skipped. A point is kept only when its
    construction residual is 10 times below ``tol``.
    """
    dims = list(dims) if dims is not None else default_dims(family, params)
    out: list[CurvePoint] = []
    for gi, mu in enumerate(mu_grid):
        mu = complex(mu)
        if mu == 0 or abs(mu - 1) < 1e-9:
            log.warning("skipping excluded grid value %s", mu)
            continue
        for n in dims:
            reps = None
            for attempt in range(retries + 1):
                trial = mu * (1 + 1e-3 * attempt * complex(math.cos(attempt), math.sin(attempt)))
                try:
                    reps = _reps_at(family, params, trial, n, tol)
                    break
                except KCHError as exc:
                    log.info("%s %s n=%d mu0=%s: %s", family, params, n, trial, exc)
            if reps is None:
                log.warning("%s %s n=%d: no representation near mu0=%s", family, params, n, mu)
                continue
            for rep in reps:
                pt = _point_from_rep(rep, "abelian" if n == 1 else family, {**params, "grid": gi})
                if pt.residual <= tol / 10:
                    out.append(pt)
                else:
                    log.warning("dropping point with residual %.3e at mu0=%s", pt.residual, rep.mu0)
    out.sort(key=lambda p: (p.family, p.degree, p.params.get("grid", 0)))
    return out


def solver_points(braid: BraidWord, mu_grid: Iterable[complex], attempts: int = 60, tol: float = 1e-8,
                  seed: int = 0) -> list[CurvePoint]:
    """One point per distinct solver lambda at each grid value."""
    ideal = ideal_generators(braid)
    from .augment import commutative_system

    system = commutative_system(ideal)
    out = []
    for gi, mu in enumerate(mu_grid):
        try:
            sols = solve_augmentations(ideal, mu, attempts=attempts, tol=tol, seed=seed + gi, system=system)
        except KCHError as exc:
            log.warning("solver failed at mu0=%s: %s", mu, exc)
            continue
        for lam, count in distinct_lambdas(sols):
            res = max(s.residual or 0.0 for s in sols if abs(s.lambda0 - lam) <= 1e-6 * max(1, abs(lam)))
            out.append(CurvePoint(lam, mu, "braid-solver", 0,
                                  {"braid": str(braid), "grid": gi, "count": count}, res))
    return out


# -- candidate polynomials ------------------------------------------------------

def normalize(c: LaurentPoly) -> LaurentPoly:
    """Content 1, no lambda or mu factor, no negative exponents, leading coefficient positive.

    The leading term is the largest exponent pair (e_lambda, e_mu) in lexicographic order.
    """
    if c.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    el, em = c.min_exponents()
    c = c.shift(-el, -em)
    g = reduce(math.gcd, (abs(v) for _, v in c.items()))
    lead = max(c.terms)
    sign = 1 if c.terms[lead] > 0 else -1
    return LaurentPoly({e: sign * v // g for e, v in c.items()})


def torus_factor(p: int, q: int, n: int) -> LaurentPoly:
    """The factor of the stable A-polynomial of T(p, q) carried by degree-n representations."""
    if n == p:
        return LAMBDA * MU ** (p * q - q) + (-1) ** p
    return LAMBDA ** n * MU ** ((n - 1) * p * q) - 1


def stable_a_poly_torus(p: int, q: int) -> LaurentPoly:
    prod = ONE
    for n in range(1, p + 1):
        prod = prod * torus_factor(p, q, n)
    return normalize(prod)


def pretzel_factor(k: int) -> LaurentPoly:
    return normalize(ONE - LAMBDA * MU ** (2 * k + 6))


@dataclass
class FactorReport:
    max_abs: float
    values: list[float]


def factor_residual(c: LaurentPoly, pts: Sequence[CurvePoint]) -> FactorReport:
    vals = [abs(complex(c(p.lambda0, p.mu0))) for p in pts]
    return FactorReport(max(vals, default=0.0), vals)


# -- cross-pipeline consistency --------------------------------------------------

BUILTIN_ALIASES: dict[str, dict] = {
    "trefoil": {"braid": [2, [1, 1, 1]], "presentations": ["torus:2,3", "twobridge:3,1"]},
    "figure-eight": {"braid": [3, [1, -2, 1, -2]], "presentations": ["twobridge:5,3"]},
}


def load_aliases(path: str | Path | None = None) -> dict[str, dict]:
    """The built-in alias table, extended (or overridden) by a JSON file."""
    table = {k: dict(v) for k, v in BUILTIN_ALIASES.items()}
    if path is not None:
        with open(path) as fh:
            extra = json.load(fh)
        for name, entry in extra.items():
            table[name] = entry
    return table


def resolve_alias(name: str, table: dict[str, dict] | None = None) -> dict:
    """Look up ``name``; also accepts ``T(p,q)`` and ``pretzel(k)``."""
    table = table if table is not None else BUILTIN_ALIASES
    if name in table:
        return table[name]
    key = name.replace(" ", "").lower()
    if key.startswith("t(") and key.endswith(")"):
        p, q = (int(t) for t in key[2:-1].split(","))
        return {"braid": [p, list(range(1, p)) * q], "presentations": [f"torus:{p},{q}"]}
    if key.startswith("pretzel(") and key.endswith(")"):
        return {"braid": None, "presentations": [f"pretzel:{int(key[8:-1])}"]}
    raise KeyError(f"unknown knot alias {name!r}")


def _family_params(spec: str) -> tuple[str, dict]:
    pres = parse_presentation(spec)
    if pres.family == "pretzel":
        return "pretzel", {"k": pres.params["k"]}
    return pres.family, {"p": pres.params["p"], "q": pres.params["q"]}


def _match(a: list[complex], b: list[complex], tol: float) -> tuple[list[complex], list[complex]]:
    def near(x, ys):
        return any(abs(x - y) <= tol * max(1.0, abs(y)) for y in ys)

    return [x for x in a if not near(x, b)], [y for y in b if not near(y, a)]


@dataclass
class ConsistencyReport:
    alias: str
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return all(r["ok"] for r in self.rows)


def consistency_check(alias: str, mu_grid: Iterable[complex], tol: float = 1e-6, attempts: int = 60,
                      seed: int = 0, table: dict | None = None) -> ConsistencyReport:
    """Compare the solver's lambda-set with the representation-side lambda-set at each mu0."""
    entry = resolve_alias(alias, table)
    if not entry.get("braid"):
        raise ValueError(f"alias {alias!r} has no braid word")
    strands, letters = entry["braid"]
    braid = BraidWord(strands, tuple(letters))
    ideal = ideal_generators(braid)
    from .augment import commutative_system

    system = commutative_system(ideal)
    rows = []
    for gi, mu in enumerate(mu_grid):
        mu = complex(mu)
        rep_side: list[complex] = [1.0 + 0j]
        for spec in entry["presentations"]:
            fam, params = _family_params(spec)
            for pt in sample_curve(fam, params, [mu], [d for d in default_dims(fam, params) if d > 1]):
                rep_side.append(pt.lambda0)
        rep_set = [lam for lam, _ in _dedupe(rep_side)]
        try:
            sols = solve_augmentations(ideal, mu, attempts=attempts, tol=1e-8, seed=seed + gi, system=system)
            solver_set = [lam for lam, _ in distinct_lambdas(sols)]
        except KCHError:
            solver_set = []
        only_solver, only_rep = _match(solver_set, rep_set, tol)
        rows.append({
            "mu0": mu,
            "solver": solver_set,
            "reps": rep_set,
            "only_solver": only_solver,
            "only_reps": only_rep,
            "ok": not only_solver and not only_rep,
        })
    return ConsistencyReport(alias, rows)


def _dedupe(vals: list[complex], rel: float = 1e-6) -> list[tuple[complex, int]]:
    out: list[list] = []
    for v in vals:
        for c in out:
            if abs(v - c[0]) <= rel * max(1.0, abs(c[0])):
                c[1] += 1
                break
        else:
            out.append([v, 1])
    return [(c[0], c[1]) for c in out]


# -- serialization -----------------------------------------------------------------

def points_to_csv(points: Sequence[CurvePoint]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for p in points:
        w.writerow(p.row())
    return buf.getvalue()


def points_from_csv(text: str) -> list[CurvePoint]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        params = {k: int(row[k]) for k in ("p", "q", "k") if row.get(k, "") != ""}
        out.append(CurvePoint(complex(float(row["lambda_re"]), float(row["lambda_im"])),
                              complex(float(row["mu_re"]), float(row["mu_im"])),
                              row["family"], int(row["degree"]), params, float(row["residual"])))
    return out


def points_to_json(points: Sequence[CurvePoint]) -> str:
    return json.dumps([p.to_json() for p in points], indent=1)


def points_from_json(text: str) -> list[CurvePoint]:
    return [CurvePoint.from_json(d) for d in json.loads(text)]
