"""3-dimensional KCH representations of the (-2, 3, 2k+1) pretzel knot groups.

With m -> M = diag(mu, 1, 1) the image of w is pinned down up to two numbers
x, y once eps([w]) = 1 and eps([w^-1]) = -mu. Setting y = 1 + mu + (1/mu - 1) x
leaves the single polynomial condition Phi_k(x) = (W^(k+1))_11 - (W^k)_11 = 0.
"""
from __future__ import annotations

import numpy as np

from ..errors import NoRoot, RNotZero
from ..groups import GroupWord, pretzel_presentation
from .core import KCHRep, CONSTRUCT_TOL, eval_word, induced_aug, relator_residuals


def w_matrix(mu0: complex, x: complex) -> np.ndarray:
    e = 1 - mu0
    y = 1 + mu0 + (1 / mu0 - 1) * x
    return np.array([
        [1 / e, x, mu0 ** 2 + mu0 ** 3 / e ** 2 + x * y],
        [1, 0, mu0 ** 3 / e],
        [0, 1, y],
    ], dtype=complex)


def _mpow(W: np.ndarray, k: int) -> np.ndarray:
    if k >= 0:
        return np.linalg.matrix_power(W, k)
    return np.linalg.matrix_power(np.linalg.inv(W), -k)


def phi_k(k: int, mu0: complex):
    """The callable x -> (W^(k+1))_11 - (W^k)_11."""
    mu0 = complex(mu0)

    def f(x):
        W = w_matrix(mu0, x)
        Wk = _mpow(W, k)
        return complex((Wk @ W)[0, 0] - Wk[0, 0])

    return f


def _polish(f, z, steps: int = 30):
    fz = f(z)
    for _ in range(steps):
        h = 1e-7 * max(1.0, abs(z))
        d = (f(z + h) - f(z - h)) / (2 * h)
        if d == 0 or not np.isfinite(d):
            break
        nz = z - fz / d
        fn = f(nz)
        if not abs(fn) < abs(fz):
            break
        z, fz = nz, fn
    return z


def phi_k_roots(k: int, mu0: complex, trim: float = 1e-12) -> list[complex]:
    """Roots of Phi_k, found by interpolating on a circle and trimming small leading terms."""
    if k in (-1, 0):
        raise ValueError("k must avoid -1 and 0")
    f = phi_k(k, mu0)
    npts = 2 * (abs(k) + 1) + 2
    nodes = 1.5 * np.exp(2j * np.pi * (np.arange(npts) + 0.29) / npts)
    vals = np.array([f(x) for x in nodes])
    coef = np.polynomial.polynomial.polyfit(nodes, vals, npts - 1)
    top = float(np.max(np.abs(coef)))
    if top == 0:
        raise NoRoot(f"Phi_{k} vanishes identically at mu0={mu0}")
    deg = len(coef) - 1
    while deg > 0 and abs(coef[deg]) <= trim * top:
        deg -= 1
    if deg == 0:
        raise NoRoot(f"Phi_{k} is constant at mu0={mu0}")
    roots = np.polynomial.polynomial.polyroots(coef[: deg + 1])
    roots = [_polish(f, complex(r)) for r in roots]
    scale = max(1.0, float(np.max(np.abs(vals))))
    good = [r for r in roots if abs(f(r)) <= 1e-9 * scale * max(1.0, abs(r)) ** deg]
    if not good:
        raise NoRoot(f"no root of Phi_{k} polished at mu0={mu0}")
    return sorted(good, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def r_matrix(rep: KCHRep) -> np.ndarray:
    """R = W^k E0 - F0 W^k, which must vanish for a well-defined representation."""
    k = rep.params["k"]
    pres = rep.presentation
    W = rep.images["w"]
    E0 = eval_word(rep, pres.params["E"])
    F0 = eval_word(rep, pres.params["F"])
    Wk = _mpow(W, k)
    return Wk @ E0 - F0 @ Wk


def pretzel_rep(k: int, mu0: complex, root_index: int = 0, tol: float = CONSTRUCT_TOL) -> KCHRep:
    mu0 = complex(mu0)
    if mu0 == 0 or abs(mu0 - 1) < 1e-12:
        raise ValueError("mu0 must avoid 0 and 1")
    pres = pretzel_presentation(k)
    roots = phi_k_roots(k, mu0)
    x = roots[root_index % len(roots)]
    W = w_matrix(mu0, x)
    M = np.diag([mu0, 1, 1]).astype(complex)
    rep = KCHRep(pres, mu0, {"m": M, "w": W}, family="pretzel",
                 params={"k": k, "x": x, "root": root_index % len(roots), "n_roots": len(roots), "n": 3})
    R = r_matrix(rep)
    sc = max(1.0, float(np.max(np.abs(_mpow(W, k)))))
    rnorm = float(np.max(np.abs(R))) / sc
    rep.params["R"] = rnorm
    if rnorm > tol:
        raise RNotZero(f"|R| = {rnorm:.3e} exceeds {tol} (k={k}, mu0={mu0})")
    rel = max(relator_residuals(rep))
    if rel > tol:
        raise RNotZero(f"relator residual {rel:.3e} exceeds {tol}")
    return rep


def pretzel_reps(k: int, mu0: complex, tol: float = CONSTRUCT_TOL) -> list[KCHRep]:
    n = len(phi_k_roots(k, mu0))
    return [pretzel_rep(k, mu0, i, tol) for i in range(n)]


def closed_form_e0_f0(mu0: complex, x: complex) -> tuple[np.ndarray, np.ndarray]:
    """E0 and F0 written out entrywise in terms of mu and x."""
    mu = mu0
    e = 1 - mu
    y = 1 + mu + (1 / mu - 1) * x
    E0 = np.array([
        [-mu / e, 1 + mu / e ** 2, mu / e * x],
        [-1 / mu, 1 / (mu * e), x],
        [0, 0, 1],
    ], dtype=complex)
    F0 = np.array([
        [1, 0, 0],
        [0, y / mu, x * y * e / mu ** 2 + 1],
        [0, -1 / mu, -x * e / mu ** 2],
    ], dtype=complex)
    return E0, F0


def _gap(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def pretzel_identity_suite(rep: KCHRep, k: int | None = None, j_max: int = 5) -> dict[str, float]:
    """Residuals of the matrix and cord identities satisfied by the pretzel representation.

    Scalar identities are measured relative to max(1, |lhs|, |rhs|).
    """
    k = rep.params["k"] if k is None else k
    pres = rep.presentation
    mu = rep.mu0
    M = rep.images["m"]
    W = rep.images["w"]
    E0 = eval_word(rep, pres.params["E"])
    F0 = eval_word(rep, pres.params["F"])
    E0c, F0c = closed_form_e0_f0(mu, rep.params["x"])
    m, w = GroupWord.gen("m"), GroupWord.gen("w")
    mw = m * w

    def aug(u):
        return induced_aug(rep, u)

    out = {
        "F0M-MF0": float(np.max(np.abs(F0 @ M - M @ F0))),
        "E0W-F0inv": float(np.max(np.abs(E0 @ W - np.linalg.inv(F0)))),
        "E0-closed": float(np.max(np.abs(E0 - E0c))),
        "F0-closed": float(np.max(np.abs(F0 - F0c))),
        "wkmw": _gap(aug(w ** k * mw), 0),
    }
    out["aux_j"] = max(_gap(aug(w ** j * mw), mu ** (2 * j + 1) * aug(w ** (-j - 1) * mw))
                       for j in range(j_max + 1))
    # stated for i = 0..k+1; it holds numerically on the same range of |k| when k < 0
    out["sym_i"] = max(_gap(mu ** (-i) * aug(w ** (k + i) * mw), -mu ** i * aug(w ** (k - i) * mw))
                       for i in range(abs(k) + 2))
    out["close_k1"] = _gap(aug(w ** (k + 1) * m * w ** k * mw), -mu ** (2 * k + 2))
    out["close_k"] = _gap(aug(w ** k * m * w ** k * mw), -mu ** (2 * k + 1))
    out["lambda"] = _gap(rep.lambda0, mu ** (-(2 * k + 6)))
    out["detW"] = _gap(complex(np.linalg.det(W)), mu ** 2)
    return out
