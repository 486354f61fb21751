"""Degree-n KCH representations of torus knot groups.

Construction: choose distinct roots of z with prescribed products, build a
companion-style matrix Y~ with char poly prod(t - zeta^-r), solve the first
row so that X~ = M Y~ has char poly prod(t - eta^s), then take "roots" of
X~ and Y~ via their eigenvectors.
"""
from __future__ import annotations

import cmath
import itertools

import numpy as np

from .._kernels import charpoly
from ..errors import EigenvalueCollision, RootSelectionFailure
from ..groups import torus_presentation
from .core import KCHRep, CONSTRUCT_TOL, eval_word


def companion_fill(c, x_row):
    """Last column of Y~ so that det(tI - Y~) = t^n + c[n-1] t^(n-1) + ... + c[0].

    ``x_row`` holds x_1..x_{n-1} (first row of Y~); x_n is taken as 0.
    Returns ``(Y, y)`` with ``y = [y_0, ..., y_{n-1}]``.
    """
    c = np.asarray(c, dtype=complex)
    n = c.size
    x = np.zeros(n + 1, dtype=complex)  # 1-based, x[n] = 0
    x[1:n] = np.asarray(x_row, dtype=complex)[: n - 1]
    y = np.zeros(n, dtype=complex)
    for i in range(1, n + 1):
        acc = -c[n - i] - x[i]
        for j in range(1, i):
            acc += x[j] * y[n - i + j]
        y[n - i] = acc
    Y = np.zeros((n, n), dtype=complex)
    Y[0, : n - 1] = x[1:n]
    for r in range(1, n):
        Y[r, r - 1] = 1
    Y[:, n - 1] = y
    return Y, y


def poly_from_roots(roots) -> np.ndarray:
    """Ascending coefficients of prod(t - r), leading 1 included."""
    c = np.array([1.0 + 0j])
    for r in roots:
        c = np.convolve(c, np.array([1.0, -r]))
    return c[::-1].copy()


def nth_roots(w: complex, n: int) -> list[complex]:
    r = abs(w) ** (1.0 / n)
    a = cmath.phase(w)
    return [r * cmath.exp(1j * (a + 2 * cmath.pi * k) / n) for k in range(n)]


def choose_roots(z: complex, deg: int, n: int, product: complex, rtol: float = 1e-9) -> list[list[complex]]:
    """All n-subsets of the deg-th roots of z whose product is ``product``."""
    roots = nth_roots(z, deg)
    out = []
    for combo in itertools.combinations(range(deg), n):
        pr = np.prod([roots[i] for i in combo])
        if abs(pr - product) <= rtol * max(1.0, abs(product)):
            out.append([roots[i] for i in combo])
    return out


def torus_z(p: int, q: int, n: int, mu0: complex, branch: int = 0) -> complex:
    if n == p:
        return (-1) ** (n - 1) * mu0 ** q
    return nth_roots(mu0 ** (p * q), n)[branch % n]


def _root_of_matrix(Xt: np.ndarray, targets, values) -> np.ndarray:
    """Matrix with Xt's eigenvectors and eigenvalue values[i] in place of targets[i]."""
    n = Xt.shape[0]
    V = np.empty((n, n), dtype=complex)
    for col, theta in enumerate(targets):
        _, _, vh = np.linalg.svd(Xt - theta * np.eye(n))
        V[:, col] = vh[-1].conj()
    return V @ np.diag(values) @ np.linalg.inv(V)


def _distinct(vals, tol=1e-7) -> bool:
    for a, b in itertools.combinations(vals, 2):
        if abs(a - b) <= tol * max(1.0, abs(a)):
            return False
    return True


def torus_rep(p: int, q: int, n: int, mu0: complex, branch: int = 0, tol: float = CONSTRUCT_TOL) -> KCHRep:
    """Degree-n KCH rep of T(p, q) with rho(x) = X, rho(y) = Y, X^p = Y^q = zI."""
    if not 1 <= n <= p:
        raise ValueError(f"degree must satisfy 1 <= n <= p, got n={n}, p={p}")
    mu0 = complex(mu0)
    if mu0 == 0 or abs(mu0 - 1) < 1e-12:
        raise ValueError("mu0 must avoid 0 and 1")
    pres = torus_presentation(p, q)
    r, s = pres.params["r"], pres.params["s"]
    z = torus_z(p, q, n, mu0, branch)

    zetas_all = choose_roots(z, q, n, mu0 ** p)
    etas_all = choose_roots(z, p, n, mu0 ** q)
    if not zetas_all or not etas_all:
        raise RootSelectionFailure(f"no distinct root subset for T({p},{q}), n={n}, mu0={mu0}")
    choice = None
    for zetas in zetas_all:
        if not _distinct([zt ** (-r) for zt in zetas]):
            continue
        for etas in etas_all:
            if _distinct([e ** s for e in etas]):
                choice = (zetas, etas)
                break
        if choice:
            break
    if choice is None:
        raise EigenvalueCollision(f"powered roots collide for T({p},{q}), n={n}, mu0={mu0}")
    zetas, etas = choice
    ytil_eigs = [zt ** (-r) for zt in zetas]
    xtil_eigs = [e ** s for e in etas]
    cY = poly_from_roots(ytil_eigs)[:n]
    cX = poly_from_roots(xtil_eigs)[:n]

    M = np.eye(n, dtype=complex)
    M[0, 0] = mu0
    x = np.zeros(max(n - 1, 0), dtype=complex)
    for i in range(1, n):
        # coefficient of t^(n-i) in charpoly(M Y~) is affine in x_i
        x[i - 1] = 0
        b0 = charpoly(M @ companion_fill(cY, x)[0])[n - i]
        x[i - 1] = 1
        b1 = charpoly(M @ companion_fill(cY, x)[0])[n - i]
        x[i - 1] = (cX[n - i] - b0) / (b1 - b0)
    Yt, _ = companion_fill(cY, x)
    Xt = M @ Yt

    X = _root_of_matrix(Xt, xtil_eigs, etas)
    Y = _root_of_matrix(Yt, ytil_eigs, zetas)
    rep = KCHRep(pres, mu0, {"x": X, "y": Y}, family="torus",
                 params={"p": p, "q": q, "n": n, "branch": branch, "z": z})
    res = torus_residuals(rep)
    if max(res.values()) > tol:
        raise RootSelectionFailure(f"construction residuals {res} exceed {tol}")
    return rep


def torus_residuals(rep: KCHRep) -> dict[str, float]:
    """Relative residuals of X^p = zI, Y^q = zI, X^s Y^r = M and lambda0 = z mu0^-pq."""
    p, q, n, z = (rep.params[k] for k in ("p", "q", "n", "z"))
    pres = rep.presentation
    I = np.eye(n)
    X, Y = rep.images["x"], rep.images["y"]
    sc = max(1.0, abs(z))
    M = np.eye(n, dtype=complex)
    M[0, 0] = rep.mu0
    lam_expected = z * rep.mu0 ** (-p * q)
    return {
        "xp": float(np.max(np.abs(np.linalg.matrix_power(X, p) - z * I))) / sc,
        "yq": float(np.max(np.abs(np.linalg.matrix_power(Y, q) - z * I))) / sc,
        "meridian": float(np.max(np.abs(eval_word(rep, pres.meridian) - M))),
        "lambda": abs(rep.lambda0 - lam_expected) / max(1.0, abs(lam_expected)),
    }


def torus_reps(p: int, q: int, n: int, mu0: complex) -> list[KCHRep]:
    """One representation per admissible choice of z."""
    branches = range(n) if n < p else range(1)
    return [torus_rep(p, q, n, mu0, b) for b in branches]
