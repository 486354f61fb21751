"""KCH representations of 2-bridge knot groups from Riley's non-abelian polynomial.

Given the value beta = eps([b]), the meridian goes to M = diag(mu, 1) and b to
a matrix B built from beta. In Riley's normal form (N, C) the polynomial
Phi_W(u) = W_11 + (1 - mu) W_12 must vanish, with beta = mu(1 - mu) + mu u.
"""
from __future__ import annotations

import numpy as np

from ..errors import AbelianDegenerate, NoRoot, NotARepresentation
from ..groups import Presentation, two_bridge_presentation
from .core import KCHRep, CONSTRUCT_TOL, eval_word, relator_residuals


def riley_matrices(mu0: complex, u: complex) -> tuple[np.ndarray, np.ndarray]:
    N = np.array([[mu0, 1], [0, 1]], dtype=complex)
    C = np.array([[mu0, 0], [-mu0 * u, 1]], dtype=complex)
    return N, C


def riley_word_matrix(eps, mu0: complex, u: complex) -> np.ndarray:
    N, C = riley_matrices(mu0, u)
    Ni, Ci = np.linalg.inv(N), np.linalg.inv(C)
    W = np.eye(2, dtype=complex)
    for i, e in enumerate(eps):
        if i % 2 == 0:
            W = W @ (N if e > 0 else Ni)
        else:
            W = W @ (C if e > 0 else Ci)
    return W


def _newton_polish(f, z, steps: int = 8, h: float = 1e-7):
    for _ in range(steps):
        fz = f(z)
        d = (f(z + h) - f(z - h)) / (2 * h)
        if d == 0:
            break
        nz = z - fz / d
        if abs(f(nz)) >= abs(fz):
            break
        z = nz
    return z


def riley_polynomial(p: int, q: int, mu0: complex):
    """Return ``(Phi, roots)`` where ``Phi(u) = W_11 + (1 - mu0) W_12``.

    The roots come from interpolating Phi at p+1 points on a circle and
    extracting roots of the (p-1)/2 degree fit, then a few Newton steps.
    """
    mu0 = complex(mu0)
    if mu0 == 0 or abs(mu0 - 1) < 1e-12:
        raise ValueError("mu0 must avoid 0 and 1")
    eps = two_bridge_presentation(p, q).params["eps"]

    def phi(u):
        W = riley_word_matrix(eps, mu0, u)
        return complex(W[0, 0] + (1 - mu0) * W[0, 1])

    deg = (p - 1) // 2
    nodes = np.exp(2j * np.pi * (np.arange(p + 1) + 0.37) / (p + 1))
    vals = np.array([phi(u) for u in nodes])
    coef = np.polynomial.polynomial.polyfit(nodes, vals, deg)
    if abs(coef[-1]) < 1e-12 * max(1.0, float(np.max(np.abs(coef)))):
        raise NoRoot(f"Riley polynomial degenerates at mu0={mu0}")
    roots = np.polynomial.polynomial.polyroots(coef)
    roots = sorted((_newton_polish(phi, complex(r)) for r in roots), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    return phi, roots


def beta_from_u(mu0: complex, u: complex) -> complex:
    return mu0 * (1 - mu0) + mu0 * u


def b_matrix(mu0: complex, beta: complex) -> np.ndarray:
    e = 1 - mu0
    m = mu0 * (1 - mu0)
    return np.array([
        [beta / e, (beta - e) * (m - beta) / e ** 2],
        [1, (e + m - beta) / e],
    ], dtype=complex)


def two_bridge_rep(p: int, q: int, mu0: complex, beta: complex, tol: float = CONSTRUCT_TOL,
                   pres: Presentation | None = None) -> KCHRep:
    """The 2-dimensional KCH representation with m -> diag(mu0, 1) and eps([b]) = beta."""
    mu0 = complex(mu0)
    if mu0 == 0 or abs(mu0 - 1) < 1e-12:
        raise ValueError("mu0 must avoid 0 and 1")
    beta = complex(beta)
    if abs(beta - mu0 * (1 - mu0)) <= 1e-12 * max(1.0, abs(beta)):
        raise AbelianDegenerate("eps([b]) = eps([m]); use the 1-dimensional representation")
    pres = pres or two_bridge_presentation(p, q)
    M = np.diag([mu0, 1]).astype(complex)
    B = b_matrix(mu0, beta)
    rep = KCHRep(pres, mu0, {"m": M, "b": B}, family="twobridge",
                 params={"p": p, "q": q, "beta": beta, "n": 2})
    res = max(relator_residuals(rep))
    if res > tol:
        raise NotARepresentation(f"relator residual {res:.3e} exceeds {tol} for beta={beta}")
    return rep


def b_invariants(rep: KCHRep) -> dict[str, float]:
    """|det B - mu0| and |tr B - (1 + mu0)|."""
    B = rep.images["b"]
    mu0 = rep.mu0
    return {
        "det": abs(np.linalg.det(B) - mu0),
        "trace": abs(np.trace(B) - (1 + mu0)),
    }


def two_bridge_reps(p: int, q: int, mu0: complex, tol: float = CONSTRUCT_TOL) -> list[KCHRep]:
    """One representation per Riley root (roots at the abelian value are skipped)."""
    _, roots = riley_polynomial(p, q, mu0)
    pres = two_bridge_presentation(p, q)
    out = []
    for idx, u in enumerate(roots):
        try:
            rep = two_bridge_rep(p, q, mu0, beta_from_u(mu0, u), tol, pres)
        except AbelianDegenerate:
            continue
        rep.params["u"] = u
        rep.params["root"] = idx
        out.append(rep)
    return out


def palindrome_residual(rep: KCHRep) -> float:
    """|([m] - [b]) W_12 - W_21| at the Riley matrices, with [m] - [b] = -mu0 u."""
    mu0 = rep.mu0
    u = (rep.params["beta"] - mu0 * (1 - mu0)) / mu0
    W = riley_word_matrix(rep.presentation.params["eps"], mu0, u)
    return float(abs(-mu0 * u * W[0, 1] - W[1, 0]))


def longitude_commutes(rep: KCHRep) -> float:
    """Size of the commutator of rho(meridian) and rho(longitude)."""
    pres = rep.presentation
    Mm = eval_word(rep, pres.meridian)
    L = eval_word(rep, pres.longitude)
    return float(np.max(np.abs(Mm @ L - L @ Mm)))
