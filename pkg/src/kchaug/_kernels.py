"""Hot numeric kernels.

Each kernel has an explicit-loop form compiled with ``numba.njit`` and a
vectorised pure-numpy form. The numba path is used unless numba is missing
or the environment variable ``KCHAUG_DISABLE_NUMBA`` is set to a truthy value.
"""
from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("KCHAUG_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False


def _maybe_njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


def _ipow_loop(x, e):
    # complex ** negative int, no log/exp
    if e < 0:
        x = 1.0 / x
        e = -e
    r = 1.0 + 0.0j
    while e:
        if e & 1:
            r *= x
        x *= x
        e >>= 1
    return r


ipow = _maybe_njit(_ipow_loop)


def _system_loops(z, coef, expo, eq, n_eq):
    T, V = expo.shape
    F = np.zeros(n_eq, dtype=np.complex128)
    J = np.zeros((n_eq, V), dtype=np.complex128)
    pw = np.empty(V, dtype=np.complex128)
    for t in range(T):
        val = coef[t]
        for v in range(V):
            pw[v] = ipow(z[v], expo[t, v])
            val *= pw[v]
        F[eq[t]] += val
        for v in range(V):
            e = expo[t, v]
            if e == 0:
                continue
            d = coef[t] * e * ipow(z[v], e - 1)
            for u in range(V):
                if u != v:
                    d *= pw[u]
            J[eq[t], v] += d
    return F, J


def _system_numpy(z, coef, expo, eq, n_eq):
    T, V = expo.shape
    P = z[None, :] ** expo
    mono = coef * np.prod(P, axis=1)
    F = np.zeros(n_eq, dtype=np.complex128)
    np.add.at(F, eq, mono)
    J = np.zeros((n_eq, V), dtype=np.complex128)
    for v in range(V):
        e = expo[:, v]
        nz = e != 0
        if not nz.any():
            continue
        Q = P[nz].copy()
        Q[:, v] = e[nz] * z[v] ** (e[nz] - 1)
        np.add.at(J[:, v], eq[nz], coef[nz] * np.prod(Q, axis=1))
    return F, J


system_loops = _maybe_njit(_system_loops)


def eval_system(z, coef, expo, eq, n_eq, backend: str | None = None):
    """Residual vector and Jacobian of a lowered polynomial system at ``z``."""
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return system_loops(z, coef, expo, eq, n_eq)
    return _system_numpy(z, coef, expo, eq, n_eq)


def _charpoly_loops(A):
    # Faddeev-LeVerrier; returns coefficients c[0..n] of det(tI - A), c[n] = 1
    n = A.shape[0]
    c = np.zeros(n + 1, dtype=np.complex128)
    c[n] = 1.0
    Mk = np.zeros((n, n), dtype=np.complex128)
    I = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        Mk = A @ Mk + c[n - k + 1] * I
        AM = A @ Mk
        tr = 0.0 + 0.0j
        for i in range(n):
            tr += AM[i, i]
        c[n - k] = -tr / k
    return c


charpoly_loops = _maybe_njit(_charpoly_loops)


def charpoly(A, backend: str | None = None) -> np.ndarray:
    """Coefficients ``c[0..n]`` (ascending) of ``det(tI - A)``."""
    A = np.asarray(A, dtype=np.complex128)
    if backend is None:
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but unavailable")
        return charpoly_loops(np.ascontiguousarray(A))
    return np.poly(A).astype(np.complex128)[::-1].copy()


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
