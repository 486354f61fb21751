"""KCH representations: matrix images of a presentation's generators.

A KCH representation sends the meridian to a diagonalizable matrix whose
eigenvalue 1 has multiplicity n-1. ``basis`` holds the eigenvectors as
columns, the mu0-eigenvector first; every induced value is read in that basis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import AlreadyIrreducible, KCHError
from ..groups import GroupWord, Presentation, linking_number, random_word

CONSTRUCT_TOL = 1e-8
SPECTRUM_TOL = 1e-9


@dataclass
class KCHRep:
    presentation: Presentation
    mu0: complex
    images: dict[str, np.ndarray]
    basis: np.ndarray | None = None
    lambda0: complex | None = None
    family: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.mu0 = complex(self.mu0)
        self.images = {g: np.asarray(X, dtype=complex).reshape(self.dim_of(X)) for g, X in self.images.items()}
        n = self.dim
        if self.basis is None:
            self.basis = np.eye(n, dtype=complex)
        self._inv = {g: np.linalg.inv(X) for g, X in self.images.items()}
        self._basis_inv = np.linalg.inv(self.basis)
        if self.lambda0 is None and self.presentation.longitude is not None:
            self.lambda0 = longitude_eigenvalue(self)

    @staticmethod
    def dim_of(X):
        X = np.asarray(X)
        if X.ndim == 0:
            return (1, 1)
        return X.shape

    @property
    def dim(self) -> int:
        return next(iter(self.images.values())).shape[0]

    def to_eigenbasis(self, X: np.ndarray) -> np.ndarray:
        return self._basis_inv @ X @ self.basis

    def eigenbasis_images(self) -> dict[str, np.ndarray]:
        return {g: self.to_eigenbasis(X) for g, X in self.images.items()}


def eval_word(rep: KCHRep, u: GroupWord) -> np.ndarray:
    out = np.eye(rep.dim, dtype=complex)
    for g, e in u.letters:
        try:
            out = out @ (rep.images[g] if e > 0 else rep._inv[g])
        except KeyError:
            raise KeyError(f"generator {g!r} not in representation") from None
    return out


def induced_aug(rep: KCHRep, u: GroupWord) -> complex:
    """(1 - mu0) times the (1,1) entry of rho(u) in the meridian eigenbasis."""
    X = rep.to_eigenbasis(eval_word(rep, u))
    return (1 - rep.mu0) * X[0, 0]


def longitude_eigenvalue(rep: KCHRep) -> complex:
    L = rep.to_eigenbasis(eval_word(rep, rep.presentation.longitude))
    return complex(L[0, 0])


def _scale(X: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(X))))


@dataclass
class RepReport:
    relator_residuals: list[float]
    meridian_spectrum: list[complex]
    meridian_residual: float
    longitude_residual: float | None
    irreducible: bool | None
    span_dimension: int | None
    lambda0: complex | None
    notes: list[str] = field(default_factory=list)

    @property
    def max_relator_residual(self) -> float:
        return max(self.relator_residuals, default=0.0)


def relator_residuals(rep: KCHRep) -> list[float]:
    out = []
    eye = np.eye(rep.dim)
    for r in rep.presentation.relators:
        X = eval_word(rep, r)
        out.append(float(np.max(np.abs(X - eye))))
    return out


def meridian_residual(rep: KCHRep) -> float:
    Me = rep.to_eigenbasis(eval_word(rep, rep.presentation.meridian))
    target = np.eye(rep.dim, dtype=complex)
    target[0, 0] = rep.mu0
    return float(np.max(np.abs(Me - target)))


def longitude_residual(rep: KCHRep) -> float | None:
    """How far e_1 is from being an eigenvector of rho(longitude)."""
    if rep.presentation.longitude is None:
        return None
    L = rep.to_eigenbasis(eval_word(rep, rep.presentation.longitude))
    return float(np.max(np.abs(L[1:, 0]))) if rep.dim > 1 else 0.0


def verify(rep: KCHRep, tol: float = CONSTRUCT_TOL, with_span: bool = True) -> RepReport:
    notes = []
    rel = relator_residuals(rep)
    mres = meridian_residual(rep)
    Me = rep.to_eigenbasis(eval_word(rep, rep.presentation.meridian))
    spectrum = sorted(np.linalg.eigvals(Me), key=lambda c: abs(c - 1))
    if abs(rep.mu0 - 1) <= 1e-6:
        notes.append("eigenvalue gap |mu0 - 1| too small")
    if max(rel, default=0) > tol:
        notes.append("relator residual exceeds tolerance")
    if mres > tol:
        notes.append("meridian is not diag[mu0, 1, ..., 1] in the stored basis")
    irr, span = (None, None)
    if with_span:
        irr, span = irreducibility(rep)
    return RepReport(rel, [complex(c) for c in spectrum], mres, longitude_residual(rep), irr, span,
                     rep.lambda0, notes)


def is_verified(report: RepReport, tol: float = CONSTRUCT_TOL) -> bool:
    ok = report.max_relator_residual <= tol and report.meridian_residual <= tol
    if report.longitude_residual is not None:
        ok = ok and report.longitude_residual <= tol
    return ok


def cord_relation_check(rep: KCHRep, trials: int = 200, seed: int = 0, max_len: int = 12,
                        relative: bool = True) -> float:
    """Largest violation of the cord algebra relations over random word pairs.

    With ``relative`` each violation is divided by max(1, largest term in
    that relation), so long words at |mu0| far from 1 do not swamp the test
    with float rounding. For terms of modulus at most 1 both readings agree.
    """
    rng = np.random.default_rng(seed)
    pres = rep.presentation
    gens = list(pres.generators)
    m, ell = pres.meridian, pres.longitude
    mu = rep.mu0

    def gap(lhs, *rhs):
        d = abs(lhs - sum(rhs))
        if relative:
            d /= max(1.0, abs(lhs), *(abs(t) for t in rhs))
        return d

    worst = gap(induced_aug(rep, GroupWord()), 1 - mu)
    for _ in range(trials):
        g1 = random_word(rng, gens, max_len)
        g2 = random_word(rng, gens, max_len)
        v1, v2 = induced_aug(rep, g1), induced_aug(rep, g2)
        checks = [
            gap(induced_aug(rep, m * g1), mu * v1),
            gap(induced_aug(rep, g1 * m), mu * v1),
            gap(induced_aug(rep, g1 * g2), induced_aug(rep, g1 * m * g2), v1 * v2),
        ]
        if ell is not None:
            lam = rep.lambda0
            checks.append(gap(induced_aug(rep, ell * g2), lam * v2))
            checks.append(gap(induced_aug(rep, g2 * ell), lam * v2))
        worst = max(worst, *checks)
    return float(worst)


def _orth_extend(basis: list[np.ndarray], v: np.ndarray, tol: float) -> bool:
    v = v.astype(complex).copy()
    for _ in range(2):
        for b in basis:
            v -= np.vdot(b, v) * b
    nv = np.linalg.norm(v)
    if nv > tol:
        basis.append(v / nv)
        return True
    return False


def algebra_span_dimension(mats: list[np.ndarray], tol: float = 1e-8) -> int:
    """Dimension of the unital algebra generated by ``mats`` (products up to length 2n^2)."""
    n = mats[0].shape[0]
    mats = [X / np.linalg.norm(X) for X in mats]
    basis: list[np.ndarray] = []
    frontier = [np.eye(n, dtype=complex) / np.sqrt(n)]
    _orth_extend(basis, frontier[0].ravel(), tol)
    for _ in range(2 * n * n):
        new = []
        for P in frontier:
            for X in mats:
                Q = P @ X
                nq = np.linalg.norm(Q)
                if nq == 0:
                    continue
                Q = Q / nq
                if _orth_extend(basis, Q.ravel(), tol):
                    new.append(Q)
        if not new or len(basis) == n * n:
            break
        frontier = new
    return len(basis)


def irreducibility(rep: KCHRep, tol: float = 1e-8) -> tuple[bool, int]:
    """Burnside criterion: irreducible iff the images span all n x n matrices."""
    n = rep.dim
    if n == 1:
        return True, 1
    span = algebra_span_dimension(list(rep.images.values()), tol)
    return span == n * n, span


def _cyclic_subspace(mats: list[np.ndarray], v: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    basis: list[np.ndarray] = []
    _orth_extend(basis, v, tol)
    frontier = list(basis)
    while frontier:
        new = []
        for b in frontier:
            for X in mats:
                w = X @ b
                if _orth_extend(basis, w, tol * max(1.0, np.linalg.norm(w))):
                    new.append(basis[-1])
        frontier = new
    return np.array(basis).T


def reduce_rep(rep: KCHRep, tol: float = 1e-8) -> KCHRep:
    """A KCH representation of smaller degree inducing the same (lambda0, mu0).

    Uses the cyclic subspace generated by e_1 when it is proper (restriction);
    otherwise the largest invariant subspace inside ker(e_1^*) (quotient).
    """
    n = rep.dim
    imgs = rep.eigenbasis_images()
    mats = list(imgs.values())
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1
    S = _cyclic_subspace(mats, e1)
    if S.shape[1] < n:
        # restriction to an invariant subspace containing e_1
        rest = [S[:, i].copy() for i in range(S.shape[1])]
        vecs: list[np.ndarray] = []
        for v in rest:
            v = v.copy()
            v[0] = 0
            _orth_extend(vecs, v, 1e-9)
        B = np.column_stack([e1] + vecs)
        Binv = np.linalg.pinv(B)
        new = {g: Binv @ X @ B for g, X in imgs.items()}
        kind = "restriction"
    else:
        R = _cyclic_subspace([X.T for X in mats], e1)  # row space spanned by e1^T A
        _, sv, vh = np.linalg.svd(R.T)
        rank = int(np.sum(sv > 1e-9 * max(1.0, sv[0])))
        U = vh[rank:].conj().T  # null space: vectors v with e1^T A v = 0 for all A
        if U.shape[1] == 0:
            raise AlreadyIrreducible("no proper invariant subspace found")
        # orthonormal complement of U inside span(e_2, ..., e_n)
        vecs = []
        Ub = [U[:, i] for i in range(U.shape[1])]
        work = list(Ub)
        for i in range(1, n):
            v = np.zeros(n, dtype=complex)
            v[i] = 1
            if _orth_extend(work, v, 1e-9):
                vecs.append(work[-1])
        C = np.column_stack([e1] + vecs)
        new = {g: C.conj().T @ X @ C for g, X in imgs.items()}
        kind = "quotient"
    out = KCHRep(rep.presentation, rep.mu0, new, family=rep.family, params={**rep.params, "reduced": kind})
    if rep.lambda0 is not None and out.lambda0 is not None and abs(out.lambda0 - rep.lambda0) > tol * max(1, abs(rep.lambda0)):
        raise KCHError("reduction changed lambda0")
    return out


def abelian_rep(pres: Presentation, mu0: complex) -> KCHRep:
    """The 1-dimensional representation gamma -> mu0^lk(gamma)."""
    imgs = {g: np.array([[complex(mu0) ** pres.weights[g]]]) for g in pres.generators}
    return KCHRep(pres, mu0, imgs, family="abelian", params={"n": 1})


def direct_sum(*reps: KCHRep) -> KCHRep:
    """Block-diagonal sum; the first summand carries e_1."""
    pres = reps[0].presentation
    imgs = {}
    for g in pres.generators:
        blocks = [r.to_eigenbasis(r.images[g]) for r in reps]
        dim = sum(b.shape[0] for b in blocks)
        X = np.zeros((dim, dim), dtype=complex)
        o = 0
        for b in blocks:
            k = b.shape[0]
            X[o:o + k, o:o + k] = b
            o += k
        imgs[g] = X
    return KCHRep(pres, reps[0].mu0, imgs, family="sum")


def trivial_rep(pres: Presentation, dim: int = 1) -> KCHRep:
    """Every generator to the identity; a legal summand but not a KCH rep alone (mu0 = 1)."""
    imgs = {g: np.eye(dim, dtype=complex) for g in pres.generators}
    rep = KCHRep.__new__(KCHRep)
    rep.presentation, rep.mu0, rep.images = pres, 1 + 0j, imgs
    rep.basis = np.eye(dim, dtype=complex)
    rep._inv = {g: np.eye(dim, dtype=complex) for g in imgs}
    rep._basis_inv = rep.basis
    rep.lambda0, rep.family, rep.params = None, "trivial", {}
    return rep


def sl2_twist(images: dict[str, np.ndarray], pres: Presentation, mu1: complex | None = None) -> KCHRep:
    """Twist a 2-dimensional representation by gamma -> mu1^lk(gamma).

    ``mu1`` is the meridian eigenvalue to promote; the output has mu0 = mu1^2.
    """
    images = {g: np.asarray(X, dtype=complex) for g, X in images.items()}
    tmp = KCHRep.__new__(KCHRep)
    tmp.images = images
    tmp._inv = {g: np.linalg.inv(X) for g, X in images.items()}
    Mm = eval_word(tmp, pres.meridian)
    ev = np.linalg.eigvals(Mm)
    if mu1 is None:
        mu1 = Mm[0, 0] if abs(Mm[1, 0]) < 1e-14 else ev[0]
    mu1 = complex(mu1)
    if abs(mu1 - 1) < 1e-9 or abs(mu1 + 1) < 1e-9:
        raise ValueError("meridian eigenvalue must avoid +-1")
    if min(abs(ev - mu1)) > 1e-6 * max(1, abs(mu1)) or abs(ev[0] * ev[1] - 1) > 1e-6:
        raise ValueError("mu1 is not a meridian eigenvalue of an SL2 representation")
    twisted = {g: mu1 ** pres.weights[g] * X for g, X in images.items()}
    Mt = mu1 * Mm
    mu0 = mu1 * mu1
    basis = np.empty((2, 2), dtype=complex)
    for col, theta in enumerate((mu0, 1.0)):
        _, _, vh = np.linalg.svd(Mt - theta * np.eye(2))
        basis[:, col] = vh[-1].conj()
    return KCHRep(pres, mu0, twisted, basis=basis, family="sl2_twist", params={"mu1": mu1})


def untwist(rep: KCHRep, mu1: complex) -> dict[str, np.ndarray]:
    """Divide each image by mu1^lk; inverse of ``sl2_twist`` on a 2-dim rep."""
    pres = rep.presentation
    return {g: X / mu1 ** pres.weights[g] for g, X in rep.images.items()}


def lk(u: GroupWord, pres: Presentation) -> int:
    return linking_number(u, pres)
