import cmath
import itertools

import numpy as np
import pytest

from kchaug.errors import AbelianDegenerate, AlreadyIrreducible, NotARepresentation
from kchaug.groups import GroupWord, pretzel_presentation, random_word, torus_presentation, two_bridge_presentation
from kchaug.reps import (
    KCHRep,
    abelian_rep,
    companion_fill,
    cord_relation_check,
    direct_sum,
    eval_word,
    induced_aug,
    irreducibility,
    reduce_rep,
    riley_polynomial,
    sl2_twist,
    torus_rep,
    torus_residuals,
    trivial_rep,
    two_bridge_rep,
    two_bridge_reps,
    untwist,
    verify,
    is_verified,
)
from kchaug.reps.core import lk
from kchaug.reps.pretzel import phi_k, pretzel_identity_suite, pretzel_rep, pretzel_reps, r_matrix
from kchaug.reps.twobridge import b_invariants, beta_from_u, palindrome_residual

MU = 0.7 + 0.2j
E = GroupWord()


# -- evaluation and induced augmentation --------------------------------------

def test_eval_word_basics():
    rep = torus_rep(3, 5, 3, MU)
    assert np.allclose(eval_word(rep, E), np.eye(3))
    spec = np.sort_complex(np.linalg.eigvals(eval_word(rep, rep.presentation.meridian)))
    assert np.allclose(spec, np.sort_complex(np.array([MU, 1, 1])), atol=1e-8)
    for r in rep.presentation.relators:
        assert np.max(np.abs(eval_word(rep, r) - np.eye(3))) <= 1e-8


def test_induced_aug_small_words():
    rep = torus_rep(2, 3, 2, 2.0)
    m = rep.presentation.meridian
    assert induced_aug(rep, E) == pytest.approx(1 - 2.0)
    assert induced_aug(rep, m) == pytest.approx(2.0 * (1 - 2.0))
    assert rep.lambda0 == pytest.approx(-0.125)
    assert induced_aug(rep, rep.presentation.longitude) == pytest.approx(-0.125 * (1 - 2.0))


def test_abelian_baseline_exact():
    rng = np.random.default_rng(0)
    mu = 1.5 - 0.5j
    for pres in (torus_presentation(2, 3), two_bridge_presentation(5, 3), pretzel_presentation(2)):
        rep = abelian_rep(pres, mu)
        for _ in range(20):
            u = random_word(rng, pres.generators, 8)
            assert induced_aug(rep, u) == pytest.approx(mu ** lk(u, pres) * (1 - mu), rel=1e-12)
        assert cord_relation_check(rep, trials=50) <= 1e-12


# -- cord relations ----------------------------------------------------------

def test_cord_check_torus_3_5():
    rep = torus_rep(3, 5, 3, MU)
    assert cord_relation_check(rep, trials=200, seed=0, max_len=12) <= 1e-8


def test_cord_check_detects_corruption():
    rep = torus_rep(3, 5, 3, MU)
    bad = {g: X.copy() for g, X in rep.images.items()}
    bad["x"][0, 1] += 1e-3
    broken = KCHRep(rep.presentation, rep.mu0, bad, basis=rep.basis, family="torus")
    assert cord_relation_check(broken, trials=200, seed=0) > 1e-5


# -- torus -------------------------------------------------------------------

def test_torus_n1_scalars():
    mu = 1.3 + 0.4j
    rep = torus_rep(2, 3, 1, mu)
    assert rep.images["x"][0, 0] == pytest.approx(mu ** 3)
    assert rep.images["y"][0, 0] == pytest.approx(mu ** 2)
    assert rep.lambda0 == pytest.approx(1)


def test_torus_2_3_degree_two():
    rep = torus_rep(2, 3, 2, 2.0)
    assert rep.params["z"] == pytest.approx(-8)
    lam = rep.lambda0
    assert lam * 2.0 ** 3 + 1 == pytest.approx(0, abs=1e-12)
    assert max(torus_residuals(rep).values()) <= 1e-8


@pytest.mark.parametrize("branch", [0, 1])
def test_torus_3_5_degree_two_branches(branch):
    mu = 0.9 * cmath.exp(0.61j)
    rep = torus_rep(3, 5, 2, mu, branch=branch)
    assert abs(rep.lambda0 ** 2 * mu ** 15 - 1) <= 1e-9
    assert max(torus_residuals(rep).values()) <= 1e-8


def test_companion_fill_hand_case():
    # t^2 - 1 with x_1 = 0
    Y, y = companion_fill([-1, 0], [0])
    assert np.allclose(y, [1, 0])
    assert np.allclose(Y, [[0, 1], [1, 0]])


def test_companion_fill_affine_in_c():
    c = np.array([0.3, -1.2, 2.0])
    x = np.array([0.5, -0.25])
    _, y0 = companion_fill(c, x)
    for i in range(3):
        d = np.zeros(3)
        d[i] = 0.125
        _, y1 = companion_fill(c + d, x)
        assert y1[i] - y0[i] == pytest.approx(-0.125)


def test_companion_fill_random_charpoly():
    rng = np.random.default_rng(2)
    for n in range(1, 6):
        c = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = rng.normal(size=max(n - 1, 0)) + 1j * rng.normal(size=max(n - 1, 0))
        Y, _ = companion_fill(c, x)
        brute = np.poly(Y)[::-1]  # ascending, leading 1
        assert np.max(np.abs(brute[:n] - c)) <= 1e-9


# -- 2-bridge ----------------------------------------------------------------

def test_k31_beta_is_one():
    for mu in (3.0, MU, -0.4 + 1.1j):
        rep = two_bridge_rep(3, 1, mu, 1.0)
        assert max(b_invariants(rep).values()) <= 1e-10


def test_k31_riley_root_at_three():
    _, roots = riley_polynomial(3, 1, 3.0)
    assert len(roots) == 1
    assert roots[0] == pytest.approx(7 / 3, abs=1e-12)
    assert beta_from_u(3.0, roots[0]) == pytest.approx(1, abs=1e-10)


def test_k53_roots_match_symbolic_expansion():
    sympy = pytest.importorskip("sympy")
    u = sympy.Symbol("u")
    mu = sympy.Rational(7, 10) + sympy.Rational(1, 5) * sympy.I
    N = sympy.Matrix([[mu, 1], [0, 1]])
    C = sympy.Matrix([[mu, 0], [-mu * u, 1]])
    W = N * C.inv() * N.inv() * C  # eps = (+1, -1, -1, +1)
    phi = sympy.Poly(sympy.expand(sympy.simplify(W[0, 0] + (1 - mu) * W[0, 1])), u)
    assert phi.degree() == 2
    expected = sorted((complex(r) for r in sympy.Poly(phi, u).nroots(n=30)), key=lambda z: (z.real, z.imag))
    _, roots = riley_polynomial(5, 3, complex(mu))
    got = sorted(roots, key=lambda z: (z.real, z.imag))
    assert np.allclose(got, expected, atol=1e-9)


def test_k53_two_reps_all_checks():
    reps = two_bridge_reps(5, 3, MU)
    assert len(reps) == 2
    for rep in reps:
        assert is_verified(verify(rep))
        assert max(b_invariants(rep).values()) <= 1e-10
        assert palindrome_residual(rep) <= 1e-9
        assert cord_relation_check(rep, trials=200) <= 1e-8


def test_two_bridge_errors():
    with pytest.raises(AbelianDegenerate):
        two_bridge_rep(5, 3, MU, MU * (1 - MU))
    with pytest.raises(NotARepresentation):
        two_bridge_rep(5, 3, MU, 0.31 + 0.17j)
    with pytest.raises(ValueError):
        riley_polynomial(5, 3, 1.0)


def test_random_valid_beta_det():
    rng = np.random.default_rng(4)
    for _ in range(5):
        mu = complex(*rng.uniform(-1.5, 1.5, size=2))
        for rep in two_bridge_reps(7, 3, mu):
            assert abs(np.linalg.det(rep.images["b"]) - mu) <= 1e-10


# -- pretzel -----------------------------------------------------------------

def test_pretzel_k2_lambda():
    rep = pretzel_rep(2, 2.0)
    assert rep.lambda0 == pytest.approx(2.0 ** -10, abs=1e-8)
    assert abs(rep.lambda0 - 9.765625e-4) <= 1e-8


def test_pretzel_det_w_and_phi_identity():
    for k in (1, 2, 3, -2):
        for rep in pretzel_reps(k, MU):
            W = rep.images["w"]
            assert abs(np.linalg.det(W) - MU ** 2) <= 1e-10
            m, w = GroupWord.gen("m"), GroupWord.gen("w")
            lhs = induced_aug(rep, w ** (k + 1))
            rhs = induced_aug(rep, w ** k)
            assert abs(lhs - rhs) <= 1e-9 * max(1, abs(lhs))
            assert abs(phi_k(k, MU)(rep.params["x"])) <= 1e-8 * max(1, abs(lhs))
            Wk = np.linalg.matrix_power(W if k > 0 else np.linalg.inv(W), abs(k))
            assert np.max(np.abs(r_matrix(rep))) <= 1e-8 * max(1.0, np.max(np.abs(Wk)))
            assert induced_aug(rep, w ** k * m * w) == pytest.approx(0, abs=1e-8)


def test_pretzel_small_identities():
    rep = pretzel_rep(2, MU)
    m, w = GroupWord.gen("m"), GroupWord.gen("w")
    assert induced_aug(rep, m * w) == pytest.approx(MU * induced_aug(rep, w.inverse() * m * w), abs=1e-10)
    lhs0 = induced_aug(rep, w ** 2 * m * w) + induced_aug(rep, w ** 2 * m * w)
    assert lhs0 == pytest.approx(0, abs=1e-10)


def test_pretzel_identity_suite_k2():
    rng = np.random.default_rng(8)
    for _ in range(3):
        mu = 1.1 * cmath.exp(1j * rng.uniform(0.3, 2.8))
        for rep in pretzel_reps(2, mu):
            suite = pretzel_identity_suite(rep)
            assert max(suite.values()) <= 1e-8, suite
            assert irreducibility(rep) == (True, 9)


def test_pretzel_root_counts():
    assert len(pretzel_reps(3, MU)) == 3
    assert len(pretzel_reps(-3, MU)) == 2


# -- irreducibility and reduction ---------------------------------------------

def test_irreducibility_examples():
    assert irreducibility(abelian_rep(torus_presentation(2, 3), MU)) == (True, 1)
    pres = two_bridge_presentation(3, 1)
    D = np.diag([MU, 1])
    two_dim = KCHRep(pres, MU, {"m": D, "b": D}, family="abelian")
    irr, span = irreducibility(two_dim)
    assert not irr and span == 2
    assert irreducibility(torus_rep(3, 5, 3, MU)) == (True, 9)


def test_reduce_two_dim_abelian():
    pres = two_bridge_presentation(3, 1)
    D = np.diag([MU, 1])
    small = reduce_rep(KCHRep(pres, MU, {"m": D, "b": D}, family="abelian"))
    assert small.dim == 1
    assert small.lambda0 == pytest.approx(1)
    u = GroupWord.parse("m.b^-1.b.b")
    assert induced_aug(small, u) == pytest.approx(MU ** 2 * (1 - MU))


def test_reduce_direct_sum_with_trivial():
    rep = torus_rep(2, 3, 2, MU)
    big = direct_sum(rep, trivial_rep(rep.presentation))
    small = reduce_rep(big)
    assert small.dim < big.dim
    assert abs(small.lambda0 - rep.lambda0) <= 1e-8
    assert abs(small.mu0 - rep.mu0) <= 1e-8


def test_reduce_irreducible_raises():
    with pytest.raises(AlreadyIrreducible):
        reduce_rep(torus_rep(3, 5, 3, MU))


# -- SL2 twisting ------------------------------------------------------------

def test_sl2_twist_round_trip():
    mu1 = 0.9 + 0.6j
    mu0 = mu1 * mu1
    rep = two_bridge_reps(3, 1, mu0)[0]
    sl2 = untwist(rep, mu1)
    for X in sl2.values():
        assert abs(np.linalg.det(X) - 1) <= 1e-10
    again = sl2_twist(sl2, rep.presentation, mu1)
    assert again.mu0 == mu1 ** 2
    for g in rep.images:
        assert np.max(np.abs(again.images[g] - rep.images[g])) <= 1e-9
    assert cord_relation_check(again, trials=200) <= 1e-8


def test_sl2_twist_rejects_unit_eigenvalue():
    pres = two_bridge_presentation(3, 1)
    with pytest.raises(ValueError):
        sl2_twist({"m": np.eye(2), "b": np.eye(2)}, pres, 1.0)


# -- sweep property ------------------------------------------------------------

def test_every_rep_checks_at_three_mu():
    mus = [0.8 * cmath.exp(0.9j), 1.25 * cmath.exp(2.3j), -0.6 + 0.5j]
    builders = [
        lambda mu: [torus_rep(2, 5, 2, mu), torus_rep(3, 4, 3, mu)],
        lambda mu: two_bridge_reps(7, 3, mu),
        lambda mu: pretzel_reps(1, mu),
    ]
    for mu, build in itertools.product(mus, builders):
        for rep in build(mu):
            report = verify(rep)
            assert is_verified(report)
            assert abs(rep.mu0 - 1) > 1e-6
            assert cord_relation_check(rep, trials=60) <= 1e-8
