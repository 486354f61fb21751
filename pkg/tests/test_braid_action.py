import numpy as np
import pytest

from kchaug.braid import (
    BraidWord,
    a_matrix,
    apply_phi,
    braid_images,
    ideal_generators,
    lambda_diagonal,
    phi_letter,
    phi_star_matrices,
)
from kchaug.errors import MultiComponentClosure
from kchaug.laurent import LAMBDA, MU
from kchaug.ncpoly import NcPoly, all_letters, substitute


def g(i, j, n):
    return NcPoly.gen(i, j, n)


def images(letters, n):
    return braid_images(BraidWord(n, tuple(letters)), n)


def test_case_table_examples():
    phi = phi_letter(1, 3)
    assert phi[(2, 3)] == g(1, 3, 3)
    assert phi[(1, 3)] == g(2, 3, 3) - g(2, 1, 3) * g(1, 3, 3)
    assert phi[(1, 2)] == -g(2, 1, 3)


def test_letter_out_of_range():
    with pytest.raises(ValueError):
        phi_letter(3, 3)
    with pytest.raises(ValueError):
        phi_letter(0, 3)


def test_sigma1_and_its_square():
    b = BraidWord(2, (1,))
    assert apply_phi(b, g(1, 2, 2)) == -g(2, 1, 2)
    assert apply_phi(BraidWord(2, (1, 1)), g(1, 2, 2)) == g(1, 2, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_inverse_letters(n):
    for k in range(1, n):
        for word in ((k, -k), (-k, k)):
            imgs = images(word, n)
            assert all(imgs[x] == g(*x, n) for x in all_letters(n))


@pytest.mark.parametrize("n", [3, 4])
def test_braid_relations(n):
    for k in range(1, n - 1):
        assert images((k, k + 1, k), n) == images((k + 1, k, k + 1), n)
        assert images((-k, -k - 1, -k), n) == images((-k - 1, -k, -k - 1), n)
    for j in range(1, n):
        for k in range(j + 2, n):
            assert images((j, k), n) == images((k, j), n)


def test_composition_order_leftmost_first():
    # phi_{b1 b2} = phi_{b2} o phi_{b1}: substitute b1's images into b2's map
    n = 3
    b12 = images((1, 2), n)
    s1, s2 = phi_letter(1, n), phi_letter(2, n)
    manual = {x: substitute(substitute(g(*x, n), s1, n), s2, n) for x in all_letters(n)}
    assert b12 == manual


def test_phi_star_sigma1():
    left, right = phi_star_matrices(BraidWord(2, (1,)))
    assert left == [[-g(2, 1, 2), NcPoly.one(2)], [NcPoly.one(2), NcPoly.zero(2)]]
    assert right[0][1] == NcPoly.one(2) and right[1][0] == NcPoly.one(2)


def test_phi_star_identity_braid():
    left, right = phi_star_matrices(BraidWord(2, (1, -1)))
    eye = [[NcPoly.one(2), NcPoly.zero(2)], [NcPoly.zero(2), NcPoly.one(2)]]
    assert left == eye and right == eye


def _check_reconstruction(b):
    n = b.strands
    ext = n + 1
    full = braid_images(b, ext)
    left, right = phi_star_matrices(b)
    for i in range(1, n + 1):
        acc = NcPoly.zero(ext)
        for j in range(1, n + 1):
            acc = acc + left[i - 1][j - 1].with_rank(ext) * g(j, ext, ext)
        assert acc == full[(i, ext)]
        acc = NcPoly.zero(ext)
        for j in range(1, n + 1):
            acc = acc + g(ext, j, ext) * right[j - 1][i - 1].with_rank(ext)
        assert acc == full[(ext, i)]


def test_phi_star_reconstruction_random():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(2, 5))
        length = int(rng.integers(1, 9))
        letters = [int(rng.integers(1, n)) * int(rng.choice([-1, 1])) for _ in range(length)]
        _check_reconstruction(BraidWord(n, tuple(letters)))


def test_trefoil_ideal_shape():
    b = BraidWord(2, (1, 1, 1))
    ideal = ideal_generators(b)
    assert len(ideal.generators) == 12
    assert len(set(ideal.tags)) == 12
    assert lambda_diagonal(b) == [LAMBDA * MU ** 3, MU ** 0]
    assert all(p.rank == 2 for p in ideal.generators)


def test_a_matrix_entries():
    A = a_matrix(3)
    assert A[0][1] == g(1, 2, 3)
    assert A[2][0] == g(3, 1, 3).scale(-MU)
    assert A[1][1] == NcPoly.scalar(3, 1 - MU)


def test_ideal_dump_is_stable():
    b = BraidWord.parse(2, "1,1,1")
    assert ideal_generators(b).dump() == ideal_generators(b).dump()
    first = ideal_generators(b).dump().splitlines()[0]
    assert first.startswith("phi[1,1]:")


def test_link_closure_rejected():
    with pytest.raises(MultiComponentClosure):
        ideal_generators(BraidWord(2, (1, 1)))


def test_braid_word_validation():
    b = BraidWord.parse(3, "1,-2,1,-2")
    assert b.writhe == 0 and b.is_knot()
    with pytest.raises(ValueError):
        BraidWord(2, ())
