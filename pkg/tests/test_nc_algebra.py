import pytest
from hypothesis import given, settings, strategies as st

from kchaug.errors import MissingImageError, RankMismatchError, TermBudgetExceeded
from kchaug.laurent import LAMBDA, MU, ONE, LaurentPoly, format_laurent
from kchaug.ncpoly import (
    NcPoly,
    all_letters,
    format_ncpoly,
    identity_images,
    parse_laurent,
    parse_ncpoly,
    substitute,
    term_budget,
)


def gen(i, j, n=3):
    return NcPoly.gen(i, j, n)


# -- Laurent arithmetic ---------------------------------------------------

def test_monomial_product_adds_exponents():
    assert LAMBDA * MU ** 3 * LAMBDA ** -1 == MU ** 3


def test_additive_inverse_is_empty():
    z = (ONE - MU) + (MU - ONE)
    assert z.is_zero()
    assert z.terms == {}


def test_binomial_square():
    assert (ONE - MU) * (ONE - MU) == LaurentPoly({(0, 0): 1, (0, 1): -2, (0, 2): 1})


def test_big_integer_coefficients_stay_exact():
    p = LaurentPoly.const(3) ** 80
    assert p.coefficient(0, 0) == 3 ** 80


def test_laurent_text_roundtrip():
    p = parse_laurent("2*l^2*m^-1 - 2*l*m^-1 + 7")
    assert parse_laurent(format_laurent(p)) == p


# -- noncommutative arithmetic ---------------------------------------------

def test_word_product_concatenates():
    p = gen(1, 2) * gen(2, 1)
    assert p.terms == {((1, 2), (2, 1)): ONE}


def test_noncommutativity_witness():
    assert gen(1, 2) * gen(2, 1) != gen(2, 1) * gen(1, 2)


def test_scale_distributes():
    p = (gen(1, 2) + gen(2, 1)).scale(ONE - MU)
    assert p == gen(1, 2).scale(ONE - MU) + gen(2, 1).scale(ONE - MU)


def test_rank_mismatch():
    with pytest.raises(RankMismatchError):
        NcPoly.gen(1, 2, 2) + NcPoly.gen(1, 2, 3)


def test_letter_must_be_off_diagonal():
    with pytest.raises(ValueError):
        NcPoly.gen(2, 2, 3)


def test_term_budget_guard():
    x = gen(1, 2) + gen(2, 1) + 1
    with term_budget(3):
        with pytest.raises(TermBudgetExceeded):
            x * x


def test_debug_serialization():
    p = NcPoly.scalar(2, ONE - MU) + (NcPoly.gen(1, 2, 2) * NcPoly.gen(2, 1, 2)).scale(LAMBDA * MU ** 3)
    assert format_ncpoly(p) == "(1 - m) + (l*m^3)*a12.a21"
    assert parse_ncpoly(format_ncpoly(p), 2) == p


# -- substitution ------------------------------------------------------------

def test_substitute_sign_cancellation():
    n = 2
    p = NcPoly.gen(1, 2, n) * NcPoly.gen(2, 1, n)
    images = {(1, 2): -NcPoly.gen(2, 1, n), (2, 1): -NcPoly.gen(1, 2, n)}
    assert substitute(p, images) == NcPoly.gen(2, 1, n) * NcPoly.gen(1, 2, n)


def test_substitute_unit():
    assert substitute(NcPoly.one(3), {}) == NcPoly.one(3)


def test_substitute_single_case():
    images = identity_images(3)
    images[(1, 3)] = gen(2, 3) - gen(2, 1) * gen(1, 3)
    assert substitute(gen(1, 3), images) == gen(2, 3) - gen(2, 1) * gen(1, 3)


def test_substitute_missing_image():
    with pytest.raises(MissingImageError):
        substitute(gen(1, 2) * gen(2, 1), {(1, 2): gen(2, 1)})


# -- randomized algebra laws -------------------------------------------------

LETTERS = all_letters(3)
coeffs = st.builds(
    lambda c, el, em: LaurentPoly.monomial(el, em, c),
    st.integers(-3, 3), st.integers(-2, 2), st.integers(-2, 2),
)
words = st.lists(st.sampled_from(LETTERS), max_size=3).map(tuple)
polys = st.lists(st.tuples(words, coeffs), max_size=4).map(lambda items: NcPoly(3, items))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_associative_and_distributive(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r


image_maps = st.fixed_dictionaries({g: polys for g in LETTERS})


@settings(max_examples=40, deadline=None)
@given(polys, polys, image_maps)
def test_substitute_is_homomorphism(p, q, images):
    assert substitute(p * q, images) == substitute(p, images) * substitute(q, images)
    assert substitute(p + q, images) == substitute(p, images) + substitute(q, images)


@settings(max_examples=40, deadline=None)
@given(polys)
def test_identity_substitution_and_canonical_form(p):
    assert substitute(p, identity_images(3)) == p
    again = NcPoly(3, p.items())
    assert again == p and again.terms == p.terms
    assert all(not c.is_zero() for c in p.terms.values())
