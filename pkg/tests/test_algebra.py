import random

import pytest

from qsolv import (
    ParameterSpace,
    Presentation,
    StageShapeViolation,
    Word,
    ZeroElement,
    quantum_weyl,
    uq_nplus_sl3,
)
from conftest import random_element, random_word


def tampered_sl3():
    """The rank-two instance with the (1,3) tail replaced by x3.

    The x3*x2*x1 overlap is consistent exactly when the tail commutes with
    x2 (powers of x2 and constants do), so x3 breaks it.
    """
    space = ParameterSpace(["q"])
    q = space.gamma(1, {"q": 1})
    qmat = {(1, 2): q, (1, 3): q.inverse(), (2, 3): q}
    return Presentation(space, 3, qmat, {(1, 3): {(0, 0, 1): space.one}})


def test_tail_commuting_with_middle_generator_stays_consistent():
    # replacing the (1,3) tail by x2^2 keeps the overlap resolvable
    space = ParameterSpace(["q"])
    q = space.gamma(1, {"q": 1})
    qmat = {(1, 2): q, (1, 3): q.inverse(), (2, 3): q}
    p = Presentation(space, 3, qmat, {(1, 3): {(0, 2, 0): space.one}})
    assert p.check_pbw_consistency() is None


def test_constructor_rejects_non_unit_qmat():
    space = ParameterSpace(["q"])
    q = space.param("q")
    with pytest.raises(ValueError):
        Presentation(space, 2, {(1, 2): q + 1})


def test_validate_clean_catalog(aq1, sl3, qm2):
    for p in (aq1, sl3, qm2):
        assert p.validate() == []


def test_validate_flags_bad_tail_support():
    space = ParameterSpace(["q"])
    q = space.gamma(1, {"q": 1})
    p = Presentation(space, 2, {(1, 2): q}, {(1, 2): {(1, 0): space.one}})
    issues = p.validate()
    assert any("r_1_2 not in R_2" in msg for msg in issues)


def test_validate_flags_non_semicommuting_invertible(aq1):
    space = aq1.params
    bad = Presentation(
        space, 2, aq1.qmat, {(1, 2): {(0, 0): space.one}}, invertible=[2]
    )
    issues = bad.validate()
    assert any("invertible x2" in msg for msg in issues)


def test_normal_form_examples_aq1(aq1):
    c = aq1.params.param("c")
    word = Word.of([(2, 1), (1, 1)], aq1.params.one)  # x * y
    nf = aq1.normal_form(word)
    assert nf == aq1.element({(1, 1): c, (0, 0): -c})


def test_normal_form_already_normal(aq1):
    word = Word.of([(1, 1), (1, 1)], aq1.params.one)
    assert aq1.normal_form(word) == aq1.element({(2, 0): 1})


def test_normal_form_sl3(sl3):
    q = sl3.params.param("q")
    word = Word.of([(3, 1), (1, 1)], sl3.params.one)  # E2 * E1
    nf = sl3.normal_form(word)
    assert nf == sl3.element({(1, 0, 1): q, (0, 1, 0): -q})


def test_normal_form_rejects_bad_letters(aq1):
    with pytest.raises(ValueError):
        aq1.normal_form(Word.of([(1, -1)], aq1.params.one))
    with pytest.raises(ValueError):
        aq1.normal_form(Word.of([(5, 1)], aq1.params.one))


def test_ring_ops_examples(aq1):
    c = aq1.params.param("c")
    y, x = aq1.gen(1), aq1.gen(2)
    a = random_element(aq1, random.Random(3))
    assert aq1.mul(a, aq1.one()) == a
    assert aq1.mul(y, x) == aq1.element({(1, 1): 1})
    assert aq1.mul(x, y) == aq1.element({(1, 1): c, (0, 0): -c})
    assert (a + a.scale(-1)).is_zero


def test_degree_examples(aq1):
    p = aq1
    a = p.element({(1, 1): 1, (0, 5): 1})
    assert p.degree(a, 2) == (1, 1)
    assert p.degree(p.element({(0, 3): 1}), 2) == (0, 3)
    c = p.params.param("c")
    assert p.degree(p.element({(1, 1): c, (0, 0): -c}), 2) == (1, 1)
    with pytest.raises(ZeroElement):
        p.degree(p.zero(), 2)


def test_associated_graded(aq1, sl3):
    graded = aq1.associated_graded()
    assert graded.qmat == aq1.qmat
    assert graded.nonzero_tails() == ()
    # twisted presentations are fixed points
    again = graded.associated_graded()
    assert again.qmat == graded.qmat and again.nonzero_tails() == ()
    assert sl3.associated_graded().qmat == sl3.qmat


def test_localize_soundness(aq1):
    pl = aq1.localize(2)
    rng = random.Random(5)
    for _ in range(25):
        a = random_element(pl, rng)
        moved = pl.mul(pl.gen(2, -1), pl.mul(pl.gen(2), a))
        assert moved == a


def test_localize_requires_stage_shape(qm2):
    with pytest.raises(StageShapeViolation):
        qm2.localize(1)  # generators above 1 are neither invertible nor semicommuting


def test_localize_twisted_any_index(aq1):
    twisted = Presentation(
        aq1.params, 2, aq1.qmat, {}, invertible=[1, 2]
    )
    for i in (1, 2):
        pl = twisted.localize(i)
        assert i in pl.invertible


def test_diamond_check_passes_catalog(aq1, sl3, qm2):
    for p in (aq1, sl3, qm2):
        assert p.check_pbw_consistency() is None


def test_diamond_check_catches_tamper():
    cex = tampered_sl3().check_pbw_consistency()
    assert cex is not None
    assert cex.triple == (3, 2, 1)
    assert cex.resolve_high_first != cex.resolve_low_first


def test_confluence_on_random_words(aq1, sl3):
    rng = random.Random(17)
    for p in (aq1, sl3):
        for _ in range(40):
            word = random_word(p, rng)
            direct = p.normal_form(word)
            cut = rng.randint(0, len(word.letters))
            left = p.normal_form(Word.of(word.letters[:cut], word.coefficient))
            right = p.normal_form(Word.of(word.letters[cut:], p.params.one))
            assert p.mul(left, right) == direct


def test_associativity_random_triples(aq1, sl3, qm2):
    rng = random.Random(23)
    for p in (aq1, sl3, qm2):
        for _ in range(30):
            a, b, c = (random_element(p, rng, max_window_total=2, max_terms=2)
                       for _ in range(3))
            assert p.mul(p.mul(a, b), c) == p.mul(a, p.mul(b, c))


def test_filtration_multiplicativity(aq1, sl3):
    rng = random.Random(29)
    for p in (aq1, sl3):
        window = p.n
        for _ in range(30):
            a, b = random_element(p, rng), random_element(p, rng)
            product = p.mul(a, b)
            assert not product.is_zero  # domains have no zero divisors
            expected = tuple(
                x + y for x, y in zip(p.degree(a, window), p.degree(b, window))
            )
            assert p.degree(product, window) == expected


def test_element_invariants(aq1):
    with pytest.raises(ValueError):
        aq1.monomial((0, -1))
    a = aq1.element({(1, 0): 1, (0, 1): 0})
    assert (0, 1) not in a.terms
