import random
from fractions import Fraction

import pytest

from qsolv import (
    Assignment,
    InvalidJordanPair,
    NonDiagonalizable,
    SplitPolynomial,
    WeylCriterionWitness,
    WeylDetected,
    ZeroWitness,
    ad,
    check_weyl_criterion,
    eigen_decompose,
    fa_roots,
    minimal_ad_polynomial,
    ore_left_shift,
    specialize_presentation,
    weyl_certificate,
)
from conftest import random_element


def classical_weyl(aq1):
    return specialize_presentation(aq1, Assignment(aq1.params, {"c": 1}))


def test_ore_shift_examples(aq1):
    c = aq1.params.param("c")
    y = aq1.gen(1)
    n, b1 = ore_left_shift(aq1, 2, y)
    assert n == 2
    assert b1 == aq1.element({(1, 1): c * c, (0, 0): -(c * c) - c})
    # self case and scalar case
    n, b1 = ore_left_shift(aq1, 2, aq1.gen(2))
    assert (n, b1) == (1, aq1.gen(2))
    n, b1 = ore_left_shift(aq1, 2, aq1.one().scale(5))
    assert n == 1 and b1 == aq1.one().scale(5)


def test_ore_shift_verified_on_random_elements(aq1, sl3):
    rng = random.Random(31)
    for p in (aq1, sl3):
        i = p.n
        for _ in range(15):
            y = random_element(p, rng)
            n, b1 = ore_left_shift(p, i, y)
            lhs = y
            for _ in range(n):
                lhs = p.mul(p.gen(i), lhs)
            assert lhs == p.mul(b1, p.gen(i))


def test_ad_examples(aq1, sl3):
    c = aq1.params.param("c")
    assert ad(aq1, 2, aq1.gen(1)) == aq1.localize(2).element({(1, 0): c, (0, -1): -c})
    pl = aq1.localize(2)
    assert ad(pl, 2, pl.gen(2)) == pl.gen(2)
    q = sl3.params.param("q")
    sl = sl3.localize(3)
    assert ad(sl, 3, sl.gen(2)) == sl.gen(2).scale(1 / q)


def test_fa_roots_examples(aq1, sl3):
    space = aq1.params
    f = fa_roots(aq1, 2, aq1.gen(1))
    assert f.roots == (space.gamma(1, {"c": 1}), space.gamma_one)
    assert fa_roots(aq1, 2, aq1.gen(2)).roots == (space.gamma_one,)
    qspace = sl3.params
    f3 = fa_roots(sl3, 3, sl3.gen(1))
    assert f3.roots == (qspace.gamma(1, {"q": 1}), qspace.gamma(1, {"q": -1}))


def test_fa_roots_annihilate(aq1, sl3):
    rng = random.Random(37)
    for p in (aq1, sl3):
        i = p.n
        pl = p.localize(i)
        for _ in range(15):
            y = random_element(p, rng)
            roots = fa_roots(p, i, y).roots
            z = pl.adopt(y)
            for beta in roots:
                z = ad(pl, i, z) - z.scale(beta.to_scalar())
            assert z.is_zero


def test_split_polynomial_coefficients(aq1):
    space = aq1.params
    f = SplitPolynomial((space.gamma(1, {"c": 1}), space.gamma_one))
    c = space.param("c")
    coeffs = f.coefficients()
    # (t - c)(t - 1) = t^2 - (c+1)t + c
    assert list(coeffs) == [c, -(c + 1), space.one]


def test_minimal_polynomial_examples(aq1):
    space = aq1.params
    mp = minimal_ad_polynomial(aq1, 2, aq1.gen(1))
    assert isinstance(mp, SplitPolynomial)
    assert set(mp.roots) == {space.gamma(1, {"c": 1}), space.gamma_one}
    assert mp.is_squarefree
    single = minimal_ad_polynomial(aq1, 2, aq1.gen(2))
    assert single.roots == (space.gamma_one,)


def test_minimal_roots_subset_of_fa_roots(aq1, sl3):
    rng = random.Random(41)
    for p in (aq1, sl3):
        i = p.n
        for _ in range(10):
            y = random_element(p, rng)
            mp = minimal_ad_polynomial(p, i, y)
            assert isinstance(mp, SplitPolynomial)
            candidates = list(fa_roots(p, i, y).roots)
            for root in mp.roots:
                assert root in candidates


def test_minimal_polynomial_jordan_block(aq1):
    classical = classical_weyl(aq1)
    jordan = minimal_ad_polynomial(classical, 2, classical.gen(1))
    assert isinstance(jordan, NonDiagonalizable)
    assert jordan.alpha == classical.params.gamma_one
    pl = classical.localize(2)
    assert jordan.u == pl.element({(0, -1): -1})
    assert jordan.v == pl.gen(1)


def test_eigen_decompose_examples(aq1):
    space = aq1.params
    c = space.param("c")
    comps = eigen_decompose(aq1, 2, aq1.gen(1))
    assert [comp.eigenvalue for comp in comps] == [space.gamma(1, {"c": 1}), space.gamma_one]
    pl = aq1.localize(2)
    assert comps[0].element == pl.element({(1, 0): 1, (0, -1): -c / (c - 1)})
    assert comps[1].element == pl.element({(0, -1): c / (c - 1)})
    assert eigen_decompose(aq1, 2, aq1.gen(2))[0].element == pl.gen(2)


def test_eigen_decompose_sl3(sl3):
    q = sl3.params.param("q")
    comps = eigen_decompose(sl3, 3, sl3.gen(1))
    pl = sl3.localize(3)
    lam = q / (q - q ** -1)
    by_value = {comp.eigenvalue: comp.element for comp in comps}
    gamma_q = sl3.params.gamma(1, {"q": 1})
    gamma_qinv = sl3.params.gamma(1, {"q": -1})
    assert by_value[gamma_q] == pl.element({(1, 0, 0): 1, (0, 1, -1): -lam})
    assert by_value[gamma_qinv] == pl.element({(0, 1, -1): lam})


def test_eigen_reconstruction_and_equations(aq1, sl3):
    rng = random.Random(43)
    for p in (aq1, sl3):
        i = p.n
        pl = p.localize(i)
        for _ in range(10):
            y = random_element(p, rng)
            comps = eigen_decompose(p, i, y)
            total = pl.zero()
            for comp in comps:
                assert ad(pl, i, comp.element) == comp.element.scale(
                    comp.eigenvalue.to_scalar()
                )
                total = total + comp.element
            assert total == pl.adopt(y)


def test_higher_components_confined(sl3):
    comps = eigen_decompose(sl3, 3, sl3.gen(1))
    gamma0 = sl3.q_unit(3, 1)
    for comp in comps:
        if comp.eigenvalue != gamma0:
            assert comp.element.min_support_index() > 1


def test_eigen_decompose_detects_weyl(aq1):
    classical = classical_weyl(aq1)
    with pytest.raises(WeylDetected) as info:
        eigen_decompose(classical, 2, classical.gen(1))
    cert = info.value.certificate
    # the certificate re-verifies independently
    weyl_certificate(classical, cert.pivot, cert.u, cert.v, cert.alpha)


def test_weyl_certificate_accepts_classical_pair(aq1):
    classical = classical_weyl(aq1)
    pl = classical.localize(2)
    u = pl.element({(0, -1): -1})
    v = pl.gen(1)
    cert = weyl_certificate(classical, 2, u, v, classical.params.gamma_one)
    assert cert.pivot == 2
    # scaling the pair by a unit keeps it valid
    weyl_certificate(classical, 2, u.scale(3), v.scale(3), classical.params.gamma_one)


def test_weyl_certificate_rejects_bad_pair(aq1):
    classical = classical_weyl(aq1)
    x = classical.gen(2)
    with pytest.raises(InvalidJordanPair):
        weyl_certificate(classical, 2, x, x, classical.params.gamma_one)


def test_weyl_criterion_forced_false(aq1):
    classical = classical_weyl(aq1)
    one = classical.one()
    assert check_weyl_criterion(classical, WeylCriterionWitness(*([one] * 12))) is False
    letters = [one] * 12
    letters[0] = one.scale(2)
    assert check_weyl_criterion(classical, WeylCriterionWitness(*letters)) is False


def test_weyl_criterion_zero_witness(aq1):
    classical = classical_weyl(aq1)
    letters = [classical.one()] * 11 + [classical.zero()]
    with pytest.raises(ZeroWitness):
        check_weyl_criterion(classical, WeylCriterionWitness(*letters))


def test_weyl_criterion_accepts_weyl_pair_witness(aq1):
    classical = classical_weyl(aq1)
    one, y, x = classical.one(), classical.gen(1), classical.gen(2)
    witness = WeylCriterionWitness(
        a=y, b=x, c=x, d=y, u=one, v=one, s=one, t=one, z=one, p=one, w=one, q=one
    )
    assert check_weyl_criterion(classical, witness) is True
