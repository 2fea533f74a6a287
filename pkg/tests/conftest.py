import random

import pytest

from qsolv import (
    MultiParamSpec,
    ParameterSpace,
    Presentation,
    quantum_matrices,
    quantum_weyl,
    uq_nplus_sl3,
)


def random_element(p: Presentation, rng: random.Random, max_window_total=3,
                   max_terms=3, inv_span=2):
    """A random nonzero element: nonnegative exponents at non-invertible
    generators with small total degree, small signed exponents elsewhere,
    and small nonzero integer coefficients."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            exps = [0] * p.n
            budget = rng.randint(0, max_window_total)
            free = [k for k in range(1, p.n + 1) if k not in p.invertible]
            rng.shuffle(free)
            for k in free:
                if budget == 0:
                    break
                take = rng.randint(0, budget)
                exps[k - 1] = take
                budget -= take
            for k in sorted(p.invertible):
                exps[k - 1] = rng.randint(-inv_span, inv_span)
            coeff = rng.choice([-3, -2, -1, 1, 2, 3])
            key = tuple(exps)
            terms[key] = terms.get(key, 0) + coeff
        element = p.element({m: c for m, c in terms.items() if c != 0})
        if not element.is_zero:
            return element


def random_word(p: Presentation, rng: random.Random, max_len=6):
    from qsolv import Word

    letters = []
    for _ in range(rng.randint(1, max_len)):
        i = rng.randint(1, p.n)
        if i in p.invertible and rng.random() < 0.3:
            letters.append((i, -1))
        else:
            letters.append((i, 1))
    return Word.of(letters, p.params.scalar(rng.choice([-2, -1, 1, 2, 3])))


@pytest.fixture(scope="session")
def aq1():
    """A_q(1): generators (y, x) with y*x - c^-1*x*y = 1."""
    return quantum_weyl(1)


@pytest.fixture(scope="session")
def sl3():
    return uq_nplus_sl3()


@pytest.fixture(scope="session")
def qm2():
    return quantum_matrices(MultiParamSpec.symbolic(2))


@pytest.fixture(scope="session")
def catalog_instances(aq1, qm2, sl3):
    return {"quantum_weyl": aq1, "quantum_matrices": qm2, "uq_sl3": sl3}
