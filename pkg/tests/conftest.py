import random

import pytest

from quartic_cremona.domains import CoefficientDomain
from quartic_cremona.mpoly import MPoly, pack_exponents


@pytest.fixture(scope="session")
def Q():
    return CoefficientDomain.rationals()


@pytest.fixture(scope="session")
def F101():
    return CoefficientDomain.prime_field(101)


def random_poly(domain, rng, nterms=5, max_exp=3, vars_allowed=range(8)):
    """Small random polynomial for sampled checks (not hypothesis-driven)."""
    terms = {}
    for _ in range(nterms):
        exps = [0] * 8
        for _ in range(rng.randint(1, 3)):
            exps[rng.choice(list(vars_allowed))] += rng.randint(0, max_exp)
        if domain.is_rational:
            c = rng.randint(-9, 9)
        else:
            c = rng.randint(0, domain.p - 1)
        if c:
            terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    return MPoly(domain, terms)


@pytest.fixture
def rng():
    return random.Random(20260810)
