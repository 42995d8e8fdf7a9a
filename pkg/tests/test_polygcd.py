import pytest

from quartic_cremona.domains import CoefficientDomain
from quartic_cremona.mpoly import MPoly, poly_divides, variables
from quartic_cremona.polygcd import gcd_list, multivariate_gcd

from conftest import random_poly

Q = CoefficientDomain.rationals()
F101 = CoefficientDomain.prime_field(101)


def test_gcd_monomials():
    x1, x2, x3, *_ = variables(Q)
    assert multivariate_gcd(x1 * x2, x1 * x3) == x1


def test_gcd_zero_rejected():
    x1 = variables(Q)[0]
    with pytest.raises(ZeroDivisionError):
        multivariate_gcd(MPoly.zero(Q), x1)


def test_gcd_of_coprime_is_one():
    x1, _, _, _, y1, *_ = variables(Q)
    one = MPoly.constant(Q, 1)
    assert multivariate_gcd(x1 + y1, x1 - y1) == one
    assert multivariate_gcd(x1, y1) == one


def test_gcd_common_factor_property(rng):
    # gcd(f*h, g*h) / gcd(f, g) = h up to scalar; with monic normalization
    # both sides are literally equal after normalizing h
    checked = 0
    for _ in range(40):
        f = random_poly(F101, rng, nterms=3, max_exp=2)
        g = random_poly(F101, rng, nterms=3, max_exp=2)
        h = random_poly(F101, rng, nterms=3, max_exp=2)
        if not (f.terms and g.terms and h.terms):
            continue
        base = multivariate_gcd(f, g)
        lifted = multivariate_gcd(f * h, g * h)
        quotient = poly_divides(base, lifted)
        assert quotient is not None
        h_monic = multivariate_gcd(h, h)  # h normalized monic
        assert quotient == h_monic
        checked += 1
    assert checked >= 20


def test_gcd_rationals(rng):
    x1, x2, _, _, y1, *_ = variables(Q)
    h = x1 * x1 + y1
    f = (x2 + 1) * h
    g = (x1 * y1 - 2) * h
    assert multivariate_gcd(f, g) == h


def test_gcd_univariate_contents():
    x1, x2, *_ = variables(Q)
    f = x1 * x2 * x2
    g = x2 * x2
    assert multivariate_gcd(f, g) == x2 * x2


def test_gcd_list_folds():
    x1, x2, x3, x4, *_ = variables(Q)
    polys = [x1 * x2, x1 * x3, x1 * x4]
    assert gcd_list(polys) == x1


def test_gcd_symmetric(rng):
    for _ in range(20):
        f = random_poly(F101, rng, nterms=4, max_exp=2)
        g = random_poly(F101, rng, nterms=4, max_exp=2)
        if not (f.terms and g.terms):
            continue
        assert multivariate_gcd(f, g) == multivariate_gcd(g, f)


def test_gcd_divides_both(rng):
    for _ in range(20):
        f = random_poly(F101, rng, nterms=4, max_exp=2)
        g = random_poly(F101, rng, nterms=4, max_exp=2)
        if not (f.terms and g.terms):
            continue
        d = multivariate_gcd(f, g)
        assert poly_divides(d, f) is not None
        assert poly_divides(d, g) is not None
