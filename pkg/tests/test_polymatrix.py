from itertools import permutations

import pytest

from quartic_cremona.domains import CoefficientDomain
from quartic_cremona.mpoly import MPoly, variables
from quartic_cremona.polymatrix import (
    PolyMatrix,
    det_bareiss,
    det_cofactor,
    det_leibniz,
    laplace_residuals,
    poly_det,
    signed_maximal_minors,
)

Q = CoefficientDomain.rationals()
F101 = CoefficientDomain.prime_field(101)


def _diag(domain):
    xs = variables(domain)[:4]
    zero = MPoly.zero(domain)
    return PolyMatrix([[xs[i] if i == j else zero for j in range(4)] for i in range(4)])


def _random_linear_matrix(domain, rng, rows=4, cols=4):
    def lin():
        return MPoly(
            domain,
            {
                tuple(1 if i == v else 0 for i in range(8)): (
                    rng.randint(0, 100) if domain.p else rng.randint(-5, 5)
                )
                for v in range(4)
            },
        )

    return PolyMatrix([[lin() for _ in range(cols)] for _ in range(rows)])


def _leibniz_oracle(m):
    """Independent 24-term expansion with parity computed by transposition count."""
    n = m.rows
    total = MPoly.zero(m.domain)
    for perm in permutations(range(n)):
        # parity by explicit cycle decomposition
        seen = [False] * n
        sign = 1
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
        term = MPoly.constant(m.domain, sign)
        for i in range(n):
            term = term * m.entry(i, perm[i])
        total = total + term
    return total


def test_det_diag_is_coordinate_product():
    m = _diag(Q)
    xs = variables(Q)
    assert poly_det(m) == xs[0] * xs[1] * xs[2] * xs[3]


def test_det_2x2():
    x1, x2, x3, x4, *_ = variables(Q)
    m = PolyMatrix([[x1, x2], [x3, x4]])
    expected = x1 * x4 - x2 * x3
    assert det_bareiss(m) == expected
    assert det_leibniz(m) == expected
    assert det_cofactor(m) == expected


def test_det_nonsquare_rejected():
    x1, x2, x3, x4, *_ = variables(Q)
    m = PolyMatrix([[x1, x2], [x3, x4]]).submatrix(range(2), range(1))
    with pytest.raises(ValueError):
        poly_det(m)


def test_det_methods_agree_on_random_linear_matrices(rng):
    # the acceptance-level oracle: 100 random 4x4 linear-form matrices over F101
    for _ in range(100):
        m = _random_linear_matrix(F101, rng)
        d_main = poly_det(m)
        assert d_main == _leibniz_oracle(m)
        assert d_main == det_bareiss(m)
        assert d_main == det_cofactor(m)


def test_det_bareiss_rational_matches_cofactor(rng):
    for _ in range(10):
        m = _random_linear_matrix(Q, rng)
        assert det_bareiss(m) == det_cofactor(m)


def test_det_singular_matrix():
    x1, x2, *_ = variables(Q)
    zero = MPoly.zero(Q)
    m = PolyMatrix([[x1, x2, zero, zero],
                    [x1, x2, zero, zero],
                    [zero, zero, x1, zero],
                    [zero, zero, zero, x1]])
    assert not poly_det(m).terms


def test_signed_minors_laplace_identity(rng):
    for _ in range(20):
        m = _random_linear_matrix(F101, rng, rows=3, cols=4)
        comps = signed_maximal_minors(m)
        for residual in laplace_residuals(m, comps):
            assert not residual.terms


def test_signed_minors_signs():
    # rows = first three rows of the coordinate diagonal: minors are
    # x2*x3*x4-like products with alternating signs
    xs = variables(Q)
    zero = MPoly.zero(Q)
    rows = PolyMatrix(
        [
            [xs[0], zero, zero, zero],
            [zero, xs[1], zero, zero],
            [zero, zero, xs[2], zero],
        ]
    )
    comps = signed_maximal_minors(rows)
    assert comps[3] == -(xs[0] * xs[1] * xs[2])
    assert not comps[0].terms and not comps[1].terms and not comps[2].terms
