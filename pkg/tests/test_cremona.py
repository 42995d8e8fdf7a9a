import itertools

import pytest

from quartic_cremona.certificates import PASS
from quartic_cremona.cremona import (
    DegenerateMapError,
    LITERATURE_INTERSECTION_VALUES,
    RatMap,
    chow_intersect,
    chow_nonlinearity_certificate,
    compose_common_factor,
    euler_char_check,
    kernel_map,
    map_degree,
    parse_chow_expr,
    projective_compose_check,
    pushforward_check,
    transformation_pair,
)
from quartic_cremona.determinantal import DeterminantalPair, Tensor4, random_tensor
from quartic_cremona.domains import CoefficientDomain
from quartic_cremona.mpoly import MPoly, X_BLOCK, variables
from quartic_cremona.polymatrix import PolyMatrix

Q = CoefficientDomain.rationals()
F101 = CoefficientDomain.prime_field(101)


def _pair(seed, domain=F101):
    return DeterminantalPair.from_tensor(random_tensor(seed, domain))


# --- kernel map ------------------------------------------------------------------


def test_kernel_map_delta_rows_is_constant_point():
    xs = variables(Q)
    zero = MPoly.zero(Q)
    rows = PolyMatrix(
        [
            [xs[0], zero, zero, zero],
            [zero, xs[1], zero, zero],
            [zero, zero, xs[2], zero],
        ]
    )
    rmap = kernel_map(rows)
    # kernel is [0:0:0:1] scaled by x1 x2 x3; after reduction it is constant
    assert rmap.components[0] == zero
    assert rmap.components[3].degree() == 0
    with pytest.raises(DegenerateMapError):
        rmap.require_nondegenerate()


def test_kernel_map_all_minors_zero_rejected():
    xs = variables(Q)
    zero = MPoly.zero(Q)
    rows = PolyMatrix([[xs[0], zero, zero, zero]] * 3)
    with pytest.raises(DegenerateMapError):
        kernel_map(rows)


def test_kernel_map_seeded_tensor_gives_coprime_cubics():
    pair = _pair(0)
    tau = kernel_map(pair.M.take_rows((0, 1, 2)))
    assert tau.degree == 3
    assert all(c.is_homogeneous() for c in tau.components if c.terms)
    from quartic_cremona.polygcd import gcd_list

    g = gcd_list([c for c in tau.components if c.terms])
    assert g.degree() == 0


def test_map_degree_linear_map():
    xs = variables(Q)
    rmap = RatMap((xs[1], xs[0], xs[2], xs[3]), X_BLOCK, reduced=True)
    assert map_degree(rmap) == 1
    assert rmap.is_linear


def test_map_degree_reduces_common_linear_factor():
    xs = variables(Q)
    L = xs[0] + xs[1]
    rmap = RatMap(tuple(x * L for x in xs[:4]), X_BLOCK, reduced=False)
    assert map_degree(rmap) == 1


# --- composition and pushforward ------------------------------------------------------


def test_compose_identity_maps():
    xs = variables(Q)
    ys = variables(Q)[4:]
    ident_x = RatMap(tuple(xs[:4]), X_BLOCK, reduced=True)
    from quartic_cremona.mpoly import Y_BLOCK

    ident_y = RatMap(tuple(ys), Y_BLOCK, reduced=True)
    assert projective_compose_check(ident_x, ident_y)


@pytest.mark.parametrize("seed", (0, 1, 2))
def test_compose_roundtrip_seeded(seed):
    pair = _pair(seed)
    tau, sigma = transformation_pair(pair)
    assert projective_compose_check(sigma, tau)
    assert projective_compose_check(tau, sigma)
    g = compose_common_factor(sigma, tau)
    assert g.degree() == 8
    assert g.is_homogeneous()


def test_compose_degenerate_rejected():
    delta = Tensor4.from_entries(
        Q,
        [
            [[1 if (i == j and k == i) else 0 for k in range(4)] for j in range(4)]
            for i in range(4)
        ],
    )
    pair = DeterminantalPair.from_tensor(delta)
    with pytest.raises(DegenerateMapError):
        transformation_pair(pair)


@pytest.mark.parametrize("seed", (0, 1))
def test_pushforward_both_directions(seed):
    pair = _pair(seed)
    tau, sigma = transformation_pair(pair)
    ok_fwd, quot_fwd = pushforward_check(pair.F1, pair.F2, tau)
    ok_bwd, quot_bwd = pushforward_check(pair.F2, pair.F1, sigma)
    assert ok_fwd and ok_bwd
    assert quot_fwd.degree() == 8 and quot_fwd.is_homogeneous()
    assert quot_bwd.degree() == 8 and quot_bwd.is_homogeneous()
    # the division really reconstructs the composition
    from quartic_cremona.mpoly import poly_compose

    assert pair.F1 * quot_fwd == poly_compose(pair.F2, tau.components)


def test_pushforward_fails_for_random_quartic():
    pair = _pair(0)
    tau, _ = transformation_pair(pair)
    other = DeterminantalPair.from_tensor(random_tensor(555, F101))
    ok, quotient = pushforward_check(pair.F1, other.F2, tau)
    assert not ok and quotient is None
    # cross-check by one evaluation: some surface point of F1 where the
    # composed polynomial does not vanish
    from quartic_cremona.mpoly import poly_compose
    from quartic_cremona.verify_fp import surface_points

    composed = poly_compose(other.F2, tau.components)
    witness_found = False
    for a in surface_points(pair.F1, 101)[:500]:
        if composed.evaluate([*a, 0, 0, 0, 0]) != 0:
            witness_found = True
            break
    assert witness_found


def test_pushforward_rational_tensor():
    # one full exact-rational round trip (small entries keep Fractions tame)
    pair = DeterminantalPair.from_tensor(random_tensor(6, Q))
    assert not pair.degenerate
    tau, sigma = transformation_pair(pair)
    assert map_degree(tau) == 3
    ok, quotient = pushforward_check(pair.F1, pair.F2, tau)
    assert ok and quotient.degree() == 8


# --- truncated-ring intersection numbers ------------------------------------------------


def _chow_oracle(factors):
    """Independent brute force: pick H1 or H2 from every linear factor."""
    flat = []
    for base, power in factors:
        flat.extend([base] * power)
    count = 0
    for choice in itertools.product(*[
        (("H1",), ("H2",), ("H1", "H2"))[("H1", "H2", "H1+H2").index(b)] for b in flat
    ]):
        e1 = sum(1 for c in choice if c == "H1")
        e2 = sum(1 for c in choice if c == "H2")
        if e1 == 3 and e2 == 3:
            count += 1
    return count


def test_chow_point_class():
    assert chow_intersect("H1^3*H2^3") == 1


def test_chow_binomial():
    assert chow_intersect("(H1+H2)^6") == 20


def test_chow_key_values_and_inequality():
    first = chow_intersect("H1^3*(H1+H2)^3")
    second = chow_intersect("H1^2*H2*(H1+H2)^3")
    assert (first, second) == (1, 3)
    assert first != second


def test_chow_agrees_with_oracle_on_all_degree6_monomials():
    count = 0
    for i in range(7):
        for j in range(7 - i):
            k = 6 - i - j
            factors = tuple(
                (base, power)
                for base, power in (("H1", i), ("H2", j), ("H1+H2", k))
                if power
            )
            assert chow_intersect(factors) == _chow_oracle(factors)
            count += 1
    assert count == 28


def test_chow_linear_in_each_factor():
    # multiplying out (H1+H2) distributes: I(H1^a H2^b (H1+H2)^{k}) =
    # I(H1^{a+1} H2^b (H1+H2)^{k-1}) + I(H1^a H2^{b+1} (H1+H2)^{k-1})
    for a in range(4):
        for b in range(4):
            k = 6 - a - b - 1
            if k < 0:
                continue
            lhs = chow_intersect((("H1", a), ("H2", b), ("H1+H2", k + 1)))
            rhs = chow_intersect((("H1", a + 1), ("H2", b), ("H1+H2", k))) + chow_intersect(
                (("H1", a), ("H2", b + 1), ("H1+H2", k))
            )
            assert lhs == rhs


def test_chow_symmetric_under_swap():
    for i in range(7):
        for j in range(7 - i):
            k = 6 - i - j
            a = chow_intersect((("H1", i), ("H2", j), ("H1+H2", k)))
            b = chow_intersect((("H1", j), ("H2", i), ("H1+H2", k)))
            assert a == b


def test_chow_wrong_degree_rejected():
    with pytest.raises(ValueError):
        chow_intersect("H1^2*H2^2")


def test_chow_parse():
    assert parse_chow_expr("H1^3*(H1+H2)^3") == (("H1", 3), ("H1+H2", 3))


def test_nonlinearity_certificate_flags_discrepancy():
    cert = chow_nonlinearity_certificate()
    assert cert.verdict == PASS
    assert LITERATURE_INTERSECTION_VALUES == (3, 6)
    note = [s for s in cert.steps if "discrepancy" in s.claim]
    assert note and "(1, 3)" in note[0].evidence and "(3, 6)" in note[0].evidence


# --- section counts ---------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(0, 2), (1, 12), (2, 42), (3, 92), (4, 162), (5, 252)])
def test_euler_char_check(n, expected):
    assert euler_char_check(n) == expected


def test_euler_char_negative_rejected():
    with pytest.raises(ValueError):
        euler_char_check(-1)
