import itertools

import pytest

from quartic_cremona.domains import CoefficientDomain
from quartic_cremona.determinantal import (
    DeterminantalPair,
    Tensor4,
    bilinear_identity_check,
    bilinear_residual,
    build_M,
    build_N,
    quadric_forms,
    quartic_surfaces,
    random_tensor,
    splitmix64_stream,
)
from quartic_cremona.mpoly import MPoly, variables
from quartic_cremona.polymatrix import det_cofactor

Q = CoefficientDomain.rationals()
F101 = CoefficientDomain.prime_field(101)
F2 = CoefficientDomain.prime_field(2)


def delta_tensor(domain):
    return Tensor4.from_entries(
        domain,
        [
            [[1 if (i == j and k == i) else 0 for k in range(4)] for j in range(4)]
            for i in range(4)
        ],
    )


def ones_tensor(domain):
    return Tensor4.from_entries(
        domain, [[[1 for _ in range(4)] for _ in range(4)] for _ in range(4)]
    )


# --- splitmix64 ------------------------------------------------------------------


def test_splitmix64_reference_vectors():
    stream = splitmix64_stream(0)
    assert [next(stream) for _ in range(4)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
        0xF88BB8A8724C81EC,
    ]


def test_random_tensor_deterministic():
    a = random_tensor(12345, F101)
    b = random_tensor(12345, F101)
    assert a == b


def test_random_tensor_prime_field_range():
    t = random_tensor(7, F101)
    for i, j, k in itertools.product(range(4), repeat=3):
        assert 0 <= t.entry(i, j, k) < 101


def test_random_tensor_rational_range():
    t = random_tensor(7, Q)
    for i, j, k in itertools.product(range(4), repeat=3):
        assert -10 <= t.entry(i, j, k) <= 10


def test_random_tensor_corpus_distinct():
    seen = set()
    for seed in range(1000):
        t = random_tensor(seed, F101)
        seen.add(t.a)
    assert len(seen) == 1000


# --- matrices ----------------------------------------------------------------------


def test_build_M_delta_is_diagonal():
    t = delta_tensor(Q)
    M = build_M(t)
    xs = variables(Q)
    for i in range(4):
        for j in range(4):
            expected = xs[i] if i == j else MPoly.zero(Q)
            assert M.entry(i, j) == expected


def test_build_N_delta_is_diagonal():
    t = delta_tensor(Q)
    N = build_N(t)
    ys = variables(Q)[4:]
    for i in range(4):
        for k in range(4):
            expected = ys[i] if i == k else MPoly.zero(Q)
            assert N.entry(i, k) == expected


def test_build_M_all_ones():
    t = ones_tensor(Q)
    M = build_M(t)
    xs = variables(Q)
    s = xs[0] + xs[1] + xs[2] + xs[3]
    assert all(M.entry(i, j) == s for i in range(4) for j in range(4))


def test_build_M_linear_in_x(rng):
    t = random_tensor(rng.randint(0, 2**32), F101)
    M = build_M(t)
    from quartic_cremona.mpoly import X_BLOCK

    assert M.is_linear_in(X_BLOCK)


def test_jk_exchange_swaps_roles():
    # transposing the (j, k) indices turns M into N with renamed variables
    t = random_tensor(99, F101)
    swapped = Tensor4.from_entries(
        F101,
        [[[t.entry(i, k, j) for k in range(4)] for j in range(4)] for i in range(4)],
    )
    M_sw = build_M(swapped)
    N = build_N(t)
    # M(swapped) should equal N(t) with y_j renamed to x_j
    for i in range(4):
        for j in range(4):
            m_terms = {exps[:4]: c for exps, c in M_sw.entry(i, j).sorted_terms()}
            n_terms = {exps[4:]: c for exps, c in N.entry(i, j).sorted_terms()}
            assert m_terms == n_terms


# --- the bilinear identity -----------------------------------------------------------


def test_identity_delta():
    assert bilinear_identity_check(delta_tensor(Q))


def test_identity_hundred_seeded_tensors():
    for seed in range(100):
        assert bilinear_identity_check(random_tensor(seed, F101))


def test_identity_ten_rational_tensors():
    for seed in range(10):
        assert bilinear_identity_check(random_tensor(seed, Q))


def test_identity_mutation_always_detected(rng):
    # perturb a single entry in only one side's matrix: the residual must
    # pick it up (coefficient of x_k y_j in row i changes on one side only)
    t = random_tensor(4242, F101)
    M = build_M(t)
    for _ in range(20):
        i, j, k = (rng.randrange(4) for _ in range(3))
        bumped = t.with_entry(i, j, k, (t.entry(i, j, k) + 1) % 101)
        N_mut = build_N(bumped)
        residual = bilinear_residual(M, N_mut)
        assert any(r.terms for r in residual)
        # and the clean pair stays clean
        assert all(not r.terms for r in bilinear_residual(M, build_N(t)))


# --- quartics and (1,1)-forms ----------------------------------------------------------


def test_quartics_delta():
    F1, F2_ = quartic_surfaces(delta_tensor(Q))
    xs = variables(Q)
    assert F1 == xs[0] * xs[1] * xs[2] * xs[3]
    assert F2_ == xs[4] * xs[5] * xs[6] * xs[7]


def test_quartics_homogeneous_of_degree_4():
    t = random_tensor(5, F101)
    F1, F2_ = quartic_surfaces(t)
    assert F1.is_homogeneous() and F1.degree() == 4
    assert F2_.is_homogeneous() and F2_.degree() == 4


def test_quartics_match_cofactor_oracle():
    t = random_tensor(3, Q)
    pair = DeterminantalPair.from_tensor(t)
    assert pair.F1 == det_cofactor(pair.M)
    assert pair.F2 == det_cofactor(pair.N)


def test_quadrics_delta():
    qf = quadric_forms(delta_tensor(Q))
    v = variables(Q)
    assert qf == (v[0] * v[4], v[1] * v[5], v[2] * v[6], v[3] * v[7])


def test_quadrics_bidegree():
    t = random_tensor(11, F101)
    for q in quadric_forms(t):
        assert q.bidegree() == (1, 1)


def test_quadrics_equal_row_sums_of_N():
    # each Q_i also equals sum_k N[i][k] * x_k (the identity, row-wise)
    t = random_tensor(17, F101)
    N = build_N(t)
    xs = variables(F101)[:4]
    qf = quadric_forms(t)
    for i in range(4):
        acc = MPoly.zero(F101)
        for k in range(4):
            acc = acc + N.entry(i, k) * xs[k]
        assert acc == qf[i]


def test_quadrics_common_zeros_match_matrix_kernel_p2():
    # enumerate P^3 x P^3 over F_2: Q_i all vanish at (a, b) iff M(a) b^t = 0
    t = random_tensor(23, F2)
    pair = DeterminantalPair.from_tensor(t)
    qf = pair.Q
    from quartic_cremona.verify_fp import proj_points

    pts = [q.coords for q in proj_points(2)]
    for a in pts:
        m_at = [
            [int(pair.M.entry(i, j).evaluate([*a, 0, 0, 0, 0])) % 2 for j in range(4)]
            for i in range(4)
        ]
        for b in pts:
            vanishes = all(
                q.evaluate([*a, *b]) == 0 for q in qf
            )
            matrix_kills = all(
                sum(m_at[i][j] * b[j] for j in range(4)) % 2 == 0 for i in range(4)
            )
            assert vanishes == matrix_kills


def test_det_invariance_under_even_column_reindexing():
    # even permutations of the j-index leave det M unchanged; odd ones flip sign
    t = random_tensor(31, F101)
    F1, _ = quartic_surfaces(t)
    even_perm = (1, 2, 0, 3)
    odd_perm = (1, 0, 2, 3)
    for perm, sign in ((even_perm, 1), (odd_perm, -1)):
        permuted = Tensor4.from_entries(
            F101,
            [
                [[t.entry(i, perm[j], k) for k in range(4)] for j in range(4)]
                for i in range(4)
            ],
        )
        F1p, _ = quartic_surfaces(permuted)
        assert F1p == (F1 if sign == 1 else -F1)


def test_degenerate_flag_and_refusal():
    zero = Tensor4.from_entries(Q, [[[0] * 4] * 4] * 4)
    pair = DeterminantalPair.from_tensor(zero)
    assert pair.degenerate
    with pytest.raises(ValueError):
        pair.require_nondegenerate()


# --- JSON round trip ----------------------------------------------------------------------


def test_tensor_json_roundtrip(tmp_path):
    for domain in (Q, F101):
        t = random_tensor(77, domain)
        path = tmp_path / "tensor.json"
        t.dump(path)
        back = Tensor4.load(path)
        assert back == t


def test_tensor_json_rational_fractions(tmp_path):
    t = random_tensor(1, Q)
    doc = t.to_json()
    assert doc["domain"] == "Q"
    assert isinstance(doc["a"][0][0][0], str)
    t2 = Tensor4.from_json(doc)
    assert t2 == t
