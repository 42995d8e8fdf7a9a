"""Finite-field verification by full projective point enumeration.

For a prime p the canonical points of P^3(F_p) are the tuples whose first
nonzero coordinate is 1; there are p^3 + p^2 + p + 1 of them.  Surfaces are
enumerated chart by chart with integer numpy grids (exact arithmetic mod p,
no floats), then the pointwise checks (matrix ranks, kernels, the bijection
induced by the correspondence) run over the surface points only.

Smoothness of a reduction mod p is reported as evidence about the original
characteristic-zero surface, never as a proof.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .certificates import Step, conclude
from .determinantal import DegenerateTensorError, DeterminantalPair, Tensor4
from .domains import is_prime
from .mpoly import MPoly, X_BLOCK, Y_BLOCK, gradient, unpack_key
from .polymatrix import PolyMatrix, poly_det, signed_maximal_minors


class ProjPoint(NamedTuple):
    p: int
    coords: tuple


def proj_point_count(p: int) -> int:
    return p ** 3 + p ** 2 + p + 1


def iter_proj_points(p: int):
    """Canonical representatives in ascending lexicographic order."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    yield ProjPoint(p, (0, 0, 0, 1))
    for c in range(p):
        yield ProjPoint(p, (0, 0, 1, c))
    for b in range(p):
        for c in range(p):
            yield ProjPoint(p, (0, 1, b, c))
    for a in range(p):
        for b in range(p):
            for c in range(p):
                yield ProjPoint(p, (1, a, b, c))


def proj_points(p: int):
    return list(iter_proj_points(p))


def thread_count() -> int:
    """Worker count from QC_THREADS (>= 1, capped); results never depend on it."""
    raw = os.environ.get("QC_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, min(n, 64))


# --- vectorized evaluation ---------------------------------------------------

def _block_exponents(poly: MPoly, block):
    """[(4-exponent tuple, coeff)] for a polynomial supported on one block."""
    if not poly.uses_only(block):
        raise ValueError("polynomial must live in a single coordinate block")
    out = []
    for key, c in poly.terms.items():
        exps = unpack_key(key)
        out.append((tuple(exps[i] for i in block), int(c)))
    return out


def _eval_terms_on_grid(terms, grids, p):
    """Evaluate sum c * prod(v_i^e_i) on broadcast numpy grids, mod p."""
    acc = None
    for exps, coeff in terms:
        term = None
        for v, e in enumerate(exps):
            if e:
                fac = grids[v] ** e % p
                term = fac if term is None else term * fac % p
        term = coeff % p if term is None else term * (coeff % p) % p
        if np.isscalar(term):
            term = np.broadcast_to(np.int64(term), np.broadcast_shapes(*[g.shape for g in grids]))
        acc = term.copy() if acc is None else (acc + term) % p
    return acc


def surface_points(F: MPoly, p: int, threads=None):
    """All canonical points of P^3(F_p) with F = 0, ascending lex order.

    F must be supported on a single block; enumeration is chart by chart,
    with the big affine chart split into slabs (one per worker) and merged
    in slab order so the result is independent of the thread count.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if F.domain.p != p:
        raise ValueError("polynomial must be defined over GF(p)")
    if not F.terms:
        raise ValueError("zero polynomial has the whole space as zero set")
    block = X_BLOCK if F.uses_only(X_BLOCK) else Y_BLOCK
    terms = _block_exponents(F, block)
    n_threads = thread_count() if threads is None else max(1, int(threads))
    points = []

    # chart (0,0,0,1)
    val = 0
    for exps, coeff in terms:
        if exps[0] == 0 and exps[1] == 0 and exps[2] == 0:
            val = (val + coeff) % p
    if val == 0:
        points.append((0, 0, 0, 1))

    rng = np.arange(p, dtype=np.int64)

    # chart (0,0,1,c)
    sub = [(e, c) for e, c in terms if e[0] == 0 and e[1] == 0]
    if sub:
        grids = (np.int64(0), np.int64(0), np.int64(1), rng)
        acc = _eval_terms_on_grid(sub, grids, p)
        points.extend((0, 0, 1, int(c)) for c in np.flatnonzero(acc == 0))
    else:
        points.extend((0, 0, 1, c) for c in range(p))

    # chart (0,1,b,c)
    sub = [(e, c) for e, c in terms if e[0] == 0]
    if sub:
        grids = (np.int64(0), np.int64(1), rng[:, None], rng[None, :])
        acc = _eval_terms_on_grid(sub, grids, p)
        for b, c in np.argwhere(acc == 0):
            points.append((0, 1, int(b), int(c)))
    else:
        points.extend((0, 1, b, c) for b in range(p) for c in range(p))

    # chart (1,a,b,c): slabbed along a
    slabs = np.array_split(rng, min(n_threads, p))

    def work(slab):
        grids = (np.int64(1), slab[:, None, None], rng[None, :, None], rng[None, None, :])
        acc = _eval_terms_on_grid(terms, grids, p)
        base = int(slab[0])
        return [(1, base + int(a), int(b), int(c)) for a, b, c in np.argwhere(acc == 0)]

    if n_threads > 1 and len(slabs) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            for chunk in pool.map(work, slabs):
                points.extend(chunk)
    else:
        for slab in slabs:
            points.extend(work(slab))
    points.sort()
    return points


def _eval_on_points(poly_terms, coords_arrays, p):
    """Evaluate on explicit point arrays (four 1-d arrays), mod p."""
    acc = np.zeros(coords_arrays[0].shape, dtype=np.int64)
    for exps, coeff in poly_terms:
        term = np.full(coords_arrays[0].shape, coeff % p, dtype=np.int64)
        for v, e in enumerate(exps):
            if e:
                term = term * pow_mod_array(coords_arrays[v], e, p) % p
        acc = (acc + term) % p
    return acc


def pow_mod_array(arr, e, p):
    out = np.ones_like(arr)
    base = arr % p
    while e:
        if e & 1:
            out = out * base % p
        e >>= 1
        base = base * base % p
    return out


# --- pointwise linear algebra mod p ------------------------------------------

def _rank_kernel_mod_p(mat, p):
    """(rank, kernel basis) of a 4x4 integer matrix mod p.

    Gaussian elimination with pivots chosen in fixed index order, so the
    output is deterministic.
    """
    a = [[mat[i][j] % p for j in range(4)] for i in range(4)]
    pivots = []
    row = 0
    for col in range(4):
        sel = next((r for r in range(row, 4) if a[r][col]), None)
        if sel is None:
            continue
        a[row], a[sel] = a[sel], a[row]
        inv = pow(a[row][col], p - 2, p)
        a[row] = [v * inv % p for v in a[row]]
        for r in range(4):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [(a[r][j] - f * a[row][j]) % p for j in range(4)]
        pivots.append(col)
        row += 1
        if row == 4:
            break
    free = [c for c in range(4) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * 4
        vec[fc] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-a[r][fc]) % p
        basis.append(tuple(vec))
    return len(pivots), basis


def _canonical_proj(vec, p):
    lead = next((v for v in vec if v % p), None)
    if lead is None:
        raise ValueError("zero vector has no projective class")
    inv = pow(lead, p - 2, p)
    return tuple(v * inv % p for v in vec)


def _matrix_at_point(matrix: PolyMatrix, point, block, p):
    vals = [0] * 8
    for idx, c in zip(block, point):
        vals[idx] = c
    out = []
    for i in range(matrix.rows):
        row = []
        for j in range(matrix.cols):
            row.append(int(matrix.entry(i, j).evaluate(vals)))
        out.append(row)
    return out


# --- certificates -------------------------------------------------------------

@dataclass
class FpCertificate:
    """Verdict of the finite-field verification for one tensor and prime.

    base_points are the surface points where all four maximal minors of the
    three chosen rows vanish (the indeterminacy curve of the cubic formula
    meets the surface there; it always does, since rank <= 2 of those rows
    forces the full determinant to vanish).  At such points the induced map
    is still evaluated through the kernel of the full matrix, so they are
    reported but are not failures.
    """

    prime: int
    count_s1: int = 0
    count_s2: int = 0
    singular_s1: list = field(default_factory=list)
    singular_s2: list = field(default_factory=list)
    rank_violations: list = field(default_factory=list)
    fiber_violations: list = field(default_factory=list)
    roundtrip_violations: list = field(default_factory=list)
    base_points: list = field(default_factory=list)
    bijection_ok: bool = False
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.singular_s1
            and not self.singular_s2
            and not self.rank_violations
            and not self.fiber_violations
            and not self.roundtrip_violations
            and self.count_s1 == self.count_s2
            and self.bijection_ok
        )

    def to_dict(self):
        return {
            "prime": self.prime,
            "counts": {"S1": self.count_s1, "S2": self.count_s2},
            "singular_points": {"S1": [list(q) for q in self.singular_s1],
                                "S2": [list(q) for q in self.singular_s2]},
            "rank_violations": [list(q) for q in self.rank_violations],
            "fiber_violations": [list(q) for q in self.fiber_violations],
            "roundtrip_violations": [list(q) for q in self.roundtrip_violations],
            "base_points": [list(q) for q in self.base_points],
            "bijection": self.bijection_ok,
            "verdict": "PASS" if self.passed else "FAIL",
            "notes": list(self.notes),
        }


def smooth_check(F: MPoly, p: int, threads=None, pts=None):
    """Points where F and all four partials vanish (none = smooth evidence).

    Returns (singular point list, surface point list).  The singular points
    are re-checked independently, value and gradient, before being reported.
    A precomputed zero set may be passed to avoid re-enumeration.
    """
    if not F.terms:
        raise ValueError("zero polynomial rejected")
    block = X_BLOCK if F.uses_only(X_BLOCK) else Y_BLOCK
    if pts is None:
        pts = surface_points(F, p, threads=threads)
    if not pts:
        return [], pts
    coords = [np.array([q[i] for q in pts], dtype=np.int64) for i in range(4)]
    singular_mask = np.ones(len(pts), dtype=bool)
    for partial in gradient(F, block):
        terms = _block_exponents(partial, block) if partial.terms else []
        if not terms:
            continue
        vals = _eval_on_points(terms, coords, p)
        singular_mask &= vals == 0
    singular = [pts[i] for i in np.flatnonzero(singular_mask)]
    # independent pointwise re-check of everything reported
    vals8 = lambda q: [q[0], q[1], q[2], q[3], 0, 0, 0, 0] if block == X_BLOCK else [0, 0, 0, 0, q[0], q[1], q[2], q[3]]
    for q in singular:
        assert F.evaluate(vals8(q)) == 0
        assert all(g.evaluate(vals8(q)) == 0 for g in gradient(F, block))
    return singular, pts


def rank_profile(tensor_pair: DeterminantalPair, p: int, threads=None):
    """Check rank M(a) = 3 on the surface and 4 off it.

    On-surface: all 16 cofactor cubics are evaluated at every surface point;
    a point where they all vanish has rank <= 2 and is recorded.  Off the
    surface det M != 0 forces rank 4; a deterministic sample of off-surface
    points is re-checked by elimination.
    """
    pair = tensor_pair.require_nondegenerate()
    F1 = pair.F1
    if F1.domain.p != p:
        raise ValueError("tensor must be defined over GF(p)")
    pts = surface_points(F1, p, threads=threads)
    violations = []
    if pts:
        coords = [np.array([q[i] for q in pts], dtype=np.int64) for i in range(4)]
        low_rank = np.ones(len(pts), dtype=bool)
        for i in range(4):
            rows = [r for r in range(4) if r != i]
            for j in range(4):
                cols = [c for c in range(4) if c != j]
                minor = pair.M.submatrix(rows, cols)
                cofactor = poly_det(minor)
                if not cofactor.terms:
                    continue
                vals = _eval_on_points(_block_exponents(cofactor, X_BLOCK), coords, p)
                low_rank &= vals == 0
                if not low_rank.any():
                    break
            if not low_rank.any():
                break
        violations = [pts[i] for i in np.flatnonzero(low_rank)]
    # deterministic off-surface sample, re-checked by elimination
    sample_checked = 0
    for q in iter_proj_points(p):
        if sample_checked >= 64:
            break
        vals8 = [q.coords[0], q.coords[1], q.coords[2], q.coords[3], 0, 0, 0, 0]
        if F1.evaluate(vals8) == 0:
            continue
        mat = _matrix_at_point(pair.M, q.coords, X_BLOCK, p)
        rank, _ = _rank_kernel_mod_p(mat, p)
        if rank != 4:
            violations.append(q.coords)
        sample_checked += 1
    # double-check every reported on-surface violation by elimination
    confirmed = []
    for q in violations:
        mat = _matrix_at_point(pair.M, q, X_BLOCK, p)
        rank, _ = _rank_kernel_mod_p(mat, p)
        if rank != (3 if F1.evaluate([q[0], q[1], q[2], q[3], 0, 0, 0, 0]) == 0 else 4):
            confirmed.append(q)
    return confirmed, pts


def correspondence_check(tensor, p: int, threads=None) -> FpCertificate:
    """Full pointwise verification of the correspondence over F_p.

    Preconditions (nondegeneracy, clean rank profile) are checked first and
    reported, never silently ignored.  For every point a of the first
    surface the kernel of M(a) must be a line, the cubic map must be defined
    (not all four minors zero) and agree with the kernel point b, b must lie
    on the second surface, the reverse kernel must return to a, and the
    induced map must be a bijection.
    """
    if isinstance(tensor, Tensor4):
        pair = DeterminantalPair.from_tensor(tensor)
    else:
        pair = tensor
    pair.require_nondegenerate()
    cert = FpCertificate(prime=p)

    rank_viols, s1_pts = rank_profile(pair, p, threads=threads)
    cert.rank_violations = [tuple(q) for q in rank_viols]

    sing1, _ = smooth_check(pair.F1, p, threads=threads, pts=s1_pts)
    sing2, s2_pts = smooth_check(pair.F2, p, threads=threads)
    cert.singular_s1 = sing1
    cert.singular_s2 = sing2
    cert.count_s1 = len(s1_pts)
    cert.count_s2 = len(s2_pts)
    cert.notes.append(
        f"smoothness over GF({p}) is evidence for the characteristic-0 "
        "surface, not a proof"
    )
    if cert.rank_violations:
        cert.notes.append("rank profile failed; downstream checks still reported")

    tau_minors = signed_maximal_minors(pair.M.take_rows((0, 1, 2)))
    s2_set = set(map(tuple, s2_pts))
    images = {}

    # vectorized per-point data: M(a) for all surface points at once, and the
    # four minor cubics of the chosen rows
    coeff = np.array(
        [[[int(pair.tensor.a[i][j][k]) % p for k in range(4)] for j in range(4)]
         for i in range(4)],
        dtype=np.int64,
    )
    a_arr = np.array(s1_pts, dtype=np.int64)
    m_all = np.einsum("ijk,nk->nij", coeff, a_arr) % p
    coords = [a_arr[:, i] for i in range(4)]
    minor_vals = np.stack(
        [
            _eval_on_points(_block_exponents(c, X_BLOCK), coords, p)
            if c.terms
            else np.zeros(len(s1_pts), dtype=np.int64)
            for c in tau_minors
        ],
        axis=1,
    )

    for idx, a in enumerate(s1_pts):
        rank, kernel = _rank_kernel_mod_p(m_all[idx].tolist(), p)
        if rank != 3 or len(kernel) != 1:
            cert.fiber_violations.append(a)
            continue
        b = _canonical_proj(kernel[0], p)
        minor_vec = [int(v) for v in minor_vals[idx]]
        if all(v == 0 for v in minor_vec):
            # indeterminacy point of the cubic formula; the kernel still
            # carries the correspondence, so record and continue
            cert.base_points.append(a)
        elif _canonical_proj(minor_vec, p) != b:
            cert.fiber_violations.append(a)
            continue
        if b not in s2_set:
            cert.fiber_violations.append(a)
            continue
        if b in images:
            cert.fiber_violations.append(a)  # injectivity broke
            continue
        images[b] = a
        # reverse direction: kernel of N(b) must return to a
        nmat = [
            [sum(int(pair.tensor.a[i][j][k]) * b[j] for j in range(4)) % p for k in range(4)]
            for i in range(4)
        ]
        nrank, nkernel = _rank_kernel_mod_p(nmat, p)
        if nrank != 3 or len(nkernel) != 1 or _canonical_proj(nkernel[0], p) != a:
            cert.roundtrip_violations.append(a)
    if cert.base_points:
        cert.notes.append(
            f"{len(cert.base_points)} surface point(s) lie on the base curve "
            "of the cubic formula; the correspondence is evaluated there "
            "through the kernel of the full matrix"
        )
    cert.bijection_ok = (
        not cert.fiber_violations
        and cert.count_s1 == cert.count_s2
        and len(images) == cert.count_s1
    )
    return cert


def correspondence_certificate(tensor, p: int, threads=None):
    """correspondence_check wrapped into the shared certificate shape."""
    fp = correspondence_check(tensor, p, threads=threads)
    steps = [
        Step(f"|S1(F_{p})| and |S2(F_{p})|", f"{fp.count_s1} and {fp.count_s2}"),
        Step("singular points", f"S1: {len(fp.singular_s1)}, S2: {len(fp.singular_s2)}"),
        Step("rank profile violations", str(len(fp.rank_violations))),
        Step("fiber/map violations", str(len(fp.fiber_violations))),
        Step("roundtrip violations", str(len(fp.roundtrip_violations))),
        Step(
            "base points of the cubic formula (informational)",
            str(len(fp.base_points)),
        ),
        Step("induced map is a bijection", str(fp.bijection_ok)),
    ]
    witnesses = []
    if not fp.passed:
        witnesses = (
            [list(q) for q in fp.singular_s1]
            + [list(q) for q in fp.singular_s2]
            + [list(q) for q in fp.rank_violations]
            + [list(q) for q in fp.fiber_violations]
            + [list(q) for q in fp.roundtrip_violations]
        ) or [["counts", fp.count_s1, fp.count_s2]]
    return conclude(steps, witnesses), fp
