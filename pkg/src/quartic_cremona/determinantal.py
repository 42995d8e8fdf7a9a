"""From a 4x4x4 coefficient tensor to the determinantal surface pair.

A tensor a_{ijk} produces two 4x4 matrices of linear forms,

    M(x)[i][j] = sum_k a_{ijk} x_k      (linear in the x-block)
    N(y)[i][k] = sum_j a_{ijk} y_j      (linear in the y-block)

tied together by the bilinear identity M(x) y^t = N(y) x^t, which holds
row-by-row because both sides expand to sum_{j,k} a_{ijk} x_k y_j.  The two
quartics det M and det N cut out the surface pair; the four bidegree-(1,1)
forms Q_i are the rows of M(x) y^t.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .domains import CoefficientDomain
from .mpoly import MPoly, X_BLOCK, Y_BLOCK, pack_exponents
from .polymatrix import PolyMatrix, poly_det

_MASK64 = (1 << 64) - 1


def splitmix64_stream(seed: int):
    """The documented PRNG: splitmix64, bit-exact.

    state_{n+1} = (state_n + 0x9E3779B97F4A7C15) mod 2^64
    z = state_{n+1}
    z = ((z XOR (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z XOR (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output_n = z XOR (z >> 31)
    """
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


class DegenerateTensorError(ValueError):
    """A construction step received a tensor whose determinant vanishes."""


@dataclass(frozen=True)
class Tensor4:
    """Immutable 4x4x4 coefficient array over an exact domain."""

    domain: CoefficientDomain
    a: tuple  # nested 4x4x4 tuple, indexed [i][j][k]

    @classmethod
    def from_entries(cls, domain, entries):
        rows = tuple(
            tuple(tuple(domain.coerce(entries[i][j][k]) for k in range(4)) for j in range(4))
            for i in range(4)
        )
        return cls(domain, rows)

    def entry(self, i, j, k):
        return self.a[i][j][k]

    def with_entry(self, i, j, k, value):
        """Copy with one coefficient replaced (for fault-injection tests)."""
        new = [[[self.a[p][q][r] for r in range(4)] for q in range(4)] for p in range(4)]
        new[i][j][k] = self.domain.coerce(value)
        return Tensor4.from_entries(self.domain, new)

    def to_json(self):
        def enc(c):
            return str(c) if self.domain.is_rational else int(c)

        return {
            "domain": self.domain.to_json(),
            "a": [[[enc(self.a[i][j][k]) for k in range(4)] for j in range(4)] for i in range(4)],
        }

    @classmethod
    def from_json(cls, doc):
        domain = CoefficientDomain.from_json(doc["domain"])
        return cls.from_entries(domain, doc["a"])

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def random_tensor(seed: int, domain: CoefficientDomain) -> Tensor4:
    """Deterministic tensor from a 64-bit seed.

    Entries are drawn in row-major (i, j, k) order from splitmix64(seed):
    over GF(p) each entry is output mod p; over Q each entry is the integer
    (output mod 21) - 10, i.e. uniform on [-10, 10].
    """
    stream = splitmix64_stream(int(seed))
    entries = []
    for _ in range(4):
        plane = []
        for _ in range(4):
            row = []
            for _ in range(4):
                z = next(stream)
                if domain.is_rational:
                    row.append(Fraction(z % 21 - 10))
                else:
                    row.append(z % domain.p)
            plane.append(row)
        entries.append(plane)
    return Tensor4.from_entries(domain, entries)


def _linear_form(domain, coeffs, block):
    terms = {}
    for idx, c in zip(block, coeffs):
        if c:
            exps = [0] * 8
            exps[idx] = 1
            terms[pack_exponents(exps)] = c
    return MPoly._raw(domain, dict(terms))


def build_M(tensor: Tensor4) -> PolyMatrix:
    """M(x)[i][j] = sum_k a_{ijk} x_k."""
    d = tensor.domain
    return PolyMatrix(
        [
            [_linear_form(d, tensor.a[i][j], X_BLOCK) for j in range(4)]
            for i in range(4)
        ]
    )


def build_N(tensor: Tensor4) -> PolyMatrix:
    """N(y)[i][k] = sum_j a_{ijk} y_j."""
    d = tensor.domain
    return PolyMatrix(
        [
            [
                _linear_form(d, [tensor.a[i][j][k] for j in range(4)], Y_BLOCK)
                for k in range(4)
            ]
            for i in range(4)
        ]
    )


def bilinear_residual(M: PolyMatrix, N: PolyMatrix):
    """The four polynomials M(x) y^t - N(y) x^t, row by row.

    Zero for matrices built from the same tensor; computing it from two
    independently built matrices is what makes fault injection detectable.
    """
    domain = M.domain
    ys = [MPoly.variable(domain, i) for i in Y_BLOCK]
    xs = [MPoly.variable(domain, i) for i in X_BLOCK]
    out = []
    for i in range(4):
        acc = MPoly.zero(domain)
        for j in range(4):
            acc = acc + M.entry(i, j) * ys[j]
        for k in range(4):
            acc = acc - N.entry(i, k) * xs[k]
        out.append(acc)
    return out


def bilinear_identity_check(tensor: Tensor4) -> bool:
    """True for every tensor; validates the implementation, not the math."""
    return all(not r.terms for r in bilinear_residual(build_M(tensor), build_N(tensor)))


def quartic_surfaces(tensor: Tensor4):
    """(det M, det N): the two quartics, each possibly identically zero."""
    return poly_det(build_M(tensor)), poly_det(build_N(tensor))


def quadric_forms(tensor: Tensor4):
    """The four bidegree-(1,1) forms Q_i = sum_j M(x)[i][j] * y_j.

    Row i of the system M(x) y^t = 0; by the bilinear identity each Q_i
    equals sum_k N(y)[i][k] * x_k as well, and the common zero locus of the
    four forms is exactly the locus M(x) y^t = 0.
    """
    M = build_M(tensor)
    domain = tensor.domain
    ys = [MPoly.variable(domain, i) for i in Y_BLOCK]
    out = []
    for i in range(4):
        acc = MPoly.zero(domain)
        for j in range(4):
            acc = acc + M.entry(i, j) * ys[j]
        out.append(acc)
    return tuple(out)


@dataclass(frozen=True)
class DeterminantalPair:
    """The full construction attached to one tensor."""

    tensor: Tensor4
    M: PolyMatrix
    N: PolyMatrix
    F1: MPoly
    F2: MPoly
    Q: tuple
    degenerate: bool

    @classmethod
    def from_tensor(cls, tensor: Tensor4):
        M = build_M(tensor)
        N = build_N(tensor)
        F1 = poly_det(M)
        F2 = poly_det(N)
        return cls(
            tensor=tensor,
            M=M,
            N=N,
            F1=F1,
            F2=F2,
            Q=quadric_forms(tensor),
            degenerate=not F1.terms or not F2.terms,
        )

    def require_nondegenerate(self):
        if self.degenerate:
            raise DegenerateTensorError(
                "tensor is degenerate: a determinant vanishes identically"
            )
        return self
