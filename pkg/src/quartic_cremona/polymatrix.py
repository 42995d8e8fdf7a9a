"""Matrices of polynomials and exact determinants.

Two determinant routes are exposed so they can cross-check each other:
fraction-free Bareiss elimination (default over Q) and direct Leibniz
expansion (default over prime fields, n <= 4).  A cofactor expansion is kept
as a third, independent oracle.
"""

from itertools import permutations

from .domains import same_domain
from .mpoly import MPoly, exact_div


class PolyMatrix:
    __slots__ = ("rows", "cols", "entries", "domain")

    def __init__(self, entries):
        rows = tuple(tuple(row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged matrix")
        flat = [e for row in rows for e in row]
        if not all(isinstance(e, MPoly) for e in flat):
            raise TypeError("matrix entries must be MPoly")
        self.domain = same_domain(*flat)
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.entries = rows

    def entry(self, i, j):
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def submatrix(self, row_indices, col_indices):
        return PolyMatrix(
            [[self.entries[i][j] for j in col_indices] for i in row_indices]
        )

    def take_rows(self, row_indices):
        return self.submatrix(row_indices, range(self.cols))

    def is_square(self):
        return self.rows == self.cols

    def is_linear_in(self, block):
        """Every entry zero or homogeneous of degree 1 in the given block."""
        for row in self.entries:
            for e in row:
                if not e.terms:
                    continue
                if not e.uses_only(block) or e.degree() != 1:
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"PolyMatrix[{body}]"


def det_leibniz(m: PolyMatrix) -> MPoly:
    """Sum over permutations; fine for n <= 4 (24 products)."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    acc = MPoly.zero(m.domain)
    for perm in permutations(range(n)):
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        sign = -1 if inv % 2 else 1
        prod = MPoly.constant(m.domain, sign)
        for i in range(n):
            prod = prod * m.entry(i, perm[i])
        acc = acc + prod
    return acc


def det_cofactor(m: PolyMatrix) -> MPoly:
    """Recursive expansion along the first row (independent oracle)."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 1:
        return m.entry(0, 0)
    acc = MPoly.zero(m.domain)
    for j in range(n):
        e = m.entry(0, j)
        if not e.terms:
            continue
        minor = m.submatrix(range(1, n), [c for c in range(n) if c != j])
        term = e * det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def det_bareiss(m: PolyMatrix) -> MPoly:
    """Fraction-free elimination; every division is exact by Sylvester's identity."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    a = [list(row) for row in m.entries]
    domain = m.domain
    sign = 1
    prev = MPoly.constant(domain, 1)
    for k in range(n - 1):
        if not a[k][k].terms:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k].terms), None)
            if pivot_row is None:
                return MPoly.zero(domain)
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        trivial_prev = prev.terms == {0: domain.one}
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                a[i][j] = num if trivial_prev else exact_div(num, prev)
            a[i][k] = MPoly.zero(domain)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def poly_det(m: PolyMatrix, method: str = "auto") -> MPoly:
    """Exact determinant.

    auto = Bareiss over Q, Leibniz over prime fields (n <= 4); both remain
    individually callable for oracle cross-checks.
    """
    if method == "auto":
        method = "bareiss" if m.domain.is_rational or m.rows > 4 else "leibniz"
    if method == "bareiss":
        return det_bareiss(m)
    if method == "leibniz":
        return det_leibniz(m)
    if method == "cofactor":
        return det_cofactor(m)
    raise ValueError(f"unknown determinant method {method!r}")


def signed_maximal_minors(m: PolyMatrix):
    """The four signed 3x3 minors of a 3x4 matrix.

    Component j (0-indexed) is (-1)^j times the minor obtained by deleting
    column j.  With this sign convention the Laplace identity holds: dotting
    any row of the matrix against the component vector expands a 4x4
    determinant with a repeated row, hence gives the zero polynomial.
    """
    if m.rows != 3 or m.cols != 4:
        raise ValueError("signed maximal minors need a 3x4 matrix")
    comps = []
    for j in range(4):
        sub = m.submatrix(range(3), [c for c in range(4) if c != j])
        d = poly_det(sub)
        comps.append(d if j % 2 == 0 else -d)
    return tuple(comps)


def laplace_residuals(m: PolyMatrix, components):
    """Row-by-row dot products against a candidate kernel vector."""
    out = []
    for i in range(m.rows):
        acc = MPoly.zero(m.domain)
        for j in range(m.cols):
            acc = acc + m.entry(i, j) * components[j]
        out.append(acc)
    return out
