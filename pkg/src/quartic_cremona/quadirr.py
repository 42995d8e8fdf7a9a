"""Exact arithmetic in real quadratic fields: values a + b*sqrt(D).

a, b are Fractions and D is the square-free part of whatever radicand the
value was built from (D = 1 marks a plain rational).  Signs and comparisons
are decided exactly from a^2 - b^2 D, never through floats.
"""

from fractions import Fraction
from math import isqrt


def square_free_split(n: int):
    """n = s^2 * d with d square-free; returns (s, d).  Requires n >= 1."""
    if n < 1:
        raise ValueError(f"need a positive integer, got {n}")
    s, d = 1, 1
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            s *= f ** (e // 2)
            if e % 2:
                d *= f
        f += 1 if f == 2 else 2
    d *= m
    return s, d


class QuadIrr:
    """Immutable exact value a + b*sqrt(D), D square-free (D = 1 <=> rational)."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D=1):
        a = Fraction(a)
        b = Fraction(b)
        D = int(D)
        if D < 1:
            raise ValueError(f"radicand must be positive, got {D}")
        if D > 1:
            s, d = square_free_split(D)
            if s != 1:
                b, D = b * s, d
        if b == 0:
            D = 1
        elif D == 1:
            a, b = a + b, Fraction(0)
        self.a = a
        self.b = b
        self.D = D

    @classmethod
    def sqrt_of(cls, n: int):
        """Exact sqrt(n) for an integer n >= 0."""
        if n < 0:
            raise ValueError("no real square root of a negative integer")
        if n == 0:
            return cls(0)
        s, d = square_free_split(n)
        return cls(0, s, d) if d > 1 else cls(s)

    @property
    def is_rational(self):
        return self.b == 0

    def _merge(self, other):
        if not isinstance(other, QuadIrr):
            other = QuadIrr(other)
        if self.b and other.b and self.D != other.D:
            raise ValueError(f"incompatible radicands sqrt({self.D}) and sqrt({other.D})")
        return other, (self.D if self.b else other.D)

    def __add__(self, other):
        other, D = self._merge(other)
        return QuadIrr(self.a + other.a, self.b + other.b, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadIrr(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other, D = self._merge(other)
        return QuadIrr(self.a - other.a, self.b - other.b, D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other, D = self._merge(other)
        return QuadIrr(
            self.a * other.a + self.b * other.b * D,
            self.a * other.b + self.b * other.a,
            D,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadIrr(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def __truediv__(self, other):
        other, D = self._merge(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic irrational")
        conj = other.conjugate()
        prod = self * conj
        return QuadIrr(prod.a / n, prod.b / n, D)

    def __rtruediv__(self, other):
        return QuadIrr(other) / self

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(D)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2 D
        n = self.norm()
        if n == 0:
            return 0
        bigger_rational = n > 0
        return (1 if a > 0 else -1) if bigger_rational else (1 if b > 0 else -1)

    def __eq__(self, other):
        try:
            other, _ = self._merge(other)
        except ValueError:
            return False
        return self.a == other.a and self.b == other.b and (
            self.b == 0 or self.D == other.D
        )

    def __hash__(self):
        return hash((self.a, self.b, self.D if self.b else 1))

    def __lt__(self, other):
        other, _ = self._merge(other)
        return (self - other).sign() < 0

    def __le__(self, other):
        other, _ = self._merge(other)
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return not self.__le__(other)

    def __ge__(self, other):
        return not self.__lt__(other)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.D})"
        if self.b == 1:
            radical = root
        elif self.b == -1:
            radical = f"-{root}"
        else:
            radical = f"{self.b}*{root}"
        if self.a == 0:
            return radical
        joiner = " + " if self.b > 0 else " - "
        mag = radical if self.b > 0 else (radical[1:] if radical.startswith("-") else radical)
        if self.b < 0:
            b_abs = -self.b
            mag = root if b_abs == 1 else f"{b_abs}*{root}"
        return f"{self.a}{joiner}{mag}"

    __repr__ = __str__
