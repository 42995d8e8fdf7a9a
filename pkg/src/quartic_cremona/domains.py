"""Exact coefficient domains: arbitrary-precision rationals and prime fields.

No floating point anywhere; rationals are `fractions.Fraction`, prime-field
elements are plain ints reduced to [0, p).
"""

from fractions import Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


class MixedDomainError(TypeError):
    """Operands live in different coefficient domains."""


class CoefficientDomain:
    """Either the rationals (p is None) or the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not is_prime(p):
                raise ValueError(f"prime field modulus must be prime, got {p}")
        self.p = p

    @classmethod
    def rationals(cls):
        return _RATIONALS

    @classmethod
    def prime_field(cls, p):
        return cls(p)

    @property
    def is_rational(self):
        return self.p is None

    def coerce(self, value):
        """Coerce ints, Fractions and 'p/q' strings into this domain.

        Rational values with denominator 1 are stored as plain ints: they
        compare and combine exactly with Fractions while keeping the common
        all-integer case cheap.
        """
        if self.p is None:
            if isinstance(value, int):
                return value
            if isinstance(value, Fraction):
                return value.numerator if value.denominator == 1 else value
            if isinstance(value, str):
                f = Fraction(value)
                return f.numerator if f.denominator == 1 else f
            raise TypeError(f"cannot coerce {value!r} into Q")
        p = self.p
        if isinstance(value, int):
            return value % p
        if isinstance(value, Fraction):
            den = value.denominator % p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
            return (value.numerator % p) * pow(den, p - 2, p) % p
        if isinstance(value, str):
            return self.coerce(Fraction(value))
        raise TypeError(f"cannot coerce {value!r} into GF({p})")

    def inv(self, value):
        if self.p is None:
            return Fraction(1) / value
        v = value % self.p
        if v == 0:
            raise ZeroDivisionError(f"0 is not invertible in GF({self.p})")
        return pow(v, self.p - 2, self.p)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def coeff_str(self, value) -> str:
        """Canonical text form: '3', '-1/2' over Q; a residue in [0,p) over GF(p)."""
        if self.p is None:
            return str(value)
        return str(value % self.p)

    def coeff_from_str(self, text: str):
        return self.coerce(Fraction(text) if "/" in text else int(text))

    def __eq__(self, other):
        return isinstance(other, CoefficientDomain) and self.p == other.p

    def __hash__(self):
        return hash(("CoefficientDomain", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, obj):
        if obj == "Q":
            return cls.rationals()
        if isinstance(obj, dict) and set(obj) == {"Fp"}:
            return cls.prime_field(obj["Fp"])
        raise ValueError(f"not a coefficient domain: {obj!r}")


_RATIONALS = CoefficientDomain(None)


def same_domain(*objects) -> CoefficientDomain:
    """Return the shared domain of the arguments, or raise MixedDomainError."""
    domains = {obj.domain for obj in objects}
    if len(domains) != 1:
        raise MixedDomainError(f"mixed coefficient domains: {sorted(map(repr, domains))}")
    return next(iter(domains))
