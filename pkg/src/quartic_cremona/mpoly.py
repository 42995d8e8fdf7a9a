"""Sparse exact multivariate polynomials in x1..x4, y1..y4.

A polynomial is a finite map from exponent vectors to nonzero coefficients in
an exact domain (Q or GF(p)).  The canonical term order is graded reverse
lexicographic with x1 > x2 > x3 > x4 > y1 > y2 > y3 > y4; all iteration,
printing and leading-term logic uses it, so output is deterministic.

Internally an exponent vector is packed into a single int, 16 bits per
variable, so that monomial multiplication is integer addition.  Exponents are
capped at 2**15 per variable, far above anything this toolkit produces
(degrees stay <= 24), which keeps packed addition carry-free.
"""

from fractions import Fraction

from .domains import CoefficientDomain, MixedDomainError, same_domain

NVARS = 8
VAR_NAMES = ("x1", "x2", "x3", "x4", "y1", "y2", "y3", "y4")
X_BLOCK = (0, 1, 2, 3)
Y_BLOCK = (4, 5, 6, 7)

_SHIFT = 16
_MASK = (1 << _SHIFT) - 1
_MAX_EXP = 1 << 15


def pack_exponents(exps) -> int:
    if len(exps) != NVARS:
        raise ValueError(f"exponent vector must have {NVARS} entries, got {len(exps)}")
    key = 0
    for i, e in enumerate(exps):
        if not (0 <= e < _MAX_EXP):
            raise ValueError(f"exponent out of range: {e}")
        key |= e << (_SHIFT * i)
    return key


def unpack_key(key: int) -> tuple:
    return tuple((key >> (_SHIFT * i)) & _MASK for i in range(NVARS))


def grevlex_key(exps):
    """Sort key realizing the fixed monomial order: larger key = larger monomial."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


class MPoly:
    """Immutable sparse polynomial over a fixed CoefficientDomain."""

    __slots__ = ("domain", "terms")

    def __init__(self, domain: CoefficientDomain, terms=None):
        self.domain = domain
        packed = {}
        if terms:
            for exps, coeff in terms.items():
                c = domain.coerce(coeff)
                if c:
                    key = exps if isinstance(exps, int) else pack_exponents(exps)
                    packed[key] = packed.get(key, domain.zero) + c
            packed = {k: c for k, c in packed.items() if c}
            if domain.p is not None:
                packed = {k: c % domain.p for k, c in packed.items()}
                packed = {k: c for k, c in packed.items() if c}
        self.terms = packed

    @classmethod
    def _raw(cls, domain, packed_terms):
        obj = object.__new__(cls)
        obj.domain = domain
        obj.terms = packed_terms
        return obj

    @classmethod
    def zero(cls, domain):
        return cls._raw(domain, {})

    @classmethod
    def constant(cls, domain, value):
        c = domain.coerce(value)
        return cls._raw(domain, {0: c} if c else {})

    @classmethod
    def variable(cls, domain, index):
        if not 0 <= index < NVARS:
            raise ValueError(f"variable index out of range: {index}")
        return cls._raw(domain, {1 << (_SHIFT * index): domain.one})


def variables(domain):
    """The eight generators (x1, x2, x3, x4, y1, y2, y3, y4)."""
    return tuple(MPoly.variable(domain, i) for i in range(NVARS))


def _coerce_operand(domain, other):
    if isinstance(other, MPoly):
        return other
    if isinstance(other, (int, Fraction, str)):
        return MPoly.constant(domain, other)
    return None


def _add_impl(f, g, negate_g=False):
    domain = same_domain(f, g)
    out = dict(f.terms)
    p = domain.p
    for k, c in g.terms.items():
        if negate_g:
            c = -c
        s = out.get(k)
        s = c if s is None else s + c
        if p is not None:
            s %= p
        if s:
            out[k] = s
        elif k in out:
            del out[k]
    return MPoly._raw(domain, out)


def _mul_impl(f, g):
    domain = same_domain(f, g)
    a, b = f.terms, g.terms
    if len(a) > len(b):
        a, b = b, a
    out = {}
    p = domain.p
    if p is None:
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                prev = out.get(k)
                out[k] = ca * cb if prev is None else prev + ca * cb
        out = {k: c for k, c in out.items() if c}
    else:
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                prev = out.get(k)
                out[k] = ca * cb % p if prev is None else (prev + ca * cb) % p
        out = {k: c for k, c in out.items() if c}
    return MPoly._raw(domain, out)


def _pm(self, other, op):
    other = _coerce_operand(self.domain, other)
    if other is None:
        return NotImplemented
    return op(self, other)


MPoly.__add__ = lambda self, other: _pm(self, other, _add_impl)
MPoly.__radd__ = MPoly.__add__
MPoly.__sub__ = lambda self, other: _pm(self, other, lambda f, g: _add_impl(f, g, True))
MPoly.__rsub__ = lambda self, other: _pm(self, other, lambda f, g: _add_impl(g, f, True))
MPoly.__mul__ = lambda self, other: _pm(self, other, _mul_impl)
MPoly.__rmul__ = MPoly.__mul__


def _neg(self):
    p = self.domain.p
    if p is None:
        return MPoly._raw(self.domain, {k: -c for k, c in self.terms.items()})
    return MPoly._raw(self.domain, {k: (-c) % p for k, c in self.terms.items()})


def _pow(self, n):
    if not isinstance(n, int) or n < 0:
        raise ValueError("exponent must be a non-negative integer")
    result = MPoly.constant(self.domain, 1)
    base = self
    while n:
        if n & 1:
            result = result * base
        base_needed = n >> 1
        if base_needed:
            base = base * base
        n = base_needed
    return result


def _eq(self, other):
    other = _coerce_operand(self.domain, other) if not isinstance(other, MPoly) else other
    if not isinstance(other, MPoly):
        return NotImplemented
    return self.domain == other.domain and self.terms == other.terms


MPoly.__neg__ = _neg
MPoly.__pow__ = _pow
MPoly.__eq__ = _eq
MPoly.__hash__ = None
MPoly.__bool__ = lambda self: bool(self.terms)


def _sorted_terms(self):
    """Terms as (exponent-tuple, coeff), descending in the canonical order."""
    decorated = [(unpack_key(k), c) for k, c in self.terms.items()]
    decorated.sort(key=lambda t: grevlex_key(t[0]), reverse=True)
    return decorated


def _leading_term(self):
    """(exponent-tuple, coeff) of the leading monomial, or None for 0."""
    if not self.terms:
        return None
    best_key, best_exps = None, None
    for k in self.terms:
        exps = unpack_key(k)
        gk = grevlex_key(exps)
        if best_key is None or gk > best_key:
            best_key, best_exps = gk, exps
    return best_exps, self.terms[pack_exponents(best_exps)]


def _degree(self):
    """Total degree; -1 for the zero polynomial."""
    if not self.terms:
        return -1
    return max(sum(unpack_key(k)) for k in self.terms)


def _degree_in_block(self, block):
    if not self.terms:
        return -1
    return max(sum(unpack_key(k)[i] for i in block) for k in self.terms)


def _bidegree(self):
    """(deg in x-block, deg in y-block) if every term agrees, else None."""
    if not self.terms:
        return None
    seen = None
    for k in self.terms:
        exps = unpack_key(k)
        bd = (sum(exps[i] for i in X_BLOCK), sum(exps[i] for i in Y_BLOCK))
        if seen is None:
            seen = bd
        elif seen != bd:
            return None
    return seen


def _is_homogeneous(self):
    if not self.terms:
        return True
    degs = {sum(unpack_key(k)) for k in self.terms}
    return len(degs) == 1


def _uses_only(self, block):
    allowed = set(block)
    for k in self.terms:
        exps = unpack_key(k)
        for i in range(NVARS):
            if exps[i] and i not in allowed:
                return False
    return True


def _evaluate(self, values):
    """Evaluate at a point of domain^8 (values coerced into the domain)."""
    if len(values) != NVARS:
        raise ValueError(f"need {NVARS} values")
    domain = self.domain
    vals = [domain.coerce(v) for v in values]
    p = domain.p
    acc = domain.zero
    for k, c in self.terms.items():
        term = c
        for i in range(NVARS):
            e = (k >> (_SHIFT * i)) & _MASK
            if e:
                term = term * (pow(vals[i], e, p) if p is not None else vals[i] ** e)
        acc = acc + term
    return acc % p if p is not None else acc


def _derivative(self, var_index):
    """Formal partial derivative with respect to one variable."""
    if not 0 <= var_index < NVARS:
        raise ValueError(f"variable index out of range: {var_index}")
    shift = _SHIFT * var_index
    p = self.domain.p
    out = {}
    for k, c in self.terms.items():
        e = (k >> shift) & _MASK
        if not e:
            continue
        nc = c * e
        if p is not None:
            nc %= p
        if nc:
            out[k - (1 << shift)] = nc
    return MPoly._raw(self.domain, out)


def _scale(self, value):
    c = self.domain.coerce(value)
    if not c:
        return MPoly.zero(self.domain)
    p = self.domain.p
    if p is None:
        return MPoly._raw(self.domain, {k: v * c for k, v in self.terms.items()})
    return MPoly._raw(self.domain, {k: v * c % p for k, v in self.terms.items() if v * c % p})


MPoly.sorted_terms = _sorted_terms
MPoly.leading_term = _leading_term
MPoly.degree = _degree
MPoly.degree_in_block = _degree_in_block
MPoly.bidegree = _bidegree
MPoly.is_homogeneous = _is_homogeneous
MPoly.uses_only = _uses_only
MPoly.evaluate = _evaluate
MPoly.derivative = _derivative
MPoly.scale = _scale
MPoly.nterms = property(lambda self: len(self.terms))


# --- canonical text form -------------------------------------------------

def _format_monomial(exps):
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(VAR_NAMES[i])
        elif e > 1:
            parts.append(f"{VAR_NAMES[i]}^{e}")
    return "*".join(parts)


def _to_str(self):
    if not self.terms:
        return "0"
    domain = self.domain
    pieces = []
    for exps, coeff in self.sorted_terms():
        negative = domain.p is None and coeff < 0
        mag = domain.coeff_str(-coeff if negative else coeff)
        mono = _format_monomial(exps)
        if not mono:
            body = mag
        elif mag == "1":
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


MPoly.__str__ = _to_str
MPoly.__repr__ = _to_str

_VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}


def parse_poly(text: str, domain: CoefficientDomain) -> MPoly:
    """Parse the canonical text form back into an MPoly (round-trip exact)."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial string")
    if s == "0":
        return MPoly.zero(domain)
    # split into signed chunks at top level (no parentheses in canonical form)
    chunks = []
    sign, start = 1, 0
    if s[0] in "+-":
        sign = -1 if s[0] == "-" else 1
        start = 1
    i = start
    current_sign = sign
    seg_start = start
    while i < len(s):
        if s[i] in "+-" and i > seg_start and s[i - 1] not in "*^/":
            chunks.append((current_sign, s[seg_start:i].strip()))
            current_sign = -1 if s[i] == "-" else 1
            seg_start = i + 1
        i += 1
    chunks.append((current_sign, s[seg_start:].strip()))

    terms = {}
    for sgn, chunk in chunks:
        if not chunk:
            raise ValueError(f"malformed polynomial string: {text!r}")
        coeff = domain.one
        exps = [0] * NVARS
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"malformed term {chunk!r}")
            if factor[0].isdigit() or factor[0] in "./":
                coeff = coeff * domain.coeff_from_str(factor)
            else:
                if "^" in factor:
                    name, _, exp_s = factor.partition("^")
                    e = int(exp_s)
                else:
                    name, e = factor, 1
                if name not in _VAR_INDEX:
                    raise ValueError(f"unknown variable {name!r}")
                exps[_VAR_INDEX[name]] += e
        key = pack_exponents(exps)
        c = coeff if sgn == 1 else -coeff
        terms[key] = terms.get(key, domain.zero) + c
    p = domain.p
    if p is not None:
        terms = {k: c % p for k, c in terms.items()}
    return MPoly._raw(domain, {k: c for k, c in terms.items() if c})


# --- division, composition, identity testing -----------------------------

class DivisionError(ArithmeticError):
    pass


def poly_divides(f: MPoly, g: MPoly):
    """Return q with g = f*q if f divides g exactly, else None.

    Leading-term reduction in the canonical order.  Over a field this is a
    complete decision procedure: if f | g the leading term of every partial
    remainder stays divisible by the leading term of f, so the reduction can
    only get stuck when f does not divide g.
    """
    same_domain(f, g)
    if not f.terms:
        raise DivisionError("division by the zero polynomial")
    domain = f.domain
    p = domain.p
    lt_exps, lt_coeff = f.leading_term()
    lt_key = pack_exponents(lt_exps)
    lt_inv = domain.inv(lt_coeff)
    f_terms = list(f.terms.items())

    rem = dict(g.terms)
    quot = {}
    while rem:
        # leading term of the remainder
        best_exps, best_key = None, None
        for k in rem:
            exps = unpack_key(k)
            gk = grevlex_key(exps)
            if best_key is None or gk > best_key:
                best_key, best_exps = gk, exps
        rk = pack_exponents(best_exps)
        diff = [a - b for a, b in zip(best_exps, lt_exps)]
        if any(d < 0 for d in diff):
            return None
        qkey = rk - lt_key
        qc = rem[rk] * lt_inv
        if p is not None:
            qc %= p
        quot[qkey] = quot.get(qkey, domain.zero) + qc
        for k, c in f_terms:
            kk = k + qkey
            s = rem.get(kk, domain.zero) - qc * c
            if p is not None:
                s %= p
            if s:
                rem[kk] = s
            elif kk in rem:
                del rem[kk]
    quot = {k: c for k, c in quot.items() if c}
    return MPoly._raw(domain, quot)


def exact_div(g: MPoly, f: MPoly) -> MPoly:
    """g / f when the division is known to be exact (raises otherwise)."""
    q = poly_divides(f, g)
    if q is None:
        raise DivisionError("inexact polynomial division")
    return q


def poly_compose(f: MPoly, maps) -> MPoly:
    """Substitute the four variables of f's block by the given polynomials.

    f must involve a single variable block (x or y); maps is a sequence of
    four polynomials over the same domain with equal homogeneous degree, so
    the result of composing a homogeneous f of degree k is homogeneous of
    degree k*d.  Powers of the maps are cached across terms.
    """
    if len(maps) != 4:
        raise ValueError("need exactly 4 substitution polynomials")
    domain = same_domain(f, *maps)
    if f.uses_only(X_BLOCK):
        block = X_BLOCK
    elif f.uses_only(Y_BLOCK):
        block = Y_BLOCK
    else:
        raise ValueError("composition source must use a single variable block")
    degs = {m.degree() for m in maps if m.terms}
    if len(degs) > 1:
        raise ValueError(f"substitution polynomials have unequal degrees: {sorted(degs)}")
    for m in maps:
        if m.terms and not m.is_homogeneous():
            raise ValueError("substitution polynomials must be homogeneous")

    one = MPoly.constant(domain, 1)
    power_cache = [{0: one} for _ in range(4)]

    def power(i, e):
        cache = power_cache[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * maps[i]
        return cache[e]

    acc = MPoly.zero(domain)
    for exps, coeff in f.sorted_terms():
        factors = [power(i, exps[block[i]]) for i in range(4) if exps[block[i]]]
        term = MPoly.constant(domain, coeff)
        # multiply smallest first to keep intermediates small
        for fac in sorted(factors, key=lambda q: len(q.terms)):
            term = term * fac
        acc = acc + term
    return acc


def reduce_mod_p(f: MPoly, p: int) -> MPoly:
    """Reduce a rational polynomial modulo p (denominators must be units)."""
    target = CoefficientDomain.prime_field(p)
    if f.domain.p is not None:
        if f.domain.p == p:
            return f
        raise ValueError(f"cannot reduce GF({f.domain.p}) coefficients mod {p}")
    out = {}
    for k, c in f.terms.items():
        r = target.coerce(c)
        if r:
            out[k] = r
    return MPoly._raw(target, out)


def gradient(f: MPoly, block=X_BLOCK):
    """Formal partials with respect to a declared variable block.

    For homogeneous f the Euler identity sum_i v_i * df/dv_i = deg(f) * f
    holds over any of our domains (over GF(p) with the degree reduced mod p).
    """
    return tuple(f.derivative(i) for i in block)
