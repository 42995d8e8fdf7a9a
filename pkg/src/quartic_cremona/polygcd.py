"""Multivariate polynomial gcd over Q or GF(p).

Recursive scheme: pick the smallest variable present, view both inputs as
univariate over the polynomial ring in the remaining variables, split off
contents, and run the subresultant pseudo-remainder sequence on the
primitive parts.  The subresultant scaling matters: dividing each
pseudo-remainder by the predictable factor g*h^delta keeps coefficient
growth polynomial without computing any gcd inside the loop (a primitive
PRS recurses into content gcds whose cost explodes over Q).

The result is normalized to have leading coefficient 1 in the canonical
monomial order ("gcd up to scalar" made deterministic).
"""

from .domains import same_domain
from .mpoly import MPoly, NVARS, _MASK, _SHIFT, exact_div, grevlex_key, unpack_key


def _vars_present(f: MPoly):
    present = set()
    for k in f.terms:
        for i in range(NVARS):
            if (k >> (_SHIFT * i)) & _MASK:
                present.add(i)
    return present


def _as_univariate(f: MPoly, v: int):
    """Split f into {exponent of v: coefficient poly without v}."""
    shift = _SHIFT * v
    out = {}
    for k, c in f.terms.items():
        e = (k >> shift) & _MASK
        rest = k - (e << shift)
        coeff = out.setdefault(e, {})
        coeff[rest] = c
    return {e: MPoly._raw(f.domain, terms) for e, terms in out.items()}


def _from_univariate(parts, v: int, domain):
    shift = _SHIFT * v
    terms = {}
    for e, poly in parts.items():
        for k, c in poly.terms.items():
            terms[k + (e << shift)] = c
    return MPoly._raw(domain, terms)


def _uni_degree(parts):
    return max(parts) if parts else -1


def _uni_scale(parts, poly):
    out = {}
    for e, c in parts.items():
        prod = c * poly
        if prod.terms:
            out[e] = prod
    return out


def _uni_sub(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e)
        s = -c if s is None else s - c
        if s.terms:
            out[e] = s
        elif e in out:
            del out[e]
    return out


def _uni_shift(parts, k):
    return {e + k: c for e, c in parts.items()}


def _pseudo_rem(a, b):
    """Exact pseudo-remainder lc(b)^(da-db+1) * a mod b (univariate dicts)."""
    db = _uni_degree(b)
    da = _uni_degree(a)
    lb = b[db]
    r = dict(a)
    steps = 0
    while r and _uni_degree(r) >= db:
        dr = _uni_degree(r)
        lr = r[dr]
        r = _uni_sub(_uni_scale(r, lb), _uni_shift(_uni_scale(b, lr), dr - db))
        steps += 1
    # normalize the scaling to exactly lc(b)^(da-db+1)
    for _ in range(da - db + 1 - steps):
        r = _uni_scale(r, lb)
    return r


def _content(parts):
    """gcd of the univariate coefficients (a polynomial in the other vars)."""
    polys = list(parts.values())
    acc = polys[0]
    for q in polys[1:]:
        acc = _gcd_raw(acc, q)
        if acc.degree() == 0:
            break
    return acc


def _primitive_part(parts, content):
    if content.degree() == 0:
        inv = content.domain.inv(content.terms[0])
        return {e: c.scale(inv) for e, c in parts.items()}
    return {e: exact_div(c, content) for e, c in parts.items()}


def _monic(f: MPoly) -> MPoly:
    lt = f.leading_term()
    if lt is None:
        return f
    return f.scale(f.domain.inv(lt[1]))


def _gcd_raw(f: MPoly, g: MPoly) -> MPoly:
    if not f.terms:
        return g
    if not g.terms:
        return f
    if f.degree() == 0 or g.degree() == 0:
        return MPoly.constant(f.domain, 1)
    pf, pg = _vars_present(f), _vars_present(g)
    v = min(pf | pg)
    uf, ug = _as_univariate(f, v), _as_univariate(g, v)
    cf, cg = _content(uf), _content(ug)
    cont = _gcd_raw(cf, cg)
    if v not in pf or v not in pg:
        # v appears in only one input; any common divisor is v-free, hence
        # divides that input's content, which is folded into cont already
        return cont
    a, b = _primitive_part(uf, cf), _primitive_part(ug, cg)
    if _uni_degree(a) < _uni_degree(b):
        a, b = b, a
    one = MPoly.constant(f.domain, 1)
    g, h = one, one
    while True:
        delta = _uni_degree(a) - _uni_degree(b)
        r = _pseudo_rem(a, b)
        if not r:
            pp = _primitive_part(b, _content(b))
            return cont * _from_univariate(pp, v, f.domain)
        if _uni_degree(r) == 0:
            # the primitive parts admit no common divisor of positive v-degree
            return cont
        divisor = g * h ** delta
        a, b = b, {e: exact_div(c, divisor) for e, c in r.items()}
        g = a[_uni_degree(a)]
        if delta == 1:
            h = g
        elif delta > 1:
            h = exact_div(g ** delta, h ** (delta - 1))


def multivariate_gcd(f: MPoly, g: MPoly) -> MPoly:
    """Greatest common divisor, normalized monic in the canonical order."""
    same_domain(f, g)
    if not f.terms or not g.terms:
        raise ZeroDivisionError("gcd of zero polynomial requested")
    return _monic(_gcd_raw(f, g))


def gcd_list(polys) -> MPoly:
    """gcd of several nonzero polynomials (folds multivariate_gcd)."""
    polys = [q for q in polys if q.terms]
    if not polys:
        raise ZeroDivisionError("gcd of zero polynomials requested")
    acc = polys[0]
    for q in polys[1:]:
        acc = _gcd_raw(acc, q)
        if acc.degree() == 0:
            break
    return _monic(acc)
