"""Polynomial coefficients in commuting base variables, over Q.

A polynomial is a dict {monomial: Fraction} with zero coefficients omitted,
where a monomial is a sorted tuple of variable names (symmetric algebra).
Plain rational coefficients are the special case with monomial ().
"""

from fractions import Fraction


def p_const(c):
    c = Fraction(c)
    return {(): c} if c != 0 else {}


def p_var(name):
    return {(name,): Fraction(1)}


def p_is_const(p):
    return all(m == () for m in p)


def p_as_fraction(p):
    if not p:
        return Fraction(0)
    assert p_is_const(p), "nonconstant polynomial where a scalar was expected"
    return p[()]


def p_add(p, q):
    if not q:
        return dict(p)
    if not p:
        return dict(q)
    out = dict(p)
    for m, c in q.items():
        if m in out:
            out[m] = out[m] + c
        else:
            out[m] = c
    return {m: c for m, c in out.items() if c != 0}


def p_scale(p, t):
    t = Fraction(t)
    return {} if t == 0 else {m: c * t for m, c in p.items()}


_ONE = Fraction(1)
_MONE = Fraction(-1)


def p_mul(p, q):
    # fast paths for the ubiquitous unit-coefficient constants
    if len(p) == 1 and () in p:
        c = p[()]
        if c == _ONE:
            return dict(q)
        if c == _MONE:
            return {m: -x for m, x in q.items()}
    if len(q) == 1 and () in q:
        c = q[()]
        if c == _ONE:
            return dict(p)
        if c == _MONE:
            return {m: -x for m, x in p.items()}
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
            c = c2 if c1 == _ONE else (c1 if c2 == _ONE else c1 * c2)
            if m in out:
                out[m] = out[m] + c
            else:
                out[m] = c
    return {m: c for m, c in out.items() if c != 0}


def p_eval(p, values):
    """Substitute values (dict name -> Fraction) for all variables."""
    out = Fraction(0)
    for m, c in p.items():
        t = c
        for v in m:
            t *= Fraction(values[v])
        out += t
    return out


def p_coefficient(p, mono):
    return p.get(tuple(sorted(mono)), Fraction(0))


def p_normalize(c):
    """Accept a Fraction/int or an already-built polynomial dict."""
    if isinstance(c, dict):
        return {m: Fraction(x) for m, x in c.items() if Fraction(x) != 0}
    return p_const(c)
