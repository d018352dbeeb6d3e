"""Weight-graded noncommutative linear systems over a polynomial base.

A linear system is carried by a weight-graded category over Q[V] (V = the
declared variables, each of weight -1 and even homological degree) whose hom
spaces are free Q[V]-modules on generators of weights 0 and -1.  The weight-0
generators form the ambient category; the weight -1 generators, shifted up by
one, form the dual bundle (a bimodule over the ambient category); the
variable-linear parts of the structure maps are the sections; specializing
the variables at a point of the dual space W gives the fibres.
"""

import itertools
from fractions import Fraction

from .ainfcat import AInfCategory, TransferDatum, homotopy_transfer
from .bimod import Bimodule, BimoduleMap, diagonal
from .exactlin import CochainComplex, GradedSpace, solve
from .poly import (p_add, p_as_fraction, p_const, p_eval, p_is_const, p_mul,
                   p_normalize, p_scale)


class NCLinearSystem:

    def __init__(self, carrier):
        self.carrier = carrier

    def gens_of_weight(self, w):
        out = {}
        for pair, sp in self.carrier.homs.items():
            names = [n for n in sp.names() if sp.weight(n) == w]
            if names:
                out[pair] = names
        return out


def validate_system(l):
    """Violations of the linear-system invariants: a nonempty base in even
    degrees, and hom spaces generated in weights 0 and -1.  (Homogeneity and
    multilinearity of the compositions are enforced by the carrier itself.)"""
    c = l.carrier
    violations = []
    if not c.variables:
        violations.append(("no base variables",))
    for v, d in c.variables.items():
        if d % 2:
            violations.append(("odd variable degree", v, d))
    for pair in sorted(c.homs):
        sp = c.homs[pair]
        for (n, d, w) in sp.basis:
            if w not in (0, -1):
                violations.append(("generator weight", pair, n, w))
    return violations


def ambient(l):
    """The weight-0 part, as a plain category (over Q)."""
    c = l.carrier
    homs = {}
    for pair, sp in c.homs.items():
        basis = [b for b in sp.basis if b[2] == 0]
        if basis:
            homs[pair] = GradedSpace(basis)
    mu = {}
    for inputs, outs in c.mu.items():
        if all(c.weight(k) == 0 for k in inputs):
            # weight homogeneity forces constant coefficients here
            row = {o: cc for o, cc in outs.items()}
            for o, cc in row.items():
                assert c.weight(o) == 0 and p_is_const(cc)
            if row:
                mu[inputs] = row
    return AInfCategory(c.objects, homs, c.units, mu, modulus=c.modulus)


def dual_bundle(l, base=None):
    """The weight -1 generators, shifted up by one, as a bimodule over the
    ambient category; the structure maps are the weight -1 components of the
    carrier compositions with one weight -1 input."""
    c = l.carrier
    a = base if base is not None else ambient(l)
    spaces = {}
    for pair, sp in c.homs.items():
        basis = [(n, d + 1, 0) for (n, d, w) in sp.basis if w == -1]
        if basis:
            spaces[pair] = GradedSpace(basis)
    mu = {}
    for inputs, outs in c.mu.items():
        split = _one_low_input(c, inputs)
        if split is None:
            continue
        left, y, right = split
        row = {o: cc for o, cc in outs.items() if c.weight(o) == -1}
        if row:
            mu[(left, y, right)] = row
    return Bimodule(a, spaces, mu)


def _one_low_input(c, inputs):
    """Split a composable tuple into (left, q, right) if exactly one input has
    weight -1 and the rest have weight 0; None otherwise."""
    low = [j for j, k in enumerate(inputs) if c.weight(k) == -1]
    if len(low) != 1:
        return None
    if any(c.weight(k) not in (0, -1) for k in inputs):
        return None
    j = low[0]
    return inputs[:j], inputs[j], inputs[j + 1:]


def sections(l):
    """The family of bimodule maps sigma_v: Q -> Delta_A, one per variable:
    the variable-linear weight-0 components of the carrier compositions with
    one weight -1 input.  sigma_v has degree -|v|."""
    c = l.carrier
    a = ambient(l)
    q = dual_bundle(l, base=a)
    da = diagonal(a)
    phi = {v: {} for v in c.variables}
    for inputs, outs in c.mu.items():
        split = _one_low_input(c, inputs)
        if split is None:
            continue
        left, y, right = split
        for o, cc in outs.items():
            if c.weight(o) != 0:
                continue
            for mono, val in cc.items():
                assert len(mono) == 1
                row = phi[mono[0]].setdefault((left, y, right), {})
                row[o] = p_add(row.get(o, {}), p_const(val))
    return {v: BimoduleMap(q, da, phi[v], deg=-c.variables[v])
            for v in sorted(c.variables)}


class SplittingChoice:
    """A change of splitting: alpha maps each weight -1 generator to a vector
    over the weight-0 generators with single-variable coefficients (a
    degree -1 map Q -> A (x) V)."""

    def __init__(self, l, alpha):
        c = l.carrier
        self.alpha = {}
        for key, vec in alpha.items():
            assert c.weight(key) == -1, key
            row = {}
            for out, cc in vec.items():
                cc = p_normalize(cc)
                if not cc:
                    continue
                assert c.weight(out) == 0, out
                assert out[0] == key[0], (key, out)
                for mono in cc:
                    assert len(mono) == 1
                    dd = c.degree(out) + c.variables[mono[0]] - c.degree(key)
                    if c.modulus is None:
                        assert dd == 0, (key, out, mono)
                    else:
                        assert dd % c.modulus == 0
                row[out] = cc
            if row:
                self.alpha[key] = row

    def apply(self, vec):
        out = {}
        for k, cc in vec.items():
            for o, m in self.alpha.get(k, {}).items():
                out[o] = p_add(out.get(o, {}), p_mul(cc, m))
        return {k: v for k, v in out.items() if v}


def change_splitting(l, s):
    """The same system written in the new splitting: conjugate the carrier by
    the automorphism q -> q + alpha(q) (identity on weight 0)."""
    c = l.carrier

    def fwd(key):
        vec = {key: p_const(1)}
        return p_add_vec(vec, s.apply({key: p_const(1)}))

    # candidate input tuples: existing keys, plus every variant obtained by
    # swapping an alpha-target generator back to its alpha-source (only those
    # can acquire new operations under conjugation)
    back = {}
    for qkey, row in s.alpha.items():
        for okey in row:
            back.setdefault(okey, []).append(qkey)
    keys = set()
    for inputs in c.mu:
        choices = [[k] + back.get(k, []) for k in inputs]
        keys.update(itertools.product(*choices))
    mu = {}
    for inputs in sorted(keys):
        img = c.mu_list([fwd(k) for k in inputs])
        if not img:
            continue
        # apply the inverse automorphism (id - alpha) to the output
        img = p_add_vec(img, _neg_vec(s.apply(img)))
        if img:
            mu[inputs] = img
    cat = AInfCategory(c.objects, c.homs, c.units, mu, modulus=c.modulus,
                       variables=c.variables)
    return NCLinearSystem(cat)


def p_add_vec(u, v):
    out = dict(u)
    for k, cc in v.items():
        out[k] = p_add(out.get(k, {}), cc)
    return {k: cc for k, cc in out.items() if cc}


def _neg_vec(v):
    return {k: p_scale(cc, -1) for k, cc in v.items()}


def fibre(l, w, modulus=None):
    """Specialize the system at a point w of W (a dict variable -> value).
    For w supported on variables of one common degree the result keeps the
    integral grading (degree of a generator shifts by that degree times the
    weight); otherwise the grading degrades to Z/2 (or the given even
    modulus)."""
    c = l.carrier
    degs = sorted({c.variables[v] for v, val in w.items() if Fraction(val)})
    values = {v: Fraction(w.get(v, 0)) for v in c.variables}
    if len(degs) <= 1:
        vdeg = degs[0] if degs else 0
        mod = c.modulus

        def newdeg(d, wt):
            d = d + vdeg * wt
            return d % mod if mod is not None else d
    else:
        mod = modulus if modulus is not None else 2
        assert mod > 0 and mod % 2 == 0

        def newdeg(d, wt):
            return d % mod
    homs = {}
    for pair, sp in c.homs.items():
        homs[pair] = GradedSpace([(n, newdeg(d, wt), 0)
                                  for (n, d, wt) in sp.basis])
    mu = {}
    for inputs, outs in c.mu.items():
        row = {}
        for o, cc in outs.items():
            val = p_eval(cc, values)
            if val:
                row[o] = p_const(val)
        if row:
            mu[inputs] = row
    return AInfCategory(c.objects, homs, c.units, mu, modulus=mod)


def system_from_bimodule(a, q, var="v", vdeg=0):
    """The linear system carried by A + Q[1] over Q[var] with zero sections:
    every fibre is the trivial extension of a by q."""
    from .ainfcat import trivial_extension
    t = trivial_extension(a, q)
    homs = {}
    for pair, sp in t.homs.items():
        homs[pair] = GradedSpace([
            (n, d, -1 if n.startswith("q.") else 0) for (n, d, w) in sp.basis])
    cat = AInfCategory(t.objects, homs, t.units, t.mu, modulus=t.modulus,
                       variables={var: vdeg})
    return NCLinearSystem(cat)


# ---------------------------------------------------------------------------
# weight truncation


def weight_contraction(m):
    """A base-linear contraction of the quotient of m by the subcomplex
    generated (over the polynomial base) in weights 0 and -1, with the side
    conditions needed for transfer (h vanishes on the subcomplex, h^2 = 0).
    Raises ValueError when the quotient is not acyclic, i.e. when the
    inclusion of the subcomplex is not a homotopy equivalence."""
    variables = sorted(m.variables)
    h = {}
    for pair in sorted(m.homs):
        sp = m.homs[pair]
        low = [n for n in sp.names() if sp.weight(n) <= -2]
        if not low:
            continue
        # quotient differential: components on the low generators only
        dq = {}
        for n in low:
            out = {}
            for (opair, oname), cc in m.mu.get(((pair, n),), {}).items():
                if sp.weight(oname) <= -2:
                    for mono, val in cc.items():
                        out[(oname, mono)] = val
            dq[n] = out
        hvals = {}
        for wslice in sorted({sp.weight(n) for n in low}, reverse=True):
            _solve_slice(m, pair, sp, low, dq, hvals, wslice, variables)
        for n, row in hvals.items():
            vec = {}
            for (g2, mono), val in row.items():
                key = (pair, g2)
                vec[key] = p_add(vec.get(key, {}), {mono: val})
            vec = {k: v for k, v in vec.items() if v}
            if vec:
                h[(pair, n)] = vec
    # enforce the side conditions: replacing h by h d h keeps the contraction
    # identity and forces h^2 = 0
    return _hdh(m, h)


def _monomials(variables, length):
    return list(itertools.combinations_with_replacement(variables, length))


def _slice_basis(m, sp, low, wslice, variables):
    basis = []
    for g in low:
        length = sp.weight(g) - wslice
        if length < 0:
            continue
        for mono in _monomials(variables, length):
            mdeg = sum(m.variables[v] for v in mono)
            d = sp.degree(g) + mdeg
            if m.modulus is not None:
                d %= m.modulus
            basis.append(((g, tuple(sorted(mono))), d))
    return basis


def _solve_slice(m, pair, sp, low, dq, hvals, wslice, variables):
    gens = [g for g in low if sp.weight(g) == wslice]
    if not gens:
        return
    basis = _slice_basis(m, sp, low, wslice, variables)
    deg_of = dict(basis)
    names = [b for (b, _) in basis]
    idx = {b: i for i, b in enumerate(names)}

    def d_of(elem):
        g, mono = elem
        out = {}
        for (g2, m2), val in dq[g].items():
            key = (g2, tuple(sorted(mono + m2)))
            out[key] = out.get(key, Fraction(0)) + val
        return {k: v for k, v in out.items() if v}

    def h_known(elem):
        g, mono = elem
        row = hvals[g]
        out = {}
        for (g2, m2), val in row.items():
            key = (g2, tuple(sorted(mono + m2)))
            out[key] = out.get(key, Fraction(0)) + val
        return {k: v for k, v in out.items() if v}

    # unknowns: coordinates of h(g) in the degree(g)-1 part of the slice
    cols = []
    for g in gens:
        want = sp.degree(g) - 1
        if m.modulus is not None:
            want %= m.modulus
        for b in names:
            if deg_of[b] == want:
                cols.append((g, b))
    ci = {c: j for j, c in enumerate(cols)}
    rows = []
    rhs = []
    for g in gens:
        # equation: d(h(g)) + h(d(g)) = g, one row per slice basis element
        eq = {}
        known = {}
        for (g2, m2), val in dq[g].items():
            elem = (g2, tuple(sorted(m2)))
            if sp.weight(g2) == wslice:
                # h of a same-slice generator is an unknown
                assert m2 == ()
                for b in names:
                    if (g2, b) in ci:
                        eq.setdefault(b, {})[(g2, b)] = \
                            eq.get(b, {}).get((g2, b), Fraction(0)) + val
            else:
                for k2, v2 in h_known(elem).items():
                    known[k2] = known.get(k2, Fraction(0)) + val * v2
        # d applied to the unknown vector
        dcols = {}
        for (g0, b) in cols:
            if g0 != g:
                continue
            for k2, v2 in d_of(b).items():
                dcols.setdefault(k2, {})[(g0, b)] = \
                    dcols.get(k2, {}).get((g0, b), Fraction(0)) + v2
        targets = set(dcols) | set(known) | {(g, ())} | set(eq)
        for tgt in sorted(targets):
            row = [Fraction(0)] * len(cols)
            for col, v2 in dcols.get(tgt, {}).items():
                row[ci[col]] += v2
            for col, v2 in eq.get(tgt, {}).items():
                row[ci[col]] += v2
            want = Fraction(1) if tgt == (g, ()) else Fraction(0)
            rows.append(row)
            rhs.append(want - known.get(tgt, Fraction(0)))
    sol = solve(rows, rhs) if cols else (
        [] if all(x == 0 for x in rhs) else None)
    if sol is None:
        raise ValueError(
            "weight truncation: the high-weight quotient of %r is not "
            "acyclic in weight %d" % (pair, wslice))
    for g in gens:
        hvals[g] = {}
    for j, (g, b) in enumerate(cols):
        if sol[j]:
            hvals[g][b] = sol[j]


def _happly(h, vec):
    out = {}
    for k, cc in vec.items():
        for o, mm in h.get(k, {}).items():
            out[o] = p_add(out.get(o, {}), p_mul(cc, mm))
    return {k: v for k, v in out.items() if v}


def _hdh(m, h):
    out = {}
    for key in h:
        vec = _happly(h, m.mu1(_happly(h, {key: p_const(1)})))
        if vec:
            out[key] = vec
    return out


def weight_truncate_transfer(m, dmax=2, h=None, td=None):
    """Transfer of a weight-graded category (with no positive weights) onto
    its weight-{0,-1} generated subcomplex.  The compositions agree with
    those of m whenever the input weights sum to at least -1; this is
    asserted entry-wise."""
    for pair, sp in m.homs.items():
        for (n, d, w) in sp.basis:
            assert w <= 0, ("positive weight", pair, n)
    if td is None:
        sub = {pair: [n for n in sp.names() if sp.weight(n) >= -1]
               for pair, sp in m.homs.items()}
        if h is None:
            h = weight_contraction(m)
        td = TransferDatum(m, sub, h)
    cat, functor = homotopy_transfer(td, dmax)
    for inputs, outs in m.mu.items():
        if len(inputs) > dmax:
            continue
        if not all(td.in_sub(k) for k in inputs):
            continue
        if sum(m.weight(k) for k in inputs) < -1:
            continue
        assert cat.mu.get(inputs, {}) == outs, \
            ("transfer changed a protected entry", inputs)
    return NCLinearSystem(cat)


# ---------------------------------------------------------------------------
# the divisor-from-localisation pipeline


def weight_zero_dims(cat):
    """Cohomology dimensions of the weight-0 subcomplexes (whose differential
    entries are scalars, by weight homogeneity)."""
    out = {}
    for pair, sp in cat.homs.items():
        basis = [b for b in sp.basis if b[2] == 0]
        if not basis:
            continue
        space = GradedSpace(basis)
        entries = {}
        for inputs, outs in cat.mu.items():
            if len(inputs) != 1 or inputs[0][0] != pair:
                continue
            if cat.weight(inputs[0]) != 0:
                continue
            for o, cc in outs.items():
                if cat.weight(o) == 0:
                    entries[(inputs[0][1], o[1])] = p_as_fraction(cc)
        dims = CochainComplex(space, entries,
                              modulus=cat.modulus).cohomology_dims()
        if dims:
            out[pair] = dims
    return out


def divisor_pipeline(d_ord, s, lmax, dmax=2):
    """Localise the weight-graded category d_ord at the weight-0 cocycles s
    (strings of length at most lmax), check that the weight-0 cohomology has
    stabilized against lmax - 1, and truncate to a linear system generated in
    weights {0, -1}."""
    from .twloc import LocalisationDatum, localised_category
    assert lmax >= 2, "need lmax >= 2 for the stabilization check"
    ld = LocalisationDatum(d_ord, s, lmax)
    loc, meta = localised_category(ld, dmax=dmax)
    ld0 = LocalisationDatum(d_ord, s, lmax - 1)
    loc0, _ = localised_category(ld0, dmax=1)
    if weight_zero_dims(loc) != weight_zero_dims(loc0):
        raise ValueError("localised weight-zero cohomology not stabilized "
                         "at lmax = %d" % lmax)
    out = weight_truncate_transfer(loc, dmax=dmax)
    # the ambient part is exactly the weight-0 part of the localisation
    amb = ambient(out)
    for inputs, outs in loc.mu.items():
        if len(inputs) <= dmax and all(loc.weight(k) == 0 for k in inputs):
            assert amb.mu.get(inputs, {}) == outs
    for inputs in amb.mu:
        assert inputs in loc.mu
    return out
