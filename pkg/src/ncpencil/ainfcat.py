"""Finite strictly unital A-infinity categories.

Conventions: mu^d takes inputs in right-to-left order (x_d, ..., x_1) where
x_1 in A(X0,X1), x_2 in A(X1,X2), ..., and lands in A(X0,Xd), lowering the
degree by d-2.  Basis elements are keyed by ((X0,X1), name).  Structure
constants are polynomials in the (optional) base variables, so the same class
carries both plain categories and weight-graded categories over a polynomial
base; plain categories have constant coefficients throughout.
"""

import itertools
from fractions import Fraction

from .exactlin import CochainComplex, GradedSpace, span_coords
from .poly import (p_add, p_as_fraction, p_const, p_is_const, p_mul,
                   p_normalize, p_scale)


class AInfCategory:

    def __init__(self, objects, homs, units, mu, modulus=None, variables=None):
        """
        objects: list of names.
        homs: dict {(X0,X1): GradedSpace}; missing pairs are zero.
        units: dict {X: basis name of the unit in homs[(X,X)]}.
        mu: dict {input key tuple: {output key: coefficient}}, inputs in
            right-to-left order; coefficients are Fractions or polynomial
            dicts over the base variables.
        modulus: None for Z-grading, or an even integer 2N for Z/2N.
        variables: dict {name: homological degree} for the polynomial base;
            every variable has weight -1.
        """
        if modulus is not None:
            assert modulus > 0 and modulus % 2 == 0, "modulus must be even"
        self.modulus = modulus
        self.objects = list(objects)
        self.variables = dict(variables or {})
        self.homs = {}
        for pair, sp in homs.items():
            if sp.dim() == 0:
                continue
            if modulus is not None:
                sp = GradedSpace([(n, d % modulus, w) for (n, d, w) in sp.basis])
            self.homs[pair] = sp
        self.units = dict(units)
        for x, name in self.units.items():
            sp = self.homs.get((x, x))
            assert sp is not None and name in sp, "missing unit %r" % x
            assert sp.degree(name) == 0 and sp.weight(name) == 0, \
                "unit must have degree 0 and weight 0"
        self.mu = {}
        for inputs, outs in mu.items():
            inputs = tuple(inputs)
            self._check_composable(inputs)
            row = {}
            for out, c in outs.items():
                c = p_normalize(c)
                if not c:
                    continue
                self._check_entry(inputs, out, c)
                row[out] = c
            if row:
                assert inputs not in self.mu, "duplicate mu entry %r" % (inputs,)
                self.mu[inputs] = row

    # -- bookkeeping -------------------------------------------------------

    def pair_of(self, key):
        return key[0]

    def degree(self, key):
        return self.homs[key[0]].degree(key[1])

    def weight(self, key):
        return self.homs[key[0]].weight(key[1])

    def rdeg(self, key):
        """Reduced degree mod 2 (the modulus is even, so this is intrinsic)."""
        return (self.degree(key) - 1) % 2

    def _check_composable(self, inputs):
        assert inputs, "empty input tuple"
        for k in inputs:
            pair = k[0]
            assert pair in self.homs and k[1] in self.homs[pair], \
                "unknown basis element %r" % (k,)
        for a, b in zip(inputs, inputs[1:]):
            # a is to the left of b, so source(a) == target(b)
            assert a[0][0] == b[0][1], "non-composable inputs %r" % (inputs,)

    def _check_entry(self, inputs, out, coeff):
        pair = (inputs[-1][0][0], inputs[0][0][1])
        assert out[0] == pair and out[0] in self.homs and out[1] in self.homs[out[0]], \
            "output %r not in hom %r" % (out, pair)
        d = len(inputs)
        din = sum(self.degree(k) for k in inputs)
        win = sum(self.weight(k) for k in inputs)
        for mono in coeff:
            mdeg = sum(self.variables[v] for v in mono)
            dd = self.degree(out) + mdeg - (din + 2 - d)
            if self.modulus is None:
                assert dd == 0, ("degree violation", inputs, out, mono)
            else:
                assert dd % self.modulus == 0, ("degree violation", inputs, out)
            assert self.weight(out) - len(mono) == win, \
                ("weight violation", inputs, out, mono)

    # -- evaluation --------------------------------------------------------

    def mu_entry(self, inputs):
        return self.mu.get(tuple(inputs), {})

    def mu_list(self, vecs):
        """Multilinear extension: vecs is a list of vectors (dicts
        key -> polynomial) in right-to-left order."""
        out = {}
        for combo in itertools.product(*[v.items() for v in vecs]):
            keys = tuple(k for k, _ in combo)
            row = self.mu.get(keys)
            if not row:
                continue
            c = p_const(1)
            for _, x in combo:
                c = p_mul(c, x)
            for o, m in row.items():
                out[o] = p_add(out.get(o, {}), p_mul(c, m))
        return {k: v for k, v in out.items() if v}

    def mu1(self, vec):
        out = {}
        for k, c in vec.items():
            for o, m in self.mu.get((k,), {}).items():
                out[o] = p_add(out.get(o, {}), p_mul(c, m))
        return {k: v for k, v in out.items() if v}

    def hom_keys(self, pair):
        sp = self.homs.get(pair)
        return [(pair, n) for n in sp.names()] if sp else []

    def all_keys(self):
        out = []
        for pair in sorted(self.homs):
            out.extend(self.hom_keys(pair))
        return out

    def composable_tuples(self, arity):
        """All composable basis tuples (x_d, ..., x_1) of the given arity."""
        chains = [[k] for k in self.all_keys()]  # rightmost first
        for _ in range(arity - 1):
            nxt = []
            for ch in chains:
                tgt = ch[-1][0][1]
                for pair in self.homs:
                    if pair[0] == tgt:
                        for k in self.hom_keys(pair):
                            nxt.append(ch + [k])
            chains = nxt
        return [tuple(reversed(ch)) for ch in chains]

    def is_plain(self):
        return not self.variables

    def hom_complex(self, pair):
        """The cochain complex (A(X0,X1), mu^1); plain categories only."""
        entries = {}
        for inputs, outs in self.mu.items():
            if len(inputs) == 1 and inputs[0][0] == pair:
                for o, c in outs.items():
                    entries[(inputs[0][1], o[1])] = p_as_fraction(c)
        return CochainComplex(self.homs[pair], entries, modulus=self.modulus)


# ---------------------------------------------------------------------------


def check_ainf(c, dmax):
    """All A-infinity associativity residuals up to total arity dmax; returns
    a list of violations (inputs, output, residual coefficient)."""
    resid = {}
    for in_inner, outs_inner in c.mu.items():
        j = len(in_inner)
        for in_outer, outs_outer in c.mu.items():
            k = len(in_outer)
            d = k + j - 1
            if d > dmax:
                continue
            for z, c1 in outs_inner.items():
                for pos in range(k):
                    if in_outer[pos] != z:
                        continue
                    right = in_outer[pos + 1:]
                    full = in_outer[:pos] + in_inner + right
                    sign = sum(c.rdeg(x) for x in right) % 2
                    for out, c2 in outs_outer.items():
                        term = p_mul(c1, c2)
                        if sign:
                            term = p_scale(term, -1)
                        key = (full, out)
                        resid[key] = p_add(resid.get(key, {}), term)
    return [(inputs, out, r) for (inputs, out), r in sorted(resid.items())
            if r]


def check_units(c):
    violations = []
    unit_keys = {((x, x), n) for x, n in c.units.items()}
    for x in c.objects:
        if x not in c.units:
            violations.append(("missing unit", x))
    for x, n in c.units.items():
        e = ((x, x), n)
        if c.mu.get((e,)):
            violations.append(("mu1 of unit nonzero", e))
    for pair in sorted(c.homs):
        x0, x1 = pair
        e0 = ((x0, x0), c.units[x0])
        e1 = ((x1, x1), c.units[x1])
        for k in c.hom_keys(pair):
            got = c.mu_entry((k, e0))
            want = {k: p_const(1)}
            if got != want:
                violations.append(("right unit", k, got))
            got = c.mu_entry((e1, k))
            want = {k: p_const((-1) ** (c.degree(k) % 2))}
            if got != want:
                violations.append(("left unit", k, got))
    for inputs, outs in sorted(c.mu.items()):
        if len(inputs) > 2 and any(k in unit_keys for k in inputs):
            violations.append(("higher product with unit", inputs, outs))
    return violations


# ---------------------------------------------------------------------------
# cohomology category


class CohomologyCategory:
    """H^* of a plain A-infinity category: graded dimensions per hom pair and
    the induced associative product on a deterministic echelon basis."""

    def __init__(self, cat):
        assert cat.is_plain()
        self.cat = cat
        self.dims = {}
        self.reps = {}       # label -> (pair, vector dict key->Fraction)
        self._proj = {}      # (pair, degree) -> (reps, img, slice names)
        self.labels = []
        for pair in sorted(cat.homs):
            cx = cat.hom_complex(pair)
            dims = cx.cohomology_dims()
            if dims:
                self.dims[pair] = dims
            for deg in sorted(dims):
                reps, img, names = cx.cohomology_reps(deg)
                self._proj[(pair, deg)] = (reps, img, names)
                for idx, v in enumerate(reps):
                    label = "h[%s,%s|%d]%d" % (pair[0], pair[1], deg, idx)
                    vec = {(pair, names[i]): v[i]
                           for i in range(len(names)) if v[i] != 0}
                    self.reps[label] = (pair, vec)
                    self.labels.append(label)

    def degree(self, label):
        pair, vec = self.reps[label]
        return self.cat.degree(next(iter(vec)))

    def project(self, pair, vec):
        """Express a cocycle (dict key -> Fraction) in H coordinates."""
        if not vec:
            return {}
        deg = self.cat.degree(next(iter(vec)))
        if (pair, deg) not in self._proj:
            return None
        reps, img, names = self._proj[(pair, deg)]
        idx = {n: i for i, n in enumerate(names)}
        coords = [Fraction(0)] * len(names)
        for k, c in vec.items():
            coords[idx[k[1]]] = Fraction(c)
        sol = span_coords(reps + img, coords)
        if sol is None:
            return None
        out = {}
        for i in range(len(reps)):
            if sol[i] != 0:
                label = "h[%s,%s|%d]%d" % (pair[0], pair[1], deg, i)
                out[label] = sol[i]
        return out

    def product(self, l2, l1):
        """Cohomology-level composition of representatives l2 . l1, as a dict
        of H-basis coefficients; None if not composable."""
        p2, v2 = self.reps[l2]
        p1, v1 = self.reps[l1]
        if p1[1] != p2[0]:
            return None
        sign = (-1) ** (self.degree(l1) % 2)
        prod = self.cat.mu_list([
            {k: p_const(c) for k, c in v2.items()},
            {k: p_const(c) for k, c in v1.items()}])
        vec = {k: p_as_fraction(c) * sign for k, c in prod.items()}
        vec = {k: c for k, c in vec.items() if c != 0}
        if not vec:
            return {}
        return self.project((p1[0], p2[1]), vec)

    def unit_label(self, obj):
        e = ((obj, obj), self.cat.units[obj])
        coords = self.project((obj, obj), {e: Fraction(1)})
        return coords


def cohomology_category(cat):
    return CohomologyCategory(cat)


# ---------------------------------------------------------------------------
# homotopy transfer


class TransferDatum:
    """Ambient category B, a subspace spanned by a subset of basis elements
    per hom pair, and a homotopy h of degree -1 vanishing on the subspace.

    h: dict {key: {key: coefficient}} (output vector per basis element)."""

    def __init__(self, ambient, sub, h):
        self.ambient = ambient
        self.sub = {pair: list(names) for pair, names in sub.items()
                    if names}
        self.h = {k: {o: p_normalize(c) for o, c in row.items() if p_normalize(c)}
                  for k, row in h.items()}
        self.h = {k: row for k, row in self.h.items() if row}

    def sub_keys(self, pair):
        return [(pair, n) for n in self.sub.get(pair, [])]

    def in_sub(self, key):
        return key[1] in self.sub.get(key[0], ())

    def h_apply(self, vec):
        out = {}
        for k, c in vec.items():
            for o, m in self.h.get(k, {}).items():
                out[o] = p_add(out.get(o, {}), p_mul(c, m))
        return {k: v for k, v in out.items() if v}

    def pi_apply(self, vec):
        b = self.ambient
        out = dict(vec)
        for v in (b.mu1(self.h_apply(vec)), self.h_apply(b.mu1(vec))):
            for k, c in v.items():
                out[k] = p_add(out.get(k, {}), p_scale(c, -1))
        return {k: v for k, v in out.items() if v}

    def validate(self):
        b = self.ambient
        errors = []
        mod = b.modulus
        for k, row in self.h.items():
            for o, c in row.items():
                dd = b.degree(o) - b.degree(k)
                for mono in c:
                    md = sum(b.variables[v] for v in mono)
                    ok = (dd + md == -1) if mod is None else (dd + md + 1) % mod == 0
                    if not ok:
                        errors.append(("h degree", k, o))
                    if b.weight(o) - len(mono) != b.weight(k):
                        errors.append(("h weight", k, o))
        for x, n in b.units.items():
            if not self.in_sub(((x, x), n)):
                errors.append(("unit not in subspace", x))
        for key in b.all_keys():
            vec = {key: p_const(1)}
            if self.in_sub(key):
                if self.h_apply(vec):
                    errors.append(("h nonzero on subspace", key))
                img = b.mu1(vec)
                if any(not self.in_sub(k) for k in img):
                    errors.append(("subspace not a subcomplex", key))
                pi = self.pi_apply(vec)
                if pi != vec:
                    errors.append(("pi not identity on subspace", key))
            if self.h_apply(self.h_apply(vec)):
                errors.append(("h squared nonzero", key))
            if self.pi_apply(self.h_apply(vec)):
                errors.append(("pi h nonzero", key))
            if any(not self.in_sub(k) for k in self.pi_apply(vec)):
                errors.append(("pi image not in subspace", key))
        return errors


def _lam(td, inputs, cache):
    """Tree-sum for the transferred operations, arity >= 2: the sum over all
    ways of composing mu_B with h-corrected sub-trees.  In the reduced-degree
    picture all the sub-tree operators have even degree, so no Koszul signs
    appear."""
    inputs = tuple(inputs)
    if inputs in cache:
        return cache[inputs]
    b = td.ambient
    d = len(inputs)
    total = {}
    for k in range(2, d + 1):
        for cuts in itertools.combinations(range(1, d), k - 1):
            bounds = (0,) + cuts + (d,)
            blocks = [inputs[bounds[i]:bounds[i + 1]] for i in range(k)]
            vecs = []
            for blk in blocks:
                if len(blk) == 1:
                    vecs.append({blk[0]: p_const(1)})
                else:
                    vecs.append(td.h_apply(_lam(td, blk, cache)))
            term = b.mu_list(vecs)
            for key, c in term.items():
                total[key] = p_add(total.get(key, {}), c)
    total = {k: v for k, v in total.items() if v}
    cache[inputs] = total
    return total


def homotopy_transfer(td, dmax):
    """Transferred A-infinity structure on the subspace, together with the
    quasi-equivalence functor components (linear term = inclusion)."""
    errors = td.validate()
    if errors:
        raise ValueError("invalid transfer datum: %r" % errors[:5])
    b = td.ambient
    homs = {}
    for pair, names in sorted(td.sub.items()):
        sp = b.homs[pair]
        homs[pair] = GradedSpace([x for x in sp.basis if x[0] in names])
    mu = {}
    for key in b.all_keys():
        if td.in_sub(key):
            img = b.mu1({key: p_const(1)})
            if img:
                mu[(key,)] = img
    cache = {}
    functor = {}
    sub_keys = [k for k in b.all_keys() if td.in_sub(k)]
    for d in range(2, dmax + 1):
        for inputs in _composable_from(b, sub_keys, d):
            lam = _lam(td, inputs, cache)
            out = td.pi_apply(lam)
            if out:
                assert all(td.in_sub(k) for k in out)
                mu[inputs] = out
            f = td.h_apply(lam)
            if f:
                functor[inputs] = f
    cat = AInfCategory(b.objects, homs, b.units, mu, modulus=b.modulus,
                       variables=b.variables)
    return cat, functor


def _composable_from(cat, keys, arity):
    by_src = {}
    for k in keys:
        by_src.setdefault(k[0][0], []).append(k)
    chains = [[k] for k in keys]  # building right-to-left: rightmost first
    for _ in range(arity - 1):
        chains = [ch + [k] for ch in chains
                  for k in by_src.get(ch[-1][0][1], [])]
        chains = [ch for ch in chains]
    # chain [x1, x2, ...] has x1 rightmost; need sources chained:
    # x2 in A(t(x1), .) i.e. x2 source == x1 target -- by_src keyed by source
    return [tuple(reversed(ch)) for ch in chains]


# ---------------------------------------------------------------------------


def trivial_extension(a, q):
    """The square-zero extension category of a by the shifted bimodule q[1]:
    hom spaces A + Q[1]; compositions are mu_A plus the structure maps of q
    verbatim (the two shift-sign twists involved cancel); everything with two
    or more inputs in the q part vanishes."""
    from .bimod import Bimodule  # local import to avoid a cycle
    assert isinstance(q, Bimodule)
    assert q.base.objects == a.objects
    homs = {}
    rename = {}
    for pair in sorted(set(a.homs) | set(q.spaces)):
        basis = list(a.homs[pair].basis) if pair in a.homs else []
        if pair in q.spaces:
            for (n, d, w) in q.spaces[pair].basis:
                nn = "q.%s" % n
                rename[(pair, n)] = (pair, nn)
                basis.append((nn, d - 1, w))
        if basis:
            homs[pair] = GradedSpace(basis)
    mu = {k: dict(v) for k, v in a.mu.items()}
    for (left, y, right), outs in q.mu.items():
        inputs = tuple(left) + (rename[y],) + tuple(right)
        row = {rename[o]: c for o, c in outs.items()}
        if row:
            mu[inputs] = row
    return AInfCategory(a.objects, homs, a.units, mu, modulus=a.modulus,
                        variables=a.variables)


class GradedRingPresentation:
    """A finite presentation (generators with degrees, relation list), used
    only as an assertion target for cohomology ring identifications."""

    def __init__(self, generators, relations):
        self.generators = dict(generators)
        self.relations = list(relations)


def with_strict_units(objects, homs, units, mu, modulus=None, variables=None):
    """Build a category from the operations NOT involving units, filling in
    the strict unit actions mu^2(x, e) = x and mu^2(e, x) = (-1)^{|x|} x."""
    full = {tuple(k): dict(v) for k, v in mu.items()}
    cat = AInfCategory(objects, homs, units, {}, modulus=modulus,
                       variables=variables)
    for pair in sorted(cat.homs):
        x0, x1 = pair
        e0 = ((x0, x0), units[x0])
        e1 = ((x1, x1), units[x1])
        for k in cat.hom_keys(pair):
            if k != e0:
                full.setdefault((k, e0), {})[k] = p_const(1)
            full.setdefault((e1, k), {})[k] = \
                p_const((-1) ** (cat.degree(k) % 2))
    return AInfCategory(objects, homs, units, full, modulus=modulus,
                        variables=variables)
