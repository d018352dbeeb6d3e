"""A-infinity bimodules and one-sided modules over a finite category.

Entry layout mirrors the category conventions: a bimodule structure map
mu^{s;1;r} is stored under the key (left, y, right) where left is the tuple
(x_{r+s}, ..., x_{r+1}) and right the tuple (x_r, ..., x_1), both in
right-to-left order; it lowers degree by r+s-1.

Koszul rule used throughout: applying an operation to an inner block costs
(-1)^t, t = sum of the reduced degrees of all inputs strictly to the right of
the block; module elements count with their unreduced degree.  This
reproduces the sign conventions of the category relations on the nose.
"""

import itertools
from fractions import Fraction

from .exactlin import CochainComplex, GradedSpace, mat_rank, span_coords
from .poly import p_add, p_as_fraction, p_const, p_mul, p_normalize, p_scale

ARITY_CAP = 4  # default total-arity cap for relation checking


def _p(cat, key):
    return key[0]


class Bimodule:

    def __init__(self, base, spaces, mu):
        self.base = base
        self.modulus = base.modulus
        self.spaces = {}
        for pair, sp in spaces.items():
            if sp.dim() == 0:
                continue
            if self.modulus is not None:
                sp = GradedSpace([(n, d % self.modulus, w) for (n, d, w) in sp.basis])
            self.spaces[pair] = sp
        self.mu = {}
        for (left, y, right), outs in mu.items():
            left, right = tuple(left), tuple(right)
            self._check_shape(left, y, right)
            row = {}
            for out, c in outs.items():
                c = p_normalize(c)
                if not c:
                    continue
                self._check_entry(left, y, right, out, c)
                row[out] = c
            if row:
                self.mu[(left, y, right)] = row

    # bookkeeping ----------------------------------------------------------

    def qdeg(self, key):
        return self.spaces[key[0]].degree(key[1])

    def qwt(self, key):
        return self.spaces[key[0]].weight(key[1])

    def q_keys(self, pair):
        sp = self.spaces.get(pair)
        return [(pair, n) for n in sp.names()] if sp else []

    def all_q_keys(self):
        out = []
        for pair in sorted(self.spaces):
            out.extend(self.q_keys(pair))
        return out

    def _check_shape(self, left, y, right):
        b = self.base
        for k in left + right:
            assert k[0] in b.homs and k[1] in b.homs[k[0]], ("bad A key", k)
        assert y[0] in self.spaces and y[1] in self.spaces[y[0]], ("bad module key", y)
        for a, c in zip(right, right[1:]):
            assert a[0][0] == c[0][1], ("right chain broken", right)
        if right:
            assert y[0][0] == right[0][0][1], ("module slot mismatch", y, right)
        if left:
            assert left[-1][0][0] == y[0][1], ("module slot mismatch", left, y)
        for a, c in zip(left, left[1:]):
            assert a[0][0] == c[0][1], ("left chain broken", left)

    def out_pair(self, left, y, right):
        src = right[-1][0][0] if right else y[0][0]
        tgt = left[0][0][1] if left else y[0][1]
        return (src, tgt)

    def _check_entry(self, left, y, right, out, coeff):
        b = self.base
        pair = self.out_pair(left, y, right)
        assert out[0] == pair and out[0] in self.spaces and \
            out[1] in self.spaces[out[0]], ("bad output", out, pair)
        r, s = len(right), len(left)
        din = sum(b.degree(k) for k in left + right) + self.qdeg(y)
        win = sum(b.weight(k) for k in left + right) + self.qwt(y)
        for mono in coeff:
            mdeg = sum(b.variables[v] for v in mono)
            dd = self.qdeg(out) + mdeg - (din + 1 - r - s)
            if self.modulus is None:
                assert dd == 0, ("degree violation", left, y, right, out)
            else:
                assert dd % self.modulus == 0, ("degree violation", left, y, right, out)
            assert self.qwt(out) - len(mono) == win, \
                ("weight violation", left, y, right, out)

    def entry(self, left, y, right):
        return self.mu.get((tuple(left), y, tuple(right)), {})

    def differential_complex(self, pair):
        """(Q(pair), mu^{0;1;0}) as a cochain complex."""
        entries = {}
        for (left, y, right), outs in self.mu.items():
            if not left and not right and y[0] == pair:
                for o, c in outs.items():
                    entries[(y[1], o[1])] = p_as_fraction(c)
        return CochainComplex(self.spaces[pair], entries, modulus=self.modulus)

    def cohomology_dims(self):
        return {pair: self.differential_complex(pair).cohomology_dims()
                for pair in sorted(self.spaces)}


def _rdeg(cat, key):
    return cat.rdeg(key)


def check_bimodule(q, cap=ARITY_CAP):
    """Residuals of the bimodule equations up to total arity cap (counting
    the module slot); empty iff they vanish identically."""
    b = q.base
    resid = {}

    def acc(key, term, sign):
        if sign % 2:
            term = p_scale(term, -1)
        resid[key] = p_add(resid.get(key, {}), term)

    # inner mu_A inside the right or left block of a bimodule entry
    for (left, y, right), outs in q.mu.items():
        for in_a, outs_a in b.mu.items():
            j = len(in_a)
            if len(left) + len(right) + j - 1 + 1 > cap:
                continue
            for z, ca in outs_a.items():
                for pos in range(len(right)):
                    if right[pos] != z:
                        continue
                    newr = right[:pos] + in_a + right[pos + 1:]
                    sign = sum(_rdeg(b, x) for x in right[pos + 1:]) % 2
                    for out, c in outs.items():
                        acc((left, y, newr, out), p_mul(ca, c), sign)
                for pos in range(len(left)):
                    if left[pos] != z:
                        continue
                    newl = left[:pos] + in_a + left[pos + 1:]
                    sign = (sum(_rdeg(b, x) for x in left[pos + 1:])
                            + sum(_rdeg(b, x) for x in right)
                            + q.qdeg(y)) % 2
                    for out, c in outs.items():
                        acc((newl, y, right, out), p_mul(ca, c), sign)
    # inner bimodule op inside an outer bimodule op
    for (l1, y, r1), outs1 in q.mu.items():
        for (l2, z, r2), outs2 in q.mu.items():
            if len(l1) + len(r1) + len(l2) + len(r2) + 1 > cap:
                continue
            for zz, c1 in outs1.items():
                if zz != z:
                    continue
                full = (l2 + l1, y, r1 + r2)
                sign = sum(_rdeg(b, x) for x in r2) % 2
                for out, c2 in outs2.items():
                    acc((full[0], y, full[2], out), p_mul(c1, c2), sign)
    return [(k, v) for k, v in sorted(resid.items()) if v]


def check_bimodule_units(q):
    b = q.base
    violations = []
    unit_keys = {((x, x), n) for x, n in b.units.items()}
    for y in q.all_q_keys():
        x0, x1 = y[0]
        e0 = ((x0, x0), b.units[x0])
        e1 = ((x1, x1), b.units[x1])
        got = q.entry((), y, (e0,))
        if got != {y: p_const(1)}:
            violations.append(("right unit", y, got))
        got = q.entry((e1,), y, ())
        want = {y: p_const((-1) ** ((q.qdeg(y) - 1) % 2))}
        if got != want:
            violations.append(("left unit", y, got))
    for (left, y, right), outs in q.mu.items():
        if len(left) + len(right) > 1 and \
                any(k in unit_keys for k in left + right):
            violations.append(("higher op with unit", (left, y, right), outs))
    return violations


def validate_bimodule(q, cap=ARITY_CAP):
    return check_bimodule(q, cap) + check_bimodule_units(q)


# ---------------------------------------------------------------------------
# basic constructions


def diagonal(a):
    """The diagonal bimodule: same spaces as the category; operations are the
    category compositions twisted by the single unshift sign."""
    mu = {}
    for inputs, outs in a.mu.items():
        d = len(inputs)
        for split in range(d):
            # y at position `split` from the left: left block inputs[:split]
            left = inputs[:split]
            y = inputs[split]
            right = inputs[split + 1:]
            sign = (sum(a.rdeg(x) for x in right) + 1) % 2
            row = {o: (p_scale(c, -1) if sign else c) for o, c in outs.items()}
            key = (left, y, right)
            if key in mu:
                raise AssertionError("duplicate diagonal entry")
            mu[key] = row
    # every input slot of every entry contributes once; collapse duplicates:
    # a single category entry yields d bimodule entries (one per slot), which
    # is exactly the diagonal bimodule structure evaluated on basis elements.
    return Bimodule(a, dict(a.homs), mu)


def shift(q, k):
    """Shift q down by k: degrees lowered by k, operations twisted by the
    iterated single-shift sign."""
    if k % 2 == 0:
        sign_flip = False
    else:
        sign_flip = True
    spaces = {pair: GradedSpace([(n, d - k, w) for (n, d, w) in sp.basis])
              for pair, sp in q.spaces.items()}
    mu = {}
    for (left, y, right), outs in q.mu.items():
        if sign_flip:
            s = (sum(q.base.rdeg(x) for x in right) + 1) % 2
        else:
            s = 0
        mu[(left, y, right)] = {o: (p_scale(c, -1) if s else c)
                                for o, c in outs.items()}
    return Bimodule(q.base, spaces, mu)


def dual(q):
    """Linear dual: spaces Q^v(X0,X1) = Q(X1,X0)^v with negated gradings;
    operations defined through the canonical pairing."""
    spaces = {}
    for (x0, x1), sp in q.spaces.items():
        spaces[(x1, x0)] = GradedSpace([(n + "^", -d, -w) for (n, d, w) in sp.basis])

    def dual_key(key):
        (x0, x1), n = key
        return ((x1, x0), n + "^")

    mu = {}
    for (left, y, right), outs in q.mu.items():
        for out, c in outs.items():
            sign = q.qdeg(y) - 1  # reduced degree of the paired slot element
            cc = p_scale(c, -1) if sign % 2 else c
            key = (tuple(right), dual_key(out), tuple(left))
            mu.setdefault(key, {})
            tgt = dual_key(y)
            assert tgt not in mu[key]
            mu[key][tgt] = cc
    return Bimodule(q.base, spaces, mu)


def zero_bimodule(a):
    return Bimodule(a, {}, {})


# ---------------------------------------------------------------------------
# bimodule maps


class BimoduleMap:
    """Components phi^{s;1;r} of a degree-`deg` pre-morphism of bimodules,
    stored like bimodule entries but with outputs in the target bimodule."""

    def __init__(self, source, target, phi, deg=0):
        assert source.base is target.base
        self.source = source
        self.target = target
        self.deg = deg
        self.phi = {}
        for (left, y, right), outs in phi.items():
            left, right = tuple(left), tuple(right)
            source._check_shape(left, y, right)
            row = {}
            for out, c in outs.items():
                c = p_normalize(c)
                if not c:
                    continue
                pair = source.out_pair(left, y, right)
                assert out[0] == pair and out[1] in target.spaces[out[0]]
                r, s = len(right), len(left)
                b = source.base
                din = sum(b.degree(k) for k in left + right) + source.qdeg(y)
                dd = target.qdeg(out) - (din + deg - r - s)
                if b.modulus is None:
                    assert dd == 0, ("phi degree violation", left, y, right, out)
                else:
                    assert dd % b.modulus == 0
                row[out] = c
            if row:
                self.phi[(left, y, right)] = row

    def entry(self, left, y, right):
        return self.phi.get((tuple(left), y, tuple(right)), {})


def identity_map(q):
    phi = {((), y, ()): {y: Fraction(1)} for y in q.all_q_keys()}
    return BimoduleMap(q, q, phi)


def check_bimodule_map(f, cap=ARITY_CAP):
    """Residuals of the bimodule morphism equation (for degree-0 maps this is
    the cocycle condition); uses the differential of the dg category of
    bimodules, so it is meaningful for any degree."""
    resid = bimodule_map_differential(f, cap)
    viol = [(k, v) for k, v in sorted(resid.items()) if v]
    unit_keys = {((x, x), n) for x, n in f.source.base.units.items()}
    for (left, y, right), outs in f.phi.items():
        if any(k in unit_keys for k in left + right):
            viol.append((("unit input", left, y, right), outs))
    return viol


def bimodule_map_differential(f, cap=ARITY_CAP):
    """delta(phi) as a dict {(left, y, right, out): coefficient}:
    mu_target-compositions minus (-1)^{|phi|} phi-compositions."""
    qs, qt, b = f.source, f.target, f.source.base
    g = f.deg % 2
    resid = {}

    def acc(key, term, sign):
        if sign % 2:
            term = p_scale(term, -1)
        resid[key] = p_add(resid.get(key, {}), term)

    # mu_target applied after phi (phi passes the outer right block)
    for (l1, y, r1), outs1 in f.phi.items():
        for (l2, z, r2), outs2 in qt.mu.items():
            if len(l1) + len(r1) + len(l2) + len(r2) + 1 > cap:
                continue
            for zz, c1 in outs1.items():
                if zz != z:
                    continue
                sign = g * sum(_rdeg(b, x) for x in r2)
                for out, c2 in outs2.items():
                    acc((l2 + l1, y, r1 + r2, out), p_mul(c1, c2), sign)
    # phi applied after a structure map, with the global -(-1)^g
    for (left, y, right), outs in f.phi.items():
        for in_a, outs_a in b.mu.items():
            j = len(in_a)
            if len(left) + len(right) + j > cap:
                continue
            for z, ca in outs_a.items():
                for pos in range(len(right)):
                    if right[pos] != z:
                        continue
                    newr = right[:pos] + in_a + right[pos + 1:]
                    sign = 1 + g + sum(_rdeg(b, x) for x in right[pos + 1:])
                    for out, c in outs.items():
                        acc((left, y, newr, out), p_mul(ca, c), sign)
                for pos in range(len(left)):
                    if left[pos] != z:
                        continue
                    newl = left[:pos] + in_a + left[pos + 1:]
                    sign = (1 + g + sum(_rdeg(b, x) for x in left[pos + 1:])
                            + sum(_rdeg(b, x) for x in right) + qs.qdeg(y))
                    for out, c in outs.items():
                        acc((newl, y, right, out), p_mul(ca, c), sign)
        for (l1, yy, r1), outs_q in qs.mu.items():
            if len(l1) + len(r1) + len(left) + len(right) + 1 > cap:
                continue
            c1 = outs_q.get(y)
            if not c1:
                continue
            sign = 1 + g + sum(_rdeg(b, x) for x in right)
            for out, c in outs.items():
                acc((left + l1, yy, r1 + right, out), p_mul(c1, c), sign)
    return resid


# ---------------------------------------------------------------------------
# one-sided modules


class RightModule:
    """Spaces M(X); operations mu^{1;r}(y; x_r, ..., x_1) of degree 1-r,
    stored under (y, right_tuple)."""

    def __init__(self, base, spaces, mu):
        self.base = base
        self.modulus = base.modulus
        self.spaces = {}
        for obj, sp in spaces.items():
            if sp.dim() == 0:
                continue
            if self.modulus is not None:
                sp = GradedSpace([(n, d % self.modulus, w) for (n, d, w) in sp.basis])
            self.spaces[obj] = sp
        self.mu = {}
        for (y, right), outs in mu.items():
            right = tuple(right)
            self._check_shape(y, right)
            row = {}
            for out, c in outs.items():
                c = p_normalize(c)
                if not c:
                    continue
                self._check_entry(y, right, out, c)
                row[out] = c
            if row:
                self.mu[(y, right)] = row

    def mdeg(self, key):
        return self.spaces[key[0]].degree(key[1])

    def m_keys(self, obj):
        sp = self.spaces.get(obj)
        return [(obj, n) for n in sp.names()] if sp else []

    def all_m_keys(self):
        out = []
        for obj in sorted(self.spaces):
            out.extend(self.m_keys(obj))
        return out

    def _check_shape(self, y, right):
        b = self.base
        assert y[0] in self.spaces and y[1] in self.spaces[y[0]], y
        for k in right:
            assert k[0] in b.homs and k[1] in b.homs[k[0]], k
        for a, c in zip(right, right[1:]):
            assert a[0][0] == c[0][1], ("chain broken", right)
        if right:
            assert y[0] == right[0][0][1], ("module slot mismatch", y, right)

    def _check_entry(self, y, right, out, coeff):
        b = self.base
        obj = right[-1][0][0] if right else y[0]
        assert out[0] == obj and out[1] in self.spaces[out[0]], (out, obj)
        r = len(right)
        din = sum(b.degree(k) for k in right) + self.mdeg(y)
        for mono in coeff:
            mdeg = sum(b.variables[v] for v in mono)
            dd = self.mdeg(out) + mdeg - (din + 1 - r)
            if self.modulus is None:
                assert dd == 0, ("degree violation", y, right, out)
            else:
                assert dd % self.modulus == 0
    def entry(self, y, right):
        return self.mu.get((y, tuple(right)), {})

    def differential_complex(self, obj):
        entries = {}
        for (y, right), outs in self.mu.items():
            if not right and y[0] == obj:
                for o, c in outs.items():
                    entries[(y[1], o[1])] = p_as_fraction(c)
        return CochainComplex(self.spaces[obj], entries, modulus=self.modulus)

    def cohomology_dims(self):
        return {obj: self.differential_complex(obj).cohomology_dims()
                for obj in sorted(self.spaces)}


class LeftModule:
    """Spaces N(X); operations mu^{s;1}(x_s, ..., x_1; y) of degree 1-s,
    stored under (left_tuple, y).  In star signs a module element counts with
    its unreduced degree."""

    def __init__(self, base, spaces, mu):
        self.base = base
        self.modulus = base.modulus
        self.spaces = {}
        for obj, sp in spaces.items():
            if sp.dim() == 0:
                continue
            if self.modulus is not None:
                sp = GradedSpace([(n, d % self.modulus, w) for (n, d, w) in sp.basis])
            self.spaces[obj] = sp
        self.mu = {}
        for (left, y), outs in mu.items():
            left = tuple(left)
            self._check_shape(left, y)
            row = {}
            for out, c in outs.items():
                c = p_normalize(c)
                if not c:
                    continue
                self._check_entry(left, y, out, c)
                row[out] = c
            if row:
                self.mu[(left, y)] = row

    def mdeg(self, key):
        return self.spaces[key[0]].degree(key[1])

    def m_keys(self, obj):
        sp = self.spaces.get(obj)
        return [(obj, n) for n in sp.names()] if sp else []

    def all_m_keys(self):
        out = []
        for obj in sorted(self.spaces):
            out.extend(self.m_keys(obj))
        return out

    def _check_shape(self, left, y):
        b = self.base
        assert y[0] in self.spaces and y[1] in self.spaces[y[0]], y
        for k in left:
            assert k[0] in b.homs and k[1] in b.homs[k[0]], k
        for a, c in zip(left, left[1:]):
            assert a[0][0] == c[0][1], ("chain broken", left)
        if left:
            assert left[-1][0][0] == y[0], ("module slot mismatch", left, y)

    def _check_entry(self, left, y, out, coeff):
        b = self.base
        obj = left[0][0][1] if left else y[0]
        assert out[0] == obj and out[1] in self.spaces[out[0]], (out, obj)
        s = len(left)
        din = sum(b.degree(k) for k in left) + self.mdeg(y)
        for mono in coeff:
            mdeg = sum(b.variables[v] for v in mono)
            dd = self.mdeg(out) + mdeg - (din + 1 - s)
            if self.modulus is None:
                assert dd == 0, ("degree violation", left, y, out)
            else:
                assert dd % self.modulus == 0

    def entry(self, left, y):
        return self.mu.get((tuple(left), y), {})


def check_right_module(m, cap=ARITY_CAP):
    b = m.base
    resid = {}

    def acc(key, term, sign):
        if sign % 2:
            term = p_scale(term, -1)
        resid[key] = p_add(resid.get(key, {}), term)

    for (y, right), outs in m.mu.items():
        for in_a, outs_a in b.mu.items():
            if len(right) + len(in_a) > cap:
                continue
            for z, ca in outs_a.items():
                for pos in range(len(right)):
                    if right[pos] != z:
                        continue
                    newr = right[:pos] + in_a + right[pos + 1:]
                    sign = sum(_rdeg(b, x) for x in right[pos + 1:])
                    for out, c in outs.items():
                        acc((y, newr, out), p_mul(ca, c), sign)
    for (y, r1), outs1 in m.mu.items():
        for (z, r2), outs2 in m.mu.items():
            if len(r1) + len(r2) + 1 > cap:
                continue
            c1 = outs1.get(z)
            if not c1:
                continue
            sign = sum(_rdeg(b, x) for x in r2)
            for out, c2 in outs2.items():
                acc((y, r1 + r2, out), p_mul(c1, c2), sign)
    viol = [(k, v) for k, v in sorted(resid.items()) if v]
    unit_keys = {((x, x), n) for x, n in b.units.items()}
    for y in m.all_m_keys():
        e = ((y[0], y[0]), b.units[y[0]])
        got = m.entry(y, (e,))
        if got != {y: p_const(1)}:
            viol.append(("right unit", y, got))
    for (y, right), outs in m.mu.items():
        if len(right) > 1 and any(k in unit_keys for k in right):
            viol.append(("higher op with unit", (y, right), outs))
    return viol


def check_left_module(n, cap=ARITY_CAP):
    b = n.base
    resid = {}

    def acc(key, term, sign):
        if sign % 2:
            term = p_scale(term, -1)
        resid[key] = p_add(resid.get(key, {}), term)

    for (left, y), outs in n.mu.items():
        for in_a, outs_a in b.mu.items():
            if len(left) + len(in_a) > cap:
                continue
            for z, ca in outs_a.items():
                for pos in range(len(left)):
                    if left[pos] != z:
                        continue
                    newl = left[:pos] + in_a + left[pos + 1:]
                    sign = (sum(_rdeg(b, x) for x in left[pos + 1:])
                            + n.mdeg(y))
                    for out, c in outs.items():
                        acc((newl, y, out), p_mul(ca, c), sign)
    for (l1, y), outs1 in n.mu.items():
        for (l2, z), outs2 in n.mu.items():
            if len(l1) + len(l2) + 1 > cap:
                continue
            for zz, c1 in outs1.items():
                if zz != z:
                    continue
                for out, c2 in outs2.items():
                    acc((l2 + l1, y, out), p_mul(c1, c2), 0)
    viol = [(k, v) for k, v in sorted(resid.items()) if v]
    unit_keys = {((x, x), n_) for x, n_ in b.units.items()}
    for y in n.all_m_keys():
        e = ((y[0], y[0]), b.units[y[0]])
        got = n.entry((e,), y)
        want = {y: p_const((-1) ** ((n.mdeg(y) - 1) % 2))}
        if got != want:
            viol.append(("left unit", y, got))
    for (left, y), outs in n.mu.items():
        if len(left) > 1 and any(k in unit_keys for k in left):
            viol.append(("higher op with unit", (left, y), outs))
    return viol


# ---------------------------------------------------------------------------
# Yoneda modules


def yoneda_right(a, z):
    """I^right(z): spaces A(X, z), category operations verbatim."""
    spaces = {x: a.homs[(x, z)] for x in a.objects if (x, z) in a.homs}
    mu = {}
    for inputs, outs in a.mu.items():
        if inputs[0][0][1] != z:
            continue
        y = (inputs[0][0][0], inputs[0][1])
        rest = inputs[1:]
        row = {(o[0][0], o[1]): c for o, c in outs.items()}
        mu[(y, rest)] = row
    return RightModule(a, spaces, mu)


def yoneda_left(a, z):
    """I^left(z): spaces A(z, X) with degrees lowered by one, category
    operations verbatim (the degree convention absorbs all Koszul signs)."""
    spaces = {}
    for x in a.objects:
        sp = a.homs.get((z, x))
        if sp:
            spaces[x] = GradedSpace([(n, d - 1, w) for (n, d, w) in sp.basis])
    mu = {}
    for inputs, outs in a.mu.items():
        if inputs[-1][0][0] != z:
            continue
        y = (inputs[-1][0][1], inputs[-1][1])
        rest = inputs[:-1]
        row = {(o[0][1], o[1]): c for o, c in outs.items()}
        mu[(rest, y)] = row
    return LeftModule(a, spaces, mu)


# ---------------------------------------------------------------------------
# directedness and reduced chains


def nonunit_keys(a):
    out = []
    for pair in sorted(a.homs):
        e = a.units.get(pair[0]) if pair[0] == pair[1] else None
        for n in a.homs[pair].names():
            if n != e:
                out.append((pair, n))
    return out


def assert_directed(a):
    """Raise ValueError if the non-unit composability graph has a cycle (which
    would make reduced chains unbounded)."""
    adj = {x: set() for x in a.objects}
    for (pair, _) in nonunit_keys(a):
        adj[pair[0]].add(pair[1])
    state = {}

    def visit(x, stack):
        state[x] = 1
        for yy in sorted(adj[x]):
            if state.get(yy) == 1:
                raise ValueError("category is not directed: cycle through %r"
                                 % (stack + [yy],))
            if yy not in state:
                visit(yy, stack + [yy])
        state[x] = 2

    for x in sorted(a.objects):
        if x not in state:
            visit(x, [x])


def reduced_chains(a):
    """All composable tuples (c_k, ..., c_1) of non-unit basis keys, right to
    left, including the empty chain.  Requires a directed category."""
    assert_directed(a)
    keys = nonunit_keys(a)
    chains = [()]
    frontier = [(k,) for k in keys]
    while frontier:
        chains.extend(frontier)
        nxt = []
        for ch in frontier:
            for k in keys:
                if k[0][0] == ch[0][0][1]:
                    nxt.append((k,) + ch)
        frontier = nxt
    return chains


def _chain_src(chain, default):
    return chain[-1][0][0] if chain else default


def _chain_tgt(chain, default):
    return chain[0][0][1] if chain else default


def _chain_rdeg(a, chain):
    """Sum of reduced degrees mod 2, for sign computations only."""
    return sum(a.rdeg(k) for k in chain)


def _chain_deg(a, chain):
    """Sum of actual reduced degrees |x| - 1, for degree computations."""
    return sum(a.degree(k) - 1 for k in chain)


def _has_unit(a, chain):
    unit_keys = {((x, x), n) for x, n in a.units.items()}
    return any(k in unit_keys for k in chain)


# ---------------------------------------------------------------------------
# tensor constructions


def external_tensor(n, m):
    """(N (x) M)(X0, X1) = N(X1) (x) M(X0) for a left module N and a right
    module M over the same base; left inputs act through N with a Koszul sign
    from the M factor, right inputs act through M."""
    assert n.base is m.base
    a = n.base

    def pkey(nk, mk):
        return ((mk[0], nk[0]), "%s|%s" % (nk[1], mk[1]))

    spaces = {}
    for x1, spn in n.spaces.items():
        for x0, spm in m.spaces.items():
            basis = []
            for (nn, dn, wn) in spn.basis:
                for (nm, dm, wm) in spm.basis:
                    basis.append(("%s|%s" % (nn, nm), dn + dm, wn + wm))
            if basis:
                spaces[(x0, x1)] = GradedSpace(basis)
    mu = {}

    def acc(key, out, coeff, sign):
        if sign % 2:
            coeff = p_scale(coeff, -1)
        row = mu.setdefault(key, {})
        row[out] = p_add(row.get(out, {}), coeff)

    for (left, yk), outs in n.mu.items():
        for x0, spm in m.spaces.items():
            for mk in m.m_keys(x0):
                sgn = m.mdeg(mk)
                for out, c in outs.items():
                    acc((left, pkey(yk, mk), ()), pkey(out, mk), c, sgn)
    for (yk, right), outs in m.mu.items():
        for x1, spn in n.spaces.items():
            for nk in n.m_keys(x1):
                for out, c in outs.items():
                    acc(((), pkey(nk, yk), right), pkey(nk, out), c, 0)
    return Bimodule(a, spaces, mu)


def _gname(gen):
    return repr(gen)


def bar_tensor(m, q):
    """Convolution M (x)_A Q of a right module M and a bimodule Q through the
    reduced bar construction; the result is again a right module.  Generators
    of (M (x)_A Q)(X) are (mk, chain, qk) with qk in Q(X, Y0), a reduced
    composable chain from Y0 to Yk, and mk in M(Yk)."""
    assert m.base is q.base
    a = m.base
    chains = reduced_chains(a)
    gens = []
    for pair in sorted(q.spaces):
        x, y0 = pair
        for qk in q.q_keys(pair):
            for chain in chains:
                if _chain_src(chain, y0) != y0:
                    continue
                yk = _chain_tgt(chain, y0)
                for mk in m.m_keys(yk):
                    gens.append((mk, chain, qk))
    spaces = {}
    by_obj = {}
    for gen in gens:
        mk, chain, qk = gen
        obj = qk[0][0]
        deg = m.mdeg(mk) + _chain_deg(a, chain) + q.qdeg(qk)
        wt = (m.spaces[mk[0]].weight(mk[1])
              + sum(a.weight(k) for k in chain) + q.qwt(qk))
        by_obj.setdefault(obj, []).append((_gname(gen), deg, wt))
    for obj, basis in by_obj.items():
        spaces[obj] = GradedSpace(sorted(basis))
    mu = {}

    def acc(key, out, coeff, sign):
        if sign % 2:
            coeff = p_scale(coeff, -1)
        row = mu.setdefault(key, {})
        row[out] = p_add(row.get(out, {}), coeff)

    for gen in gens:
        mk, chain, qk = gen
        obj = qk[0][0]
        gkey = (obj, _gname(gen))
        k = len(chain)
        # differential: M-action on a chain prefix
        for i in range(k + 1):
            outs = m.entry(mk, chain[:i])
            if not outs:
                continue
            sgn = _chain_rdeg(a, chain[i:]) + q.qdeg(qk)
            for mm, c in outs.items():
                out = (mm, chain[i:], qk)
                acc((gkey, ()), (obj, _gname(out)), c, sgn)
        # differential: inner category operation on a chain segment
        for i in range(k):
            for j in range(i + 1, k + 1):
                outs = a.mu.get(chain[i:j], {})
                sgn = _chain_rdeg(a, chain[j:]) + q.qdeg(qk)
                for z, c in outs.items():
                    if _has_unit(a, (z,)):
                        continue
                    out = (mk, chain[:i] + (z,) + chain[j:], qk)
                    acc((gkey, ()), (obj, _gname(out)), c, sgn)
        # differential and module action through the bimodule factor
        for (l1, yk, r1), outs in q.mu.items():
            if yk != qk:
                continue
            j = len(l1)
            if j > k or chain[k - j:] != l1:
                continue
            for qq, c in outs.items():
                out = (mk, chain[:k - j], qq)
                acc((gkey, r1), (qq[0][0], _gname(out)), c, 0)
    return RightModule(a, spaces, mu)


def tensor_bimodules(p, q):
    """Convolution P (x)_A Q of two bimodules through the reduced bar
    construction.  Generators of (P (x)_A Q)(X0, X1) are (pk, chain, qk) with
    pk in P(Yk, X1), a reduced chain from Y0 to Yk and qk in Q(X0, Y0); left
    inputs act through P, right inputs through Q."""
    assert p.base is q.base
    a = p.base
    chains = reduced_chains(a)
    gens = []
    for qpair in sorted(q.spaces):
        x0, y0 = qpair
        for qk in q.q_keys(qpair):
            for chain in chains:
                if _chain_src(chain, y0) != y0:
                    continue
                yk = _chain_tgt(chain, y0)
                for ppair in sorted(p.spaces):
                    if ppair[0] != yk:
                        continue
                    for pk in p.q_keys(ppair):
                        gens.append((pk, chain, qk))
    spaces = {}
    by_pair = {}
    for gen in gens:
        pk, chain, qk = gen
        pair = (qk[0][0], pk[0][1])
        deg = p.qdeg(pk) + _chain_deg(a, chain) + q.qdeg(qk)
        wt = p.qwt(pk) + sum(a.weight(k) for k in chain) + q.qwt(qk)
        by_pair.setdefault(pair, []).append((_gname(gen), deg, wt))
    for pair, basis in by_pair.items():
        spaces[pair] = GradedSpace(sorted(basis))
    mu = {}

    def acc(key, out, coeff, sign):
        if sign % 2:
            coeff = p_scale(coeff, -1)
        row = mu.setdefault(key, {})
        row[out] = p_add(row.get(out, {}), coeff)

    for gen in gens:
        pk, chain, qk = gen
        pair = (qk[0][0], pk[0][1])
        k = len(chain)
        # P-side: differential pieces, and the left action
        for (l1, yk, r1), outs in p.mu.items():
            if yk != pk:
                continue
            i = len(r1)
            if i > k or chain[:i] != r1:
                continue
            sgn = _chain_rdeg(a, chain[i:]) + q.qdeg(qk)
            for pp, c in outs.items():
                out = (pp, chain[i:], qk)
                acc((l1, (pair, _gname(gen)), ()),
                    ((qk[0][0], pp[0][1]), _gname(out)), c, sgn)
        # inner category operation on a chain segment
        for i in range(k):
            for j in range(i + 1, k + 1):
                outs = a.mu.get(chain[i:j], {})
                sgn = _chain_rdeg(a, chain[j:]) + q.qdeg(qk)
                for z, c in outs.items():
                    if _has_unit(a, (z,)):
                        continue
                    out = (pk, chain[:i] + (z,) + chain[j:], qk)
                    acc(((), (pair, _gname(gen)), ()), (pair, _gname(out)), c, sgn)
        # Q-side: differential pieces, and the right action
        for (l1, yk, r1), outs in q.mu.items():
            if yk != qk:
                continue
            j = len(l1)
            if j > k or chain[k - j:] != l1:
                continue
            for qq, c in outs.items():
                out = (pk, chain[:k - j], qq)
                acc(((), (pair, _gname(gen)), r1),
                    ((qq[0][0], pk[0][1]), _gname(out)), c, 0)
    return Bimodule(a, spaces, mu)


def tensor_power(q, r):
    assert r >= 1
    out = q
    for _ in range(r - 1):
        out = tensor_bimodules(out, q)
    return out


# ---------------------------------------------------------------------------
# hom complexes (reduced), quasi-isomorphism detection


def bimodule_hom_complex(p, q):
    """Reduced hom complex from bimodule P to bimodule Q over a directed base.

    Generators are (L, y, R, z): the functional sending the reduced chains
    L, R around the module input y to z, of degree |z| - |y| - ||L|| - ||R||.
    Returns (CochainComplex, list of generators in basis order)."""
    assert p.base is q.base
    a = p.base
    chains = reduced_chains(a)
    gens = []
    for ppair in sorted(p.spaces):
        for y in p.q_keys(ppair):
            for l_ in chains:
                if _chain_src(l_, ppair[1]) != ppair[1]:
                    continue
                tgt = _chain_tgt(l_, ppair[1])
                for r_ in chains:
                    if _chain_tgt(r_, ppair[0]) != ppair[0]:
                        continue
                    src = _chain_src(r_, ppair[0])
                    for z in q.q_keys((src, tgt)):
                        gens.append((l_, y, r_, z))
    gens.sort(key=_gname)

    def gdeg(gen):
        l_, y, r_, z = gen
        d = q.qdeg(z) - p.qdeg(y) - _chain_deg(a, l_) - _chain_deg(a, r_)
        return d % a.modulus if a.modulus is not None else d

    def gwt(gen):
        l_, y, r_, z = gen
        return q.qwt(z) - p.qwt(y) - sum(a.weight(k) for k in l_ + r_)

    space = GradedSpace([(_gname(g), gdeg(g), gwt(g)) for g in gens])
    have = {(_gname(g)) for g in gens}
    entries = {}

    def acc(src_gen, tgt_gen, coeff, sign):
        tn = _gname(tgt_gen)
        if tn not in have:
            return
        c = p_as_fraction(coeff) * ((-1) ** (sign % 2))
        key = (_gname(src_gen), tn)
        cur = entries.get(key, Fraction(0)) + c
        if cur:
            entries[key] = cur
        else:
            entries.pop(key, None)

    for gen in gens:
        l_, y, r_, z = gen
        g = gdeg(gen)
        # target operation applied after the functional
        for (l2, zz, r2), outs in q.mu.items():
            if zz != z or _has_unit(a, l2 + r2):
                continue
            sgn = g * _chain_rdeg(a, r2)
            for w, c in outs.items():
                acc(gen, (l2 + l_, y, r_ + r2, w), c, sgn)
        # category operation inserted into the right or left chain
        for in_a, outs_a in a.mu.items():
            if _has_unit(a, in_a):
                continue
            for zz, ca in outs_a.items():
                for pos in range(len(r_)):
                    if r_[pos] != zz:
                        continue
                    sgn = 1 + g + _chain_rdeg(a, r_[pos + 1:])
                    acc(gen, (l_, y, r_[:pos] + in_a + r_[pos + 1:], z), ca, sgn)
                for pos in range(len(l_)):
                    if l_[pos] != zz:
                        continue
                    sgn = (1 + g + _chain_rdeg(a, l_[pos + 1:])
                           + _chain_rdeg(a, r_) + p.qdeg(y))
                    acc(gen, (l_[:pos] + in_a + l_[pos + 1:], y, r_, z), ca, sgn)
        # source operation applied before the functional
        for (l1, yy, r1), outs in p.mu.items():
            if _has_unit(a, l1 + r1):
                continue
            c1 = outs.get(y)
            if not c1:
                continue
            sgn = 1 + g + _chain_rdeg(a, r_)
            acc(gen, (l_ + l1, yy, r1 + r_, z), c1, sgn)
    cc = CochainComplex(space, entries, modulus=a.modulus)
    return cc, gens


def bimodule_hom_cohomology(p, q):
    cc, _ = bimodule_hom_complex(p, q)
    return cc.cohomology_dims()


def module_hom_complex(m0, m1):
    """Reduced hom complex between right modules over a directed base.
    Generators (y, R, z) of degree |z| - |y| - ||R||."""
    assert m0.base is m1.base
    a = m0.base
    chains = reduced_chains(a)
    gens = []
    for obj in sorted(m0.spaces):
        for y in m0.m_keys(obj):
            for r_ in chains:
                if _chain_tgt(r_, obj) != obj:
                    continue
                src = _chain_src(r_, obj)
                for z in m1.m_keys(src):
                    gens.append((y, r_, z))
    gens.sort(key=_gname)

    def gdeg(gen):
        y, r_, z = gen
        d = m1.mdeg(z) - m0.mdeg(y) - _chain_deg(a, r_)
        return d % a.modulus if a.modulus is not None else d

    def gwt(gen):
        y, r_, z = gen
        return (m1.spaces[z[0]].weight(z[1]) - m0.spaces[y[0]].weight(y[1])
                - sum(a.weight(k) for k in r_))

    space = GradedSpace([(_gname(g), gdeg(g), gwt(g)) for g in gens])
    have = {_gname(g) for g in gens}
    entries = {}

    def acc(src_gen, tgt_gen, coeff, sign):
        tn = _gname(tgt_gen)
        if tn not in have:
            return
        c = p_as_fraction(coeff) * ((-1) ** (sign % 2))
        key = (_gname(src_gen), tn)
        cur = entries.get(key, Fraction(0)) + c
        if cur:
            entries[key] = cur
        else:
            entries.pop(key, None)

    for gen in gens:
        y, r_, z = gen
        g = gdeg(gen)
        for (zz, r2), outs in m1.mu.items():
            if zz != z or _has_unit(a, r2):
                continue
            sgn = g * _chain_rdeg(a, r2)
            for w, c in outs.items():
                acc(gen, (y, r_ + r2, w), c, sgn)
        for in_a, outs_a in a.mu.items():
            if _has_unit(a, in_a):
                continue
            for zz, ca in outs_a.items():
                for pos in range(len(r_)):
                    if r_[pos] != zz:
                        continue
                    sgn = 1 + g + _chain_rdeg(a, r_[pos + 1:])
                    acc(gen, (y, r_[:pos] + in_a + r_[pos + 1:], z), ca, sgn)
        for (yy, r1), outs in m0.mu.items():
            if _has_unit(a, r1):
                continue
            c1 = outs.get(y)
            if not c1:
                continue
            sgn = 1 + g + _chain_rdeg(a, r_)
            acc(gen, (yy, r1 + r_, z), c1, sgn)
    cc = CochainComplex(space, entries, modulus=a.modulus)
    return cc, gens


def _linear_part(gens, vec):
    """Entries {(y, z): Fraction} of the chain-level map given by a cocycle in
    a module hom complex (components with empty chains)."""
    out = {}
    for g, c in vec.items():
        y, r_, z = g
        if not r_:
            out[(y, z)] = out.get((y, z), Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def _induces_iso(m0, m1, lin):
    """Does the chain map with linear entries lin induce an isomorphism on
    the cohomology of (M(X), mu^{1;0}) for every object X?"""
    objs = set(m0.spaces) | set(m1.spaces)
    for obj in sorted(objs):
        c0 = (m0.differential_complex(obj) if obj in m0.spaces
              else CochainComplex(GradedSpace(), {}))
        c1 = (m1.differential_complex(obj) if obj in m1.spaces
              else CochainComplex(GradedSpace(), {}))
        degs = set(c0.cohomology_dims()) | set(c1.cohomology_dims())
        for deg in sorted(degs):
            reps0, _, names0 = c0.cohomology_reps(deg)
            reps1, img1, names1 = c1.cohomology_reps(deg)
            if len(reps0) != len(reps1):
                return False
            if not reps0:
                continue
            idx1 = {n: i for i, n in enumerate(names1)}
            cols = [list(v) for v in reps1] + [list(v) for v in img1]
            images = []
            for v in reps0:
                w = [Fraction(0)] * len(names1)
                for j, n0 in enumerate(names0):
                    if not v[j]:
                        continue
                    for (yk, zk), c in lin.items():
                        if yk == (obj, n0) and zk[0] == obj:
                            w[idx1[zk[1]]] += v[j] * c
                coords = span_coords(cols, w)
                if coords is None:
                    return False
                images.append(coords[:len(reps1)])
            if mat_rank(images) != len(reps0):
                return False
    return True


def quasi_iso_detect(m0, m1, bound=1):
    """Search degree-zero cocycles of the reduced hom complex for one whose
    linear part induces isomorphisms on differential cohomology at every
    object; returns the witness as {generator: Fraction}, or None."""
    cc, gens = module_hom_complex(m0, m1)
    gen_of = {_gname(g): g for g in gens}
    reps, _, names = cc.cohomology_reps(0)
    cands = []
    for v in reps:
        cands.append(v)
        cands.append([-x for x in v])
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            for s in (1, -1):
                cands.append([a + s * b for a, b in zip(reps[i], reps[j])])
    for v in cands:
        vec = {gen_of[names[j]]: v[j] for j in range(len(names)) if v[j]}
        lin = _linear_part(gens, vec)
        if _induces_iso(m0, m1, lin):
            return vec
    return None


def serre_image(m):
    """Tensor a right module with the dual diagonal bimodule (the inverse
    Serre-type convolution kernel for a smooth proper base)."""
    return bar_tensor(m, dual(diagonal(m.base)))


# ---------------------------------------------------------------------------
# shifts of one-sided modules, cones


def shift_right_module(m, k=1):
    spaces = {obj: GradedSpace([(n, d - k, w) for (n, d, w) in sp.basis])
              for obj, sp in m.spaces.items()}
    mu = {}
    for (y, right), outs in m.mu.items():
        row = dict(outs)
        if k % 2:
            sgn = (sum(_rdeg(m.base, x) for x in right) + 1) % 2
            if sgn:
                row = {o: p_scale(c, -1) for o, c in outs.items()}
        mu[(y, right)] = row
    return RightModule(m.base, spaces, mu)


def cone_pair_complex(f, pair):
    """The two-term total complex (P(pair)[1] (+) Q(pair), d_cone) of a
    degree-zero bimodule map; zero cohomology at all pairs certifies a
    quasi-isomorphism of the underlying complexes."""
    p, q = f.source, f.target
    modulus = p.modulus
    basis = []
    psp = p.spaces.get(pair)
    qsp = q.spaces.get(pair)
    for (n, d, w) in (psp.basis if psp else []):
        dd = (d - 1) % modulus if modulus is not None else d - 1
        basis.append(("c0." + n, dd, w))
    for (n, d, w) in (qsp.basis if qsp else []):
        basis.append(("c1." + n, d, w))
    entries = {}
    if psp:
        for (left, y, right), outs in p.mu.items():
            if left or right or y[0] != pair:
                continue
            for o, c in outs.items():
                entries[("c0." + y[1], "c0." + o[1])] = -p_as_fraction(c)
        for ((left, y, right), outs) in f.phi.items():
            if left or right or y[0] != pair:
                continue
            for o, c in outs.items():
                entries[("c0." + y[1], "c1." + o[1])] = p_as_fraction(c)
    if qsp:
        for (left, y, right), outs in q.mu.items():
            if left or right or y[0] != pair:
                continue
            for o, c in outs.items():
                entries[("c1." + y[1], "c1." + o[1])] = p_as_fraction(c)
    return CochainComplex(GradedSpace(basis), entries, modulus=modulus)


def cone_cohomology_dims(f):
    pairs = sorted(set(f.source.spaces) | set(f.target.spaces))
    return {pair: cone_pair_complex(f, pair).cohomology_dims()
            for pair in pairs}
