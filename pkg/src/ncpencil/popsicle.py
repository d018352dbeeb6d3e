"""Combinatorics of weighted and flavoured popsicles.

A weighted popsicle type is a disc with d+1 boundary punctures, a
nondecreasing map p sending each of |p| sprinkles to one of the d
popsicle sticks, and nonpositive integer weights w = (w_0, ..., w_d)
subject to w_0 - w_1 - ... - w_d = |p| and #p^{-1}(i) <= -w_i.  This
module enumerates the codimension-one boundary strata of the moduli
spaces of such popsicles, computes the weights induced on the
components of broken popsicles, classifies the strata whose induced
weights leave {-1, 0}, and verifies the sign identities that make
those bad strata cancel in pairs.  The flavoured variant carries two
species of sprinkles and one extra stratum class.
"""

import itertools
from math import factorial

# Summation range for the bookkeeping sign `diamond`: the k = 0 term
# equals |p| * w_0, which is constant across every cancelling pair of
# strata, so both starting points pass verify_cancellation; we include
# the term.  Deliberately wrong ranges (starting at k >= 2) fail the
# cancellation check and serve as negative controls.
DIAMOND_LO = 0


def _fibre_sizes(p):
    sizes = {}
    for v in p:
        sizes[v] = sizes.get(v, 0) + 1
    return sizes


def _nondecreasing(p):
    return all(a <= b for a, b in zip(p, p[1:]))


class WeightedPopsicleType:

    def __init__(self, d, p, w):
        p = tuple(p)
        w = tuple(int(x) for x in w)
        assert d >= 1
        assert len(w) == d + 1 and all(x <= 0 for x in w), \
            "weights must be nonpositive"
        assert all(1 <= v <= d for v in p), "stick labels out of range"
        assert _nondecreasing(p), "p must be nondecreasing"
        assert w[0] - sum(w[1:]) == len(p), \
            "weight sum must match the sprinkle count"
        for v, n in _fibre_sizes(p).items():
            assert n <= -w[v], "too many sprinkles on stick %d" % v
        assert d + len(p) >= 2, "unstable type"
        self.d = d
        self.p = p
        self.w = w
        self.m = len(p)

    def key(self):
        return (self.d, self.p, self.w)

    def __eq__(self, other):
        return isinstance(other, WeightedPopsicleType) and \
            self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "WeightedPopsicleType(d=%d, p=%r, w=%r)" % self.key()


def enumerate_p_for_weights(d, w):
    """All sprinkle maps compatible with weights in {-1, 0}.

    Each stick with weight -1 can carry at most one sprinkle, so the
    maps are exactly the sorted subsets of those sticks whose size is
    forced by the weight-sum identity."""
    w = tuple(w)
    assert len(w) == d + 1 and all(x in (-1, 0) for x in w)
    m = w[0] - sum(w[1:])
    if m < 0:
        return []
    sticks = [i for i in range(1, d + 1) if w[i] == -1]
    return [c for c in itertools.combinations(sticks, m)]


def moduli_dim(d, p):
    m = p if isinstance(p, int) else len(p)
    assert d + m >= 2, "unstable type"
    return d + m - 2


def aut_order(p):
    assert _nondecreasing(p)
    out = 1
    for n in _fibre_sizes(p).values():
        out *= factorial(n)
    return out


def _split_sprinkles(p, i, d2, to_second):
    """Distribute sprinkles of the map p over a two-vertex tree whose
    second vertex absorbs the sticks i, ..., i+d2-1.  Sprinkles on the
    absorbed sticks go either to the second vertex or onto the stick
    through the connecting edge; to_second lists the (1-based) sprinkle
    labels that move.  Returns (r1, p1, r2, p2)."""
    m = len(p)
    band = [f for f in range(1, m + 1) if i <= p[f - 1] <= i + d2 - 1]
    r2 = tuple(sorted(to_second))
    assert all(f in band for f in r2), "sprinkle not on an absorbed stick"
    r1 = tuple(f for f in range(1, m + 1) if f not in r2)
    p2 = tuple(p[f - 1] - i + 1 for f in r2)
    p1 = []
    for f in r1:
        v = p[f - 1]
        p1.append(v if v < i else (i if v <= i + d2 - 1 else v - d2 + 1))
    p1 = tuple(p1)
    assert _nondecreasing(p1) and _nondecreasing(p2)
    return r1, p1, r2, p2


class Codim1Stratum:
    """A two-vertex degeneration of a weighted popsicle type.  Vertex 1
    is adjacent to the root; vertex 2 hangs off its i-th edge.  The
    induced weights are determined by keeping the outer weights, letting
    the two ends of the connecting edge agree, and imposing the
    weight-sum identity at each vertex."""

    def __init__(self, parent, d1, d2, i, to_second):
        t = parent
        assert d1 >= 1 and d2 >= 1 and d1 + d2 == t.d + 1
        assert 1 <= i <= d1
        self.parent, self.d1, self.d2, self.i = t, d1, d2, i
        self.r1, self.p1, self.r2, self.p2 = \
            _split_sprinkles(t.p, i, d2, to_second)
        assert d1 + len(self.p1) >= 2 and d2 + len(self.p2) >= 2, \
            "unstable component"
        w20 = len(self.p2) + sum(t.w[i:i + d2])
        self.w2 = (w20,) + t.w[i:i + d2]
        self.w1 = t.w[:i] + (w20,) + t.w[i + d2:]
        assert w20 <= 0
        assert self.w1[0] - sum(self.w1[1:]) == len(self.p1)
        for pv, wv in ((self.p1, self.w1), (self.p2, self.w2)):
            for v, n in _fibre_sizes(pv).items():
                assert n <= -wv[v]

    def key(self):
        return (self.parent.key(), self.d1, self.d2, self.i, self.r2)

    def __eq__(self, other):
        return isinstance(other, Codim1Stratum) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Codim1Stratum(%r, d1=%d, d2=%d, i=%d, to_second=%r)" % \
            (self.parent, self.d1, self.d2, self.i, self.r2)


def enumerate_codim1(t):
    """All codimension-one strata of the compactified moduli space of
    popsicles of type t, with their induced weights."""
    out = []
    for d1 in range(1, t.d + 1):
        d2 = t.d + 1 - d1
        for i in range(1, d1 + 1):
            band = [f for f in range(1, t.m + 1)
                    if i <= t.p[f - 1] <= i + d2 - 1]
            for r in range(len(band) + 1):
                if d2 + r < 2:
                    continue
                if d1 + (t.m - r) < 2:
                    continue
                for sub in itertools.combinations(band, r):
                    out.append(Codim1Stratum(t, d1, d2, i, sub))
    return out


def induced_weights(tree, w):
    """Per-vertex weight vectors of a broken popsicle, in preorder.

    A tree node is a pair (p_v, children), where children entries are
    None for a semi-infinite (leaf) edge or another node; w lists the
    weights at the root and at the leaves in planar order.  Raises
    ValueError when no consistent nonpositive solution exists."""
    w = tuple(w)
    out = []
    state = {"leaf": 0}

    def visit(node):
        p_v, children = node
        arity = len(children)
        assert arity >= 1, "vertex of valence < 2"
        p_v = tuple(p_v)
        assert all(1 <= v <= arity for v in p_v) and _nondecreasing(p_v)
        slot = len(out)
        out.append(None)
        below = []
        for child in children:
            if child is None:
                state["leaf"] += 1
                if state["leaf"] >= len(w):
                    raise ValueError("inconsistent labels: too many leaves")
                below.append(w[state["leaf"]])
            else:
                below.append(visit(child))
        w0 = len(p_v) + sum(below)
        wv = (w0,) + tuple(below)
        if w0 > 0:
            raise ValueError("inconsistent labels: positive induced weight")
        for v, n in _fibre_sizes(p_v).items():
            if n > -wv[v]:
                raise ValueError("inconsistent labels: sprinkle bound")
        out[slot] = wv
        return w0

    root = visit(tree)
    if state["leaf"] != len(w) - 1:
        raise ValueError("inconsistent labels: leaf count mismatch")
    if root != w[0]:
        raise ValueError("inconsistent labels: root weight mismatch")
    return out


def classify_stratum(s):
    """One of ("WeightsOK",), ("MoreSymmetry", fibre size) or
    ("SwitchSprinkle", k1, k2) for a stratum of a type with weights in
    {-1, 0}.  Anything else would be an unclassifiable stratum and
    raises."""
    t = s.parent
    assert all(x in (-1, 0) for x in t.w), "outer weights must be in {-1,0}"
    bad = [x for x in s.w1 + s.w2 if x not in (-1, 0)]
    if not bad:
        return ("WeightsOK",)
    # only the weight on the connecting edge can leave {-1, 0}
    assert bad == [s.w2[0], s.w2[0]] and s.w1[s.i] == s.w2[0]
    n = sum(1 for v in s.p1 if v == s.i)
    if n >= 2:
        return ("MoreSymmetry", n)
    assert n == 1, "unclassifiable stratum %r" % (s,)
    assert t.w[0] == -1 and s.w2[0] == -2
    ks = [k for k in range(s.i, s.i + s.d2)
          if t.w[k] == -1 and (k - s.i + 1) not in s.p2]
    assert len(ks) == 2, "unclassifiable stratum %r" % (s,)
    (f,) = [f for f, v in zip(s.r1, s.p1) if v == s.i]
    assert t.p[f - 1] in ks
    return ("SwitchSprinkle", ks[0], ks[1])


def partner_stratum(s):
    """The stratum cancelling a SwitchSprinkle stratum: same broken
    popsicle, but with the lone sprinkle on the connecting stick
    relabelled to the other of the two admissible sticks k1, k2.  This
    is a fixed-point-free involution."""
    t = s.parent
    label = classify_stratum(s)
    assert label[0] == "SwitchSprinkle"
    k1, k2 = label[1], label[2]
    (f,) = [f for f, v in zip(s.r1, s.p1) if v == s.i]
    other = k1 + k2 - t.p[f - 1]
    values = list(t.p)
    values[f - 1] = other
    newp = tuple(sorted(values))
    pos = {v: j + 1 for j, v in enumerate(newp)}
    to_second = tuple(sorted(pos[t.p[g - 1]] for g in s.r2))
    t2 = WeightedPopsicleType(t.d, newp, t.w)
    return Codim1Stratum(t2, s.d1, s.d2, s.i, to_second)


def dagger(d1, d2, i, m1, inversions):
    """Orientation discrepancy between the product orientation of a
    two-vertex stratum and the induced boundary orientation, mod 2."""
    return (d1 * d2 + i * d2 + i - 1 + m1 * d2 + inversions) % 2


def boundary_sign(s):
    inv = sum(1 for f1 in s.r1 for f2 in s.r2 if f1 > f2)
    return dagger(s.d1, s.d2, s.i, len(s.p1), inv)


def _diamond(t, lo):
    sizes = _fibre_sizes(t.p)
    total = 0
    for k in range(lo, t.d + 1):
        above = sum(c for v, c in sizes.items() if v > k)
        total += above * (t.w[k] + sizes.get(k, 0))
    return total % 2


def gah_sign(t, ind, diamond_lo=DIAMOND_LO):
    """The three bookkeeping signs (star, heart, diamond) of a type,
    given the indices ind of the d inputs, each reduced mod 2."""
    assert len(ind) == t.d
    star = sum((k + sum(t.w[1:k])) * ind[k - 1] for k in range(1, t.d + 1))
    heart = sum((t.d - k) * t.w[k] for k in range(1, t.d + 1))
    return (star % 2, heart % 2, _diamond(t, diamond_lo))


def _spade(s, k1, k2):
    """Number of second-vertex sprinkles on sticks strictly between the
    two switchable sticks."""
    return sum(1 for v in s.p2 if k1 < v + s.i - 1 < k2) % 2


def verify_cancellation(dmax, diamond_lo=DIAMOND_LO):
    """Check, for every type with d <= dmax and weights in {-1, 0} and
    every SwitchSprinkle stratum with its partner, that the boundary
    orientation discrepancies differ by spade and the diamond signs by
    spade + 1 (mod 2), so the two strata contribute opposite signs."""
    assert dmax >= 1
    pairs = []
    failures = []
    for d in range(1, dmax + 1):
        for w in itertools.product((0, -1), repeat=d + 1):
            for p in enumerate_p_for_weights(d, w):
                if d + len(p) < 2:
                    continue
                t = WeightedPopsicleType(d, p, w)
                for s in enumerate_codim1(t):
                    label = classify_stratum(s)
                    if label[0] != "SwitchSprinkle":
                        continue
                    s2 = partner_stratum(s)
                    spade = _spade(s, label[1], label[2])
                    ddag = (boundary_sign(s) - boundary_sign(s2)) % 2
                    ddia = (_diamond(t, diamond_lo) -
                            _diamond(s2.parent, diamond_lo)) % 2
                    entry = (s.key(), s2.key(), ddag, ddia, spade)
                    pairs.append(entry)
                    if ddag != spade or ddia != (spade + 1) % 2:
                        failures.append(entry)
    return {
        "diamond_range": "k = %d..d" % diamond_lo,
        "pairs": pairs,
        "failures": failures,
        "ok": not failures,
    }


class FlavouredType:
    """A popsicle type whose sprinkles come in two species; the weight
    constraints apply to the combined sprinkle count."""

    def __init__(self, d, p_va, p_ch, w):
        p_va = tuple(p_va)
        p_ch = tuple(p_ch)
        w = tuple(int(x) for x in w)
        assert d >= 1
        assert len(w) == d + 1 and all(x <= 0 for x in w)
        for p in (p_va, p_ch):
            assert all(1 <= v <= d for v in p) and _nondecreasing(p)
        assert w[0] - sum(w[1:]) == len(p_va) + len(p_ch), \
            "weight sum must match the combined sprinkle count"
        combined = _fibre_sizes(p_va)
        for v, n in _fibre_sizes(p_ch).items():
            combined[v] = combined.get(v, 0) + n
        for v, n in combined.items():
            assert n <= -w[v], "too many sprinkles on stick %d" % v
        assert d + len(p_va) + len(p_ch) >= 2, "unstable type"
        self.d = d
        self.p_va = p_va
        self.p_ch = p_ch
        self.w = w

    def key(self):
        return (self.d, self.p_va, self.p_ch, self.w)

    def __eq__(self, other):
        return isinstance(other, FlavouredType) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "FlavouredType(d=%d, p_va=%r, p_ch=%r, w=%r)" % self.key()


def forget_flavours(ft):
    """The weighted type underlying a flavoured one (the sprinkles are
    merged into a single nondecreasing map)."""
    return WeightedPopsicleType(ft.d, tuple(sorted(ft.p_va + ft.p_ch)), ft.w)


class FlavouredCodim1Stratum:

    def __init__(self, parent, d1, d2, i, to_second_va, to_second_ch):
        t = parent
        assert d1 >= 1 and d2 >= 1 and d1 + d2 == t.d + 1
        assert 1 <= i <= d1
        self.parent, self.d1, self.d2, self.i = t, d1, d2, i
        self.r1_va, self.p1_va, self.r2_va, self.p2_va = \
            _split_sprinkles(t.p_va, i, d2, to_second_va)
        self.r1_ch, self.p1_ch, self.r2_ch, self.p2_ch = \
            _split_sprinkles(t.p_ch, i, d2, to_second_ch)
        m1 = len(self.p1_va) + len(self.p1_ch)
        m2 = len(self.p2_va) + len(self.p2_ch)
        assert d1 + m1 >= 2 and d2 + m2 >= 2, "unstable component"
        w20 = m2 + sum(t.w[i:i + d2])
        self.w2 = (w20,) + t.w[i:i + d2]
        self.w1 = t.w[:i] + (w20,) + t.w[i + d2:]
        assert w20 <= 0
        assert self.w1[0] - sum(self.w1[1:]) == m1

    def key(self):
        return (self.parent.key(), self.d1, self.d2, self.i,
                self.r2_va, self.r2_ch)

    def __eq__(self, other):
        return isinstance(other, FlavouredCodim1Stratum) and \
            self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return ("FlavouredCodim1Stratum(%r, d1=%d, d2=%d, i=%d, "
                "to_second_va=%r, to_second_ch=%r)") % \
            (self.parent, self.d1, self.d2, self.i, self.r2_va, self.r2_ch)


def flavoured_enumerate_codim1(ft):
    out = []
    m_va, m_ch = len(ft.p_va), len(ft.p_ch)
    for d1 in range(1, ft.d + 1):
        d2 = ft.d + 1 - d1
        for i in range(1, d1 + 1):
            band_va = [f for f in range(1, m_va + 1)
                       if i <= ft.p_va[f - 1] <= i + d2 - 1]
            band_ch = [f for f in range(1, m_ch + 1)
                       if i <= ft.p_ch[f - 1] <= i + d2 - 1]
            for ra in range(len(band_va) + 1):
                for rc in range(len(band_ch) + 1):
                    if d2 + ra + rc < 2:
                        continue
                    if d1 + (m_va + m_ch - ra - rc) < 2:
                        continue
                    for sub_va in itertools.combinations(band_va, ra):
                        for sub_ch in itertools.combinations(band_ch, rc):
                            out.append(FlavouredCodim1Stratum(
                                ft, d1, d2, i, sub_va, sub_ch))
    return out


def flavoured_classify(s):
    """One of ("WeightsOK",), ("MoreSymmetry", fibre size),
    ("TwoFlavourStick", k1, k2) or ("SwitchSprinkle", k1, k2)."""
    t = s.parent
    assert all(x in (-1, 0) for x in t.w)
    if all(x in (-1, 0) for x in s.w1 + s.w2):
        return ("WeightsOK",)
    n_va = sum(1 for v in s.p1_va if v == s.i)
    n_ch = sum(1 for v in s.p1_ch if v == s.i)
    if n_va >= 2 or n_ch >= 2:
        return ("MoreSymmetry", max(n_va, n_ch))
    if n_va == 1 and n_ch == 1:
        (f_va,) = [f for f, v in zip(s.r1_va, s.p1_va) if v == s.i]
        (f_ch,) = [f for f, v in zip(s.r1_ch, s.p1_ch) if v == s.i]
        k_va = t.p_va[f_va - 1]
        k_ch = t.p_ch[f_ch - 1]
        assert k_va != k_ch
        return ("TwoFlavourStick", min(k_va, k_ch), max(k_va, k_ch))
    assert n_va + n_ch == 1, "unclassifiable stratum %r" % (s,)
    ks = [k for k in range(s.i, s.i + s.d2)
          if t.w[k] == -1 and (k - s.i + 1) not in s.p2_va
          and (k - s.i + 1) not in s.p2_ch]
    assert len(ks) == 2, "unclassifiable stratum %r" % (s,)
    return ("SwitchSprinkle", ks[0], ks[1])


def _relabel(p, f, other):
    """Move the sprinkle f of the map p to the stick `other`; returns
    the sorted map and the new label of each old sprinkle."""
    values = list(p)
    values[f - 1] = other
    newp = tuple(sorted(values))
    pos = {v: j + 1 for j, v in enumerate(newp)}
    return newp, pos


def flavoured_partner(s):
    """The cancelling partner of a bad flavoured stratum: for
    SwitchSprinkle the lone sprinkle moves to the other admissible
    stick within its own flavour; for TwoFlavourStick the two flavours
    exchange their sticks."""
    t = s.parent
    label = flavoured_classify(s)
    if label[0] == "SwitchSprinkle":
        (k1, k2) = label[1:]
        if any(v == s.i for v in s.p1_va):
            (f,) = [f for f, v in zip(s.r1_va, s.p1_va) if v == s.i]
            other = k1 + k2 - t.p_va[f - 1]
            newp, pos = _relabel(t.p_va, f, other)
            to_va = tuple(sorted(pos[t.p_va[g - 1]] for g in s.r2_va))
            t2 = FlavouredType(t.d, newp, t.p_ch, t.w)
            return FlavouredCodim1Stratum(t2, s.d1, s.d2, s.i, to_va, s.r2_ch)
        (f,) = [f for f, v in zip(s.r1_ch, s.p1_ch) if v == s.i]
        other = k1 + k2 - t.p_ch[f - 1]
        newp, pos = _relabel(t.p_ch, f, other)
        to_ch = tuple(sorted(pos[t.p_ch[g - 1]] for g in s.r2_ch))
        t2 = FlavouredType(t.d, t.p_va, newp, t.w)
        return FlavouredCodim1Stratum(t2, s.d1, s.d2, s.i, s.r2_va, to_ch)
    assert label[0] == "TwoFlavourStick"
    (f_va,) = [f for f, v in zip(s.r1_va, s.p1_va) if v == s.i]
    (f_ch,) = [f for f, v in zip(s.r1_ch, s.p1_ch) if v == s.i]
    k_va = t.p_va[f_va - 1]
    k_ch = t.p_ch[f_ch - 1]
    newva, pos_va = _relabel(t.p_va, f_va, k_ch)
    newch, pos_ch = _relabel(t.p_ch, f_ch, k_va)
    to_va = tuple(sorted(pos_va[t.p_va[g - 1]] for g in s.r2_va))
    to_ch = tuple(sorted(pos_ch[t.p_ch[g - 1]] for g in s.r2_ch))
    t2 = FlavouredType(t.d, newva, newch, t.w)
    return FlavouredCodim1Stratum(t2, s.d1, s.d2, s.i, to_va, to_ch)


def flavoured_enumerate_and_classify(ft):
    """All codimension-one strata of a flavoured type with their
    classification."""
    return [(s, flavoured_classify(s)) for s in flavoured_enumerate_codim1(ft)]
