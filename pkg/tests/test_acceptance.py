"""Acceptance gate: one test per criterion, each printing a single pass line
and enforcing its runtime budget (run with -s to see the lines)."""

import itertools
import random
import time
from fractions import Fraction

from ncpencil.ainfcat import (AInfCategory, TransferDatum, check_ainf,
                              check_units, cohomology_category,
                              homotopy_transfer, trivial_extension,
                              with_strict_units)
from ncpencil.bimod import (bar_tensor, check_right_module, diagonal, dual,
                            shift, tensor_bimodules, validate_bimodule,
                            yoneda_right)
from ncpencil.exactlin import GradedSpace
from ncpencil.ncsys import (NCLinearSystem, ambient, divisor_pipeline, fibre,
                            system_from_bimodule, validate_system,
                            weight_zero_dims)
from ncpencil.poly import p_add, p_const
from ncpencil.popsicle import (FlavouredType, WeightedPopsicleType,
                               classify_stratum, enumerate_codim1,
                               enumerate_p_for_weights, flavoured_classify,
                               flavoured_enumerate_and_classify,
                               flavoured_partner, induced_weights,
                               partner_stratum, verify_cancellation)
from ncpencil.quadric import (build_f_infty, build_f_zero, build_kronecker,
                              f_infty_system, f_zero_system, generic_fibre,
                              reduce_mod, tmu_hom_table, verify_beilinson,
                              verify_detecting_element, verify_pairings,
                              verify_serre, verify_tmu_dies, yd_hom_table)
from ncpencil.twloc import (LocalisationDatum, localised_category,
                            localised_cohomology)


def _passline(num, label, t0, limit):
    dt = time.monotonic() - t0
    assert dt < limit, "criterion %d over budget: %.1fs >= %ds" \
        % (num, dt, limit)
    print("criterion %02d (%s): PASS (%.1fs)" % (num, label, dt))


def test_criterion_01_tmu_hom_tables():
    t0 = time.monotonic()
    for mu in (1, 2, -1):
        t = tmu_hom_table(3, mu)
        assert t[("X", "T")] == {0: 1, 2: 1}
        assert t[("T", "X")] == {1: 1, 3: 1}
        assert t[("T", "T")] == {0: 1, 1: 1, 2: 1, 3: 1}
    _passline(1, "T_mu hom tables, n=3", t0, 10)


def test_criterion_02_yd_hom_tables():
    t0 = time.monotonic()
    for n in (3, 4):
        for d in (1, 2, 3):
            t = yd_hom_table(n, d)
            assert t[("X", "Yd")] == {k * (n - 1): 1 for k in range(d + 2)}
            # one-dimensional, concentrated in degree 2-n (the degree the
            # composition pairing lands in)
            assert t[("Yd", "Yd-2")] == {2 - n: 1}
    _passline(2, "Y_d hom tables, d in {1,2,3}, n in {3,4}", t0, 30)


def test_criterion_03_nondegenerate_pairings():
    t0 = time.monotonic()
    rep = verify_pairings(3, ds=(2, 3), mus=(1, 2, -1))
    assert rep["ok"]
    assert all(r["full"] for _, r in rep["checks"])
    _passline(3, "composition pairings full rank", t0, 30)


def test_criterion_04_tmu_vanishing():
    t0 = time.monotonic()
    assert verify_tmu_dies(3) == \
        {"f_infty": True, "f_zero": True, "ambient": False}
    _passline(4, "T_mu contractible in both deformations only", t0, 10)


def test_criterion_05_beilinson_resolution():
    t0 = time.monotonic()
    for n in (3, 4):
        rep = verify_beilinson(n)
        assert rep["ok"] and len(rep["pairs"]) == 4
        assert rep["zero_map_control"]
    _passline(5, "diagonal resolution, cone acyclic at all pairs", t0, 60)


def test_criterion_06_serre_identities():
    t0 = time.monotonic()
    assert verify_serre(3) == {"Y1": True, "Y2": True, "Tmu": True}
    _passline(6, "Serre functor identities at n=3", t0, 60)


def test_criterion_07_detecting_element():
    t0 = time.monotonic()
    assert verify_detecting_element(3, 1)
    assert not verify_detecting_element(3, 0)
    _passline(7, "divisor class detected, trivial divisor splits", t0, 30)


def test_criterion_08_generic_fibre():
    t0 = time.monotonic()
    h = cohomology_category(generic_fibre(3, 1, 1, 1, 1))
    u = "h[X,X|2]0"
    assert h.dims[("X", "X")] == {0: 1, 2: 1}
    assert h.product(u, u) == h.unit_label("X")
    assert h.product("h[Y,X|0]0", "h[X,Y|0]0") == h.unit_label("X")
    assert h.product("h[X,Y|0]0", "h[Y,X|0]0") == h.unit_label("Y")
    _passline(8, "generic fibre: X = Y, End(X) = Q[u]/(u^2-1)", t0, 10)


def test_criterion_09_validation_suites():
    t0 = time.monotonic()
    cats = []
    for n in (3, 4):
        a = build_kronecker(n)
        cats += [a, reduce_mod(a, 2 * n - 2)]
        for lam in (1, 2, 5):
            cats += [build_f_infty(n, lam)[0], build_f_zero(n, lam)[0],
                     generic_fibre(n, 1, 1, lam, lam)]
        cats += [f_infty_system(n, 1).carrier, f_zero_system(n, 1).carrier]
    for c in cats:
        assert not check_ainf(c, 4) and not check_units(c)
    a = build_kronecker(3)
    d = diagonal(a)
    for q in (d, dual(d), shift(d, 1), shift(dual(d), -2),
              tensor_bimodules(d, dual(d))):
        assert not validate_bimodule(q)
    for z in a.objects:
        m = yoneda_right(a, z)
        assert not check_right_module(bar_tensor(m, d))
        assert not check_right_module(bar_tensor(m, dual(d)))
    te = trivial_extension(a, dual(d))
    assert not check_ainf(te, 4) and not check_units(te)
    _passline(9, "A-infinity/unit/bimodule validation suites", t0, 120)


# --- criterion 10: randomized homotopy transfer -----------------------------


def _random_dga(rng):
    """One object; e, a closed, an exact pair (s, q) with a*a landing on q,
    a surviving product target p, a spectator cocycle w, and an extra exact
    pair with no products.  Valid for any coefficients."""
    g = rng.choice([1, 2, 3])
    wdeg = rng.randrange(-2, 5)
    jdeg = rng.randrange(-3, 4)
    o = "o"
    homs = {(o, o): GradedSpace([
        ("e", 0, 0), ("a", g, 0), ("s", 2 * g - 1, 0), ("q", 2 * g, 0),
        ("p", 3 * g - 1, 0), ("w", wdeg, 0),
        ("s2", jdeg, 0), ("q2", jdeg + 1, 0)])}

    def k(n):
        return ((o, o), n)

    c0 = Fraction(rng.randrange(1, 7), rng.randrange(1, 4))
    c2 = Fraction(rng.randrange(-5, 6))
    c5 = Fraction(rng.randrange(-5, 6))
    mu = {(k("s"),): {k("q"): 1},
          (k("s2"),): {k("q2"): 1},
          (k("a"), k("a")): {k("q"): c0}}
    if c2:
        mu[(k("a"), k("s"))] = {k("p"): c2}
    if c5:
        mu[(k("s"), k("a"))] = {k("p"): c5}
    cat = with_strict_units([o], homs, {o: "e"}, mu)
    td = TransferDatum(cat, {(o, o): ["e", "a", "p", "w"]},
                       {k("q"): {k("s"): 1}, k("q2"): {k("s2"): 1}})
    return cat, td, (c0, c2, c5)


def test_criterion_10_homotopy_transfer_suite():
    t0 = time.monotonic()
    rng = random.Random(20260823)
    for trial in range(50):
        cat, td, (c0, c2, c5) = _random_dga(rng)
        assert not check_ainf(cat, 4)
        assert td.validate() == []
        out, functor = homotopy_transfer(td, 5)
        assert not check_ainf(out, 5) and not check_units(out)
        # arity-3 term-for-term: pi(mu2(x3, h mu2(x2, x1))
        #                           + mu2(h mu2(x3, x2), x1))
        keys = [kk for kk in cat.all_keys() if td.in_sub(kk)]
        for x3, x2, x1 in itertools.product(keys, repeat=3):
            got = out.mu.get((x3, x2, x1), {})
            expect = {}
            for vec in (
                    cat.mu_list([{x3: p_const(1)},
                                 td.h_apply(cat.mu_list(
                                     [{x2: p_const(1)}, {x1: p_const(1)}]))]),
                    cat.mu_list([td.h_apply(cat.mu_list(
                        [{x3: p_const(1)}, {x2: p_const(1)}])),
                        {x1: p_const(1)}])):
                for kk, cc in td.pi_apply(vec).items():
                    expect[kk] = p_add(expect.get(kk, {}), cc)
            assert got == {kk: cc for kk, cc in expect.items() if cc}
        # the cubed arrow picks up the expected Massey-type product
        ka = (("o", "o"), "a")
        a3 = out.mu.get((ka, ka, ka), {})
        if c2 + c5 != 0:
            assert list(a3.values()) == [{(): c0 * (c2 + c5)}] or \
                list(a3.values()) == [{(): -c0 * (c2 + c5)}]
        # h = 0 on the whole space is the identity
        full = TransferDatum(cat, {p: list(sp.names())
                                   for p, sp in cat.homs.items()}, {})
        assert full.validate() == []
        ident, _ = homotopy_transfer(full, 3)
        assert ident.mu == cat.mu
    _passline(10, "50 randomized transfers, explicit arity-3 match", t0, 120)


# --- criteria 11-13: popsicles, localisation toy, divisor pipeline ----------


def _plain_types(dmax):
    for d in range(1, dmax + 1):
        for w in itertools.product((0, -1), repeat=d + 1):
            for p in enumerate_p_for_weights(d, w):
                if d + len(p) >= 2:
                    yield WeightedPopsicleType(d, p, w)


def test_criterion_11_popsicle_sweeps():
    t0 = time.monotonic()
    switch = 0
    for t in _plain_types(4):
        for s in enumerate_codim1(t):
            children = [None] * s.d1
            children[s.i - 1] = (s.p2, [None] * s.d2)
            assert induced_weights((s.p1, children), t.w) == [s.w1, s.w2]
            for pv, wv in ((s.p1, s.w1), (s.p2, s.w2)):
                for v in set(pv):
                    assert sum(1 for x in pv if x == v) <= -wv[v]
            label = classify_stratum(s)
            if label[0] == "SwitchSprinkle":
                switch += 1
                s2 = partner_stratum(s)
                assert s2 != s and partner_stratum(s2) == s
    assert switch > 0
    rep = verify_cancellation(4)
    assert rep["ok"] and rep["pairs"] and not rep["failures"]
    for _, _, ddag, ddia, spade in rep["pairs"]:
        assert ddag == spade and ddia == (spade + 1) % 2
    seen = set()
    for t in _plain_types(3):
        m = len(t.p)
        for r in range(m + 1):
            for va in itertools.combinations(range(m), r):
                ft = FlavouredType(t.d, tuple(t.p[j] for j in va),
                                   tuple(t.p[j] for j in range(m)
                                         if j not in va), t.w)
                for s, c in flavoured_enumerate_and_classify(ft):
                    seen.add(c[0])
                    if c[0] in ("SwitchSprinkle", "TwoFlavourStick"):
                        s2 = flavoured_partner(s)
                        assert s2 != s and flavoured_partner(s2) == s
                        assert flavoured_classify(s2)[0] == c[0]
    assert "TwoFlavourStick" in seen
    _passline(11, "popsicle sweeps d<=4, flavoured d<=3", t0, 120)


def _arrow_category():
    homs = {("0", "0"): GradedSpace([("e0", 0, 0)]),
            ("1", "1"): GradedSpace([("e1", 0, 0)]),
            ("0", "1"): GradedSpace([("s", 0, 0)])}
    return with_strict_units(["0", "1"], homs, {"0": "e0", "1": "e1"}, {})


def test_criterion_12_localisation_toy():
    t0 = time.monotonic()
    base = _arrow_category()
    s = [("s", "0", "1", {(("0", "1"), "s"): p_const(1)})]
    # H^0 stabilises at one dimension for every pair by length 4
    for lmax in (1, 2, 3, 4):
        ld = LocalisationDatum(base, s, lmax)
        for pair in itertools.product(("0", "1"), repeat=2):
            assert localised_cohomology(ld, *pair).get(0) == 1
    # the image of s has a two-sided inverse in H^0
    ld = LocalisationDatum(base, s, 2)
    cat, _ = localised_category(ld, dmax=2)
    h = cohomology_category(cat)
    (sl,) = h.project(("0", "1"), {(("0", "1"), "0|0|s"): 1})
    (tl,) = [l for l in h.labels
             if h.reps[l][0] == ("1", "0") and h.degree(l) == 0]
    assert h.product(sl, tl) and h.product(tl, sl)
    # empty localisation keeps the base
    ld0 = LocalisationDatum(base, [], 1)
    for pair in base.homs:
        assert localised_cohomology(ld0, *pair) == \
            base.hom_complex(pair).cohomology_dims()
    _passline(12, "localisation toy: inverse appears, H^0 stabilises", t0, 10)


def _koszul_order(base):
    """A Koszul-type divisor: the trivial extension by the shifted diagonal,
    with each q-generator mapping to v times the morphism it covers."""
    c = system_from_bimodule(base, diagonal(base)).carrier
    mu = {kk: {o: dict(cc) for o, cc in row.items()}
          for kk, row in c.mu.items()}
    for pair, sp in base.homs.items():
        for n in sp.names():
            row = mu.setdefault(((pair, "q." + n),), {})
            row[(pair, n)] = p_add(row.get((pair, n), {}),
                                   {("v",): Fraction(1)})
    cat = AInfCategory(c.objects, c.homs, c.units, mu, modulus=c.modulus,
                       variables=c.variables)
    assert check_ainf(cat, 3) == []
    return cat


def test_criterion_13_divisor_pipeline():
    t0 = time.monotonic()
    unit = with_strict_units(
        ["X"], {("X", "X"): GradedSpace([("e", 0, 0)])}, {"X": "e"}, {})
    d_ord = _koszul_order(unit)
    s = [("e", "X", "X", {(("X", "X"), "e"): p_const(1)})]
    out = divisor_pipeline(d_ord, s, lmax=2, dmax=2)
    assert validate_system(out) == []
    # the ambient part computes the weight-zero localised cohomology
    amb = ambient(out)
    loc, _ = localised_category(LocalisationDatum(d_ord, s, 2), dmax=1)
    assert {p: amb.hom_complex(p).cohomology_dims() for p in amb.homs} == \
        weight_zero_dims(loc)
    # specialising the pipeline output matches localising the fibre
    for w in (0, 1, Fraction(2, 3)):
        fw = fibre(out, {"v": w})
        ldf = LocalisationDatum(fibre(NCLinearSystem(d_ord), {"v": w}), s, 2)
        for pair in fw.homs:
            assert fw.hom_complex(pair).cohomology_dims() == \
                localised_cohomology(ldf, *pair)
    # empty localisation of a richer order only decorates the names
    d2 = _koszul_order(_arrow_category())
    out2 = divisor_pipeline(d2, [], lmax=2, dmax=2)
    assert validate_system(out2) == []
    ren = {(pair, n): (pair, "0|0|" + n)
           for pair, sp in d2.homs.items() for n in sp.names()}
    assert out2.carrier.mu == \
        {tuple(ren[x] for x in kk): {ren[o]: cc for o, cc in row.items()}
         for kk, row in d2.mu.items()}
    _passline(13, "divisor pipeline on the localisation toys", t0, 30)
