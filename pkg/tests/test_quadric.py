from fractions import Fraction

import pytest

from ncpencil.ainfcat import check_ainf, check_units, cohomology_category
from ncpencil.bimod import (check_bimodule, check_bimodule_map,
                            check_bimodule_units, check_left_module,
                            check_right_module, cone_cohomology_dims,
                            diagonal, identity_map)
from ncpencil.ncsys import fibre, validate_system
from ncpencil.quadric import (beilinson_bimodules, bimodule_cone,
                              build_f_infty, build_f_zero, build_kronecker,
                              build_Tmu, build_Yd, case_study_report,
                              composition_pairing, detecting_report,
                              divisor_system, f_infty_system, f_zero_system,
                              generic_fibre, reduce_mod, rescaled,
                              tmu_hom_table, tw_yoneda_left, tw_yoneda_right,
                              verify_beilinson, verify_detecting_element,
                              verify_diagonal_hom, verify_dual_bundle,
                              verify_pairings, verify_serre, verify_tmu_dies,
                              yd_hom_table, _maps_from_h0)
from ncpencil.twloc import single, tw_hom_cohomology


def test_ambient_and_deformations_validate():
    for n in (3, 4):
        a = build_kronecker(n)
        assert not check_ainf(a, 4) and not check_units(a)
        for l in (f_infty_system(n, 1), f_zero_system(n, 2)):
            validate_system(l)
            assert not check_ainf(l.carrier, 4)
            cat = fibre(l, {"v": 1})
            assert not check_ainf(cat, 4) and not check_units(cat)
        g = generic_fibre(n, 2, -3)
        assert not check_ainf(g, 4) and not check_units(g)
    with pytest.raises(AssertionError):
        build_kronecker(2)


def test_f_infty_and_f_zero_degrees():
    n = 4
    finf, _ = build_f_infty(n, 1)
    assert finf.degree((("Y", "X"), "a*")) == n - 1
    assert finf.degree((("Y", "X"), "b*")) == 0
    fzer, _ = build_f_zero(n, 1)
    assert fzer.degree((("Y", "X"), "a*")) == 1 - n
    assert fzer.degree((("Y", "X"), "b*")) == 2 - 2 * n
    assert fzer.degree((("X", "X"), "a*a")) == 1 - n
    # lam = 0 degenerates to the trivial extension: no products out of the
    # weight -1 part survive
    triv, _ = build_f_infty(n, 0)
    assert (("X", "X"), "a*a") not in [
        o for outs in triv.mu.values() for o in outs
        if o[1] in ("e", "f", "a", "b")]
    assert ((("Y", "X"), "b*"), (("X", "Y"), "a")) not in triv.mu


def test_both_products_need_the_cyclic_grading():
    with pytest.raises(AssertionError):
        divisor_system(3, 1, 1, {"a*": 2, "b*": 0, "a*a": 2, "aa*": 2})


def test_rescaling_transports_the_fibres():
    # the automorphism scaling the four weight -1 generators by 1/4 carries
    # the lam = 1 structure constants to the lam = 4 ones, so the fibres for
    # different nonzero lam are isomorphic
    for build in (build_f_infty, build_f_zero):
        c1, _ = build(3, 1)
        c4, _ = build(3, 4)
        r = rescaled(c1, 4)
        assert r.mu == c4.mu and r.homs == c4.homs
        assert not check_ainf(r, 4)


def test_generic_fibre_boundary_cases_match_the_divisor_fibres():
    for n in (3, 4):
        ginf = generic_fibre(n, 1, 0, 5, 7)
        finf = fibre(f_infty_system(n, 5, modulus=2 * n - 2), {"v": 1})
        assert ginf.mu == finf.mu and ginf.homs == finf.homs
        gzer = generic_fibre(n, 0, 1, 5, 7)
        fzer = fibre(f_zero_system(n, 7, modulus=2 * n - 2), {"v": 1})
        assert gzer.mu == fzer.mu and gzer.homs == fzer.homs
    with pytest.raises(AssertionError):
        generic_fibre(3, 0, 0)


def test_generic_fibre_endomorphism_ring():
    # End(X) in cohomology is Q[u]/(u^2 - 1) with |u| = n - 1 mod 2n - 2,
    # and a: X -> Y is invertible, so X and Y are isomorphic
    for n in (3, 4):
        h = cohomology_category(generic_fibre(n, 1, 1, 1, 1))
        d = n - 1
        assert h.dims[("X", "X")] == {0: 1, d: 1}
        u = "h[X,X|%d]0" % d
        assert h.product(u, u) == h.unit_label("X")
        a_, ainv = "h[X,Y|0]0", "h[Y,X|0]0"
        assert h.product(ainv, a_) == h.unit_label("X")
        assert h.product(a_, ainv) == h.unit_label("Y")


def test_dual_bundle_is_a_shifted_dual_diagonal():
    assert verify_dual_bundle(3) == {"f_infty": True, "f_zero": True}
    assert verify_dual_bundle(4) == {"f_infty": True, "f_zero": True}


def test_tmu_hom_table_n3():
    for mu in (1, 2, -1):
        t = tmu_hom_table(3, mu)
        assert t[("X", "T")] == {0: 1, 2: 1}
        assert t[("T", "X")] == {1: 1, 3: 1}
        assert t[("Y", "T")] == {0: 1, 2: 1}
        assert t[("T", "Y")] == {1: 1, 3: 1}
        assert t[("T", "T")] == {0: 1, 1: 1, 2: 1, 3: 1}


def test_tmu_hom_table_n4():
    t = tmu_hom_table(4, 1)
    assert t[("T", "T")] == {0: 1, 1: 1, 3: 1, 4: 1}
    assert t[("X", "T")] == {0: 1, 3: 1}


def test_tmu_rejects_zero_and_wrong_grading():
    with pytest.raises(AssertionError):
        build_Tmu(3, 0)
    with pytest.raises(AssertionError):
        build_Tmu(3, 1, build_kronecker(3))  # needs the Z/(2n-2) reduction


def test_yd_tables():
    for n in (3, 4):
        for d in (1, 2, 3):
            t = yd_hom_table(n, d)
            assert t[("X", "Yd")] == {k * (n - 1): 1 for k in range(d + 2)}
            assert t[("Y", "Yd")] == {k * (n - 1): 1 for k in range(d + 1)}
            assert t[("Yd", "Yd-2")] == {2 - n: 1}


def test_yd_edge_cases():
    a = build_kronecker(3)
    assert tw_hom_cohomology(single(a, "X"), build_Yd(3, -1, a)) == {0: 1}
    assert tw_hom_cohomology(single(a, "Y"), build_Yd(3, 0, a)) == {0: 1}
    assert len(build_Yd(3, 2, a).summands) == 5


def test_pairings_nondegenerate():
    rep = verify_pairings(3)
    assert rep["ok"]
    for label, r in rep["checks"]:
        assert r["full"] and r["rank"] == r["rows"] == r["cols"]
    assert rep["zero_rejected"] and rep["zero_degenerates"]


def test_pairing_matrix_shapes():
    a = build_kronecker(3)
    r = composition_pairing(build_Yd(3, 3, a), single(a, "X"),
                            build_Yd(3, 1, a), -1)
    assert (r["rows"], r["cols"], r["rank"]) == (3, 3, 3)


def test_tmu_dies_in_both_deformations():
    for n in (3, 4):
        d = verify_tmu_dies(n)
        assert d == {"f_infty": True, "f_zero": True, "ambient": False}
    # lam-independence of the boolean outcome
    for lam in (2, 5):
        assert verify_tmu_dies(3, 1, lam) == \
            {"f_infty": True, "f_zero": True, "ambient": False}


def test_twisted_yoneda_modules_validate():
    n = 3
    a = build_kronecker(n)
    ared = reduce_mod(a, 2 * n - 2)
    for z in (build_Yd(n, 1, a), build_Yd(n, 2, a), single(a, "X"),
              build_Tmu(n, 1, ared)):
        assert not check_right_module(tw_yoneda_right(z))
        assert not check_left_module(tw_yoneda_left(z))


def test_bimodule_cone_of_identity_is_acyclic():
    d = diagonal(build_kronecker(3))
    c = bimodule_cone(identity_map(d))
    assert not check_bimodule(c) and not check_bimodule_units(c)
    assert all(not v for v in c.cohomology_dims().values())


def test_bimodule_cone_validates_on_nontrivial_maps():
    a = build_kronecker(3)
    src, tgt = beilinson_bimodules(a, 3)
    maps = _maps_from_h0(src, tgt)
    assert maps
    for f in maps[:3]:
        assert not check_bimodule_map(f)
        assert not check_bimodule(bimodule_cone(f))


def test_beilinson_resolution():
    for n in (3, 4):
        rep = verify_beilinson(n)
        assert rep["ok"] and rep["cone_acyclic"]
        assert rep["zero_map_control"]
        assert set(rep["pairs"]) == {("X", "X"), ("X", "Y"),
                                     ("Y", "X"), ("Y", "Y")}


def test_serre_identities():
    assert verify_serre(3) == {"Y1": True, "Y2": True, "Tmu": True}


def test_diagonal_hom_dimension_equality():
    rep = verify_diagonal_hom(3)
    assert len(rep) == 9
    assert all(v["equal"] for v in rep.values())


def test_detecting_element():
    for lam in (1, 2, 5):
        assert verify_detecting_element(3, lam)
    assert not verify_detecting_element(3, 0)
    rows = detecting_report(3, 1)
    for w in ("X", "Y"):
        assert rows[w]["middle"] == {}
        assert rows[w]["sub"] and rows[w]["quotient"]


def test_case_study_report():
    rep = case_study_report(3)
    assert rep["ok"] and all(rep["checks"].values())
    rep4 = case_study_report(4)
    assert rep4["ok"]
    bad = case_study_report(3, corrupt=True)
    assert not bad["ok"] and not bad["checks"]["ainf"]
    with pytest.raises(AssertionError):
        case_study_report(6)
