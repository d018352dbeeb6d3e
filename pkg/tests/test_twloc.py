import pytest

from ncpencil.ainfcat import (check_ainf, check_units, cohomology_category,
                              with_strict_units)
from ncpencil.exactlin import GradedSpace
from ncpencil.twloc import (LocalisationDatum, TwistedComplex, build_twisted,
                            cone, is_contractible, localised_category,
                            localised_cohomology, localised_hom, single,
                            tw_hom_cohomology)

from conftest import a2_category, dg_category


def arrow_category():
    homs = {
        ("0", "0"): GradedSpace([("e0", 0, 0)]),
        ("1", "1"): GradedSpace([("e1", 0, 0)]),
        ("0", "1"): GradedSpace([("s", 0, 0)]),
    }
    return with_strict_units(["0", "1"], homs, {"0": "e0", "1": "e1"}, {})


def iso_category():
    # two objects with mutually inverse degree-zero morphisms
    homs = {
        ("P", "P"): GradedSpace([("eP", 0, 0)]),
        ("Q", "Q"): GradedSpace([("eQ", 0, 0)]),
        ("P", "Q"): GradedSpace([("f", 0, 0)]),
        ("Q", "P"): GradedSpace([("g", 0, 0)]),
    }
    mu = {
        ((("Q", "P"), "g"), (("P", "Q"), "f")): {(("P", "P"), "eP"): 1},
        ((("P", "Q"), "f"), (("Q", "P"), "g")): {(("Q", "Q"), "eQ"): 1},
    }
    return with_strict_units(["P", "Q"], homs, {"P": "eP", "Q": "eQ"}, mu)


def test_maurer_cartan_validation():
    cat = dg_category()
    # a0 is not closed, so its cone fails the Maurer-Cartan equation
    with pytest.raises(ValueError):
        cone(cat, {(("0", "1"), "a0"): 1}, "0", "1")
    # a closed morphism is fine
    cone(cat, {(("1", "1"), "e1"): 1}, "1", "1")
    # a wrong-degree component is rejected outright
    with pytest.raises(AssertionError):
        build_twisted(dg_category(), [("0", 1), ("1", 0)],
                      {(1, 0): {(("0", "1"), "a1"): 1}})
    # two composable unit components without the correcting long component
    # violate the quadratic part of the Maurer-Cartan equation
    e1 = (("1", "1"), "e1")
    with pytest.raises(ValueError):
        build_twisted(dg_category(), [("1", 2), ("1", 1), ("1", 0)],
                      {(1, 0): {e1: 1}, (2, 1): {e1: 1}})


def test_single_hom_matches_base():
    cat = dg_category()
    for pair in cat.homs:
        t0 = single(cat, pair[0])
        t1 = single(cat, pair[1])
        assert tw_hom_cohomology(t0, t1) == \
            cat.hom_complex(pair).cohomology_dims()


def test_shift_moves_reported_degrees():
    cat = dg_category()
    for pair in cat.homs:
        base_dims = cat.hom_complex(pair).cohomology_dims()
        for k in (1, 2, 3):
            got = tw_hom_cohomology(single(cat, pair[0]),
                                    single(cat, pair[1], k))
            assert got == {d - k: v for d, v in base_dims.items()}
            got = tw_hom_cohomology(single(cat, pair[0], k),
                                    single(cat, pair[1]))
            assert got == {d + k: v for d, v in base_dims.items()}


def test_cone_of_isomorphism_is_contractible():
    cat = iso_category()
    assert check_ainf(cat, 4) == []
    c = cone(cat, {(("P", "Q"), "f"): 1}, "P", "Q")
    assert is_contractible(c)
    # and a cone of a unit likewise, even with a differential around
    dg = dg_category()
    assert is_contractible(cone(dg, {(("1", "1"), "e1"): 1}, "1", "1"))


def test_cone_of_non_isomorphism_is_not_contractible():
    cat = a2_category()
    c = cone(cat, {(("0", "1"), "a"): 1}, "0", "1")
    assert not is_contractible(c)
    assert tw_hom_cohomology(c, c) == {0: 1}


def test_direct_sum_hom_dimensions():
    cat = a2_category()
    t = TwistedComplex(cat, [("0", 1), ("1", 0)], {})
    z = single(cat, "2")
    got = tw_hom_cohomology(t, z)
    a = tw_hom_cohomology(single(cat, "0", 1), z)
    b = tw_hom_cohomology(single(cat, "1"), z)
    want = {}
    for part in (a, b):
        for d, v in part.items():
            want[d] = want.get(d, 0) + v
    assert got == want


def _string_length(meta, key):
    return len(meta[key][0])


def test_localised_category_is_coherent_within_budget():
    cases = [
        (arrow_category(), ("s", "0", "1", {(("0", "1"), "s"): 1}), 2, 3),
        (a2_category(), ("a", "0", "1", {(("0", "1"), "a"): 1}), 1, 3),
        (dg_category(), ("e1", "1", "1", {(("1", "1"), "e1"): 1}), 1, 3),
    ]
    for base, s, lmax, dmax in cases:
        ld = LocalisationDatum(base, [s], lmax=lmax)
        cat, meta = localised_category(ld, dmax=dmax)
        assert check_units(cat) == []
        bad = [v for v in check_ainf(cat, dmax)
               if sum(_string_length(meta, k) for k in v[0]) <= lmax]
        assert bad == []
        # composition never increases the total string length
        for inputs, outs in cat.mu.items():
            total = sum(_string_length(meta, k) for k in inputs)
            for o in outs:
                assert _string_length(meta, o) <= min(total, lmax)


def test_localisation_inverts_the_arrow():
    base = arrow_category()
    s = ("s", "0", "1", {(("0", "1"), "s"): 1})
    # H^0 of every localised hom stabilises at one dimension
    for lmax in (1, 2, 3):
        ld = LocalisationDatum(base, [s], lmax=lmax)
        for pair in [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]:
            assert localised_cohomology(ld, *pair).get(0) == 1
    # and the degree-zero class inverse to s exists on the cohomology level
    ld = LocalisationDatum(base, [s], lmax=2)
    cat, meta = localised_category(ld, dmax=2)
    h = cohomology_category(cat)
    s_class = h.project(("0", "1"), {(("0", "1"), "0|0|s"): 1})
    (s_label,) = s_class
    inv = [l for l in h.labels
           if h.reps[l][0] == ("1", "0") and h.degree(l) == 0]
    (t_label,) = inv
    assert h.product(s_label, t_label) == \
        {k: -v for k, v in h.unit_label("1").items()}
    assert h.product(t_label, s_label) == \
        {k: -v for k, v in h.unit_label("0").items()}


def test_localising_at_nothing_keeps_the_category():
    base = dg_category()
    ld = LocalisationDatum(base, [], lmax=1)
    for pair in base.homs:
        cc, names = localised_hom(ld, *pair)
        assert cc.cohomology_dims() == \
            base.hom_complex(pair).cohomology_dims()
