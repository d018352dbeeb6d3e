"""Shared example categories for the test suite."""

from ncpencil.ainfcat import AInfCategory, with_strict_units
from ncpencil.exactlin import GradedSpace


def k(pair, name):
    return (pair, name)


def point_category():
    """One object, hom = Q e + Q x with |x| = 1 and all non-unit products 0."""
    homs = {("o", "o"): GradedSpace([("e", 0, 0), ("x", 1, 0)])}
    return with_strict_units(["o"], homs, {"o": "e"}, {})


def a2_category():
    """Directed quiver 0 -> 1 -> 2 with one-dimensional homs and the obvious
    composition."""
    homs = {
        ("0", "0"): GradedSpace([("e0", 0, 0)]),
        ("1", "1"): GradedSpace([("e1", 0, 0)]),
        ("2", "2"): GradedSpace([("e2", 0, 0)]),
        ("0", "1"): GradedSpace([("a", 0, 0)]),
        ("1", "2"): GradedSpace([("b", 0, 0)]),
        ("0", "2"): GradedSpace([("ba", 0, 0)]),
    }
    units = {"0": "e0", "1": "e1", "2": "e2"}
    mu = {
        (k(("1", "2"), "b"), k(("0", "1"), "a")): {k(("0", "2"), "ba"): 1},
    }
    return with_strict_units(["0", "1", "2"], homs, units, mu)


def dg_category():
    """A directed dg category with a nontrivial differential interacting with
    the composition, to exercise the Koszul signs."""
    homs = {
        ("0", "0"): GradedSpace([("e0", 0, 0)]),
        ("1", "1"): GradedSpace([("e1", 0, 0)]),
        ("2", "2"): GradedSpace([("e2", 0, 0)]),
        ("0", "1"): GradedSpace([("a0", 0, 0), ("a1", 1, 0)]),
        ("1", "2"): GradedSpace([("b", 1, 0)]),
        ("0", "2"): GradedSpace([("c1", 1, 0), ("c2", 2, 0)]),
    }
    units = {"0": "e0", "1": "e1", "2": "e2"}
    p01, p12, p02 = ("0", "1"), ("1", "2"), ("0", "2")
    mu = {
        (k(p01, "a0"),): {k(p01, "a1"): 1},
        (k(p02, "c1"),): {k(p02, "c2"): 1},
        (k(p12, "b"), k(p01, "a0")): {k(p02, "c1"): 1},
        # Leibniz forces mu2(b, a1) = -mu1(mu2(b, a0)) here
        (k(p12, "b"), k(p01, "a1")): {k(p02, "c2"): -1},
    }
    return with_strict_units(["0", "1", "2"], homs, units, mu)
