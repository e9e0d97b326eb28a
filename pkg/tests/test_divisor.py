from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcy.divisor import (
    TORUS,
    DivisorConfig,
    IntersectionPoint,
    Marking,
    SmoothPoint,
    cycle_edges,
    cycle_order,
    genus_profile,
    self_intersection_sum_check,
    shape,
    validate,
)
from logcy.lattice import EllipticRuled, HirzebruchOne, Rational, SphereProduct
from logcy.reduction import all_minimal_models


def test_b3_valid():
    D = DivisorConfig.from_strings(Rational(0), ["H", "H", "H"])
    rep = validate(D)
    assert rep.ok, str(rep)
    assert shape(D).k == 3


def test_torus_valid():
    D = DivisorConfig.from_strings(Rational(2), ["3H-E1-E2"])
    assert validate(D).ok
    assert shape(D) == TORUS
    assert genus_profile(D) == [1]


def test_sum_2h_fails_anticanonical():
    D = DivisorConfig.from_strings(Rational(0), ["H", "H"])
    rep = validate(D)
    assert not rep.ok
    assert "anticanonical" in rep.codes()
    assert "anticanonical condition failed" in str(rep)


def test_torus_with_extra_component_fails():
    D = DivisorConfig.from_strings(Rational(2), ["3H-E1", "-E2"], edges=[(0, 1)])
    rep = validate(D)
    assert "torus_or_cycle" in rep.codes()


def test_edge_multiplicity_must_match_pairing():
    D = DivisorConfig.from_strings(Rational(0), ["H", "H", "H"], edges=[(0, 1), (1, 2)])
    assert "edge_multiplicity" in validate(D).codes()


def test_disconnected_fails():
    L = SphereProduct()
    D = DivisorConfig.from_strings(L, ["f", "f", "s", "s"], edges=[])
    codes = validate(D).codes()
    assert "edge_multiplicity" in codes


def test_self_edge_and_index_errors():
    L = Rational(0)
    D = DivisorConfig(L, (L.element("H"), L.element("2H")), ((0, 0), (0, 1)))
    assert "self_edge" in validate(D).codes()
    D = DivisorConfig(L, (L.element("H"), L.element("2H")), ((0, 5),))
    assert "edge_index" in validate(D).codes()


def test_marking_reference_checked():
    L = Rational(0)
    D = DivisorConfig.from_strings(L, ["H", "2H"])
    bad = DivisorConfig(L, D.classes, D.edges, markings=(Marking(IntersectionPoint(7), L.element("H")),))
    assert "marking" in validate(bad).codes()
    good = DivisorConfig(L, D.classes, D.edges, markings=(Marking(SmoothPoint(1), L.element("H")),))
    assert validate(good).ok


def test_areas_must_be_positive_on_components():
    L = Rational(0)
    D = DivisorConfig.from_strings(L, ["H", "2H"], areas=(Fraction(-1),))
    assert not validate(D).ok
    D = DivisorConfig.from_strings(L, ["H", "2H"], areas=(Fraction(1, 3),))
    assert validate(D).ok
    assert D.component_area(1) == Fraction(2, 3)


def test_cycle_edges_shapes():
    assert cycle_edges(1) == ()
    assert cycle_edges(2) == ((0, 1), (0, 1))
    assert cycle_edges(4) == ((0, 1), (0, 3), (1, 2), (2, 3))


def test_cycle_order_square():
    D = DivisorConfig.from_strings(SphereProduct(), ["f-s", "f+s", "s", "s"], edges=[(0, 2), (0, 3), (1, 2), (1, 3)])
    assert cycle_order(D) == [0, 2, 1, 3]


@pytest.mark.parametrize("label, D", all_minimal_models(), ids=lambda x: str(x) if not isinstance(x, DivisorConfig) else "")
def test_minimal_models_validate_and_satisfy_identity(label, D):
    assert validate(D).ok
    assert self_intersection_sum_check(D)


models = all_minimal_models(range(-2, 3))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(models), st.randoms(use_true_random=False))
def test_relabel_preserves_validity(entry, rnd):
    _, D = entry
    perm = list(range(D.k))
    rnd.shuffle(perm)
    E = D.relabel(perm)
    assert validate(E).ok
    assert sorted(c.coeffs for c in E.classes) == sorted(c.coeffs for c in D.classes)
    for i in range(D.k):
        assert E.classes[perm[i]] == D.classes[i]
    inv = [0] * D.k
    for i, p in enumerate(perm):
        inv[p] = i
    assert E.relabel(inv).classes == D.classes


def test_elliptic_torus():
    for t in (0, 1):
        L = EllipticRuled(t, 0)
        D = DivisorConfig(L, (-L.canonical,), ())
        assert validate(D).ok
        assert shape(D) == TORUS


def test_hirzebruch_torus_is_valid_but_single():
    L = HirzebruchOne()
    D = DivisorConfig.from_strings(L, ["f+2s"])
    assert validate(D).ok
