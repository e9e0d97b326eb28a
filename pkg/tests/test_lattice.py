import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logcy.lattice import (
    ClassVector,
    EllipticRuled,
    HirzebruchOne,
    LatticeError,
    LatticeMismatch,
    Rational,
    SphereProduct,
    UnsupportedConversion,
    adjunction_genus,
    conversion_rows,
    convert_basis,
    determinant,
    format_combination,
    parse_combination,
    rational_model,
)

LATTICES = [
    Rational(0), Rational(1), Rational(3), Rational(6),
    SphereProduct(0), SphereProduct(1), SphereProduct(3),
    HirzebruchOne(0), HirzebruchOne(2),
    EllipticRuled(0, 0), EllipticRuled(1, 0), EllipticRuled(0, 2), EllipticRuled(1, 3),
]


def vectors(L, lo=-5, hi=5):
    return st.lists(st.integers(lo, hi), min_size=L.rank, max_size=L.rank).map(
        lambda xs: ClassVector(tuple(xs), L)
    )


@pytest.mark.parametrize(
    "L, k_square",
    [
        (Rational(0), 9), (Rational(4), 5), (SphereProduct(0), 8), (SphereProduct(2), 6),
        (HirzebruchOne(0), 8), (HirzebruchOne(1), 7),
        (EllipticRuled(0, 0), 0), (EllipticRuled(1, 0), 0), (EllipticRuled(1, 2), -2),
    ],
)
def test_canonical_square(L, k_square):
    assert L.canonical.square == k_square


def test_canonical_classes():
    assert Rational(2).canonical == Rational(2).element("-3H+E1+E2")
    assert SphereProduct().canonical == SphereProduct().element("-2f-2s")
    assert HirzebruchOne().canonical == HirzebruchOne().element("-f-2s")
    assert EllipticRuled(1, 0).canonical == EllipticRuled(1, 0).element("f-2s")


def test_gram_entries():
    assert Rational(2).gram == ((1, 0, 0), (0, -1, 0), (0, 0, -1))
    assert SphereProduct().gram == ((0, 1), (1, 0))
    assert HirzebruchOne().gram == ((0, 1), (1, 1))
    assert EllipticRuled(1, 0).gram == ((0, 1), (1, 1))


@pytest.mark.parametrize(
    "L, expr, genus",
    [
        (Rational(0), "3H", 1), (Rational(0), "H", 0), (Rational(0), "2H", 0),
        (Rational(2), "3H-E1-E2", 1), (SphereProduct(), "2f+2s", 1), (SphereProduct(), "f+3s", 0),
        (HirzebruchOne(), "f+2s", 1), (EllipticRuled(0, 0), "2s", 1), (EllipticRuled(0, 0), "f", 0),
    ],
)
def test_adjunction_genus(L, expr, genus):
    assert adjunction_genus(L.element(expr)) == genus


def test_parse_and_format():
    names = Rational(2).basis_names
    assert parse_combination("3H - E1 - 2E2", names) == [3, -1, -2]
    assert format_combination((3, -1, -2), names) == "3H-E1-2E2"
    assert format_combination((0, 0, 0), names) == "0"
    with pytest.raises(LatticeError):
        parse_combination("3H+Q", names)


def test_mismatch_and_rank_errors():
    with pytest.raises(LatticeMismatch):
        Rational(0).element("H").dot(Rational(1).element("H"))
    with pytest.raises(LatticeError):
        ClassVector((1, 2), Rational(0))


def test_hirzebruch_to_rational():
    c = convert_basis(HirzebruchOne().element("f+2s"), Rational(1))
    assert c == Rational(1).element("3H-E1")
    assert convert_basis(HirzebruchOne().element("f"), Rational(1)) == Rational(1).element("H-E1")


def test_sphere_product_blow_up_to_rational():
    S = SphereProduct(1)
    R = Rational(2)
    assert convert_basis(S.element("f"), R) == R.element("H-E1")
    assert convert_basis(S.element("s"), R) == R.element("H-E2")
    assert convert_basis(S.element("E1"), R) == R.element("H-E1-E2")


def test_unsupported_conversion():
    with pytest.raises(UnsupportedConversion):
        convert_basis(Rational(1).element("H"), EllipticRuled(0, 0))
    with pytest.raises(UnsupportedConversion):
        convert_basis(SphereProduct(0).element("f"), Rational(1))


def test_rational_model():
    assert rational_model(SphereProduct(1)) == Rational(2)
    assert rational_model(HirzebruchOne(0)) == Rational(1)
    assert rational_model(SphereProduct(0)) == SphereProduct(0)


PAIRS = [
    (HirzebruchOne(0), Rational(1)), (HirzebruchOne(2), Rational(3)),
    (SphereProduct(1), Rational(2)), (SphereProduct(3), Rational(4)),
    (EllipticRuled(0, 1), EllipticRuled(1, 1)), (EllipticRuled(1, 3), EllipticRuled(0, 3)),
]


@pytest.mark.parametrize("src, dst", PAIRS)
def test_conversions_are_unimodular(src, dst):
    assert abs(determinant(conversion_rows(src, dst))) == 1
    assert convert_basis(src.canonical, dst) == dst.canonical


@pytest.mark.parametrize("src, dst", PAIRS)
def test_conversion_preserves_pairing(src, dst):
    @settings(max_examples=40, deadline=None)
    @given(vectors(src), vectors(src))
    def check(x, y):
        assert convert_basis(x, dst).dot(convert_basis(y, dst)) == x.dot(y)
        assert convert_basis(convert_basis(x, dst), src) == x

    check()


@pytest.mark.parametrize("L", LATTICES, ids=str)
def test_bilinear_symmetric(L):
    @settings(max_examples=40, deadline=None)
    @given(vectors(L), vectors(L), vectors(L), st.integers(-4, 4))
    def check(x, y, z, a):
        assert x.dot(y) == y.dot(x)
        assert (x + y).dot(z) == x.dot(z) + y.dot(z)
        assert (a * x).dot(y) == a * x.dot(y)
        assert (x - x) == L.zero()

    check()


@pytest.mark.parametrize("L", LATTICES, ids=str)
def test_unimodular_gram(L):
    assert abs(determinant(L.gram)) == 1


@pytest.mark.parametrize("L", LATTICES, ids=str)
def test_dual_raw_matches_gram(L):
    @settings(max_examples=30, deadline=None)
    @given(vectors(L), vectors(L))
    def check(x, y):
        w = L.dual_raw(y.coeffs)
        assert sum(a * b for a, b in zip(x.coeffs, w)) == x.dot(y)
        assert list(w) == [sum(g * c for g, c in zip(row, y.coeffs)) for row in L.gram]

    check()
