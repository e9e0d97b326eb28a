import random
from fractions import Fraction

import pytest

from logcy.corpus import random_blow_ups
from logcy.divisor import DivisorConfig
from logcy.equivalence import (
    EQUIVALENT,
    INDEXED,
    NOT_EQUIVALENT,
    UNINDEXED,
    AnticanonicalViolation,
    Isometry,
    StrictNeedsAreas,
    apply,
    decide,
    isometries_fixing_canonical,
    isometry_oracle,
)
from logcy.lattice import EllipticRuled, Rational, SphereProduct
from logcy.reduction import all_minimal_models, minimal_model


def test_reflexive_b3():
    v = decide(minimal_model("B3"), minimal_model("B3"))
    assert v.status == EQUIVALENT
    assert v.witness.images == Isometry.identity(Rational(0)).images


def test_b2_vs_b3_component_count():
    v = decide(minimal_model("B2"), minimal_model("B3"))
    assert v.status == NOT_EQUIVALENT
    assert "component count" in v.obstruction


def test_indexed_vs_unindexed_swap():
    L = SphereProduct()
    A = DivisorConfig.from_strings(L, ["f", "f+2s"])
    B = DivisorConfig.from_strings(L, ["f+2s", "f"])
    v = decide(A, B, mode=INDEXED)
    assert v.status == NOT_EQUIVALENT and "Gram" in v.obstruction
    v = decide(A, B, mode=UNINDEXED)
    assert v.status == EQUIVALENT and v.sigma == (1, 0)


def test_oracle_examples():
    R1 = isometry_oracle(Rational(1), 2)
    imgs = {phi.images for phi in R1}
    assert ((1, 0), (0, 1)) in imgs
    assert ((1, 0), (0, -1)) in imgs
    S = {phi.images for phi in isometry_oracle(SphereProduct(), 1)}
    assert ((0, 1), (1, 0)) in S
    for L in (Rational(2), SphereProduct(1), EllipticRuled(0, 1)):
        neg = tuple(tuple(-int(i == j) for j in range(L.rank)) for i in range(L.rank))
        assert neg in {phi.images for phi in isometry_oracle(L, 1)}


def test_oracle_isometries_are_isometries():
    for phi in isometry_oracle(Rational(2), 2):
        assert phi.is_isometry()


def test_oracle_rank_limit():
    with pytest.raises(ValueError):
        isometry_oracle(Rational(4), 1)


def test_apply_examples():
    D = minimal_model("C2", 0)
    assert apply(Isometry.identity(D.lattice), D) == D
    swap = Isometry(((0, 1), (1, 0)), SphereProduct())
    E = apply(swap, D)
    L = SphereProduct()
    assert E.classes == (L.element("s"), L.element("2f+s"))
    assert decide(D, E).status == EQUIVALENT
    neg = Isometry(((-1, 0), (0, -1)), L)
    with pytest.raises(AnticanonicalViolation):
        apply(neg, D)


def test_strict_needs_areas():
    with pytest.raises(StrictNeedsAreas):
        decide(minimal_model("B3"), minimal_model("B3"), strict=True)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_soundness_and_symmetry(n):
    rng = random.Random(n)
    L = Rational(n)
    phis = isometries_fixing_canonical(L, 2)
    base = DivisorConfig.from_strings(L, ["3H-" + "-".join(f"E{i + 1}" for i in range(n))])
    models = [D for _, D in all_minimal_models(range(-1, 2)) if D.lattice == Rational(0)]
    for _ in range(10):
        M = rng.choice(models)
        _, cfgs = random_blow_ups(M, n, rng)
        D = cfgs[-1]
        if D.lattice != L:
            D = base
        E = apply(rng.choice(phis), D)
        v = decide(D, E)
        assert v.status == EQUIVALENT
        image = apply(v.witness, D)
        assert all(image.classes[j] == E.classes[v.sigma[j]] for j in range(D.k))
        assert decide(E, D).status == EQUIVALENT


def test_strict_scaling_preserves_verdict():
    L = Rational(1)
    D = DivisorConfig.from_strings(L, ["E1", "H-E1", "2H-E1"], areas=(Fraction(3), Fraction(1)))
    v = decide(D, D, strict=True)
    assert v.status == EQUIVALENT
    scaled = DivisorConfig(L, D.classes, D.edges, areas=tuple(a * Fraction(5, 7) for a in D.areas))
    assert decide(scaled, scaled, strict=True).status == EQUIVALENT
    other = DivisorConfig(L, D.classes, D.edges, areas=(Fraction(3), Fraction(1, 2)))
    assert decide(D, other, strict=True).status == NOT_EQUIVALENT
    assert decide(D, other).status == EQUIVALENT


def test_elliptic_bounded_search():
    L = EllipticRuled(0, 1)
    D = DivisorConfig.from_strings(L, ["2s-E1"])
    v = decide(D, D)
    assert v.status == EQUIVALENT
    v = decide(DivisorConfig.from_strings(EllipticRuled(0, 0), ["2s"]), DivisorConfig.from_strings(EllipticRuled(1, 0), ["-f+2s"]))
    assert v.status == NOT_EQUIVALENT
