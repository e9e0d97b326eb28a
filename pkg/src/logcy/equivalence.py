"""Homological equivalence of divisor configurations via lattice isometries.

The verdict is taken at the lattice level: two configurations are declared
equivalent when an isometry of the intersection lattice carries the
components of one onto the components of the other.  Whether every such
isometry is induced by a diffeomorphism is not decided here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .blowdown import _invert_unimodular, apply_rows
from .divisor import DivisorConfig, cycle_order, genus_profile, validate
from .exceptional import all_rational_exceptional
from .lattice import (
    AmbientLattice,
    ClassVector,
    EllipticRuled,
    Kind,
    LatticeError,
    LatticeMismatch,
    conversion_rows,
    convert_basis,
    determinant,
    rational_model,
)
from .reduction import InvalidDivisor

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
UNKNOWN = "Unknown"
INDEXED = "indexed"
UNINDEXED = "unindexed"

DEFAULT_BUDGET = 1_000_000

CAVEAT = (
    "verdict is at the level of lattice isometries; realizability of the "
    "isometry by a diffeomorphism is assumed"
)


class StrictNeedsAreas(ValueError):
    pass


class AnticanonicalViolation(LatticeError):
    pass


@dataclass(frozen=True)
class Isometry:
    """``images[i]`` is the image of the i-th basis vector."""

    images: tuple[tuple[int, ...], ...]
    lattice: AmbientLattice

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        """Column convention: column i holds the image of basis vector i."""
        return tuple(zip(*self.images))

    def __call__(self, c: ClassVector) -> ClassVector:
        if c.lattice != self.lattice:
            raise LatticeMismatch(f"{c.lattice} vs {self.lattice}")
        return ClassVector(apply_rows(c.coeffs, self.images), self.lattice)

    def is_isometry(self) -> bool:
        L = self.lattice
        r = L.rank
        return all(
            L.pair_raw(self.images[i], self.images[j]) == L.gram[i][j]
            for i in range(r)
            for j in range(r)
        ) and abs(determinant(self.matrix)) == 1

    def fixes_canonical(self) -> bool:
        return self(self.lattice.canonical) == self.lattice.canonical

    def inverse(self) -> "Isometry":
        inv = _invert_unimodular([list(r) for r in self.images])
        return Isometry(tuple(map(tuple, inv)), self.lattice)

    @classmethod
    def identity(cls, L: AmbientLattice) -> "Isometry":
        return cls(tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)), L)


@dataclass
class Verdict:
    status: str
    strict: bool
    mode: str
    witness: Optional[Isometry] = None
    sigma: Optional[tuple[int, ...]] = None
    obstruction: str = ""
    nodes: int = 0
    notes: list[str] = field(default_factory=lambda: [CAVEAT])

    @property
    def equivalent(self) -> bool:
        return self.status == EQUIVALENT

    def __str__(self) -> str:
        kind = "strict " if self.strict else ""
        if self.status == EQUIVALENT:
            sig = ",".join(str(s + 1) for s in self.sigma)
            return f"{self.status} ({kind}{self.mode}; sigma = [{sig}])"
        if self.status == NOT_EQUIVALENT:
            return f"{self.status} ({kind}{self.mode}): {self.obstruction}"
        return f"{self.status} ({kind}{self.mode}): {self.obstruction}"


# -- normalization ---------------------------------------------------------------


def comparison_lattice(L: AmbientLattice) -> AmbientLattice:
    L = rational_model(L)
    if L.kind is Kind.ELLIPTIC_RULED and L.n >= 1 and L.twist == 1:
        return EllipticRuled(0, L.n)
    return L


def _normalize(D: DivisorConfig) -> DivisorConfig:
    T = comparison_lattice(D.lattice)
    if T == D.lattice:
        return D
    areas = None
    if D.areas is not None:
        back = conversion_rows(T, D.lattice)
        areas = tuple(sum(a * v for a, v in zip(D.areas, row)) for row in back)
    return DivisorConfig(
        T, tuple(convert_basis(c, T) for c in D.classes), D.edges, D.names, D.markings, areas
    )


# -- relabelings -----------------------------------------------------------------


def graph_isomorphisms(D1: DivisorConfig, D2: DivisorConfig) -> list[tuple[int, ...]]:
    """Bijections sigma of components carrying the dual graph of D1 to that of D2."""
    k = D1.k
    if k != D2.k:
        return []
    if k <= 2:
        cands = list(itertools.permutations(range(k)))
    else:
        o1, o2 = cycle_order(D1), cycle_order(D2)
        cands = []
        for start in range(k):
            for step in (1, -1):
                sigma = [0] * k
                for t in range(k):
                    sigma[o1[t]] = o2[(start + step * t) % k]
                cands.append(tuple(sigma))
    e2 = D2.edge_counts()
    out = []
    for s in cands:
        mapped = {}
        for a, b in D1.edges:
            key = (min(s[a], s[b]), max(s[a], s[b]))
            mapped[key] = mapped.get(key, 0) + 1
        if mapped == dict(e2) and s not in out:
            out.append(s)
    return sorted(out)


def _gram(D: DivisorConfig) -> list[list[int]]:
    return [[a.dot(b) for b in D.classes] for a in D.classes]


# -- isometry search -------------------------------------------------------------


class _Budget(Exception):
    pass


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _Budget


def _area(areas, v) -> Fraction:
    return sum((a * x for a, x in zip(areas, v)), Fraction(0))


def _rational_isometries(
    D1: DivisorConfig, D2: DivisorConfig, sigma, strict: bool, search: _Search
) -> Iterator[tuple]:
    """K-fixing isometries of Rational(n <= 8) sending C1_j to C2_sigma(j).

    An isometry fixing K is determined by the images of E_1..E_n, which
    are pairwise orthogonal exceptional classes; H is recovered from
    3H = sum(E_i) - K.
    """
    L = D1.lattice
    n = L.n
    r = L.rank
    K = L.canonical.coeffs
    if n == 0:
        yield ((1,),)
        return
    comps1 = [c.coeffs for c in D1.classes]
    comps2 = [D2.classes[sigma[j]].coeffs for j in range(D1.k)]
    groups: dict[tuple, list] = {}
    for x in all_rational_exceptional(n):
        key = tuple(L.pair_raw(x, c) for c in comps2)
        if strict:
            key += (_area(D2.areas, x),)
        groups.setdefault(key, []).append(x)
    need = []
    for i in range(1, r):
        b = tuple(int(j == i) for j in range(r))
        key = tuple(L.pair_raw(b, c) for c in comps1)
        if strict:
            key += (D1.areas[i],)
        need.append(groups.get(key, []))
    if any(not c for c in need):
        return
    imgs: list = []

    def rec(i):
        search.tick()
        if i == n:
            tot = [sum(v[j] for v in imgs) - K[j] for j in range(r)]
            if any(t % 3 for t in tot):
                return
            h = tuple(t // 3 for t in tot)
            yield (h,) + tuple(imgs)
            return
        for x in need[i]:
            if all(L.pair_raw(x, y) == 0 for y in imgs) and x not in imgs:
                imgs.append(x)
                yield from rec(i + 1)
                imgs.pop()

    yield from rec(0)


def _sphere_product_isometries(D1, D2, sigma, strict, search) -> Iterator[tuple]:
    # isotropic classes x with x.K = -2 are f and s; Phi(s) = -K/2 - Phi(f)
    for f_img in ((1, 0), (0, 1)):
        search.tick()
        yield (f_img, (1 - f_img[0], 1 - f_img[1]))


def _bounded_isometries(D1, D2, sigma, strict, search, bound) -> Iterator[tuple]:
    """Column search over images with entries in [-bound, bound]."""
    L = D1.lattice
    r = L.rank
    G = L.gram
    comps1 = [c.coeffs for c in D1.classes]
    comps2 = [D2.classes[sigma[j]].coeffs for j in range(D1.k)]
    box = list(itertools.product(range(-bound, bound + 1), repeat=r))
    cands = []
    for i in range(r):
        b = tuple(int(j == i) for j in range(r))
        want = tuple(L.pair_raw(b, c) for c in comps1)
        cs = [
            v for v in box
            if L.pair_raw(v, v) == G[i][i]
            and tuple(L.pair_raw(v, c) for c in comps2) == want
            and (not strict or _area(D2.areas, v) == D1.areas[i])
        ]
        if not cs:
            return
        cands.append(cs)
    imgs: list = []

    def rec(i):
        search.tick()
        if i == r:
            yield tuple(imgs)
            return
        for v in cands[i]:
            if all(L.pair_raw(v, imgs[j]) == G[i][j] for j in range(i)):
                imgs.append(v)
                yield from rec(i + 1)
                imgs.pop()

    yield from rec(0)


def _check_witness(phi: Isometry, D1, D2, sigma, strict) -> bool:
    if not phi.is_isometry():
        return False
    if any(phi(c) != D2.classes[sigma[j]] for j, c in enumerate(D1.classes)):
        return False
    if strict:
        r = D1.lattice.rank
        for i in range(r):
            if _area(D2.areas, phi.images[i]) != D1.areas[i]:
                return False
    return True


def decide(
    D1: DivisorConfig,
    D2: DivisorConfig,
    mode: str = UNINDEXED,
    strict: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> Verdict:
    """Decide (strict) homological equivalence of two configurations.

    ``mode`` is ``"indexed"`` (C1_j must go to C2_j) or ``"unindexed"``
    (C1_j goes to C2_sigma(j) for a dual graph isomorphism sigma).  The
    search is complete on Rational(n <= 8) and S^2 x S^2; elsewhere a
    failed search within the coefficient bounds yields Unknown.
    """
    if mode not in (INDEXED, UNINDEXED):
        raise ValueError(f"unknown mode {mode!r}")
    if strict and (D1.areas is None or D2.areas is None):
        raise StrictNeedsAreas("strict equivalence needs area data on both sides")
    for D in (D1, D2):
        rep = validate(D)
        if not rep.ok:
            raise InvalidDivisor(rep)

    def verdict(status, **kw):
        return Verdict(status, strict, mode, **kw)

    A, B = _normalize(D1), _normalize(D2)
    if A.lattice != B.lattice:
        return verdict(NOT_EQUIVALENT, obstruction=f"ambient lattices differ: {D1.lattice} vs {D2.lattice}")
    if A.k != B.k:
        return verdict(NOT_EQUIVALENT, obstruction=f"component count differs: {A.k} vs {B.k}")
    g1, g2 = genus_profile(A), genus_profile(B)
    if sorted(g1) != sorted(g2) or (mode == INDEXED and g1 != g2):
        return verdict(NOT_EQUIVALENT, obstruction="genus profiles differ")

    if mode == INDEXED:
        sigmas = [tuple(range(A.k))]
        if A.edge_counts() != B.edge_counts():
            sigmas = []
    else:
        sigmas = graph_isomorphisms(A, B)
    if not sigmas:
        return verdict(NOT_EQUIVALENT, obstruction="dual graphs do not match")
    G1, G2 = _gram(A), _gram(B)
    sigmas = [
        s for s in sigmas
        if all(G1[i][j] == G2[s[i]][s[j]] for i in range(A.k) for j in range(A.k))
    ]
    if not sigmas:
        return verdict(NOT_EQUIVALENT, obstruction="Gram matrices of the component tuples differ under every allowed relabeling")
    if strict:
        sigmas = [
            s for s in sigmas
            if all(A.component_area(j) == B.component_area(s[j]) for j in range(A.k))
        ]
        if not sigmas:
            return verdict(NOT_EQUIVALENT, obstruction="component areas differ under every allowed relabeling")

    L = A.lattice
    search = _Search(budget)
    complete = True
    if L.kind is Kind.RATIONAL and L.n <= 8:
        gens = lambda s: _rational_isometries(A, B, s, strict, search)  # noqa: E731
    elif L.kind is Kind.SPHERE_PRODUCT and L.n == 0:
        gens = lambda s: _sphere_product_isometries(A, B, s, strict, search)  # noqa: E731
    else:
        complete = False
        gens = lambda s: itertools.chain.from_iterable(  # noqa: E731
            _bounded_isometries(A, B, s, strict, search, bd) for bd in (1, 2, 3)
        )
    try:
        for s in sigmas:
            for imgs in gens(s):
                phi = Isometry(tuple(imgs), L)
                if _check_witness(phi, A, B, s, strict):
                    return verdict(EQUIVALENT, witness=phi, sigma=s, nodes=search.nodes)
    except _Budget:
        return verdict(UNKNOWN, obstruction=f"search budget of {budget} nodes exhausted", nodes=search.nodes)
    if not complete:
        return verdict(UNKNOWN, obstruction=f"no isometry with small coefficients on {L}", nodes=search.nodes)
    what = "area-preserving isometry" if strict else "lattice isometry"
    return verdict(NOT_EQUIVALENT, obstruction=f"no {what} carries the components across", nodes=search.nodes)


# -- oracle and pushforward ------------------------------------------------------


def isometry_oracle(L: AmbientLattice, coefficient_bound: int) -> list[Isometry]:
    """All isometries of ``L`` with entries in [-bound, bound] (rank <= 4)."""
    if L.rank > 4:
        raise ValueError(f"oracle is limited to rank <= 4, got {L.rank}")
    B = coefficient_bound
    r = L.rank
    G = L.gram
    vecs = list(itertools.product(range(-B, B + 1), repeat=r))
    by_square = [[v for v in vecs if L.pair_raw(v, v) == G[i][i]] for i in range(r)]
    out = []
    cols: list = []

    def rec(i):
        if i == r:
            out.append(Isometry(tuple(cols), L))
            return
        for v in by_square[i]:
            if all(L.pair_raw(v, cols[j]) == G[i][j] for j in range(i)):
                cols.append(v)
                rec(i + 1)
                cols.pop()

    rec(0)
    return out


def apply(phi: Isometry, D: DivisorConfig) -> DivisorConfig:
    """Push ``D`` forward along ``phi``; areas are transported so phi^* w' = w."""
    if phi.lattice != D.lattice:
        raise LatticeMismatch(f"{phi.lattice} vs {D.lattice}")
    classes = tuple(phi(c) for c in D.classes)
    total = [sum(col) for col in zip(*(c.coeffs for c in classes))]
    if tuple(total) != (-D.lattice.canonical).coeffs:
        raise AnticanonicalViolation("the isometry does not fix K; the image is not anticanonical")
    areas = None
    if D.areas is not None:
        inv = phi.inverse()
        areas = tuple(_area(D.areas, inv.images[i]) for i in range(D.lattice.rank))
    return DivisorConfig(D.lattice, classes, D.edges, D.names, D.markings, areas)


def isometries_fixing_canonical(L: AmbientLattice, coefficient_bound: int) -> list[Isometry]:
    return [phi for phi in isometry_oracle(L, coefficient_bound) if phi.fixes_canonical()]
