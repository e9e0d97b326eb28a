"""Homology level blow-ups and blow-downs of divisor configurations."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .divisor import (
    DivisorConfig,
    IntersectionPoint,
    Marking,
    SmoothPoint,
    norm_edge,
)
from .exceptional import NONTORIC, TORIC, ExceptionalFinding, verify_finding
from .lattice import (
    AmbientLattice,
    ClassVector,
    EllipticRuled,
    Kind,
    LatticeError,
    Rational,
    SphereProduct,
    _invert_unimodular,
    conversion_rows,
)

Rows = tuple[tuple[int, ...], ...]


class BlowdownError(LatticeError):
    pass


def apply_rows(vec: Sequence[int], rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Coordinates of sum(vec[i] * b_i) where rows[i] is the image of b_i."""
    out = [0] * len(rows[0])
    for c, row in zip(vec, rows):
        if c:
            for j, v in enumerate(row):
                if v:
                    out[j] += c * v
    return tuple(out)


def compose(first: Rows, then: Rows) -> Rows:
    return tuple(apply_rows(row, then) for row in first)


def _identity(r: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def _reflection(L: AmbientLattice, root: Sequence[int]) -> Rows:
    """x -> x + (x.r) r for a root of square -2 (an isometry)."""
    r = L.rank
    rows = []
    for i in range(r):
        b = [int(i == j) for j in range(r)]
        t = L.pair_raw(b, root)
        rows.append(tuple(b[j] + t * root[j] for j in range(r)))
    return tuple(rows)


@dataclass(frozen=True)
class BlowdownStep:
    """One contraction.

    ``images[i]`` is the i-th basis vector of the source lattice written in
    the coordinates of ``frame``, a lattice isomorphic to the source in
    which the contracted class is the last basis vector.  Dropping that
    coordinate gives the result lattice.
    """

    contracted: ClassVector
    kind: str
    component: int
    frame: AmbientLattice
    images: Rows
    created_marking: Marking

    @property
    def source(self) -> AmbientLattice:
        return self.contracted.lattice

    @property
    def target(self) -> AmbientLattice:
        return AmbientLattice(self.frame.kind, self.frame.n - 1, self.frame.twist)


def normalize_to_last(e: ClassVector) -> tuple[AmbientLattice, Rows]:
    """An isometry fixing K that sends exceptional ``e`` to the last basis vector.

    Rational(n) uses Cremona reflections in H - E_a - E_b - E_c (largest
    multiplicities first) until the degree reaches 0, then a transposition.
    In Rational(2), H - E1 - E2 is not Cremona equivalent to E2 and is
    sent to S^2 x S^2 # 1 instead.  Elliptic ruled classes f - E_i use an
    elementary transformation, which flips the twist.
    """
    L = e.lattice
    r = L.rank
    last = tuple(int(j == r - 1) for j in range(r))
    if L.n >= 1 and e.coeffs == last:
        return L, _identity(r)

    if L.kind in (Kind.SPHERE_PRODUCT, Kind.HIRZEBRUCH_ONE):
        if L.n == 0:
            raise BlowdownError(f"{L} contains no exceptional class")
        R = Rational(r - 1)
        rows = conversion_rows(L, R)
        frame, more = normalize_to_last(ClassVector(apply_rows(e.coeffs, rows), R))
        return frame, compose(rows, more)

    if L.kind is Kind.ELLIPTIC_RULED:
        c = e.coeffs
        if c[1] != 0 or c[0] not in (0, 1):
            raise BlowdownError(f"{e} is not a fibre exceptional class")
        idx = [j for j in range(2, r) if c[j]]
        if len(idx) != 1:
            raise BlowdownError(f"{e} is not a fibre exceptional class")
        i = idx[0]
        rows = _identity(r)
        if i != r - 1:
            root = [0] * r
            root[i], root[r - 1] = 1, -1
            rows = _reflection(L, root)
        if c[0] == 0:
            return L, rows
        flipped = EllipticRuled(1 - L.twist, L.n)
        return flipped, compose(rows, conversion_rows(L, flipped))

    # Rational(n)
    n = L.n
    if n == 0:
        raise BlowdownError("Rational(0) contains no exceptional class")
    if n == 2 and e.coeffs == (1, -1, -1):
        S = SphereProduct(1)
        return S, conversion_rows(L, S)
    rows = _identity(r)
    cur = list(e.coeffs)
    while cur[0] != 0:
        if n < 3 or cur[0] < 0:
            raise BlowdownError(f"cannot reduce {e} by Cremona moves")
        # multiplicities m_i = -coefficient
        order = sorted(range(1, r), key=lambda j: (cur[j], j))
        a, b, c = order[:3]
        d = cur[0]
        if -(cur[a] + cur[b] + cur[c]) <= d:
            raise BlowdownError(f"Cremona move does not lower the degree of {L.vector(cur)}")
        root = [0] * r
        root[0] = 1
        root[a] = root[b] = root[c] = -1
        refl = _reflection(L, root)
        rows = compose(rows, refl)
        cur = list(apply_rows(cur, refl))
    nz = [j for j in range(1, r) if cur[j]]
    if len(nz) != 1 or cur[nz[0]] != 1:
        raise BlowdownError(f"{e} did not reduce to an exceptional basis vector")
    j = nz[0]
    if j != r - 1:
        root = [0] * r
        root[j], root[r - 1] = 1, -1
        rows = compose(rows, _reflection(L, root))
    return L, rows


def _sorted_edges(edges, markings):
    """Sort edges (stably) and remap marking edge references."""
    order = sorted(range(len(edges)), key=lambda t: edges[t])
    new_index = {old: new for new, old in enumerate(order)}
    new_edges = tuple(edges[t] for t in order)
    marks = tuple(
        replace(m, center=IntersectionPoint(new_index[m.center.edge]))
        if isinstance(m.center, IntersectionPoint)
        else m
        for m in markings
    )
    return new_edges, marks


def blow_down(D: DivisorConfig, e: ExceptionalFinding) -> tuple[DivisorConfig, BlowdownStep]:
    """Contract a toric or non-toric exceptional class of ``D``."""
    L = D.lattice
    if L.rank < 2:
        raise BlowdownError("cannot blow down in a rank 1 lattice")
    if not verify_finding(D, e):
        raise BlowdownError(f"{e.cls} is not a {e.kind} exceptional class of this divisor")
    if e.kind == TORIC and D.k <= 2:
        raise BlowdownError("toric contraction of a bigon component is not supported")

    frame, rows = normalize_to_last(e.cls)
    target = AmbientLattice(frame.kind, frame.n - 1, frame.twist)

    def descend(c: ClassVector) -> ClassVector:
        return ClassVector(apply_rows(c.coeffs, rows)[:-1], target)

    areas = None
    if D.areas is not None:
        inv = _invert_unimodular([list(x) for x in rows])
        areas = tuple(
            sum((a * v for a, v in zip(D.areas, inv[j])), Fraction(0))
            for j in range(target.rank)
        )

    if e.kind == NONTORIC:
        i = e.component
        edges = D.edges
        marks = D.markings + (Marking(SmoothPoint(i), e.cls),)
        classes = tuple(descend(c) for c in D.classes)
        names = D.names
    else:
        i = e.component
        nbrs = [b if a == i else a for a, b in D.edges if i in (a, b)]
        if len(nbrs) != 2 or nbrs[0] == nbrs[1]:
            raise BlowdownError("toric class must meet two distinct neighbours")

        def shift(j: int) -> int:
            return j - 1 if j > i else j

        keep = [t for t, (a, b) in enumerate(D.edges) if i not in (a, b)]
        edge_map = {t: new for new, t in enumerate(keep)}
        edges = tuple(norm_edge(shift(D.edges[t][0]), shift(D.edges[t][1])) for t in keep)
        edges += (norm_edge(shift(nbrs[0]), shift(nbrs[1])),)
        marks = []
        for m in D.markings:
            c = m.center
            if isinstance(c, SmoothPoint):
                if c.component != i:
                    marks.append(replace(m, center=SmoothPoint(shift(c.component))))
            elif c.edge in edge_map:
                marks.append(replace(m, center=IntersectionPoint(edge_map[c.edge])))
        marks.append(Marking(IntersectionPoint(len(edges) - 1), e.cls))
        marks = tuple(marks)
        classes = tuple(descend(c) for j, c in enumerate(D.classes) if j != i)
        names = tuple(nm for j, nm in enumerate(D.names) if j != i)

        edges, marks = _sorted_edges(edges, marks)
    out = DivisorConfig(target, classes, edges, names, marks, areas)
    # the created marking stays last: edge sorting never reorders markings
    step = BlowdownStep(e.cls, e.kind, e.component, frame, rows, marks[-1])
    return out, step


def _pad(c: ClassVector, L: AmbientLattice, last: int = 0) -> ClassVector:
    return ClassVector(c.coeffs + (last,), L)


def _new_areas(D: DivisorConfig, exc_area: Optional[Fraction]) -> Optional[tuple]:
    if D.areas is None:
        return None
    return D.areas + (Fraction(exc_area),)


def blow_up_nontoric(
    D: DivisorConfig, at: int, exceptional_area: Optional[Fraction] = None
) -> DivisorConfig:
    """Proper transform of a blow-up at a smooth point of component ``at``."""
    if not 0 <= at < D.k:
        raise IndexError(f"no component {at}")
    L2 = D.lattice.blown_up()
    classes = tuple(_pad(c, L2, -1 if j == at else 0) for j, c in enumerate(D.classes))
    if D.areas is not None and exceptional_area is None:
        exceptional_area = D.component_area(at) / 2
    return replace(D, lattice=L2, classes=classes, areas=_new_areas(D, exceptional_area))


def blow_up_toric(
    D: DivisorConfig, edge: int, exceptional_area: Optional[Fraction] = None
) -> DivisorConfig:
    """Total transform of a blow-up at intersection point ``edge``."""
    if not 0 <= edge < len(D.edges):
        raise IndexError(f"no edge {edge}")
    i, j = D.edges[edge]
    L2 = D.lattice.blown_up()
    classes = tuple(_pad(c, L2, -1 if t in (i, j) else 0) for t, c in enumerate(D.classes))
    classes += (L2.basis(L2.rank - 1),)
    new = D.k
    edges = list(D.edges)
    edges[edge] = norm_edge(i, new)
    edges.append(norm_edge(new, j))
    marks = []
    for m in D.markings:
        if isinstance(m.center, IntersectionPoint) and m.center.edge == edge:
            continue
        marks.append(m)
    edges, marks = _sorted_edges(tuple(edges), tuple(marks))
    if D.areas is not None and exceptional_area is None:
        exceptional_area = min(D.component_area(i), D.component_area(j)) / 2
    names = D.names + (L2.basis_names[-1],)
    return DivisorConfig(L2, classes, edges, names, marks, _new_areas(D, exceptional_area))


def newest_exceptional(D: DivisorConfig) -> ClassVector:
    """Class of the exceptional sphere created by the latest blow-up."""
    L = D.lattice
    if L.n < 1:
        raise BlowdownError(f"{L} has no blow-ups")
    return L.basis(L.rank - 1)
