"""Divisor configurations and their homological validation."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .lattice import (
    AmbientLattice,
    ClassVector,
    NotEmbeddableClass,
    adjunction_genus,
)


@dataclass(frozen=True)
class SmoothPoint:
    component: int


@dataclass(frozen=True)
class IntersectionPoint:
    edge: int


Center = Union[SmoothPoint, IntersectionPoint]


@dataclass(frozen=True)
class Marking:
    """Combinatorial trace of a blow-down centre.

    ``origin`` is the contracted exceptional class, written in the lattice
    that was current when the marking was created.
    """

    center: Center
    origin: ClassVector


class Shape(NamedTuple):
    kind: str  # "torus" or "cycle"
    k: int

    def __str__(self) -> str:
        return "Torus" if self.kind == "torus" else f"Cycle({self.k})"


TORUS = Shape("torus", 1)


def norm_edge(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i <= j else (j, i)


@dataclass(frozen=True)
class DivisorConfig:
    """Ordered components with an explicit multiset of intersection points.

    Edges are 0-indexed component pairs; the position of an edge in
    ``edges`` is its identifier (markings refer to it).  ``areas`` is the
    symplectic area functional evaluated on the lattice basis.
    """

    lattice: AmbientLattice
    classes: tuple[ClassVector, ...]
    edges: tuple[tuple[int, int], ...] = ()
    names: tuple[str, ...] = ()
    markings: tuple[Marking, ...] = ()
    areas: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if not self.names:
            object.__setattr__(self, "names", tuple(f"C{i + 1}" for i in range(len(self.classes))))
        object.__setattr__(self, "edges", tuple(norm_edge(*e) for e in self.edges))
        if self.areas is not None:
            object.__setattr__(self, "areas", tuple(Fraction(a) for a in self.areas))

    @classmethod
    def from_strings(
        cls,
        lattice: AmbientLattice,
        classes: Sequence[str],
        edges: Sequence[tuple[int, int]] | None = None,
        **kw,
    ) -> "DivisorConfig":
        """Build from class expressions; ``edges=None`` means a cycle in the given order."""
        vecs = tuple(lattice.element(c) for c in classes)
        if edges is None:
            edges = cycle_edges(len(vecs))
        return cls(lattice, vecs, tuple(edges), **kw)

    @property
    def k(self) -> int:
        return len(self.classes)

    def component_area(self, i: int) -> Fraction:
        assert self.areas is not None
        return sum((a * c for a, c in zip(self.areas, self.classes[i].coeffs)), Fraction(0))

    def edge_counts(self) -> Counter:
        return Counter(self.edges)

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return out

    def relabel(self, perm: Sequence[int]) -> "DivisorConfig":
        """Component ``i`` becomes component ``perm[i]``."""
        inv = [0] * len(perm)
        for i, p in enumerate(perm):
            inv[p] = i
        classes = tuple(self.classes[inv[p]] for p in range(self.k))
        names = tuple(self.names[inv[p]] for p in range(self.k))
        edges = tuple(norm_edge(perm[a], perm[b]) for a, b in self.edges)
        marks = tuple(
            replace(m, center=SmoothPoint(perm[m.center.component]))
            if isinstance(m.center, SmoothPoint)
            else m
            for m in self.markings
        )
        return replace(self, classes=classes, names=names, edges=edges, markings=marks)

    def without_markings(self) -> "DivisorConfig":
        return replace(self, markings=())

    def __str__(self) -> str:
        comps = ", ".join(str(c) for c in self.classes)
        return f"{self.lattice}: ({comps})"


def cycle_edges(k: int) -> tuple[tuple[int, int], ...]:
    if k == 1:
        return ()
    if k == 2:
        return ((0, 1), (0, 1))
    return tuple(sorted(norm_edge(i, (i + 1) % k) for i in range(k)))


# -- validation ----------------------------------------------------------------


class Violation(NamedTuple):
    code: str
    message: str
    where: tuple = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def add(self, code: str, message: str, *where) -> None:
        self.violations.append(Violation(code, message, tuple(where)))

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"{v.code}: {v.message}" for v in self.violations)


def validate(D: DivisorConfig) -> ValidationReport:
    """Check the homological log Calabi-Yau conditions on ``D``.

    Never raises; every violated condition is listed in the report.
    """
    rep = ValidationReport()
    L = D.lattice
    k = D.k
    if k == 0:
        rep.add("empty", "divisor has no components")
        return rep
    for i, c in enumerate(D.classes):
        if c.lattice != L:
            rep.add("lattice", f"component {D.names[i]} lives in {c.lattice}, not {L}", i)
    if not rep.ok:
        return rep

    total = [sum(col) for col in zip(*(c.coeffs for c in D.classes))]
    if tuple(total) != (-L.canonical).coeffs:
        rep.add(
            "anticanonical",
            f"anticanonical condition failed: components sum to {L.vector(total)}, "
            f"expected {-L.canonical}",
        )

    bad_edges = False
    for e, (a, b) in enumerate(D.edges):
        if not (0 <= a < k and 0 <= b < k):
            rep.add("edge_index", f"edge {e + 1} refers to a missing component", e)
            bad_edges = True
        elif a == b:
            rep.add("self_edge", f"edge {e + 1} joins component {D.names[a]} to itself", e)
            bad_edges = True

    counts = D.edge_counts()
    for i in range(k):
        for j in range(i + 1, k):
            p = L.pair_raw(D.classes[i].coeffs, D.classes[j].coeffs)
            if p < 0:
                rep.add(
                    "negative_intersection",
                    f"{D.names[i]}.{D.names[j]} = {p} < 0; intersections must be positive",
                    i, j,
                )
            if counts.get((i, j), 0) != p:
                rep.add(
                    "edge_multiplicity",
                    f"{D.names[i]} and {D.names[j]} pair to {p} but share "
                    f"{counts.get((i, j), 0)} edges",
                    i, j,
                )

    genera: list[Optional[int]] = []
    for i, c in enumerate(D.classes):
        try:
            g = adjunction_genus(c)
        except NotEmbeddableClass:
            rep.add("adjunction", f"{D.names[i]} = {c} has no embedded representative", i)
            genera.append(None)
            continue
        if g > 1:
            rep.add("genus", f"{D.names[i]} has genus {g} > 1", i)
        genera.append(g)

    if any(g == 1 for g in genera) and k > 1:
        rep.add(
            "torus_or_cycle",
            "a genus 1 component occurs with other components; "
            "D must be a torus or a cycle of spheres",
        )

    if not bad_edges:
        if not _connected(k, D.edges):
            rep.add("disconnected", "dual graph is not connected")
        if k == 1:
            if D.edges:
                rep.add("shape", "a single component cannot carry edges")
            if genera[0] == 0:
                rep.add("shape", "a single component must be a torus")
        elif k == 2:
            p = L.pair_raw(D.classes[0].coeffs, D.classes[1].coeffs)
            if p != 2:
                rep.add("shape", f"bigon components must meet twice, they pair to {p}")
        else:
            deg = Counter()
            for a, b in D.edges:
                deg[a] += 1
                deg[b] += 1
            for i in range(k):
                if deg[i] != 2:
                    rep.add("shape", f"{D.names[i]} has {deg[i]} intersection points, expected 2", i)
            if len(counts) != k:
                rep.add("shape", f"dual graph is not a {k}-gon")

    for m_i, m in enumerate(D.markings):
        c = m.center
        if isinstance(c, SmoothPoint):
            if not 0 <= c.component < k:
                rep.add("marking", f"marking {m_i + 1} centred on missing component", m_i)
        elif not 0 <= c.edge < len(D.edges):
            rep.add("marking", f"marking {m_i + 1} centred on missing edge", m_i)

    if D.areas is not None:
        if len(D.areas) != L.rank:
            rep.add("areas", f"{len(D.areas)} area values for rank {L.rank}")
        else:
            for i in range(k):
                a = D.component_area(i)
                if a <= 0:
                    rep.add("area", f"{D.names[i]} has non-positive area {a}", i)
    return rep


def _connected(k: int, edges) -> bool:
    adj = {i: set() for i in range(k)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == k


def genus_profile(D: DivisorConfig) -> list[int]:
    return [adjunction_genus(c) for c in D.classes]


def shape(D: DivisorConfig) -> Shape:
    if D.k == 1 and adjunction_genus(D.classes[0]) == 1:
        return TORUS
    return Shape("cycle", D.k)


def self_intersection_sum_check(D: DivisorConfig) -> bool:
    """Sum of C_i^2 equals K^2 - 2 * (number of intersection points)."""
    lhs = sum(c.square for c in D.classes)
    return lhs == D.lattice.canonical.square - 2 * len(D.edges)


def cycle_order(D: DivisorConfig) -> list[int]:
    """Components in cyclic order starting at 0 (for k >= 3 cycles)."""
    if D.k <= 2:
        return list(range(D.k))
    order = [0]
    prev = None
    cur = 0
    while len(order) < D.k:
        nxt = [w for w in D.neighbors(cur) if w != prev]
        prev, cur = cur, min(nxt) if len(order) == 1 else nxt[0]
        order.append(cur)
    return order
