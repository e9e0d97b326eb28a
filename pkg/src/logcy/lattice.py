"""Integer intersection lattices of the ambient 4-manifolds.

Every ambient is one of the rational surfaces (CP^2 blown up ``n`` times,
S^2 x S^2 or CP^2 # -CP^2, possibly blown up further) or an elliptic ruled
surface blown up ``n`` times.  Homology classes are integer coefficient
vectors in a fixed named basis; all arithmetic is exact (Python ints).
"""
from __future__ import annotations

import re
from operator import mul
from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Base class for lattice level errors."""


class LatticeMismatch(LatticeError):
    pass


class NotEmbeddableClass(LatticeError):
    """The adjunction formula gives no non-negative integer genus."""


class UnsupportedConversion(LatticeError):
    pass


class Kind(str, Enum):
    RATIONAL = "rational"
    SPHERE_PRODUCT = "sphere_product"
    HIRZEBRUCH_ONE = "hirzebruch_one"
    ELLIPTIC_RULED = "elliptic_ruled"


@dataclass(frozen=True)
class AmbientLattice:
    """H_2 of an ambient manifold together with its intersection form.

    ``n`` counts blow-ups on top of the minimal (or named) surface.  For
    ``SPHERE_PRODUCT`` and ``HIRZEBRUCH_ONE`` the blow-ups are carried in the
    native (f, s, E1..En) basis; ``twist`` is only meaningful for
    ``ELLIPTIC_RULED`` (0 trivial, 1 non-trivial S^2 bundle).
    """

    kind: Kind
    n: int = 0
    twist: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise LatticeError(f"negative blow-up count {self.n}")
        if self.twist not in (0, 1):
            raise LatticeError(f"twist must be 0 or 1, got {self.twist}")
        if self.twist and self.kind is not Kind.ELLIPTIC_RULED:
            raise LatticeError("twist only applies to elliptic ruled surfaces")

    # -- structure ---------------------------------------------------------

    @cached_property
    def rank(self) -> int:
        if self.kind is Kind.RATIONAL:
            return self.n + 1
        return self.n + 2

    @cached_property
    def n_fixed(self) -> int:
        """Number of leading basis vectors that are not exceptional E_i."""
        return self.rank - self.n

    @cached_property
    def basis_names(self) -> tuple[str, ...]:
        head = ("H",) if self.kind is Kind.RATIONAL else ("f", "s")
        return head + tuple(f"E{i}" for i in range(1, self.n + 1))

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        r = self.rank
        g = [[0] * r for _ in range(r)]
        if self.kind is Kind.RATIONAL:
            g[0][0] = 1
        else:
            g[0][1] = g[1][0] = 1
            if self.kind is Kind.HIRZEBRUCH_ONE:
                g[1][1] = 1
            elif self.kind is Kind.ELLIPTIC_RULED:
                g[1][1] = self.twist
        for i in range(self.n_fixed, r):
            g[i][i] = -1
        return tuple(tuple(row) for row in g)

    @cached_property
    def _entries(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(
            (i, j, v)
            for i, row in enumerate(self.gram)
            for j, v in enumerate(row)
            if v
        )

    @cached_property
    def canonical(self) -> "ClassVector":
        tail = (1,) * self.n
        if self.kind is Kind.RATIONAL:
            head = (-3,)
        elif self.kind is Kind.SPHERE_PRODUCT:
            head = (-2, -2)
        elif self.kind is Kind.HIRZEBRUCH_ONE:
            head = (-1, -2)
        else:
            head = (self.twist, -2)
        return ClassVector(head + tail, self)

    @property
    def is_minimal_ambient(self) -> bool:
        """Rational(0), S^2 x S^2 and unblown elliptic ruled surfaces."""
        return self.n == 0 and self.kind is not Kind.HIRZEBRUCH_ONE

    @cached_property
    def _head_entries(self) -> tuple[tuple[int, int, int], ...]:
        h = self.n_fixed
        return tuple((i, j, v) for i, j, v in self._entries if i < h and j < h)

    def pair_raw(self, x: Sequence[int], y: Sequence[int]) -> int:
        # the E_i block is -identity and orthogonal to the head
        h = self.n_fixed
        s = 0
        for i, j, v in self._head_entries:
            s += v * x[i] * y[j]
        return s - sum(map(mul, x[h:], y[h:]))

    def dual_raw(self, y: Sequence[int]) -> tuple[int, ...]:
        """gram * y, so that pair_raw(x, y) == sum(x_i * w_i)."""
        h = self.n_fixed
        w = [0] * h
        for i, j, v in self._head_entries:
            w[i] += v * y[j]
        return tuple(w) + tuple(-c for c in y[h:])

    # -- element construction ---------------------------------------------

    def vector(self, coeffs: Iterable[int]) -> "ClassVector":
        return ClassVector(tuple(int(c) for c in coeffs), self)

    def zero(self) -> "ClassVector":
        return ClassVector((0,) * self.rank, self)

    def basis(self, i: int) -> "ClassVector":
        c = [0] * self.rank
        c[i] = 1
        return ClassVector(tuple(c), self)

    def element(self, text: str) -> "ClassVector":
        """Parse a linear combination such as ``"3H-E1-E2"`` or ``"f+2s"``."""
        return self.vector(parse_combination(text, self.basis_names))

    def blown_up(self, extra: int = 1) -> "AmbientLattice":
        return AmbientLattice(self.kind, self.n + extra, self.twist)

    def __str__(self) -> str:
        name = {
            Kind.RATIONAL: "Rational",
            Kind.SPHERE_PRODUCT: "SphereProduct",
            Kind.HIRZEBRUCH_ONE: "HirzebruchOne",
            Kind.ELLIPTIC_RULED: "EllipticRuled",
        }[self.kind]
        if self.kind is Kind.RATIONAL:
            return f"{name}({self.n})"
        if self.kind is Kind.ELLIPTIC_RULED:
            tw = "nontrivial" if self.twist else "trivial"
            return f"{name}({tw}, {self.n})"
        return name if self.n == 0 else f"{name}#{self.n}"


def Rational(n: int = 0) -> AmbientLattice:
    return AmbientLattice(Kind.RATIONAL, n)


def SphereProduct(n: int = 0) -> AmbientLattice:
    return AmbientLattice(Kind.SPHERE_PRODUCT, n)


def HirzebruchOne(n: int = 0) -> AmbientLattice:
    return AmbientLattice(Kind.HIRZEBRUCH_ONE, n)


def EllipticRuled(twist: int = 0, n: int = 0) -> AmbientLattice:
    return AmbientLattice(Kind.ELLIPTIC_RULED, n, twist)


_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z]\w*)\s*")


def parse_combination(text: str, names: Sequence[str]) -> list[int]:
    coeffs = [0] * len(names)
    text = text.strip()
    if text in ("0", ""):
        return coeffs
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise LatticeError(f"cannot parse {text!r} at offset {pos}")
        sign, num, name = m.groups()
        if pos > 0 and not sign:
            raise LatticeError(f"missing operator in {text!r} at offset {pos}")
        if name not in names:
            raise LatticeError(f"unknown basis symbol {name!r}; basis is {list(names)}")
        c = int(num) if num else 1
        coeffs[names.index(name)] += -c if sign == "-" else c
        pos = m.end()
    return coeffs


@dataclass(frozen=True)
class ClassVector:
    """An integer homology class in the basis of ``lattice``."""

    coeffs: tuple[int, ...]
    lattice: AmbientLattice

    def __post_init__(self):
        if len(self.coeffs) != self.lattice.rank:
            raise LatticeError(
                f"{len(self.coeffs)} coefficients for a rank {self.lattice.rank} lattice"
            )

    def _check(self, other: "ClassVector") -> None:
        if not isinstance(other, ClassVector):
            raise TypeError(f"expected ClassVector, got {type(other).__name__}")
        if other.lattice != self.lattice:
            raise LatticeMismatch(f"{self.lattice} vs {other.lattice}")

    def __add__(self, other: "ClassVector") -> "ClassVector":
        self._check(other)
        return ClassVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.lattice)

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        self._check(other)
        return ClassVector(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.lattice)

    def __neg__(self) -> "ClassVector":
        return ClassVector(tuple(-a for a in self.coeffs), self.lattice)

    def __mul__(self, k: int) -> "ClassVector":
        return ClassVector(tuple(k * a for a in self.coeffs), self.lattice)

    __rmul__ = __mul__

    def dot(self, other: "ClassVector") -> int:
        self._check(other)
        return self.lattice.pair_raw(self.coeffs, other.coeffs)

    @property
    def square(self) -> int:
        return self.lattice.pair_raw(self.coeffs, self.coeffs)

    def __str__(self) -> str:
        return format_combination(self.coeffs, self.lattice.basis_names)

    def __repr__(self) -> str:
        return f"ClassVector({self}, {self.lattice})"


def format_combination(coeffs: Sequence[int], names: Sequence[str]) -> str:
    out = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        out.append(f"{sign}{mag}{name}")
    if not out:
        return "0"
    s = "".join(out)
    return s[1:] if s[0] == "+" else s


def pair(x: ClassVector, y: ClassVector) -> int:
    """Intersection number x^T G y."""
    return x.dot(y)


def first_chern(lattice: AmbientLattice) -> ClassVector:
    return -lattice.canonical


def adjunction_genus(c: ClassVector) -> int:
    """Genus of an embedded surface in class ``c`` forced by adjunction."""
    num = c.square + 2 + c.dot(c.lattice.canonical)
    if num % 2 or num < 0:
        raise NotEmbeddableClass(f"{c} has adjunction numerator {num}")
    return num // 2


# -- basis conversions -------------------------------------------------------
#
# Each supported pair is described by the images of the source basis written
# in target coordinates; the inverse direction uses the inverse matrix.


def _identity(r: int) -> list[list[int]]:
    return [[int(i == j) for j in range(r)] for i in range(r)]


def _rows_to_rational(src: AmbientLattice) -> list[list[int]]:
    """Images of src basis vectors in Rational(rank-1) coordinates."""
    r = src.rank
    rows = []
    if src.kind is Kind.HIRZEBRUCH_ONE:
        # f = H - E1, s = H, E_i = E_{i+1}
        rows.append([1, -1] + [0] * (r - 2))
        rows.append([1, 0] + [0] * (r - 2))
        for i in range(src.n):
            rows.append([0] * (2 + i) + [1] + [0] * (r - 3 - i))
        return rows
    if src.kind is Kind.SPHERE_PRODUCT and src.n >= 1:
        # f = H - E1, s = H - E2, E1' = H - E1 - E2, E_i' = E_{i+1} for i >= 2
        rows.append([1, -1, 0] + [0] * (r - 3))
        rows.append([1, 0, -1] + [0] * (r - 3))
        rows.append([1, -1, -1] + [0] * (r - 3))
        for i in range(1, src.n):
            rows.append([0] * (2 + i) + [1] + [0] * (r - 3 - i))
        return rows
    raise UnsupportedConversion(f"no rational model for {src}")


def _rows_elliptic_flip(src: AmbientLattice) -> list[list[int]]:
    """Elementary transformation at E_n: EllipticRuled(t, n) -> (1-t, n).

    Target basis (f, s', E1..E_{n-1}, E_n') with E_n' = f - E_n and
    s' = s - E_n + (1 - t) f.  Returned rows give source basis vectors
    in target coordinates.
    """
    if src.kind is not Kind.ELLIPTIC_RULED or src.n < 1:
        raise UnsupportedConversion(f"no elementary transformation on {src}")
    r, t = src.rank, src.twist
    rows = _identity(r)
    # E_n = f - E_n'
    rows[r - 1] = [1] + [0] * (r - 2) + [-1]
    # s = s' + E_n - (1 - t) f = s' + f - E_n' - (1 - t) f = s' + t f - E_n'
    rows[1] = [t, 1] + [0] * (r - 3) + [-1]
    return rows


def _invert_unimodular(rows: list[list[int]]) -> list[list[int]]:
    from fractions import Fraction

    n = len(rows)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [[v for v in row[n:]] for row in a]
    if any(v.denominator != 1 for row in out for v in row):
        raise LatticeError("matrix is not unimodular")
    return [[int(v) for v in row] for row in out]


@lru_cache(maxsize=None)
def conversion_rows(src: AmbientLattice, dst: AmbientLattice) -> tuple[tuple[int, ...], ...]:
    """Rows = images of the src basis in dst coordinates."""
    if src == dst:
        return tuple(map(tuple, _identity(src.rank)))
    if src.rank != dst.rank:
        raise UnsupportedConversion(f"{src} -> {dst}")
    if dst.kind is Kind.RATIONAL and src.kind in (Kind.HIRZEBRUCH_ONE, Kind.SPHERE_PRODUCT):
        return tuple(map(tuple, _rows_to_rational(src)))
    if src.kind is Kind.RATIONAL and dst.kind in (Kind.HIRZEBRUCH_ONE, Kind.SPHERE_PRODUCT):
        return tuple(map(tuple, _invert_unimodular(_rows_to_rational(dst))))
    if (
        src.kind is Kind.ELLIPTIC_RULED
        and dst.kind is Kind.ELLIPTIC_RULED
        and src.n == dst.n
        and src.twist != dst.twist
    ):
        return tuple(map(tuple, _rows_elliptic_flip(src)))
    if (
        src.kind in (Kind.HIRZEBRUCH_ONE, Kind.SPHERE_PRODUCT)
        and dst.kind in (Kind.HIRZEBRUCH_ONE, Kind.SPHERE_PRODUCT)
        and src.n >= 1 and dst.n >= 1
    ):
        a = conversion_rows(src, Rational(src.rank - 1))
        b = conversion_rows(Rational(src.rank - 1), dst)
        return tuple(
            tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0])))
            for i in range(len(a))
        )
    raise UnsupportedConversion(f"{src} -> {dst}")


def convert_basis(c: ClassVector, target: AmbientLattice) -> ClassVector:
    """Re-express ``c`` in the basis of an isomorphic ``target`` lattice."""
    rows = conversion_rows(c.lattice, target)
    out = [0] * target.rank
    for ci, row in zip(c.coeffs, rows):
        if ci:
            for j, v in enumerate(row):
                out[j] += ci * v
    return ClassVector(tuple(out), target)


def rational_model(lattice: AmbientLattice) -> AmbientLattice:
    """The Rational(n) lattice a rational ambient is normalized to.

    S^2 x S^2 without blow-ups has no rational model and is returned as is.
    """
    if lattice.kind is Kind.RATIONAL:
        return lattice
    if lattice.kind is Kind.HIRZEBRUCH_ONE or (
        lattice.kind is Kind.SPHERE_PRODUCT and lattice.n >= 1
    ):
        return Rational(lattice.rank - 1)
    return lattice


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]
