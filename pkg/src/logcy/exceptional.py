"""Search for toric and non-toric exceptional classes of a divisor."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from operator import mul
from typing import NamedTuple, Optional

from .divisor import DivisorConfig
from .lattice import AmbientLattice, ClassVector, Kind, LatticeError

TORIC = "toric"
NONTORIC = "nontoric"


class NeedsConversion(LatticeError):
    """Raised for lattices the search does not run on directly."""


@dataclass(frozen=True)
class ExceptionalFinding:
    cls: ClassVector
    kind: str
    component: int
    certificate: tuple[int, ...]

    def __str__(self) -> str:
        tag = "Toric" if self.kind == TORIC else "NonToric"
        return f"{self.cls} [{tag}({self.component + 1})]"


class NonToricResult(NamedTuple):
    findings: list
    bound: int
    exhaustive: bool


def is_exceptional(c: ClassVector) -> bool:
    return c.square == -1 and c.dot(c.lattice.canonical) == -1


def certificate(D: DivisorConfig, c: ClassVector) -> tuple[int, ...]:
    return tuple(c.dot(x) for x in D.classes)


# -- rational surfaces -------------------------------------------------------


def degree_window(n: int) -> Optional[tuple[int, int]]:
    """Integer degrees d admitting a solution of sum(m) = 3d-1, sum(m^2) = d^2+1.

    From Cauchy-Schwarz, (3d-1)^2 <= n (d^2+1).  For n <= 8 this confines d to
    a finite window; for n >= 9 it does not (None).
    """
    if n >= 9:
        return None
    if n == 0:
        return (1, 0)  # empty
    a, b, c = 9 - n, -6, 1 - n
    disc = b * b - 4 * a * c
    r = math.isqrt(disc)
    lo = math.floor((-b - r - 1) / (2 * a))
    hi = math.ceil((-b + r + 1) / (2 * a))
    ds = [d for d in range(lo, hi + 1) if (3 * d - 1) ** 2 <= n * (d * d + 1)]
    return (min(ds), max(ds)) if ds else (1, 0)


@lru_cache(maxsize=None)
def rational_exceptional_of_degree(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All classes dH - sum m_i E_i in Rational(n) with e^2 = -1, e.K = -1.

    Returned as coefficient tuples, sorted lexicographically.
    """
    if n == 0:
        return ()
    target_sum = 3 * d - 1
    target_sq = d * d + 1
    out: list[tuple[int, ...]] = []
    m = [0] * n

    def rec(i: int, s: int, q: int) -> None:
        r = n - i
        if r == 0:
            if s == 0 and q == 0:
                out.append((d,) + tuple(-x for x in m))
            return
        # feasibility of the remaining r slots
        if q < 0 or s * s > r * q or abs(s) > q or (s - q) % 2:
            return
        top = math.isqrt(q)
        for v in range(-top, top + 1):
            m[i] = v
            rec(i + 1, s - v, q - v * v)
        m[i] = 0

    rec(0, target_sum, target_sq)
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def all_rational_exceptional(n: int) -> tuple[tuple[int, ...], ...]:
    """Every exceptional class of Rational(n), n <= 8 (a finite set)."""
    win = degree_window(n)
    if win is None:
        raise LatticeError(f"Rational({n}) has infinitely many exceptional classes")
    out = []
    for d in range(win[0], win[1] + 1):
        out.extend(rational_exceptional_of_degree(n, d))
    return tuple(sorted(out))


def elliptic_exceptional(L: AmbientLattice) -> tuple[tuple[int, ...], ...]:
    """E_i and f - E_i: the classes of embedded (-1)-spheres.

    A sphere maps to a point of the genus 1 base, so its class pairs to zero
    with the fibre; with that constraint these are all solutions.
    """
    out = []
    r = L.rank
    for i in range(L.n):
        e = [0] * r
        e[2 + i] = 1
        out.append(tuple(e))
        e = [0] * r
        e[0] = 1
        e[2 + i] = -1
        out.append(tuple(e))
    return tuple(sorted(out))


def default_bound(D: DivisorConfig) -> int:
    env = os.environ.get("LOGCY_BOUND")
    if env:
        return int(env)
    top = max((abs(x) for c in D.classes for x in c.coeffs), default=1)
    return 3 * max(1, top)


def search_complete(L: AmbientLattice, bound: int) -> bool:
    if L.kind is Kind.ELLIPTIC_RULED:
        return True
    if L.kind is not Kind.RATIONAL:
        return False
    win = degree_window(L.n)
    if win is None:
        return False
    lo, hi = win
    return lo > hi or (-bound <= lo and hi <= bound)


def _check_searchable(L: AmbientLattice) -> None:
    if L.kind in (Kind.SPHERE_PRODUCT, Kind.HIRZEBRUCH_ONE):
        raise NeedsConversion(
            f"exceptional search runs on Rational(n) coordinates; convert {L} with convert_basis first"
        )


def _candidate_classes(L: AmbientLattice, bound: int):
    if L.kind is Kind.ELLIPTIC_RULED:
        yield from elliptic_exceptional(L)
        return
    win = degree_window(L.n)
    lo, hi = -bound, bound
    if win is not None:
        lo, hi = max(lo, win[0]), min(hi, win[1])
    for d in range(lo, hi + 1):
        yield from rational_exceptional_of_degree(L.n, d)


def _nontoric_at(D: DivisorConfig, bound: int) -> list[ExceptionalFinding]:
    L = D.lattice
    duals = [L.dual_raw(c.coeffs) for c in D.classes]
    found = []
    for e in _candidate_classes(L, bound):
        cert = tuple(sum(map(mul, e, w)) for w in duals)
        hit = -1
        for j, p in enumerate(cert):
            if p == 0:
                continue
            if p == 1 and hit < 0:
                hit = j
            else:
                hit = -2
                break
        if hit >= 0:
            found.append(ExceptionalFinding(ClassVector(e, L), NONTORIC, hit, cert))
    found.sort(key=lambda f: f.cls.coeffs)
    return found


def search_nontoric(D: DivisorConfig, degree_bound: Optional[int] = None) -> NonToricResult:
    """Non-toric exceptional classes of ``D`` with |degree| <= bound.

    With the default bound an empty search is retried once at twice the
    bound.  ``exhaustive`` reports whether the bound provably covers every
    exceptional class of the lattice.
    """
    L = D.lattice
    _check_searchable(L)
    escalate = degree_bound is None
    bound = default_bound(D) if degree_bound is None else degree_bound
    if bound <= 0:
        raise ValueError("degree bound must be positive")
    found = _nontoric_at(D, bound)
    if not found and escalate and not search_complete(L, bound):
        bound *= 2
        win = degree_window(L.n) if L.kind is Kind.RATIONAL else None
        if win is not None:
            bound = max(bound, abs(win[0]), abs(win[1]))
        found = _nontoric_at(D, bound)
    return NonToricResult(found, bound, search_complete(L, bound))


def find_nontoric(D: DivisorConfig, degree_bound: Optional[int] = None) -> list[ExceptionalFinding]:
    return search_nontoric(D, degree_bound).findings


def find_toric(D: DivisorConfig) -> list[ExceptionalFinding]:
    """Components of square -1 meeting exactly two others, once each."""
    if D.k <= 2:
        return []
    out = []
    for i, c in enumerate(D.classes):
        if c.square != -1 or c.dot(D.lattice.canonical) != -1:
            continue
        cert = certificate(D, c)
        others = [p for j, p in enumerate(cert) if j != i and p != 0]
        if len(others) == 2 and all(p == 1 for p in others):
            out.append(ExceptionalFinding(c, TORIC, i, cert))
    return out


def verify_finding(D: DivisorConfig, f: ExceptionalFinding) -> bool:
    """Recheck a finding from scratch against ``D``."""
    e = f.cls
    if e.lattice != D.lattice or not is_exceptional(e):
        return False
    cert = tuple(e.dot(c) for c in D.classes)
    if cert != f.certificate:
        return False
    if f.kind == NONTORIC:
        return all(p == (1 if j == f.component else 0) for j, p in enumerate(cert))
    if f.kind == TORIC:
        if e != D.classes[f.component]:
            return False
        rest = [p for j, p in enumerate(cert) if j != f.component]
        return sorted(p for p in rest if p) == [1, 1] and all(p >= 0 for p in rest)
    return False
