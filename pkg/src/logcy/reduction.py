"""Reduction to minimal models and the classification of minimal models."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .blowdown import BlowdownStep, apply_rows, blow_down
from .divisor import DivisorConfig, cycle_edges, genus_profile, validate
from .exceptional import find_toric, search_nontoric
from .lattice import (
    AmbientLattice,
    ClassVector,
    EllipticRuled,
    HirzebruchOne,
    Kind,
    LatticeError,
    Rational,
    SphereProduct,
    convert_basis,
    rational_model,
)


class InvalidDivisor(ValueError):
    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class NonMinimalAmbient(LatticeError):
    pass


class NoMatchingCase(LatticeError):
    pass


class StuckNonMinimal(RuntimeError):
    def __init__(self, message: str, trace: "ReductionTrace"):
        super().__init__(message)
        self.trace = trace


CASES = ("A", "B1", "B2", "B3", "C1", "C2", "C3", "C4", "D2a", "D2b", "D3", "D4")
_PARAM_NAME = {"C2": "b", "C3": "b", "C4": "b", "D2a": "a", "D3": "a", "D4": "a"}


@dataclass(frozen=True)
class MinimalModelLabel:
    case: str
    parameter: Optional[int] = None
    twist: Optional[int] = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ValueError(f"unknown case {self.case}")
        if (self.case in _PARAM_NAME) != (self.parameter is not None):
            raise ValueError(f"case {self.case} parameter mismatch")

    def normalized(self) -> "MinimalModelLabel":
        return MinimalModelLabel(self.case, normalize_parameter(self.case, self.parameter), self.twist)

    def __str__(self) -> str:
        if self.parameter is not None:
            return f"{self.case} {_PARAM_NAME[self.case]}={self.parameter}"
        if self.twist is not None:
            return f"{self.case} {'nontrivial' if self.twist else 'trivial'}"
        return self.case


def normalize_parameter(case: str, p: Optional[int]) -> Optional[int]:
    """Canonical representative modulo the relabelling symmetry of each family."""
    if p is None:
        return None
    if case == "C2":
        return min(p, 2 - p)
    if case == "C3":
        return min(p, 1 - p)
    if case in ("C4", "D3"):
        return abs(p)
    if case == "D2a":
        return max(p, 1 - p)
    if case == "D4":
        # swapping the two sections sends a to -(a+1)
        return max(p, -1 - p)
    return p


# -- construction of minimal models ------------------------------------------


def minimal_model(case: str, parameter: Optional[int] = None, twist: int = 0) -> DivisorConfig:
    """The configuration of one family member, components in the listed order."""
    p = parameter
    if case == "A":
        L = EllipticRuled(twist, 0)
        return DivisorConfig(L, (-L.canonical,), ())
    if case.startswith("B"):
        L = Rational(0)
        classes = {"B1": ["3H"], "B2": ["H", "2H"], "B3": ["H", "H", "H"]}[case]
        return DivisorConfig.from_strings(L, classes)
    if case.startswith("C"):
        L = SphereProduct()
        v = lambda a, b: L.vector((a, b))  # noqa: E731
        if case == "C1":
            return DivisorConfig(L, (v(2, 2),), ())
        if case == "C2":
            return DivisorConfig(L, (v(1, p), v(1, 2 - p)), cycle_edges(2))
        if case == "C3":
            return DivisorConfig(L, (v(1, p), v(1, 1 - p), v(0, 1)), cycle_edges(3))
        if case == "C4":
            # f-bs, f+bs, s, s ; each section class meets both s-spheres
            return DivisorConfig(
                L, (v(1, -p), v(1, p), v(0, 1), v(0, 1)), ((0, 2), (0, 3), (1, 2), (1, 3))
            )
    if case.startswith("D"):
        L = HirzebruchOne()
        v = lambda a, b: L.vector((a, b))  # noqa: E731
        if case == "D2a":
            return DivisorConfig(L, (v(p, 1), v(1 - p, 1)), cycle_edges(2))
        if case == "D2b":
            return DivisorConfig(L, (v(1, 0), v(0, 2)), cycle_edges(2))
        if case == "D3":
            return DivisorConfig(L, (v(p, 1), v(-p, 1), v(1, 0)), cycle_edges(3))
        if case == "D4":
            return DivisorConfig(
                L, (v(p, 1), v(-(p + 1), 1), v(1, 0), v(1, 0)), ((0, 2), (0, 3), (1, 2), (1, 3))
            )
    raise ValueError(f"unknown case {case!r}")


def enumerate_labeled(
    ambient: AmbientLattice, k: int, params: Iterable[int] = range(-3, 4)
) -> list[tuple[MinimalModelLabel, DivisorConfig]]:
    params = list(params)
    out = []

    def fam(case):
        for p in params:
            out.append((MinimalModelLabel(case, p), minimal_model(case, p)))

    if ambient.n != 0:
        return out
    if ambient.kind is Kind.RATIONAL and 1 <= k <= 3:
        case = f"B{k}"
        out.append((MinimalModelLabel(case), minimal_model(case)))
    elif ambient.kind is Kind.SPHERE_PRODUCT:
        if k == 1:
            out.append((MinimalModelLabel("C1"), minimal_model("C1")))
        elif 2 <= k <= 4:
            fam(f"C{k}")
    elif ambient.kind is Kind.HIRZEBRUCH_ONE:
        if k == 2:
            fam("D2a")
            out.append((MinimalModelLabel("D2b"), minimal_model("D2b")))
        elif k in (3, 4):
            fam(f"D{k}")
    elif ambient.kind is Kind.ELLIPTIC_RULED and k == 1:
        out.append((MinimalModelLabel("A", twist=ambient.twist), minimal_model("A", twist=ambient.twist)))
    return out


def enumerate_minimal(
    ambient: AmbientLattice, k: int, params: Iterable[int] = range(-3, 4)
) -> list[DivisorConfig]:
    """One representative per label and parameter value in ``params``."""
    return [D for _, D in enumerate_labeled(ambient, k, params)]


def all_minimal_models(params: Iterable[int] = range(-3, 4)) -> list[tuple[MinimalModelLabel, DivisorConfig]]:
    params = list(params)
    out = []
    for k in (1, 2, 3):
        out += enumerate_labeled(Rational(0), k, params)
    for k in (1, 2, 3, 4):
        out += enumerate_labeled(SphereProduct(), k, params)
    for k in (2, 3, 4):
        out += enumerate_labeled(HirzebruchOne(), k, params)
    for t in (0, 1):
        out += enumerate_labeled(EllipticRuled(t, 0), 1, params)
    return out


# -- classification ------------------------------------------------------------


def is_minimal_model(D: DivisorConfig) -> bool:
    L = D.lattice
    if L.is_minimal_ambient:
        return True
    if L == HirzebruchOne() or L == Rational(1):
        return all(g == 0 for g in genus_profile(D))
    return False


def _match_sphere_product(ab: list[tuple[int, int]]) -> Optional[MinimalModelLabel]:
    k = len(ab)
    s_count = sum(1 for x in ab if x == (0, 1))
    rest = [x for x in ab if x != (0, 1)]
    if k == 1:
        return MinimalModelLabel("C1")
    if any(a != 1 for a, _ in rest):
        return None
    if k == 2 and s_count == 0:
        return MinimalModelLabel("C2", ab[0][1])
    if k == 3 and s_count == 1:
        return MinimalModelLabel("C3", rest[0][1])
    if k == 4 and s_count == 2:
        return MinimalModelLabel("C4", rest[0][1])
    return None


def _match_hirzebruch(ab: list[tuple[int, int]]) -> Optional[MinimalModelLabel]:
    k = len(ab)
    fibres = [x for x in ab if x == (1, 0)]
    rest = [x for x in ab if x != (1, 0)]
    if k == 2 and sorted(ab) == [(0, 2), (1, 0)]:
        return MinimalModelLabel("D2b")
    if any(b != 1 for _, b in rest):
        return None
    if k == 2 and not fibres:
        return MinimalModelLabel("D2a", ab[0][0])
    if k == 3 and len(fibres) == 1:
        return MinimalModelLabel("D3", rest[0][0])
    if k == 4 and len(fibres) == 2:
        return MinimalModelLabel("D4", rest[0][0])
    return None


def classify_minimal(D: DivisorConfig) -> MinimalModelLabel:
    """Label of a minimal model, with the family parameter normalized."""
    rep = validate(D)
    if not rep.ok:
        raise InvalidDivisor(rep)
    L = D.lattice
    if L == Rational(1):
        D = DivisorConfig(
            HirzebruchOne(), tuple(convert_basis(c, HirzebruchOne()) for c in D.classes), D.edges
        )
        L = D.lattice
    k = D.k
    label = None
    if L == Rational(0):
        if k >= 4:
            raise NoMatchingCase("CP^2 carries at most three divisor components")
        degs = sorted(c.coeffs[0] for c in D.classes)
        label = {(3,): "B1", (1, 2): "B2", (1, 1, 1): "B3"}.get(tuple(degs))
        label = label and MinimalModelLabel(label)
    elif L == SphereProduct():
        if k >= 5:
            raise NoMatchingCase("S^2 x S^2 carries at most four divisor components")
        ab = [c.coeffs for c in D.classes]
        label = _match_sphere_product(ab) or _match_sphere_product([(b, a) for a, b in ab])
    elif L == HirzebruchOne():
        if k >= 5:
            raise NoMatchingCase("CP^2 # -CP^2 carries at most four divisor components")
        if k == 1:
            raise NoMatchingCase("a torus in CP^2 # -CP^2 is not minimal")
        label = _match_hirzebruch([c.coeffs for c in D.classes])
    elif L.kind is Kind.ELLIPTIC_RULED and L.n == 0:
        if k == 1 and D.classes[0] == -L.canonical:
            label = MinimalModelLabel("A", twist=L.twist)
    else:
        raise NonMinimalAmbient(f"{L} is not a minimal ambient")
    if label is None:
        raise NoMatchingCase(f"no case of the enumeration matches {D}")
    return label.normalized()


# -- reduction -----------------------------------------------------------------


@dataclass
class ReductionTrace:
    start: DivisorConfig
    steps: list[BlowdownStep] = field(default_factory=list)
    configs: list[DivisorConfig] = field(default_factory=list)
    final: Optional[DivisorConfig] = None
    label: Optional[MinimalModelLabel] = None
    exhaustive: bool = True

    def __len__(self) -> int:
        return len(self.steps)


def normalize_ambient(D: DivisorConfig) -> DivisorConfig:
    """Move blown-up S^2 x S^2 and every CP^2 # -CP^2 model to Rational(n).

    Blown-up twisted elliptic ruled surfaces move to the untwisted frame,
    so both twists reduce to the same label once a blow-up has occurred.
    """
    L = D.lattice
    if L.kind is Kind.ELLIPTIC_RULED:
        target = EllipticRuled(0, L.n) if L.n >= 1 else L
    else:
        target = rational_model(L)
    if target == D.lattice:
        return D
    return DivisorConfig(
        target,
        tuple(convert_basis(c, target) for c in D.classes),
        D.edges,
        D.names,
        D.markings,
        None if D.areas is None else _convert_areas(D, target),
    )


def _convert_areas(D: DivisorConfig, target: AmbientLattice):
    from .lattice import conversion_rows

    back = conversion_rows(target, D.lattice)
    return tuple(sum(a * v for a, v in zip(D.areas, row)) for row in back)


def replay(start: DivisorConfig, steps: list[BlowdownStep]) -> DivisorConfig:
    """Recompute the end configuration of a trace from its steps."""
    from .exceptional import ExceptionalFinding, certificate

    cur = normalize_ambient(start)
    for st in steps:
        f = ExceptionalFinding(st.contracted, st.kind, st.component, certificate(cur, st.contracted))
        cur, _ = blow_down(cur, f)
    return cur


def reduce_to_minimal(D: DivisorConfig, degree_bound: Optional[int] = None) -> ReductionTrace:
    """Non-toric blow-downs until none is left, then toric blow-downs.

    The least exceptional class (lexicographic in coefficients) is
    contracted first.
    """
    rep = validate(D)
    if not rep.ok:
        raise InvalidDivisor(rep)
    cur = normalize_ambient(D)
    trace = ReductionTrace(start=D)
    while True:
        if cur.lattice.kind is Kind.SPHERE_PRODUCT:
            break  # S^2 x S^2 itself: no exceptional classes
        res = search_nontoric(cur, degree_bound)
        if not res.findings:
            trace.exhaustive = res.exhaustive
            break
        cur, step = blow_down(cur, res.findings[0])
        trace.steps.append(step)
        trace.configs.append(cur)
    while True:
        tor = sorted(find_toric(cur), key=lambda f: f.cls.coeffs)
        if not tor:
            break
        cur, step = blow_down(cur, tor[0])
        trace.steps.append(step)
        trace.configs.append(cur)
    trace.final = cur
    if not is_minimal_model(cur):
        raise StuckNonMinimal(
            f"stuck at non-minimal {cur} (search exhaustive: {trace.exhaustive})", trace
        )
    trace.label = classify_minimal(cur)
    return trace


def descend_class(c: ClassVector, steps: list[BlowdownStep]) -> ClassVector:
    """Push a class through the basis changes of a trace (projecting each time)."""
    for st in steps:
        if c.lattice != st.source:
            c = convert_basis(c, st.source)
        c = ClassVector(apply_rows(c.coeffs, st.images)[:-1], st.target)
    return c


__all__ = [
    "MinimalModelLabel",
    "ReductionTrace",
    "reduce_to_minimal",
    "classify_minimal",
    "enumerate_minimal",
    "enumerate_labeled",
    "all_minimal_models",
    "minimal_model",
    "is_minimal_model",
]
