"""Homological equivalence of symplectic log Calabi-Yau divisors."""
from .blowdown import BlowdownStep, blow_down, blow_up_nontoric, blow_up_toric
from .divisor import DivisorConfig, IntersectionPoint, Marking, SmoothPoint, validate
from .equivalence import Isometry, Verdict, decide, isometry_oracle
from .exceptional import ExceptionalFinding, find_nontoric, find_toric, search_nontoric
from .lattice import (
    AmbientLattice,
    ClassVector,
    EllipticRuled,
    HirzebruchOne,
    Kind,
    Rational,
    SphereProduct,
    convert_basis,
)
from .reduction import (
    MinimalModelLabel,
    ReductionTrace,
    classify_minimal,
    enumerate_minimal,
    minimal_model,
    reduce_to_minimal,
)

__version__ = "0.1.0"
