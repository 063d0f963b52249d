"""Exact cohomology calculus for group extensions of minimal flows."""

from .errors import CrossCheckError, InconsistentFlagsError, NotApplicableError
from .exactla import IntMatrix, Lattice, hnf, kernel_basis, snf
from .fgab import FgAbGroup, FgMorphism, PresentedGroup, is_quotient_of, normalize
from .flowcalc import (
    CoefficientGroup,
    FlowDescriptor,
    Solenoid,
    SolenoidSubgroupKm,
    analyze,
    cohomology_circle,
    cohomology_coefficients,
    free_extension_shapes,
    full_torsion,
    torsion_subgroup,
)
from .homological import ext, hom, tensor, tor, twisted_product
from .sections import CoveringEndo, LoopMatrix, TorusFinSubgroup, checked_section
from .structexpr import StructureExpr

__version__ = "0.1.0"
