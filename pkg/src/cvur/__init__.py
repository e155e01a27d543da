"""Entropic and variance uncertainty relations for continuous-variable quantum states."""

from .quadratures import QuadratureSet, commutator_matrix, equidistributed_set, x_quadratures, p_quadratures
from .relations import RELATIONS, RelationReport, evaluate
from .states import (
    FockState,
    GaussianState,
    coherent,
    fock_number,
    fock_superposition,
    squeezed_vacuum_fock,
    squeezed_vacuum_gaussian,
    thermal,
    vacuum,
)
from .symplectic import random_symplectic, williamson

__version__ = "0.1.0"
