"""Exact double-coset convolution algebras of GL(alpha+n, F_q) and their interpolation in t = q^n."""

from ._version import __version__
from .gf import FieldContext, field_new
from .linalg import MatF, Subspace, complete_to_basis, invert, kernel, rref
from .groups import (BudgetExceeded, GroupTable, HSubgroup, enumerate_gl, gamma_involution,
                     gl_order, h_order, xi_subgroup)
from .pbl import PartialBijection, enumerate_pbl, extend_to_gl, idempotent, pbl_count, sigma_rho
from .cosets import CosetDecomposition, decompose, kappa_rho, pi, representative
from .algebra import (AlgebraContext, AlgebraElement, StructureTable, convolve, m_functional,
                      structure_constants)
from .ratpoly import RatPoly

__all__ = [
    "__version__", "FieldContext", "field_new", "MatF", "Subspace", "complete_to_basis", "invert",
    "kernel", "rref", "BudgetExceeded", "GroupTable", "HSubgroup", "enumerate_gl",
    "gamma_involution", "gl_order", "h_order", "xi_subgroup", "PartialBijection", "enumerate_pbl",
    "extend_to_gl", "idempotent", "pbl_count", "sigma_rho", "CosetDecomposition", "decompose",
    "kappa_rho", "pi", "representative", "AlgebraContext", "AlgebraElement", "StructureTable",
    "convolve", "m_functional", "structure_constants", "RatPoly",
]
