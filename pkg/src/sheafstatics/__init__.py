"""Sheaf and cosheaf homology for planar trusses."""
from .complex import CellComplex, Diagram, diagram_from_faces, euler_characteristic, genus, poincare_dual, validate
from .errors import *  # noqa: F401,F403
from .numerics import DEFAULT_TOL, Tolerance
from .sheaf import Cosheaf, assemble_chain_complex, betti, constant_cosheaf, homology, linear_dual
from .statics import (force_cosheaf, is_rigid, linkage_sheaf, maxwell_rule_report, mechanisms,
                      position_dual_cosheaf, position_sheaf, self_stresses, solve_equilibrium)

__version__ = "0.1.0"
