"""Finite models of compactification posets, grid nerves and gluing."""

from .anodyne import AnodyneCertificate, HornMove, NotFound, search_certificate, validate_certificate
from .cartesianization import build_boxplus, build_cart, epsilon, kart_extension, lambda_mu, structure_maps
from .compactification import build_box, build_cpt, certify_box, enumerate_kpt
from .errors import GlueError, HypothesisFailed, MathematicalFailure, NotFunctorial, UsageError
from .fincat import EdgeClass, FinSetCategory, PosetCategory, TableCategory, check_admissible, truncation_level
from .gluing import extend_cart, extend_comm, extend_full
from .grids import CART, COMM, Trunc, enumerate_grid_simplices, grid_simplex
from .nerve import SubNerve, horn, nerve, standard_shape
from .poset import Poset, is_exact_square, upset_lattice

__version__ = "0.1.0"
