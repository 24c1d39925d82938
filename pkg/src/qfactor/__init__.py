"""Exact-arithmetic certification of Q-factoriality for nodal double covers
of a smooth three-dimensional quadric branched over a quartic section."""

from .certify import (DefectCertificate, DoubleQuadricInput, NonNodalError,
                      construct_example, cubic_evaluation_matrix, defect,
                      verify_splitting)
from .chow import (BlowupModel, ClassSymbol, RelationTable, expand,
                   run_golden_suite, solve_relation_table, verify_identity)
from .domains import GF, QQ, DomainError, FpElement, random_large_prime
from .groebner import (GroebnerBasis, Ideal, NotZeroDimensionalError,
                       ResourceLimitError, buchberger, graded_component_dim,
                       ideal_dimension, normal_form, saturate,
                       saturate_by_linear_form, zero_dim_degree)
from .linalg import ExactMatrix, invert, kernel_basis, rank, rref
from .parsing import ParseError, parse_form, parse_polynomial
from .polynomials import (GREVLEX, LEX, BlockOrder, HomogeneousForm,
                          InhomogeneousError, Polynomial, monomial_basis)
from .position import PositionReport, ek_check, max_on_subspace, twisted_cubic_test
from .singular import (NodeReport, ProjectivePoint, SmoothQuadricError,
                       count_nodes, quadric_is_smooth, singular_scheme_ideal,
                       verify_node)

__version__ = "0.1.0"
