"""mahlertk: exact and rigorous-numeric toolkit for linear Mahler systems.

Decision procedures come with verifiable certificates: class-M membership,
orbit convergence, T-independence, regularity, rigorous evaluation at
rational points, automaton-derived systems, relation matrices, iteration
schedules, and integer-relation probes of evaluated values.
"""

from .ball import RealBall, ln_fraction
from .errors import (AmbiguousFloor, ArityMismatch, BlockMismatch,
                     DimensionMismatch, DivergenceRisk, InsufficientOrder,
                     InsufficientPrecision, MahlerError, MissingTailBound,
                     NotRegular, ParseError, PoleAtPoint, PrecisionUnreachable,
                     ResourceCap, SingularMatrix, SingularTransform,
                     ZeroLeadingCoefficient)
from .automata import (DFAO, KernelSystem, kernel_system, load_builtin_dfao,
                       load_builtin_system, minimize, scalar_equation_search,
                       sequence_terms, unroll_series)
from .evaluation import (AdmissibilityReport, CounterexampleAt,
                         RegularityCertificate, RegularityInconclusive,
                         check_admissible_pair, check_regular,
                         evaluate_at_depth, evaluate_values)
from .multrel import (ExponentLattice, SignedFactorization,
                      TIndependenceVerdict, check_T_independence,
                      exponent_lattice, multiplicatively_independent,
                      signed_factorize, verify_relation)
from .poly import MultiPolynomial, parse_poly, poly_gcd, to_text
from .probe import (CandidateRelation, IndependenceReport, integer_relation,
                    independence_report)
from .purity import (IterationSchedule, MonomialIndex, RelationMatrix,
                     ZeroScanReport, build_schedule, log_relation_probe,
                     monomial_basis, relation_matrix, split_blocks,
                     verify_schedule, zero_orbit_scan)
from .ratfun import RationalFunction
from .roots import AlgebraicReal, isolate_real_roots, refine_root
from .series import TruncatedSeries, series_eval_ball, tail_bound
from .systems import (MahlerSystem, ScalarMahlerEquation, direct_sum,
                      homogenize, iterate_system, load_system, mat_det,
                      mat_inverse, scalar_to_system, shifted_system,
                      verify_functional_identity)
from .transforms import (ClassMReport, Inconclusive, LimitZeroCertificate,
                         MonomialTransform, apply_transform, check_class_M,
                         check_limit_zero, transform_power)

__version__ = "0.1.0"
