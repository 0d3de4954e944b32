"""Iterated finite Blaschke products, the series ``sum a_n f^n`` and their norms."""
from .config import ConfigError, ExperimentConfig, config_from_dict, load_config
from .core import (Arc, BoundaryGrid, DiskGrid, DomainError, FiniteBlaschkeProduct,
                   NumericalDegeneracyError, blaschke_derivative, blaschke_eval,
                   default_test_functions, monomial, poisson_kernel, pseudohyperbolic_distance)
from .dynamics import (DecayConstants, DecayFitError, NonTerminationError,
                       boundary_contraction_constant, estimate_decay_constants,
                       hyperbolic_derivative, hyperbolic_derivative_iterate, iterate, orbit,
                       schwarz_majorant)
from .norms import (bloch_norm_estimate, bmo_norm_estimate, dirichlet_closed,
                    dirichlet_coefficient_oracle, l2_comparison_bounds, norm_l2_gram,
                    norm_lp_quadrature, poisson_variance_closed, poisson_variance_quadrature,
                    taylor_coefficients, toeplitz_symbol_bounds)
from .reporting import emit_report
from .series import CoefficientSequence, FieldOfValues, partial_sum, synthesize_partial_sums
from .verify import (CHECKS, VerificationReport, convergence_experiment, run_suite,
                     unboundedness_experiment, verify_exact_identities, verify_inequalities,
                     vmoa_decay_experiment)

__version__ = "0.1.0"
