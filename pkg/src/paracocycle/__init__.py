"""Certified thermodynamic formalism for the parabolic cocycle generated by
A1 = [[1, 0], [1, 1]] and A2 = [[1, 1], [0, 1]]."""

__version__ = "0.1.0"

from .cocycle import (A1, A2, BlockWord, Mat2, NormValue, Word, almost_additivity_ratio,
                      block_decompose, block_matrix, block_product_lower_bound, operator_norm,
                      power_norm, word_product)
from .errors import (CocycleError, ConvergenceError, DivergenceError, InfeasibleError,
                     InvalidInputError, PrecisionError, PropertyViolation, ResourceLimitError)
from .induced import (BlockMeasure, InducedPressureReport, TailPolicy, Truncation,
                      expected_return_time, gibbs_cylinder_estimate, induced_fekete_bracket,
                      induced_partition_sum, solve_t_c)
from .measures import (RenewalSpec, build_renewal_spec, entropy_gap, kac_abramov_check,
                       mc_lyapunov, pair_block_certificate, pressure_witness,
                       renewal_entropy, renewal_lyapunov_bounds, sample_word)
from .pressure import PressureBracket, partition_sum, pressure_fekete_bounds
from .rounding import Bracket
from .series import SeriesBracket, series_bracket, solve_t_prime, solve_t_star
from .transfer import ProjectiveGrid, transfer_eigenvalue

__all__ = [
    "A1", "A2", "BlockWord", "Mat2", "NormValue", "Word", "almost_additivity_ratio",
    "block_decompose", "block_matrix", "block_product_lower_bound", "operator_norm", "power_norm",
    "word_product",
    "CocycleError", "ConvergenceError", "DivergenceError", "InfeasibleError", "InvalidInputError",
    "PrecisionError", "PropertyViolation", "ResourceLimitError",
    "BlockMeasure", "InducedPressureReport", "TailPolicy", "Truncation", "expected_return_time",
    "gibbs_cylinder_estimate", "induced_fekete_bracket", "induced_partition_sum", "solve_t_c",
    "RenewalSpec", "build_renewal_spec", "entropy_gap", "kac_abramov_check", "mc_lyapunov",
    "pair_block_certificate", "pressure_witness", "renewal_entropy", "renewal_lyapunov_bounds",
    "sample_word",
    "PressureBracket", "partition_sum", "pressure_fekete_bounds",
    "Bracket",
    "SeriesBracket", "series_bracket", "solve_t_prime", "solve_t_star",
    "ProjectiveGrid", "transfer_eigenvalue",
    "__version__",
]
