"""hivekit: invariant factors over discrete valuation rings and the hive
of a lattice pair, with brute-force certification at small sizes."""

from .hive import (DualityError, Hive, HiveType, LRFilling, RhombusReport,
                   RhombusViolation, build_hive, check_rhombus,
                   hive_to_lr_filling, hive_type, render, validate_lr)
from .lattice import (Lattice, Submodule, adapted_basis, adapted_slice,
                      greedy_slice_first_min, lattice_invariants,
                      max_direct_sum_norm, min_direct_sum_norm,
                      pair_invariant, saturate)
from .matops import (SmithDecomposition, ValuedMatrix, invariant_partition,
                     matrix_norm, normal_form, quotient_free_invariants,
                     reduce_to_top_rows, smith_decompose, unimodular_check)
from .oracle import (BruteResult, BudgetExceededError, EnumerationBudget,
                     brute_max_direct_sum, brute_min_direct_sum,
                     enumerate_lr_fillings, enumerate_submodules,
                     span_fingerprint, stabilized_value)
from .ring import INFINITY, RingConfig, RingElement, unit_part, valuation

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "RingConfig", "RingElement", "valuation", "unit_part",
    "ValuedMatrix", "SmithDecomposition", "smith_decompose",
    "invariant_partition", "matrix_norm", "unimodular_check",
    "reduce_to_top_rows", "quotient_free_invariants", "normal_form",
    "Lattice", "Submodule", "lattice_invariants", "pair_invariant",
    "adapted_basis", "adapted_slice", "saturate", "min_direct_sum_norm",
    "max_direct_sum_norm", "greedy_slice_first_min",
    "Hive", "HiveType", "RhombusReport", "RhombusViolation", "DualityError",
    "build_hive", "check_rhombus", "hive_type", "hive_to_lr_filling",
    "LRFilling", "validate_lr", "render",
    "EnumerationBudget", "BudgetExceededError", "BruteResult",
    "enumerate_submodules", "brute_min_direct_sum", "brute_max_direct_sum",
    "stabilized_value", "enumerate_lr_fillings", "span_fingerprint",
]
