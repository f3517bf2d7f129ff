"""Bernstein index, argument tracking and the verified inequalities."""

from .checks import (BoundCheck, check_growth_and_zeros, check_lemma1, check_lemma2, check_lemma3,
                     check_submultiplicativity, check_theorem1, check_theorem2, koebe_ratio_check)
from .inequalities import (growth_zeros_bound, lemma1_bound, lemma2_bound, lemma3_bound,
                           poincare_zeros_bound, polynomial_variation_bound, theorem_bound)
from .modulus import BernsteinData, bernstein_index, max_modulus_on_compact, sup_modulus
from .phase import VarArgResult, count_zeros, variation_of_argument, winding_number

__all__ = [
    "BernsteinData", "BoundCheck", "VarArgResult",
    "bernstein_index", "check_growth_and_zeros", "check_lemma1", "check_lemma2", "check_lemma3",
    "check_submultiplicativity", "check_theorem1", "check_theorem2", "count_zeros",
    "growth_zeros_bound", "koebe_ratio_check", "lemma1_bound", "lemma2_bound", "lemma3_bound",
    "max_modulus_on_compact", "poincare_zeros_bound", "polynomial_variation_bound", "sup_modulus",
    "theorem_bound", "variation_of_argument", "winding_number",
]
