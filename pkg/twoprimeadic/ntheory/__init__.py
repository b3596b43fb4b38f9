from .adic import (
    ceil_log,
    ceil_log_ratio,
    complexity_report,
    conjecture_check,
    evaluate_poly_big,
    evaluate_poly_mod,
    gcd_decomposition,
    hall_eval_mod,
    lower_bound_holds,
    madic_complexity,
    symmetric_complexity,
    theorem_prediction,
)
from .cyclotomy import (
    PairKind,
    build_class_table,
    calibrate,
    count_pair_solutions,
    cyclotomic_numbers_bruteforce,
    cyclotomic_numbers_formula,
    find_common_primitive_root,
    make_params,
    quadratic_partition,
)
from .sequence import SequenceFormat, generate, histogram, parse, reverse, serialize
from .verify import (
    check_class_structure,
    check_divisor_square,
    check_lemma2,
    check_lemma4,
    check_lemma5,
    check_lemma6,
    check_lemma7,
    check_lemma7_and_theorem2,
    check_residue_identities,
    check_theorem2,
    find_cofactor_prime_divisors,
    verify_all,
)

__all__ = [
    "ceil_log",
    "ceil_log_ratio",
    "complexity_report",
    "conjecture_check",
    "evaluate_poly_big",
    "evaluate_poly_mod",
    "gcd_decomposition",
    "hall_eval_mod",
    "lower_bound_holds",
    "madic_complexity",
    "symmetric_complexity",
    "theorem_prediction",
    "PairKind",
    "build_class_table",
    "calibrate",
    "count_pair_solutions",
    "cyclotomic_numbers_bruteforce",
    "cyclotomic_numbers_formula",
    "find_common_primitive_root",
    "make_params",
    "quadratic_partition",
    "SequenceFormat",
    "generate",
    "histogram",
    "parse",
    "reverse",
    "serialize",
    "check_class_structure",
    "check_divisor_square",
    "check_lemma2",
    "check_lemma4",
    "check_lemma5",
    "check_lemma6",
    "check_lemma7",
    "check_lemma7_and_theorem2",
    "check_residue_identities",
    "check_theorem2",
    "find_cofactor_prime_divisors",
    "verify_all",
]
