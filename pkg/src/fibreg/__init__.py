"""Fibonacci p-adic valuations: closed forms, base-p matrix representations,
and empirical kernel-module ranks."""

from .fibcore import (
    Digits,
    NotPrimeError,
    PeriodData,
    PrimeClass,
    classify_prime,
    fib,
    fib_pair_mod,
    is_prime,
    nu,
    period_data,
    pisano_period,
    primes_up_to,
    restricted_period,
    to_digits,
)
from .lengyel import (
    HypothesisError,
    WallReport,
    digit_sum_invariance_check,
    direct_valuation,
    fib_valuation_at,
    lengyel_valuation,
    valuation_profile,
    wall_check,
)
from .representation import (
    LinearRep,
    MonoidReport,
    Provenance,
    RelationReport,
    WallAssumptionError,
    WrongClassError,
    build_for_class,
    build_general,
    build_nu_k,
    build_one_four,
    build_p2,
    build_p5,
    build_residue_indicator,
    build_thirteen_seventeen,
    build_two_three,
    evaluate,
    evaluate_digits,
    generator_prefixes,
    rep_from_json_dict,
    rep_to_json_dict,
    verify_monoid_structure,
    verify_relations,
)
from .kernel import (
    KernelNode,
    RankReport,
    conjecture_scan,
    kernel_rank,
    rank_of_rep,
    rank_table_csv,
    theorem_rank_bound,
)
from .cli import OutputFormat

__version__ = "0.1.0"
