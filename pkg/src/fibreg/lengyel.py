"""Closed-form p-adic valuations of Fibonacci numbers and related checks.

The closed form: nu_2(F_n) splits on n mod 6, nu_5(F_n) = nu_5(n), and for any
other prime nu_p(F_n) = nu_p(n) + nu_p(F_alpha(p)) when alpha(p) | n, else 0.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

from .fibcore import (
    NotPrimeError,
    PrimeClass,
    classify_prime,
    fib_pair_mod,
    is_prime,
    nu,
    period_data,
    to_digits,
)


class HypothesisError(ValueError):
    """A stated precondition of an invariance check does not hold."""


def fib_valuation_at(p: int, index: int, start_power: int = 3) -> int:
    """nu_p(F_index) from residues mod p^K, escalating K until the residue is nonzero."""
    power = max(start_power, 1)
    while True:
        residue = fib_pair_mod(index, p**power)[0]
        if residue:
            return nu(p, residue)
        power *= 2


@functools.lru_cache(maxsize=None)
def valuation_profile(p: int) -> tuple[int, int]:
    """(alpha(p), nu_p(F_alpha(p))) for a prime p; cached."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    alpha = period_data(p).restricted
    return alpha, fib_valuation_at(p, alpha)


def lengyel_valuation(p: int, n: int) -> int:
    """nu_p(F_n) by the three-case closed form."""
    if n <= 0:
        raise ValueError("n must be positive")
    if p == 2:
        r = n % 6
        if r == 0:
            return nu(2, n) + 2
        return 1 if r == 3 else 0
    if p == 5:
        return nu(5, n)
    alpha, val_alpha = valuation_profile(p)
    if n % alpha:
        return 0
    return nu(p, n) + val_alpha


def direct_valuation(p: int, n: int) -> int:
    """nu_p(F_n) read off F_n mod p^K, independent of the closed form's value.

    K starts at nu_p(n) + nu_p(F_alpha(p)) + 4; a zero residue (which the bound
    rules out) escalates K, so the answer is exact even if the prediction were
    wrong.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    _, val_alpha = valuation_profile(p)
    power = nu(p, n) + val_alpha + 4
    while True:
        residue = fib_pair_mod(n, p**power)[0]
        if residue:
            return nu(p, residue)
        power *= 2


def digit_sum_invariance_check(p: int, n: int, m: int) -> int:
    """Check that n and m have equal nu_p(F_.) and return the common value.

    Requires p = 1,4 mod 5, equal base-p digit sums mod alpha(p), and equal
    trailing-zero block lengths; the hypotheses are validated here, not trusted.
    """
    if n <= 0 or m <= 0:
        raise ValueError("indices must be positive")
    if classify_prime(p) != PrimeClass.ONE_FOUR_MOD5:
        raise HypothesisError(f"p must be 1 or 4 mod 5; {p} is {p % 20} mod 20")
    alpha, _ = valuation_profile(p)
    dn, dm = to_digits(n, p), to_digits(m, p)
    problems = []
    if (dn.digit_sum() - dm.digit_sum()) % alpha:
        problems.append(
            f"digit sums {dn.digit_sum()} and {dm.digit_sum()} differ mod alpha={alpha}"
        )
    if dn.trailing_zero_count() != dm.trailing_zero_count():
        problems.append(
            f"trailing zero counts {dn.trailing_zero_count()} and "
            f"{dm.trailing_zero_count()} differ"
        )
    if problems:
        raise HypothesisError("; ".join(problems))
    vn = lengyel_valuation(p, n)
    vm = lengyel_valuation(p, m)
    if vn != vm:
        raise AssertionError(
            f"invariance violated for p={p}: nu(F_{n})={vn} but nu(F_{m})={vm}"
        )
    return vn


@dataclass(frozen=True)
class WallReport:
    """Status of the open period-doubling question at one prime.

    wall_negative means nu_p(F_alpha(p)) = 1, equivalently pi(p^2) != pi(p);
    no prime with wall_negative = False is known.
    """

    p: int
    alpha: int
    val_at_alpha: int
    pi_p: int
    pi_p2: int
    wall_negative: bool

    def __post_init__(self):
        if self.val_at_alpha < 1:
            raise ValueError("nu_p(F_alpha(p)) is at least 1 by definition of alpha")
        if self.wall_negative != (self.pi_p2 != self.pi_p):
            raise ValueError("wall_negative must match pi(p^2) != pi(p)")


def wall_check(p: int) -> WallReport:
    """Build the WallReport for a prime p.

    val_at_alpha comes from residues mod p^3 (escalated if ever needed);
    pi(p^2) is then pinned by one residue-pair check at index pi(p), since
    pi(p) | pi(p^2) | p*pi(p) forces pi(p^2) in {pi(p), p*pi(p)}.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    pd = period_data(p)
    val = fib_valuation_at(p, pd.restricted)
    if fib_pair_mod(pd.pisano, p * p) == (0, 1):
        pi_p2 = pd.pisano
    else:
        pi_p2 = p * pd.pisano
    return WallReport(
        p=p,
        alpha=pd.restricted,
        val_at_alpha=val,
        pi_p=pd.pisano,
        pi_p2=pi_p2,
        wall_negative=(val == 1),
    )
