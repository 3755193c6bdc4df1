"""Exact Fibonacci arithmetic, base digits, period data, and prime classification.

Everything here is a pure function of its inputs; the only cache is the
memoized period table, whose fill is idempotent.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum


class NotPrimeError(ValueError):
    """An operation that requires a prime was given something else."""


# Deterministic Miller-Rabin witness set, sufficient for all n below this bound.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BOUND = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test for n below ~3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    if n >= _MR_BOUND:
        raise ValueError(f"{n} exceeds the deterministic witness bound {_MR_BOUND}")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by sieve."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(flags[i * i :: i])
    return [i for i in range(limit + 1) if flags[i]]


def fib(n: int) -> int:
    """F_n with F_0 = 0, F_1 = F_2 = 1, by fast doubling."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 0, 1  # (F_0, F_1)
    for bit in bin(n)[2:]:
        c = a * (2 * b - a)
        d = a * a + b * b
        if bit == "1":
            a, b = d, c + d
        else:
            a, b = c, d
    return a


def fib_pair_mod(n: int, m: int) -> tuple[int, int]:
    """(F_n mod m, F_{n+1} mod m) in O(log n) modular steps."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a, b = 0, 1
    for bit in bin(n)[2:]:
        c = a * (2 * b - a) % m
        d = (a * a + b * b) % m
        if bit == "1":
            a, b = d, (c + d) % m
        else:
            a, b = c, d
    return a, b


def nu(k: int, n: int) -> int:
    """Largest e with k^e dividing n.  Undefined (rejected) for n = 0."""
    if k < 2:
        raise ValueError("base must be at least 2")
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    e = 0
    while n % k == 0:
        e += 1
        n //= k
    return e


@dataclass(frozen=True)
class Digits:
    """Canonical base-`base` digits of `value`, least-significant first.

    value 0 is the empty digit string; the most-significant digit is never 0.
    """

    base: int
    digits: tuple[int, ...]
    value: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")
        if any(d < 0 or d >= self.base for d in self.digits):
            raise ValueError("digit out of range")
        if self.digits and self.digits[-1] == 0:
            raise ValueError("most-significant digit must be nonzero")
        acc = 0
        for d in reversed(self.digits):
            acc = acc * self.base + d
        if acc != self.value:
            raise ValueError("digits do not encode value")

    def digit_sum(self) -> int:
        return sum(self.digits)

    def trailing_zero_count(self) -> int:
        """Length of the trailing zero block in the written (MSB-first) form."""
        for pos, d in enumerate(self.digits):
            if d:
                return pos
        return 0

    def __len__(self) -> int:
        return len(self.digits)


def to_digits(n: int, base: int) -> Digits:
    """Canonical base-`base` representation of n, least-significant first."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if base < 2:
        raise ValueError("base must be at least 2")
    value = n
    ds = []
    while n:
        ds.append(n % base)
        n //= base
    return Digits(base=base, digits=tuple(ds), value=value)


@dataclass(frozen=True)
class PeriodData:
    """Pisano period and restricted period of the Fibonacci sequence mod `modulus`.

    Construction via period_data() guarantees minimality of both entries; the
    validation here rechecks the cheap congruences and the divisibility.
    """

    modulus: int
    pisano: int
    restricted: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("modulus must be at least 2")
        if self.restricted < 1 or self.pisano % self.restricted != 0:
            raise ValueError("restricted period must divide the Pisano period")
        if fib_pair_mod(self.restricted, self.modulus)[0] != 0:
            raise ValueError("F_restricted is not 0 mod modulus")
        if fib_pair_mod(self.pisano, self.modulus) != (0, 1):
            raise ValueError("(F_pisano, F_pisano+1) is not (0, 1) mod modulus")


@functools.lru_cache(maxsize=None)
def period_data(m: int) -> PeriodData:
    """Compute PeriodData(m) by one linear scan of residue pairs, O(pi(m))."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    a, b = 1, 1  # (F_1, F_2)
    n = 1
    alpha = 0
    while True:
        if a == 0:
            if alpha == 0:
                alpha = n
            if b == 1:
                return PeriodData(modulus=m, pisano=n, restricted=alpha)
        a, b = b, (a + b) % m
        n += 1


def restricted_period(m: int) -> int:
    """alpha(m): smallest n >= 1 with m | F_n."""
    return period_data(m).restricted


def pisano_period(m: int) -> int:
    """pi(m): smallest t >= 1 with (F_t, F_{t+1}) == (0, 1) mod m."""
    return period_data(m).pisano


class PrimeClass(Enum):
    TWO = "Two"
    FIVE = "Five"
    ONE_FOUR_MOD5 = "OneFourMod5"
    THIRTEEN_SEVENTEEN_MOD20 = "ThirteenSeventeenMod20"
    THREE_SEVEN_MOD20 = "ThreeSevenMod20"


def classify_prime(p: int) -> PrimeClass:
    """Split primes into the residue classes that drive every construction here.

    2 and 5 are special; every other prime falls in exactly one of the classes
    1,4 mod 5 / 13,17 mod 20 / 3,7 mod 20.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p == 2:
        return PrimeClass.TWO
    if p == 5:
        return PrimeClass.FIVE
    if p % 5 in (1, 4):
        return PrimeClass.ONE_FOUR_MOD5
    if p % 20 in (13, 17):
        return PrimeClass.THIRTEEN_SEVENTEEN_MOD20
    return PrimeClass.THREE_SEVEN_MOD20
