"""Matrix representations of {nu_p(F_{n+1})} over base-p digits.

A representation is a family of r x r integer matrices M_0..M_{p-1} with a row
vector lam and column vector kappa such that a(n) = lam * M_{n0} * ... * M_{nl}
* kappa over the least-significant-first digits n0..nl of n (empty product for
n = 0).  Row k of M_d stores the coefficients expressing generator k's d-th
digit section in terms of the generators, so every construction below is
assembled row by row from its section relations and self-checked against the
closed-form valuation on a small window before being returned.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .fibcore import (
    NotPrimeError,
    PrimeClass,
    classify_prime,
    is_prime,
    nu,
    restricted_period,
)
from .lengyel import lengyel_valuation, valuation_profile

Matrix = tuple[tuple[int, ...], ...]

_MAX_FAILURES = 1000


class WrongClassError(ValueError):
    """A constructor was asked for a prime outside its residue class."""


class WallAssumptionError(ValueError):
    """A constructor that needs nu_p(F_alpha(p)) = 1 got a prime where it fails."""


class Provenance(Enum):
    NU_K_PLUS_ONE = "NuKPlusOne"
    P_EQ_TWO = "PeqTwo"
    P_EQ_FIVE = "PeqFive"
    ONE_FOUR = "Thm14"
    THIRTEEN_SEVENTEEN = "Thm1317"
    TWO_THREE = "Thm23"
    DIRECT_SUM = "DirectSum"
    EMPIRICAL = "Empirical"


@dataclass(frozen=True)
class LinearRep:
    """Immutable base-p linear representation: digit matrices plus lam/kappa."""

    p: int
    r: int
    matrices: tuple[Matrix, ...]
    lam: tuple[int, ...]
    kappa: tuple[int, ...]
    provenance: Provenance
    # per-digit sparse rows [(col, coeff), ...] for fast evaluation
    _sparse: tuple = field(init=False, repr=False, compare=False, default=())

    def __post_init__(self):
        if self.p < 2 or self.r < 1:
            raise ValueError("need base >= 2 and dimension >= 1")
        if len(self.matrices) != self.p:
            raise ValueError("need one matrix per digit")
        for mat in self.matrices:
            if len(mat) != self.r or any(len(row) != self.r for row in mat):
                raise ValueError("matrix dimensions disagree with rank bound")
        if len(self.lam) != self.r or len(self.kappa) != self.r:
            raise ValueError("vector dimensions disagree with rank bound")
        sparse = tuple(
            tuple(
                tuple((j, c) for j, c in enumerate(row) if c)
                for row in mat
            )
            for mat in self.matrices
        )
        object.__setattr__(self, "_sparse", sparse)

    def evaluate(self, n: int) -> int:
        return evaluate(self, n)


def evaluate_digits(rep: LinearRep, digits: Sequence[int]) -> int:
    """lam * M_{d0} * ... * M_{dl} * kappa over an explicit LSB-first digit string."""
    row = rep.lam
    for d in digits:
        if not 0 <= d < rep.p:
            raise ValueError(f"digit {d} out of range for base {rep.p}")
        mat = rep._sparse[d]
        out = [0] * rep.r
        for k, x in enumerate(row):
            if x:
                for j, c in mat[k]:
                    out[j] += x * c
        row = out
    return sum(x * y for x, y in zip(row, rep.kappa))


def evaluate(rep: LinearRep, n: int) -> int:
    """Value of the represented sequence at n >= 0; n = 0 gives lam * kappa."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    digits = []
    while n:
        digits.append(n % rep.p)
        n //= rep.p
    return evaluate_digits(rep, digits)


def generator_prefixes(rep: LinearRep, length: int) -> list[list[int]]:
    """First `length` terms of each of the r generator sequences of rep.

    The state column u(n) = M_{n0}...M_{nl} * kappa satisfies u(n) = M_{n mod p}
    * u(n // p), so the table fills in O(length * r).
    """
    if length < 1:
        raise ValueError("length must be positive")
    states = [list(rep.kappa)]
    for n in range(1, length):
        prev = states[n // rep.p]
        mat = rep._sparse[n % rep.p]
        cur = [0] * rep.r
        for k in range(rep.r):
            acc = 0
            for j, c in mat[k]:
                acc += c * prev[j]
            cur[k] = acc
        states.append(cur)
    return [[states[n][k] for n in range(length)] for k in range(rep.r)]


def _self_check(p: int, matrices: Sequence[Matrix], gens: Sequence[Callable[[int], int]], width: int = 24) -> None:
    # transcription guard: every row must reproduce its section relation numerically
    r = len(gens)
    for d, mat in enumerate(matrices):
        for k in range(r):
            row = mat[k]
            for n in range(width):
                lhs = gens[k](p * n + d)
                rhs = sum(c * gens[j](n) for j, c in enumerate(row) if c)
                if lhs != rhs:
                    raise AssertionError(
                        f"row self-check failed: digit {d}, generator {k}, n={n}: "
                        f"{lhs} != {rhs}"
                    )


def build_nu_k(k: int) -> LinearRep:
    """Rank-2 representation of {nu_k(n+1)} for any base k >= 2.

    Generators are nu_k(n+1) and nu_k(k(n+1)); all digit matrices below k-1
    coincide because the value only depends on the trailing digit block.
    """
    if k < 2:
        raise ValueError("base must be at least 2")
    low = ((0, 0), (-1, 1))
    top = ((0, 1), (-1, 2))
    matrices = (low,) * (k - 1) + (top,)
    gens = [lambda n: nu(k, n + 1), lambda n: nu(k, k * (n + 1))]
    _self_check(k, matrices, gens)
    return LinearRep(
        p=k,
        r=2,
        matrices=matrices,
        lam=(1, 0),
        kappa=(0, 1),
        provenance=Provenance.NU_K_PLUS_ONE,
    )


_P2_M0: Matrix = (
    (0, 1, 0, 0, 0),
    (0, 0, 0, 1, 0),
    (0, 3, 0, 0, 0),
    (0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1),
)
_P2_M1: Matrix = (
    (0, 0, 1, 0, 0),
    (0, 0, 0, 0, 1),
    (0, 0, 1, 1, 0),
    (0, 0, 0, 1, 0),
    (0, 1, 0, 0, 0),
)


def build_p2() -> LinearRep:
    """Rank-5 representation of {nu_2(F_{n+1})}.

    Generators, in row order: nu_2(F_{n+1}), nu_2(F_{2n+1}), nu_2(F_{2n+2}),
    nu_2(F_{4n+1}), nu_2(F_{4n+3}).  kappa holds their first terms.
    """
    gens = [
        lambda n: lengyel_valuation(2, n + 1),
        lambda n: lengyel_valuation(2, 2 * n + 1),
        lambda n: lengyel_valuation(2, 2 * n + 2),
        lambda n: lengyel_valuation(2, 4 * n + 1),
        lambda n: lengyel_valuation(2, 4 * n + 3),
    ]
    matrices = (_P2_M0, _P2_M1)
    _self_check(2, matrices, gens, width=64)
    return LinearRep(
        p=2,
        r=5,
        matrices=matrices,
        lam=(1, 0, 0, 0, 0),
        kappa=tuple(g(0) for g in gens),
        provenance=Provenance.P_EQ_TWO,
    )


def build_p5() -> LinearRep:
    """Rank-2 representation of {nu_5(F_{n+1})}: nu_5(F_n) = nu_5(n)."""
    base = build_nu_k(5)
    return LinearRep(
        p=5,
        r=2,
        matrices=base.matrices,
        lam=base.lam,
        kappa=base.kappa,
        provenance=Provenance.P_EQ_FIVE,
    )


def _one_four_rows(p: int, val: Callable[[int], int]) -> tuple[tuple[Matrix, ...], tuple[int, ...], tuple[int, ...]]:
    # generators: val(n+1) then val(pn+j+1) for j = 0..p-2
    r = p
    mats = []
    for d in range(p):
        mat = [[0] * r for _ in range(r)]
        if d <= p - 2:
            mat[0][d + 1] = 1
            for j in range(p - 1):
                mat[1 + j][1 + (d + j) % (p - 1)] = 1
        else:
            mat[0][0] = 1
            mat[0][1] = 1
            for j in range(p - 1):
                mat[1 + j][1 + j] = 1
        mats.append(tuple(map(tuple, mat)))
    lam = (1,) + (0,) * (r - 1)
    kappa = (val(1),) + tuple(val(j + 1) for j in range(p - 1))
    return tuple(mats), lam, kappa


def _one_four_gens(p: int, val: Callable[[int], int]) -> list[Callable[[int], int]]:
    return [lambda n: val(n + 1)] + [
        (lambda n, j=j: val(p * n + j + 1)) for j in range(p - 1)
    ]


def build_one_four(p: int) -> LinearRep:
    """p x p representation for primes p = 1,4 mod 5 with nu_p(F_alpha(p)) = 1.

    Digit matrices 0..p-2 form a cyclic group of order p-1 under multiplication
    (their product law adds indices mod p-1); the digit-(p-1) matrix breaks
    commutativity, reflecting dependence on the trailing p-1 digit block.
    """
    if classify_prime(p) != PrimeClass.ONE_FOUR_MOD5:
        raise WrongClassError(f"{p} is not 1 or 4 mod 5")
    _, val_alpha = valuation_profile(p)
    if val_alpha != 1:
        raise WallAssumptionError(f"nu_{p}(F_alpha({p})) = {val_alpha} != 1")
    val = lambda m: lengyel_valuation(p, m)
    mats, lam, kappa = _one_four_rows(p, val)
    _self_check(p, mats, _one_four_gens(p, val))
    return LinearRep(p=p, r=p, matrices=mats, lam=lam, kappa=kappa,
                     provenance=Provenance.ONE_FOUR)


def _thirteen_seventeen_rows(p: int, val: Callable[[int], int]) -> tuple[tuple[Matrix, ...], tuple[int, ...], tuple[int, ...]]:
    # generators: val(n+1) then val(pn+j+1) for j = 0..(p-1)/2; h = (p+1)/2
    h = (p + 1) // 2
    r = h + 1
    shift = (p - 3) // 2
    mats = []
    for d in range(p):
        mat = [[0] * r for _ in range(r)]
        if d <= p - 2:
            mat[0][1 + d % h] = 1
        else:
            mat[0][0] = 1
            mat[0][1 + shift] += 1
        for j in range(h):
            mat[1 + j][1 + (d - j + shift) % h] = 1
        mats.append(tuple(map(tuple, mat)))
    lam = (1,) + (0,) * (r - 1)
    kappa = (val(1),) + tuple(val(j + 1) for j in range(h))
    return tuple(mats), lam, kappa


def _thirteen_seventeen_gens(p: int, val: Callable[[int], int]) -> list[Callable[[int], int]]:
    h = (p + 1) // 2
    return [lambda n: val(n + 1)] + [
        (lambda n, j=j: val(p * n + j + 1)) for j in range(h)
    ]


def build_thirteen_seventeen(p: int) -> LinearRep:
    """(p+3)/2-dimensional representation for primes p = 13,17 mod 20.

    The section relations determine the matrices; they are materialized here
    from the generator order [val(n+1); val(pn+j+1), j = 0..(p-1)/2], which is
    one valid choice, not a canonical one.
    """
    if classify_prime(p) != PrimeClass.THIRTEEN_SEVENTEEN_MOD20:
        raise WrongClassError(f"{p} is not 13 or 17 mod 20")
    _, val_alpha = valuation_profile(p)
    if val_alpha != 1:
        raise WallAssumptionError(f"nu_{p}(F_alpha({p})) = {val_alpha} != 1")
    val = lambda m: lengyel_valuation(p, m)
    mats, lam, kappa = _thirteen_seventeen_rows(p, val)
    _self_check(p, mats, _thirteen_seventeen_gens(p, val))
    return LinearRep(p=p, r=(p + 3) // 2, matrices=mats, lam=lam, kappa=kappa,
                     provenance=Provenance.THIRTEEN_SEVENTEEN)


def _two_three_rows(p: int, val: Callable[[int], int]) -> tuple[tuple[Matrix, ...], tuple[int, ...], tuple[int, ...]]:
    # generators: val(n+1); val(pn+j+1) for j = 0..p-1; val(p^2 n + p + 1)
    r = p + 2
    mats = []
    for d in range(p):
        mat = [[0] * r for _ in range(r)]
        mat[0][1 + d] = 1
        for j in range(p - 1):
            row = mat[1 + j]
            if d <= j - 1:
                row[1 + (d - j + p - 1)] = 1
            elif d == j:
                row[0] = -1
                row[p] = 1
            elif d == j + 1:
                row[p + 1] = 1
            else:
                row[1 + (d - j - 2)] = 1
        row = mat[p]  # generator val(pn + (p-1) + 1)
        if d <= p - 2:
            row[1 + d] = 2
        else:
            row[0] = -1
            row[p] = 2
        row = mat[p + 1]  # generator val(p^2 n + p + 1)
        if d == 0:
            row[p + 1] = 1
        else:
            row[1 + (d - 1)] = 1
        mats.append(tuple(map(tuple, mat)))
    lam = (1,) + (0,) * (r - 1)
    kappa = (val(1),) + tuple(val(j + 1) for j in range(p)) + (val(p + 1),)
    return tuple(mats), lam, kappa


def _two_three_gens(p: int, val: Callable[[int], int]) -> list[Callable[[int], int]]:
    gens = [lambda n: val(n + 1)]
    gens += [(lambda n, j=j: val(p * n + j + 1)) for j in range(p)]
    gens.append(lambda n: val(p * p * n + p + 1))
    return gens


def build_two_three(p: int) -> LinearRep:
    """(p+2)-dimensional representation for odd primes p = 2,3 mod 5.

    Valid for the 13,17 mod 20 class too (where the half-size construction is
    tighter); rejected for p = 2 and p = 5.
    """
    cls = classify_prime(p)
    if cls not in (PrimeClass.THREE_SEVEN_MOD20, PrimeClass.THIRTEEN_SEVENTEEN_MOD20):
        raise WrongClassError(f"{p} is not an odd prime congruent to 2,3 mod 5")
    _, val_alpha = valuation_profile(p)
    if val_alpha != 1:
        raise WallAssumptionError(f"nu_{p}(F_alpha({p})) = {val_alpha} != 1")
    val = lambda m: lengyel_valuation(p, m)
    mats, lam, kappa = _two_three_rows(p, val)
    _self_check(p, mats, _two_three_gens(p, val))
    return LinearRep(p=p, r=p + 2, matrices=mats, lam=lam, kappa=kappa,
                     provenance=Provenance.TWO_THREE)


def _indicator_rows(p: int, alpha: int) -> tuple[tuple[Matrix, ...], tuple[int, ...], tuple[int, ...]]:
    # generators: [n == c mod alpha] for c = 0..alpha-1
    pinv = pow(p % alpha, -1, alpha) if alpha > 1 else 0
    mats = []
    for d in range(p):
        mat = [[0] * alpha for _ in range(alpha)]
        for c in range(alpha):
            mat[c][(c - d) * pinv % alpha] = 1
        mats.append(tuple(map(tuple, mat)))
    lam = tuple(1 if c == alpha - 1 else 0 for c in range(alpha))
    kappa = tuple(1 if c == 0 else 0 for c in range(alpha))
    return tuple(mats), lam, kappa


def build_residue_indicator(p: int, alpha: int) -> LinearRep:
    """alpha-dimensional representation of the indicator of alpha | n + 1.

    The state tracks n mod alpha as digits arrive least-significant first;
    alpha must be the restricted period of p (in particular coprime to p).
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if alpha != restricted_period(p):
        raise ValueError(f"alpha={alpha} is not the restricted period of {p}")
    mats, lam, kappa = _indicator_rows(p, alpha)
    gens = [(lambda n, c=c: 1 if n % alpha == c else 0) for c in range(alpha)]
    _self_check(p, mats, gens, width=min(3 * alpha, 40))
    return LinearRep(p=p, r=alpha, matrices=mats, lam=lam, kappa=kappa,
                     provenance=Provenance.DIRECT_SUM)


_CORE_ROWS = {
    PrimeClass.ONE_FOUR_MOD5: (_one_four_rows, _one_four_gens),
    PrimeClass.THIRTEEN_SEVENTEEN_MOD20: (_thirteen_seventeen_rows, _thirteen_seventeen_gens),
    PrimeClass.THREE_SEVEN_MOD20: (_two_three_rows, _two_three_gens),
}


def build_general(p: int) -> LinearRep:
    """Unconditional representation of {nu_p(F_{n+1})} for p != 2, 5.

    Direct sum of the class construction applied to the baseline sequence
    b(n) = [alpha | n+1] (nu_p(n+1) + 1) - whose section relations need no
    assumption on nu_p(F_alpha(p)) - and the indicator of alpha | n + 1,
    weighted in lam by nu_p(F_alpha(p)) - 1.
    """
    cls = classify_prime(p)
    if cls in (PrimeClass.TWO, PrimeClass.FIVE):
        raise WrongClassError("use build_p2/build_p5 for the special primes")
    alpha, val_alpha = valuation_profile(p)

    def bval(m: int) -> int:
        return 0 if m % alpha else nu(p, m) + 1

    rows_fn, gens_fn = _CORE_ROWS[cls]
    b_mats, b_lam, b_kappa = rows_fn(p, bval)
    _self_check(p, b_mats, gens_fn(p, bval))
    i_mats, i_lam, i_kappa = _indicator_rows(p, alpha)

    rb = len(b_lam)
    r = rb + alpha
    weight = val_alpha - 1
    mats = []
    for d in range(p):
        mat = [[0] * r for _ in range(r)]
        for k in range(rb):
            for j in range(rb):
                mat[k][j] = b_mats[d][k][j]
        for k in range(alpha):
            for j in range(alpha):
                mat[rb + k][rb + j] = i_mats[d][k][j]
        mats.append(tuple(map(tuple, mat)))
    lam = b_lam + tuple(weight * x for x in i_lam)
    kappa = b_kappa + i_kappa
    return LinearRep(p=p, r=r, matrices=tuple(mats), lam=lam, kappa=kappa,
                     provenance=Provenance.DIRECT_SUM)


def build_for_class(p: int) -> LinearRep:
    """The class-specific constructor for p, dispatched on classify_prime."""
    cls = classify_prime(p)
    if cls == PrimeClass.TWO:
        return build_p2()
    if cls == PrimeClass.FIVE:
        return build_p5()
    if cls == PrimeClass.ONE_FOUR_MOD5:
        return build_one_four(p)
    if cls == PrimeClass.THIRTEEN_SEVENTEEN_MOD20:
        return build_thirteen_seventeen(p)
    return build_two_three(p)


@dataclass(frozen=True)
class RelationReport:
    """Outcome of sweeping one section relation over 0 <= n <= n_max."""

    relation_id: str
    n_max: int
    failures: tuple[tuple[int, int, int], ...]  # (n, lhs, rhs), capped

    @property
    def ok(self) -> bool:
        return not self.failures


def _sweep(relation_id: str, n_max: int, pairs) -> RelationReport:
    failures = []
    for n, lhs, rhs in pairs:
        if lhs != rhs:
            failures.append((n, lhs, rhs))
            if len(failures) >= _MAX_FAILURES:
                break
    return RelationReport(relation_id=relation_id, n_max=n_max, failures=tuple(failures))


def _verify_p2(n_max: int) -> list[RelationReport]:
    val = lambda m: lengyel_valuation(2, m)
    rels = [
        ("p2-1", lambda n: val(2 * n + 1), lambda n: val(2 * n + 1)),
        ("p2-2", lambda n: val(2 * (2 * n) + 1), lambda n: val(4 * n + 1)),
        ("p2-3", lambda n: val(2 * (2 * n) + 2), lambda n: 3 * val(2 * n + 1)),
        ("p2-4", lambda n: val(4 * (2 * n) + 1), lambda n: val(2 * n + 1)),
        ("p2-5", lambda n: val(4 * (2 * n) + 3), lambda n: val(4 * n + 3)),
        ("p2-6", lambda n: val(2 * n + 2), lambda n: val(2 * n + 2)),
        ("p2-7", lambda n: val(2 * (2 * n + 1) + 1), lambda n: val(4 * n + 3)),
        ("p2-8", lambda n: val(2 * (2 * n + 1) + 2), lambda n: val(4 * n + 1) + val(2 * n + 2)),
        ("p2-9", lambda n: val(4 * (2 * n + 1) + 1), lambda n: val(4 * n + 1)),
        ("p2-10", lambda n: val(4 * (2 * n + 1) + 3), lambda n: val(2 * n + 1)),
    ]
    return [
        _sweep(rid, n_max, ((n, lhs(n), rhs(n)) for n in range(n_max + 1)))
        for rid, lhs, rhs in rels
    ]


def _verify_nu_k(k: int, n_max: int) -> list[RelationReport]:
    val = lambda m: lengyel_valuation(k, m) if k == 5 else nu(k, m)

    def first():
        for n in range(n_max + 1):
            for i in range(k):
                lhs = val(k * n + i + 1)
                rhs = val(k * (n + 1)) if i == k - 1 else 0
                yield n, lhs, rhs

    def second():
        for n in range(n_max + 1):
            a = val(n + 1)
            b = val(k * (n + 1))
            for i in range(k):
                lhs = val(k * (k * n + i + 1))
                rhs = -a + 2 * b if i == k - 1 else -a + b
                yield n, lhs, rhs

    return [_sweep("nuk-1", n_max, first()), _sweep("nuk-2", n_max, second())]


def _fast_valuation(p: int):
    # local closure kept tight: relation sweeps call this millions of times
    alpha, val_alpha = valuation_profile(p)

    def val(m: int) -> int:
        if m % alpha:
            return 0
        e = 0
        while m % p == 0:
            e += 1
            m //= p
        return e + val_alpha

    return val


def _verify_one_four(p: int, n_max: int) -> list[RelationReport]:
    val = _fast_valuation(p)

    def sections():
        for n in range(n_max + 1):
            base = p * n
            for i in range(p - 1):
                x = val(base + i + 1)
                yield n, x, x
            yield n, val(base + p), val(n + 1) + val(base + 1)

    def level1():
        for n in range(n_max + 1):
            base = p * n
            rhs_cache = [val(base + t + 1) for t in range(p - 1)]
            for i in range(p):
                inner = p * (base + i)
                for j in range(p - 1):
                    yield n, val(inner + j + 1), rhs_cache[(i + j) % (p - 1)]

    return [_sweep("c14-1", n_max, sections()), _sweep("c14-2", n_max, level1())]


def _verify_thirteen_seventeen(p: int, n_max: int) -> list[RelationReport]:
    val = _fast_valuation(p)
    h = (p + 1) // 2
    shift = (p - 3) // 2

    def sections():
        for n in range(n_max + 1):
            base = p * n
            for i in range(p - 1):
                yield n, val(base + i + 1), val(base + i % h + 1)
            yield n, val(base + p), val(n + 1) + val(base + shift + 1)

    def level1():
        for n in range(n_max + 1):
            base = p * n
            rhs_cache = [val(base + t + 1) for t in range(h)]
            for i in range(p):
                inner = p * (base + i)
                for j in range(h):
                    yield n, val(inner + j + 1), rhs_cache[(i - j + shift) % h]

    return [_sweep("c1317-1", n_max, sections()), _sweep("c1317-2", n_max, level1())]


def _verify_two_three(p: int, n_max: int) -> list[RelationReport]:
    val = _fast_valuation(p)
    p2 = p * p

    def sections():
        for n in range(n_max + 1):
            base = p * n
            for i in range(p):
                x = val(base + i + 1)
                yield n, x, x

    def level1():
        for n in range(n_max + 1):
            base = p * n
            a = val(n + 1)
            top = val(base + p)
            deep = val(p2 * n + p + 1)
            cache = [val(base + t + 1) for t in range(p)]
            for i in range(p):
                inner = p * (base + i)
                for j in range(p - 1):
                    lhs = val(inner + j + 1)
                    if i <= j - 1:
                        rhs = cache[i - j + p - 1]
                    elif i == j:
                        rhs = -a + top
                    elif i == j + 1:
                        rhs = deep
                    else:
                        rhs = cache[i - j - 2]
                    yield n, lhs, rhs

    def doubling():
        for n in range(n_max + 1):
            base = p * n
            a = val(n + 1)
            top = val(base + p)
            for i in range(p):
                lhs = val(p * (base + i) + p)
                rhs = -a + 2 * top if i == p - 1 else 2 * val(base + i + 1)
                yield n, lhs, rhs

    def deep_level():
        for n in range(n_max + 1):
            base = p * n
            deep = val(p2 * n + p + 1)
            for i in range(p):
                lhs = val(p2 * (base + i) + p + 1)
                rhs = deep if i == 0 else val(base + i)
                yield n, lhs, rhs

    return [
        _sweep("c23-1", n_max, sections()),
        _sweep("c23-2a", n_max, level1()),
        _sweep("c23-2b", n_max, doubling()),
        _sweep("c23-3", n_max, deep_level()),
    ]


def verify_relations(p: int, n_max: int) -> list[RelationReport]:
    """Sweep every section relation of p's class; failures are data, not errors.

    Both sides of every relation are computed with the closed-form valuation.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    cls = classify_prime(p)
    if cls == PrimeClass.TWO:
        return _verify_p2(n_max)
    if cls == PrimeClass.FIVE:
        return _verify_nu_k(5, n_max)
    if cls == PrimeClass.ONE_FOUR_MOD5:
        return _verify_one_four(p, n_max)
    if cls == PrimeClass.THIRTEEN_SEVENTEEN_MOD20:
        return _verify_thirteen_seventeen(p, n_max)
    return _verify_two_three(p, n_max)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    r = len(a)
    out = []
    for k in range(r):
        acc = [0] * r
        for m, c in ((m, c) for m, c in enumerate(a[k]) if c):
            brow = b[m]
            for j in range(r):
                if brow[j]:
                    acc[j] += c * brow[j]
        out.append(tuple(acc))
    return tuple(out)


@dataclass(frozen=True)
class MonoidReport:
    """Result of checking the digit-matrix product law for a 1,4-class rep."""

    p: int
    products_checked: int
    product_failures: tuple[tuple[int, int], ...]
    commuting_digits: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.product_failures and not self.commuting_digits


def verify_monoid_structure(rep: LinearRep) -> MonoidReport:
    """Check M_i M_j = M_{(i+j) mod (p-1)} for i,j <= p-2 and that M_{p-1}
    commutes with none of them."""
    if rep.provenance != Provenance.ONE_FOUR:
        raise ValueError("monoid structure applies to the 1,4-class construction")
    p = rep.p
    mats = rep.matrices
    product_failures = []
    for i in range(p - 1):
        for j in range(p - 1):
            if _mat_mul(mats[i], mats[j]) != mats[(i + j) % (p - 1)]:
                product_failures.append((i, j))
    last = mats[p - 1]
    commuting = tuple(
        i for i in range(p - 1) if _mat_mul(last, mats[i]) == _mat_mul(mats[i], last)
    )
    return MonoidReport(
        p=p,
        products_checked=(p - 1) ** 2,
        product_failures=tuple(product_failures),
        commuting_digits=commuting,
    )


def rep_to_json_dict(rep: LinearRep) -> dict:
    """Stable-order JSON dict: p, rank, matrices (row-major flat), lambda, kappa, provenance."""
    return {
        "p": rep.p,
        "rank": rep.r,
        "matrices": [[c for row in mat for c in row] for mat in rep.matrices],
        "lambda": list(rep.lam),
        "kappa": list(rep.kappa),
        "provenance": rep.provenance.value,
    }


def rep_from_json_dict(data: dict) -> LinearRep:
    """Inverse of rep_to_json_dict; integers round-trip bit-exactly."""
    try:
        p = int(data["p"])
        r = int(data["rank"])
        flat = data["matrices"]
        lam = tuple(int(x) for x in data["lambda"])
        kappa = tuple(int(x) for x in data["kappa"])
        provenance = Provenance(data["provenance"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed representation JSON: {exc}") from exc
    if len(flat) != p or any(len(m) != r * r for m in flat):
        raise ValueError("matrix array shapes disagree with p and rank")
    matrices = tuple(
        tuple(tuple(int(x) for x in m[i * r : (i + 1) * r]) for i in range(r))
        for m in flat
    )
    return LinearRep(p=p, r=r, matrices=matrices, lam=lam, kappa=kappa,
                     provenance=provenance)
