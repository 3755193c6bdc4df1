"""Empirical rank of the module generated by the base-p kernel of {nu_p(F_{n+1})}.

The kernel of a sequence a is the family of subsequences a(p^e n + i) over all
depths e and offsets 0 <= i < p^e.  Rank is measured by a breadth-first closure:
each node's length-L prefix vector is reduced against the current basis by exact
fraction-free integer elimination, and only independent nodes have their children
enqueued (a node spanned by the basis has sections spanned by the basis's
sections, since section maps are linear).  Prefix truncation can in principle
mislead that pruning, so the rank is recomputed at 2L and 4L and reported as
stabilized only when all three agree; a cross-check mode additionally expands
one extra level past every dependent node.

No floating point is used anywhere: vectors live in int64 arrays whose every
operation is guarded against overflow, with arbitrary-precision fallback.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from .fibcore import PrimeClass, classify_prime, period_data
from .lengyel import lengyel_valuation, valuation_profile
from .representation import LinearRep, generator_prefixes

_GUARD = 2**62  # int64 stays exact below this after one multiply-subtract


class _Int64Overflow(Exception):
    pass


@dataclass(frozen=True)
class KernelNode:
    """Kernel subsequence {a(p^depth * n + offset)}; offset < p^depth."""

    depth: int
    offset: int

    def __post_init__(self):
        if self.depth < 0 or self.offset < 0:
            raise ValueError("depth and offset must be nonnegative")

    def children(self, p: int) -> list["KernelNode"]:
        pe = p**self.depth
        if self.offset >= pe:
            raise ValueError("offset must be below p^depth")
        return [KernelNode(self.depth + 1, self.offset + j * pe) for j in range(p)]

    def index(self, n: int, p: int) -> int:
        return p**self.depth * n + self.offset


@dataclass(frozen=True)
class RankReport:
    """Empirical rank of the kernel module at one prime, with its metadata.

    The rank is what the truncated closure stabilized to, never a claimed
    minimum; conjecture_holds compares it against alpha + 1 and is only
    meaningful when stabilized is True.
    """

    p: int
    prime_class: PrimeClass
    alpha: int
    pisano: int
    rank: int
    theorem_bound: int
    conjecture_holds: bool
    truncation_length: int
    depth_explored: int
    stabilized: bool


def theorem_rank_bound(p: int) -> int:
    """Proved upper bound for the kernel-module rank at p (class dependent)."""
    cls = classify_prime(p)
    if cls == PrimeClass.TWO:
        return 5
    if cls == PrimeClass.FIVE:
        return 2
    if cls == PrimeClass.ONE_FOUR_MOD5:
        return p
    if cls == PrimeClass.THIRTEEN_SEVENTEEN_MOD20:
        return (p + 3) // 2
    return p + 2


def _np_reduce_insert(bucket: list, v: np.ndarray) -> bool:
    """Reduce v against the bucket's echelon rows; insert if independent.

    Rows are [pivot, vector] with positive pivot entries, pairwise pivot-reduced,
    sorted by pivot.  All arithmetic is exact int64; anything that could exceed
    the guard raises for the arbitrary-precision path to take over.
    """
    for piv, b in bucket:
        c = int(v[piv])
        if c:
            lead = int(b[piv])
            if abs(lead) * int(np.abs(v).max()) + abs(c) * int(np.abs(b).max()) >= _GUARD:
                raise _Int64Overflow
            v = lead * v - c * b
            nz = v[v != 0]
            if nz.size == 0:
                return False
            g = int(np.gcd.reduce(np.abs(nz)))
            if g > 1:
                v = v // g
    if not v.any():
        return False
    piv = int(np.nonzero(v)[0][0])
    if int(v[piv]) < 0:
        v = -v
    lead = int(v[piv])
    for row in bucket:
        b = row[1]
        c = int(b[piv])
        if c:
            if abs(lead) * int(np.abs(b).max()) + abs(c) * int(np.abs(v).max()) >= _GUARD:
                raise _Int64Overflow
            nb = lead * b - c * v
            g = int(np.gcd.reduce(np.abs(nb[nb != 0])))
            if g > 1:
                nb = nb // g
            row[1] = nb
    bucket.append([piv, v])
    bucket.sort(key=lambda row: row[0])
    return True


def _py_reduce_insert(bucket: list, v: list) -> bool:
    """Arbitrary-precision twin of _np_reduce_insert for python-int vectors."""
    for piv, b in bucket:
        c = v[piv]
        if c:
            lead = b[piv]
            v = [lead * x - c * y for x, y in zip(v, b)]
            g = 0
            for x in v:
                if x:
                    g = gcd(g, x)
            if g == 0:
                return False
            if g > 1:
                v = [x // g for x in v]
    piv = next((idx for idx, x in enumerate(v) if x), None)
    if piv is None:
        return False
    if v[piv] < 0:
        v = [-x for x in v]
    lead = v[piv]
    for row in bucket:
        b = row[1]
        c = b[piv]
        if c:
            nb = [lead * x - c * y for x, y in zip(b, v)]
            g = 0
            for x in nb:
                if x:
                    g = gcd(g, x)
            if g > 1:
                nb = [x // g for x in nb]
            row[1] = nb
    bucket.append([piv, v])
    bucket.sort(key=lambda row: row[0])
    return True


def _assert_echelon(buckets: dict) -> None:
    # Hermite-style staircase: nonzero rows, distinct pivots, positive pivot entries
    for bucket in buckets.values():
        pivots = [row[0] for row in bucket]
        if len(set(pivots)) != len(pivots):
            raise AssertionError("duplicate pivot in basis")
        for piv, vec in bucket:
            if not int(vec[piv]) > 0:
                raise AssertionError("basis pivot entry not positive")


def _structured_vector(p: int, alpha: int, v_alpha: int, e: int, i: int, L: int):
    """Support-compressed prefix of a(p^e n + i) for the default valuation oracle.

    For p not in {2, 5} the sequence a(n) = nu_p(F_{n+1}) is supported on one
    residue class rho mod alpha, and on support position rho + alpha*t its value
    is nu_p(C + p^e alpha t) + v_alpha with C = p^e rho + i + 1.  Returns
    (rho, values) where values[t] covers the support positions below L.  The
    progression is reduced mod p^J to fit exact int64; any entry whose valuation
    could reach J is recomputed with exact big ints.
    """
    pe = p**e
    rho = (-(i + 1) * pow(pe % alpha, -1, alpha)) % alpha
    if rho >= L:
        return rho, np.zeros(0, dtype=np.int64)
    M = (L - 1 - rho) // alpha + 1
    C = pe * rho + i + 1
    w = 0
    x = C
    while x % p == 0:
        w += 1
        x //= p
    if w < e:
        return rho, np.full(M, w + v_alpha, dtype=np.int64)
    D = C // pe
    J = 2
    while p**J <= alpha * M * p * p:
        J += 1
    pJ = p**J
    while pJ + alpha * M >= _GUARD and J > 1:
        J -= 1
        pJ = p**J
    X = (D % pJ) + alpha * np.arange(M, dtype=np.int64)
    vals = np.zeros(M, dtype=np.int64)
    live = (X % p == 0) & (X > 0)
    work = X.copy()
    steps = 0
    while steps < J and live.any():
        vals[live] += 1
        work[live] //= p
        live &= work % p == 0
        steps += 1
    needs_exact = (X == 0) | (vals >= J)
    if needs_exact.any():
        for t in np.nonzero(needs_exact)[0]:
            y = D + alpha * int(t)
            vv = 0
            while y % p == 0:
                vv += 1
                y //= p
            vals[t] = vv
    return rho, vals + (e + v_alpha)


def _closure(p: int, L: int, max_depth: int, cross_check: bool, seq,
             alpha: int, v_alpha: int, force_python: bool = False):
    """One breadth-first basis closure at truncation L.

    Returns (rank, deepest depth examined, True if no independent node sat at
    the depth budget with unexplored children).
    """
    structured = seq is None and p not in (2, 5)
    seq_fn = seq
    if seq_fn is None and not structured:
        seq_fn = lambda n: lengyel_valuation(p, n + 1)
    buckets: dict = {}
    queue = deque([(0, 0, False)])
    rank = 0
    deepest = 0
    complete = True
    while queue:
        e, i, parent_dep = queue.popleft()
        if e > deepest:
            deepest = e
        if structured:
            rho, vec = _structured_vector(p, alpha, v_alpha, e, i, L)
            if len(vec) == 0:
                inserted = False
            elif force_python:
                inserted = _py_reduce_insert(buckets.setdefault(rho, []), [int(x) for x in vec])
            else:
                inserted = _np_reduce_insert(buckets.setdefault(rho, []), vec)
        else:
            pe = p**e
            vec = [seq_fn(pe * n + i) for n in range(L)]
            inserted = _py_reduce_insert(buckets.setdefault(0, []), vec)
        if inserted:
            rank += 1
            if e >= max_depth:
                complete = False
            else:
                pe = p**e
                for j in range(p):
                    queue.append((e + 1, i + j * pe, False))
        elif cross_check and not parent_dep and e < max_depth:
            pe = p**e
            for j in range(p):
                queue.append((e + 1, i + j * pe, True))
    _assert_echelon(buckets)
    return rank, deepest, complete


def kernel_rank(p: int, seq=None, L: int | None = None, max_depth: int = 16,
                cross_check: bool = False) -> RankReport:
    """Empirical rank of the module generated by the p-kernel of seq.

    seq defaults to n -> nu_p(F_{n+1}), for which a support-compressed fast
    path is used; a custom oracle is evaluated densely on every prefix.  The
    closure runs at truncations L, 2L, and 4L (default L = max(1024,
    8*p*alpha)); stabilized means all three agreed and the depth budget never
    cut off an independent node.
    """
    cls = classify_prime(p)
    if L is not None and L < 2:
        raise ValueError("L must be at least 2")
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    alpha, v_alpha = valuation_profile(p)
    base_L = L if L is not None else max(1024, 8 * p * alpha)
    ranks = []
    deepest = 0
    complete_all = True
    for trunc in (base_L, 2 * base_L, 4 * base_L):
        try:
            rk, deep, comp = _closure(p, trunc, max_depth, cross_check, seq, alpha, v_alpha)
        except _Int64Overflow:
            rk, deep, comp = _closure(p, trunc, max_depth, cross_check, seq, alpha,
                                      v_alpha, force_python=True)
        ranks.append(rk)
        deepest = max(deepest, deep)
        complete_all = complete_all and comp
    return RankReport(
        p=p,
        prime_class=cls,
        alpha=alpha,
        pisano=period_data(p).pisano,
        rank=ranks[-1],
        theorem_bound=theorem_rank_bound(p),
        conjecture_holds=(ranks[-1] == alpha + 1),
        truncation_length=base_L,
        depth_explored=deepest,
        stabilized=complete_all and ranks[0] == ranks[1] == ranks[2],
    )


def rank_of_rep(rep: LinearRep, L: int | None = None) -> int:
    """Rank of the matrix whose rows are L-term prefixes of rep's generators.

    The constructed representations may carry dependent generators, so this can
    fall below the matrix dimension r; with the default L it is long enough to
    separate generators that first disagree near multiples of p*alpha.
    """
    if L is None:
        L = max(128, 8 * rep.p * rep.r)
    if L < 1:
        raise ValueError("L must be positive")
    bucket: list = []
    rank = 0
    for row in generator_prefixes(rep, L):
        if _py_reduce_insert(bucket, row):
            rank += 1
    return rank


def conjecture_scan(p_max: int, L: int | None = None, max_depth: int = 16) -> list[RankReport]:
    """RankReports for every prime 3 <= p <= p_max except 5.

    2 and 5 are excluded here (their ranks are fixed and the alpha+1 statement
    does not cover them); kernel_rank accepts them directly.
    """
    if p_max < 3:
        raise ValueError("p_max must be at least 3")
    reports = []
    for p in _scan_primes(p_max):
        reports.append(kernel_rank(p, L=L, max_depth=max_depth))
    return reports


def _scan_primes(p_max: int) -> list[int]:
    from .fibcore import primes_up_to

    return [p for p in primes_up_to(p_max) if p not in (2, 5)]


_CSV_HEADER = "prime,class,alpha,pisano,rank,theorem_bound,alpha_plus_1,conjecture_holds,L,stabilized"


def rank_table_csv(reports: list[RankReport]) -> str:
    """CSV table of rank reports with a fixed column order."""
    lines = [_CSV_HEADER]
    for r in reports:
        lines.append(
            f"{r.p},{r.prime_class.value},{r.alpha},{r.pisano},{r.rank},"
            f"{r.theorem_bound},{r.alpha + 1},{str(r.conjecture_holds).lower()},"
            f"{r.truncation_length},{str(r.stabilized).lower()}"
        )
    return "\n".join(lines) + "\n"
