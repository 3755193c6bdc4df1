"""Shared independent oracles: everything here avoids the library's own code paths."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        type=int,
        default=20091012,
        help="seed for randomized property tests",
    )


@pytest.fixture
def rng(request) -> random.Random:
    return random.Random(request.config.getoption("--seed"))


def fib_iterative(count: int) -> list[int]:
    """[F_0, ..., F_count] by the plain recurrence."""
    seq = [0, 1]
    for _ in range(count - 1):
        seq.append(seq[-1] + seq[-2])
    return seq[: count + 1]


def naive_periods(m: int) -> tuple[int, int]:
    """(alpha, pi) by scanning residue pairs one step at a time."""
    a, b, n = 1, 1, 1
    alpha = None
    while True:
        if a == 0:
            if alpha is None:
                alpha = n
            if b == 1:
                return alpha, n
        a, b = b, (a + b) % m
        n += 1


def naive_valuation(k: int, x: int) -> int:
    e = 0
    while x % k == 0:
        e += 1
        x //= k
    return e


def naive_fib_valuations(p: int, count: int) -> list[int]:
    """[nu_p(F_m) for m = 0..count] from residues mod a high power of p."""
    power = 6
    while p**power <= count * count + 16:
        power += 1
    mod = p**power
    out = [0]
    a, b = 0, 1
    for _ in range(count):
        a, b = b, (a + b) % mod
        x = a
        if x == 0:
            raise RuntimeError("oracle modulus too small")
        e = 0
        while x % p == 0:
            e += 1
            x //= p
        out.append(e)
    return out


def fraction_rank(rows) -> int:
    """Exact rank over the rationals by plain Gaussian elimination."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        sel = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        pivot_row = rows[rank]
        inv = 1 / pivot_row[col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rr = rows[r]
                for c in range(col, ncols):
                    rr[c] -= f * pivot_row[c]
        rank += 1
        if rank == len(rows):
            break
    return rank


def brute_kernel_rank(p: int, depth: int, length: int) -> int:
    """Kernel-module rank with no pruning and no closed form: enumerate every
    node to `depth`, take valuations from naive residues, eliminate over Q."""
    top = p**depth * (length - 1) + p**depth + 2
    vals = naive_fib_valuations(p, top)
    rows = []
    seen = set()
    for e in range(depth + 1):
        pe = p**e
        for i in range(pe):
            row = tuple(vals[pe * n + i + 1] for n in range(length))
            if row not in seen:
                seen.add(row)
                rows.append(row)
    return fraction_rank(rows)
