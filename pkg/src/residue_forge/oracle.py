"""Brute-force references for small primes.

Deliberately naive and independent of ``root_engine`` and ``modular_sqrt``:
orders come from exhaustive exponent tests, primitive roots from the
classical gcd construction, square roots from a full scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import TooLarge

CEILING = 10**5


def _check(p: int) -> None:
    if p > CEILING:
        raise TooLarge(f"oracle is limited to p <= {CEILING}, got {p}")


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass
class OracleReport:
    p: int
    gz_ref: set[int]
    gs_ref: set[int]
    orders: dict[int, int]


def order_table(p: int) -> OracleReport:
    """Exact order of every unit, found by multiplying up to p - 1 and
    stopping at the first divisor of p - 1 where the power hits 1."""
    _check(p)
    divs = set(_divisors(p - 1))
    orders = {}
    for g in range(1, p):
        x, k = g, 1
        while not (k in divs and x == 1):
            x = x * g % p
            k += 1
        orders[g] = k
    gz = {g for g, o in orders.items() if o == p - 1}
    gs = {g for g, o in orders.items() if o == (p - 1) // 2}
    return OracleReport(p, gz, gs, orders)


def primitive_roots_via_gcd(p: int) -> set[int]:
    _check(p)
    if p == 2:
        return {1}
    for g in range(1, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            break
    return {pow(g, k, p) for k in range(1, p - 1) if math.gcd(k, p - 1) == 1}


@lru_cache(maxsize=64)
def _square_table(p: int) -> dict[int, frozenset[int]]:
    table: dict[int, set[int]] = {}
    for x in range(p):
        table.setdefault(x * x % p, set()).add(x)
    return {m: frozenset(r) for m, r in table.items()}


def sqrt_all_bruteforce(m: int, p: int) -> set[int]:
    """Every x in [0, p-1] with x*x = m (mod p), by scanning all of them."""
    _check(p)
    return set(_square_table(p).get(m % p, ()))


def smallest_parity_root(c: int, p: int) -> int | None:
    """Smallest x >= 0 with p | x^2 + c and x of parity opposite to c."""
    roots = sqrt_all_bruteforce(-c % p, p)
    lifts = sorted(r + k * p for r in roots for k in (0, 1))
    for x in lifts:
        if x % 2 != c % 2:
            return x
    return None
