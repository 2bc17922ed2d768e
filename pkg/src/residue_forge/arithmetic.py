"""Exact modular and integer arithmetic.

Everything here works on Python integers, so there is no overflow to guard
against; the 64-bit bound is enforced only where a deterministic primality
answer depends on it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import EvenPrime, NotCoprime, NotPrime

U64 = 1 << 64

# Miller-Rabin with these bases is exact for every n < 3.18e23.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_LIMIT = 10**6


def mulmod(a: int, b: int, p: int) -> int:
    return a * b % p


def powmod(base: int, exp: int, p: int) -> int:
    """Square-and-multiply; ``powmod(b, 0, p) == 1`` for every ``p > 1``."""
    if exp < 0:
        raise ValueError("negative exponent")
    result = 1 % p
    base %= p
    while exp:
        if exp & 1:
            result = result * base % p
        base = base * base % p
        exp >>= 1
    return result


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    def divisors(self) -> list[int]:
        divs = [1]
        for q, e in self.factors:
            divs = [d * q**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def _pollard_brent(n: int) -> int:
    """Return a non-trivial factor of the odd composite ``n``."""
    for c in itertools.count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        m = 128
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise AssertionError("unreachable")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factorize(m: int) -> Factorization:
    """Complete prime factorization: trial division to 1e6, then Pollard-Brent."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    found: dict[int, int] = {}
    rest = m
    for q in (2, 3):
        while rest % q == 0:
            found[q] = found.get(q, 0) + 1
            rest //= q
    # 6k +/- 1 wheel
    q, step = 5, 2
    while q <= _TRIAL_LIMIT and q * q <= rest:
        while rest % q == 0:
            found[q] = found.get(q, 0) + 1
            rest //= q
        q += step
        step = 6 - step
    if rest > 1:
        _split(rest, found)
    return Factorization(m, tuple(sorted(found.items())))


def euler_phi(f: Factorization | int) -> int:
    if not isinstance(f, Factorization):
        f = factorize(f)
    phi = 1
    for q, e in f.factors:
        phi *= q ** (e - 1) * (q - 1)
    return phi


@dataclass(frozen=True)
class PrimeContext:
    """An odd prime with its decomposition ``p - 1 = 2**n * z``, z odd."""

    p: int
    n: int
    z: int
    z_factors: tuple[tuple[int, int], ...]
    class4: int
    class8: int

    @property
    def z_primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.z_factors)

    @property
    def order_primes(self) -> tuple[int, ...]:
        """Prime divisors of p - 1."""
        return (2,) + self.z_primes

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "z": self.z,
            "z_factors": [list(f) for f in self.z_factors],
            "class4": self.class4,
            "class8": self.class8,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PrimeContext":
        return cls(d["p"], d["n"], d["z"],
                   tuple(tuple(f) for f in d["z_factors"]),
                   d["class4"], d["class8"])


@lru_cache(maxsize=4096)
def build_context(p: int) -> PrimeContext:
    if p == 2:
        raise EvenPrime("p = 2 is excluded; an odd prime is required")
    if not 2 < p < U64 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime below 2**64")
    n, z = 0, p - 1
    while z % 2 == 0:
        z //= 2
        n += 1
    return PrimeContext(p, n, z, factorize(z).factors, p % 4, p % 8)


def legendre(a: int, p: PrimeContext | int) -> int:
    """Euler's criterion mapped to {+1, -1, 0}."""
    if isinstance(p, PrimeContext):
        p = p.p
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def multiplicative_order(a: int, m: int) -> int:
    """Smallest k >= 1 with a**k = 1 (mod m); 1 by convention when m == 1."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return 1
    a %= m
    if math.gcd(a, m) != 1:
        raise NotCoprime(f"{a} is not invertible modulo {m}")
    for d in factorize(euler_phi(factorize(m))).divisors():
        if pow(a, d, m) == 1:
            return d
    raise AssertionError("unreachable: order must divide phi(m)")


def primes_up_to(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array (odd-only Eratosthenes)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    # index i represents 2*i + 1
    odd = np.ones((limit + 1) // 2, dtype=bool)
    odd[0] = False
    for i in range(1, (math.isqrt(limit) - 1) // 2 + 1):
        if odd[i]:
            q = 2 * i + 1
            odd[q * q // 2::q] = False
    out = 2 * np.flatnonzero(odd).astype(np.int64) + 1
    return np.concatenate(([2], out)).astype(np.int64)


def prime_stream(start: int = 2, exclude: Iterable[int] = ()) -> Iterator[int]:
    """Unbounded increasing primes >= start, skipping ``exclude``.

    Segmented sieve over windows that double in size, so the stream can run
    past any bound known up front.
    """
    skip = set(exclude)
    lo = max(start, 2)
    span = 1 << 12
    while True:
        hi = lo + span
        base = primes_up_to(math.isqrt(hi - 1))
        seg = np.ones(hi - lo, dtype=bool)
        for q in base.tolist():
            first = max(q * q, -(-lo // q) * q)
            seg[first - lo::q] = False
        if lo <= 1:
            seg[: 2 - lo] = False
        for i in np.flatnonzero(seg).tolist():
            q = lo + i
            if q not in skip:
                yield q
        lo = hi
        span = min(span * 2, 1 << 20)
