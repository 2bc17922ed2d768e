"""Irreducible quadratic forms, their root counts modulo primes, and the
Euler product

    h_Q = prod over odd primes p of (p - t_p(Q)) / (p - 1)

together with the bookkeeping for perfect-square constants c and an
empirical prime-density estimator.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .arithmetic import factorize, is_prime, legendre, primes_up_to
from .errors import (BadDivisorClass, BadMultiplierB, NotASquare, NotPrime,
                     ReducibleForm, TooLarge, VanishingFactor)
from .modular_sqrt import sqrt_mod_prime

X_MAX_CEILING = 10**8
CSV_HEADER = ("x_mid", "terms", "primes", "empirical",
              "predicted_hq_over_lnQ", "predicted_hq_over_2lnx")

# vectorised t_p needs p**2 < 2**62
_VECTOR_P_MAX = 1 << 31


@dataclass(frozen=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError(f"leading coefficient must be >= 1, got {self.a}")

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        a, b, c = (int(t) for t in text.split(","))
        return cls(a, b, c)

    @classmethod
    def shifted_square(cls, a: int, b: int, c: int) -> "QuadraticForm":
        """(2aX + b)^2 + c."""
        return cls(4 * a * a, 4 * a * b, b * b + c)

    @classmethod
    def ec(cls, c: int) -> "QuadraticForm":
        """(2X + r)^2 + c with r = 1 - c mod 2, so every value is odd."""
        return cls.shifted_square(1, (1 - c) % 2, c)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def irreducible(self) -> bool:
        d = self.discriminant
        return d < 0 or math.isqrt(d) ** 2 != d

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) * x + self.c

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"


@dataclass
class EulerProductEstimate:
    value: float
    log_value: float
    prime_limit: int
    last_factor_deviation: float
    factors_counted: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EulerProductEstimate":
        return cls(**d)


@dataclass
class DensityBucket:
    x_mid: int
    terms: int
    primes: int
    empirical: float
    predicted_hq_over_lnQ: float
    predicted_hq_over_2lnx: float


@dataclass
class DensityReport:
    form: QuadraticForm
    buckets: list[DensityBucket]
    prediction_constant: EulerProductEstimate

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for bk in self.buckets:
            w.writerow([bk.x_mid, bk.terms, bk.primes, repr(bk.empirical),
                        repr(bk.predicted_hq_over_lnQ),
                        repr(bk.predicted_hq_over_2lnx)])
        return buf.getvalue()


def _require_irreducible(Q: QuadraticForm) -> None:
    if not Q.irreducible:
        raise ReducibleForm(f"{Q} has square discriminant {Q.discriminant}")


def _square_root_of(c: int) -> int:
    if c < 1 or math.isqrt(c) ** 2 != c:
        raise NotASquare(f"{c} is not a positive perfect square")
    return math.isqrt(c)


def _odd_prime_divisors(c: int) -> list[int]:
    return [q for q in factorize(c).primes if q != 2]


def tp(Q: QuadraticForm, p: int) -> int:
    """Number of roots of Q modulo the odd prime p."""
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    a, b, c = Q.a % p, Q.b % p, Q.c % p
    if a == 0:
        if b:
            return 1
        return p if c == 0 else 0
    d = (b * b - 4 * a * c) % p
    return 1 + legendre(d, p)


def _powmod_array(base: np.ndarray, exp: np.ndarray, mod: np.ndarray) -> np.ndarray:
    result = np.ones_like(base)
    base = base % mod
    exp = exp.copy()
    while exp.any():
        odd = (exp & 1).astype(bool)
        result = np.where(odd, result * base % mod, result)
        base = base * base % mod
        exp >>= 1
    return result


def _mod_array(v: int, primes: np.ndarray) -> np.ndarray:
    if abs(v) < 1 << 62:
        return np.mod(np.int64(v), primes)
    return np.array([v % int(p) for p in primes], dtype=np.int64)


def tp_array(Q: QuadraticForm, primes: np.ndarray) -> np.ndarray:
    """``tp`` over an array of odd primes."""
    primes = np.asarray(primes, dtype=np.int64)
    if primes.size and int(primes.max()) >= _VECTOR_P_MAX:
        return np.array([tp(Q, int(p)) for p in primes], dtype=np.int64)
    am, bm, cm = (_mod_array(v, primes) for v in (Q.a, Q.b, Q.c))
    d = (bm * bm % primes - (4 * am % primes) * cm % primes) % primes
    euler = _powmod_array(d, (primes - 1) // 2, primes)
    t = np.where(d == 0, 1, np.where(euler == 1, 2, 0))
    linear = am == 0
    if linear.any():
        t = np.where(linear & (bm != 0), 1, t)
        t = np.where(linear & (bm == 0), np.where(cm == 0, primes, 0), t)
    return t.astype(np.int64)


@lru_cache(maxsize=8)
def _odd_primes(limit: int) -> np.ndarray:
    out = primes_up_to(limit)[1:]
    out.setflags(write=False)
    return out


def hq_truncated(Q: QuadraticForm, prime_limit: int) -> EulerProductEstimate:
    """Product over odd primes p <= prime_limit, summed in log space."""
    _require_irreducible(Q)
    if prime_limit < 3:
        raise ValueError("prime_limit must be at least 3")
    primes = _odd_primes(prime_limit)
    t = tp_array(Q, primes)
    if (t == primes).any():
        bad = int(primes[np.argmax(t == primes)])
        raise VanishingFactor(f"{bad} divides every value of {Q}")
    step = (1 - t) / (primes - 1)
    log_value = math.fsum(np.log1p(step).tolist())
    return EulerProductEstimate(
        value=math.exp(log_value),
        log_value=log_value,
        prime_limit=prime_limit,
        last_factor_deviation=abs(float(step[-1])),
        factors_counted=int(primes.size),
    )


def h1_estimate(prime_limit: int) -> EulerProductEstimate:
    return hq_truncated(QuadraticForm.ec(1), prime_limit)


def dp_Ec_member(p: int, c: int) -> bool:
    """Whether p divides some (2X + r)^2 + c, for c a perfect square."""
    _square_root_of(c)
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    return p % 4 == 1 or c % p == 0


def divisor_correction(primes: Iterable[int]) -> list[float]:
    """Log-factors turning h_1 into h_c for c with these odd prime divisors."""
    out = []
    for q in primes:
        if q % 4 == 3:
            out.append(math.log((q - 1) / q))
        elif q % 4 == 1:
            out.append(math.log((q - 1) / (q - 2)))
    return out


def h_target(primes: Iterable[int], prime_limit: int) -> float:
    """h_1 estimate scaled by the factor a square c with these divisors gets."""
    logs = [h1_estimate(prime_limit).log_value] + divisor_correction(sorted(set(primes)))
    return math.exp(math.fsum(logs))


def hc_relative(c: int, prime_limit: int) -> float:
    _square_root_of(c)
    return h_target(_odd_prime_divisors(c), prime_limit)


def _family_modulus(c: int, alpha: Mapping[int, int]) -> int:
    if c < 2:
        raise NotASquare(f"c must be a square >= 2, got {c}")
    _square_root_of(c)
    if c % 2 == 0:
        raise BadDivisorClass("even c is not supported: 2 has no residue class mod 4")
    F = _odd_prime_divisors(c)
    bad = [q for q in F if q % 4 == 1]
    if bad:
        raise BadDivisorClass(f"prime divisors {bad} of c are 1 mod 4")
    if set(alpha) != set(F) or any(e < 1 for e in alpha.values()):
        raise BadDivisorClass(f"alpha must give a positive exponent for each of {F}")
    modulus = 1
    for q in F:
        modulus *= q ** alpha[q]
    return modulus


def family_offsets(c: int, alpha: Mapping[int, int]) -> list[int]:
    """Every admissible b for the family of (c, alpha)."""
    modulus = _family_modulus(c, alpha)
    F = list(alpha)
    return [b for b in range(1, modulus)
            if b % 2 != c % 2 and all(b % q for q in F)]


def build_family(c: int, alpha: Mapping[int, int], b: int) -> QuadraticForm:
    """(2 P X + b)^2 + c with P = prod q**alpha[q] over the primes q | c."""
    modulus = _family_modulus(c, alpha)
    if not 1 <= b < modulus:
        raise BadMultiplierB(f"b = {b} outside [1, {modulus - 1}]")
    if any(b % q == 0 for q in alpha):
        raise BadMultiplierB(f"b = {b} shares a prime with c = {c}")
    if b % 2 == c % 2:
        raise BadMultiplierB(f"b = {b} must have parity opposite to c = {c}")
    return QuadraticForm.shifted_square(modulus, b, c)


def family_disjointness_check(c: int, alpha: Mapping[int, int], b_list: Iterable[int],
                              x_bound: int = 10**4) -> bool:
    value_sets = []
    for b in b_list:
        Q = build_family(c, alpha, b)
        value_sets.append({Q(x) for x in range(x_bound + 1)})
    return all(s.isdisjoint(t) for s, t in combinations(value_sets, 2))


def roots_mod_p(Q: QuadraticForm, p: int) -> list[int]:
    """All x in [0, p) with p | Q(x)."""
    if p == 2:
        return [x for x in (0, 1) if Q(x) % 2 == 0]
    a, b, c = Q.a % p, Q.b % p, Q.c % p
    if a == 0:
        if b:
            return [-c * pow(b, -1, p) % p]
        return list(range(p)) if c == 0 else []
    d = (b * b - 4 * a * c) % p
    s = sqrt_mod_prime(d, p)
    if s is None:
        return []
    inv = pow(2 * a, -1, p)
    return sorted({(-b + s) * inv % p, (-b - s) * inv % p})


def prime_value_flags(Q: QuadraticForm, x_min: int, x_max: int) -> tuple[np.ndarray, np.ndarray]:
    """(is_term, is_prime) masks for Q(x), x in [x_min, x_max].

    Terms are the x with Q(x) > 1.  Primality comes from sieving by every
    prime up to sqrt(max |Q|) at the roots of Q modulo that prime; values
    small enough to be one of those sieving primes are re-tested directly.
    """
    xs = np.arange(x_min, x_max + 1, dtype=np.float64)
    approx = (Q.a * xs + Q.b) * xs + Q.c
    is_term = approx > 1.5
    candidates = [x_min, x_max]
    vertex = -Q.b // (2 * Q.a)
    candidates += [v for v in (vertex, vertex + 1) if x_min <= v <= x_max]
    bound = math.isqrt(max(abs(Q(x)) for x in candidates))

    composite = np.zeros(x_max - x_min + 1, dtype=bool)
    for p in primes_up_to(bound).tolist():
        for r in roots_mod_p(Q, p):
            composite[(r - x_min) % p::p] = True
    flags = is_term & ~composite
    for i in np.flatnonzero(is_term & (np.abs(approx) <= bound + 2)).tolist():
        flags[i] = is_prime(Q(x_min + i))
    return is_term, flags


def _bucket_edges(count: int, bucket_count: int) -> list[int]:
    """Strictly increasing 1-based edges, equal width in log x where possible."""
    edges = [1]
    for v in np.geomspace(1, count + 1, bucket_count + 1)[1:]:
        e = max(int(round(v)), edges[-1] + 1)
        if e > count + 1:
            break
        edges.append(e)
    edges[-1] = count + 1
    return edges


def density_experiment(Q: QuadraticForm, x_max: int, bucket_count: int,
                       prime_limit: int = 10**6, x_min: int = 1) -> DensityReport:
    """Empirical share of primes among Q(x) in logarithmic x-buckets."""
    _require_irreducible(Q)
    if x_max > X_MAX_CEILING:
        raise TooLarge(f"x_max is limited to {X_MAX_CEILING}")
    if bucket_count < 1 or x_max < x_min:
        raise ValueError("need bucket_count >= 1 and x_max >= x_min")
    h = hq_truncated(Q, prime_limit)
    is_term, flags = prime_value_flags(Q, x_min, x_max)
    term_cum = np.concatenate(([0], np.cumsum(is_term)))
    prime_cum = np.concatenate(([0], np.cumsum(flags)))
    edges = _bucket_edges(x_max - x_min + 1, bucket_count)
    buckets = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        # offsets lo..hi-1 are 1-based positions in [x_min, x_max]
        terms = int(term_cum[hi - 1] - term_cum[lo - 1])
        if terms == 0:
            continue
        primes = int(prime_cum[hi - 1] - prime_cum[lo - 1])
        x_mid = x_min + (lo + hi - 1) // 2 - 1
        q_mid = Q(x_mid)
        buckets.append(DensityBucket(
            x_mid=x_mid,
            terms=terms,
            primes=primes,
            empirical=primes / terms,
            predicted_hq_over_lnQ=h.value / math.log(q_mid) if q_mid > 1 else math.nan,
            predicted_hq_over_2lnx=h.value / (2 * math.log(x_mid)) if x_mid > 1 else math.nan,
        ))
    return DensityReport(Q, buckets, h)
