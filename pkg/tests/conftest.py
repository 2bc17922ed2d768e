import math
import random
from functools import lru_cache

import pytest
from sympy import primitive_root, randprime

from residue_forge import oracle
from residue_forge.arithmetic import build_context, primes_up_to
from residue_forge.root_engine import enumerate_all

SMALL_PRIMES = primes_up_to(500).tolist()[1:]
_rng = random.Random(20261018)
RANDOM_PRIMES = []
while len(RANDOM_PRIMES) < 50:
    q = randprime(500, 10**5)
    if q not in RANDOM_PRIMES:
        RANDOM_PRIMES.append(q)
RANDOM_PRIMES.sort()
INVARIANT_PRIMES = SMALL_PRIMES + RANDOM_PRIMES


@lru_cache(maxsize=None)
def oracle_sets(p):
    rep = oracle.order_table(p)
    return frozenset(rep.gz_ref), frozenset(rep.gs_ref)


@lru_cache(maxsize=None)
def reference_sets(p):
    """G_Z and G_S from a sympy generator; usable far above the oracle range."""
    g = primitive_root(p)
    gz = frozenset(pow(g, k, p) for k in range(1, p) if math.gcd(k, p - 1) == 1)
    return gz, frozenset(x * x % p for x in gz)


@lru_cache(maxsize=None)
def enumeration(p):
    return enumerate_all(build_context(p))


@pytest.fixture(params=INVARIANT_PRIMES)
def inv_ctx(request):
    return build_context(request.param)


@lru_cache(maxsize=None)
def e1_density_report():
    """E_1 density up to x = 1e7 in 20 log buckets; shared because it takes ~15 s."""
    from residue_forge.quadform import QuadraticForm, density_experiment
    return density_experiment(QuadraticForm.ec(1), 10**7, 20, prime_limit=10**6)
