"""Primitive and semi-primitive roots modulo an odd prime.

Write ``p - 1 = 2**n * z`` with ``z`` odd.  A semi-primitive root is the
square of a primitive root, i.e. an element of order ``(p - 1) / 2``.  The
full enumeration below walks the squaring sequence

    U[0] = g**a,   U[x + 1] = (m'**a * U[x]) ** 2

for a semi-primitive ``g`` and an element ``m'`` of exact order ``2**n``,
over a growing set of auxiliary primes ``a``.  Every orbit has length
``ord_z(2)`` and orbits never overlap partially, so an orbit is accepted
as soon as its first term is new.  Nothing in this module computes a gcd;
``tests/test_root_engine.py`` audits that.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .arithmetic import PrimeContext, legendre, prime_stream
from .errors import BadMultiplier


@dataclass(frozen=True)
class RootClass:
    element: int
    is_qr: bool
    is_primitive: bool
    is_semi_primitive: bool
    in_gz_prime: bool


@dataclass(frozen=True)
class SeedPair:
    """Semi-primitive ``g`` and ``m_prime`` of order 2**n with g^z m'^(2z) = 1.

    ``g_z`` is the primitive root that ``g`` was squared from.
    """

    g: int
    m_prime: int
    g_z: int


@dataclass
class EnumerationResult:
    gz: list[int]
    gs: list[int]
    logd2: int
    a_set: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EnumerationResult":
        return cls(list(d["gz"]), list(d["gs"]), d["logd2"], list(d["a_set"]))


def _no_power_is_one(g: int, ctx: PrimeContext, divisors, halve: bool) -> bool:
    e = ctx.p - 1
    if halve:
        return all(pow(g, e // (2 * q), ctx.p) != 1 for q in divisors)
    return all(pow(g, e // q, ctx.p) != 1 for q in divisors)


def is_primitive_root(g: int, ctx: PrimeContext) -> bool:
    g %= ctx.p
    return g != 0 and _no_power_is_one(g, ctx, ctx.order_primes, halve=False)


def is_semi_primitive_root(g: int, ctx: PrimeContext) -> bool:
    """True iff g has order exactly (p - 1) / 2."""
    g %= ctx.p
    if g == 0:
        return False
    if ctx.class4 == 1:
        return (legendre(g, ctx) == 1
                and _no_power_is_one(g, ctx, ctx.order_primes, halve=True))
    # (p - 1) / 2 is odd here, so q = 2 is replaced by the residuosity test
    return (pow(g, (ctx.p - 1) // 2, ctx.p) == 1
            and _no_power_is_one(g, ctx, ctx.z_primes, halve=True))


def in_gz_prime(g: int, ctx: PrimeContext) -> bool:
    """Membership in r * G_Z for r of order 2**n (independent of r)."""
    g %= ctx.p
    return (g != 0 and legendre(g, ctx) == 1
            and _no_power_is_one(g, ctx, ctx.z_primes, halve=True))


def classify(g: int, ctx: PrimeContext) -> RootClass:
    return RootClass(
        element=g % ctx.p,
        is_qr=legendre(g, ctx) == 1,
        is_primitive=is_primitive_root(g, ctx),
        is_semi_primitive=is_semi_primitive_root(g, ctx),
        in_gz_prime=in_gz_prime(g, ctx),
    )


def smallest_qnr(ctx: PrimeContext, start: int = 2) -> int:
    for m in range(start, ctx.p):
        if legendre(m, ctx) == -1:
            return m
    raise AssertionError(f"no non-residue modulo {ctx.p}")


def _two_power_generator(ctx: PrimeContext, g_z: int | None = None) -> int:
    """An element of order exactly 2**n: any non-residue raised to z."""
    base = g_z if g_z is not None else smallest_qnr(ctx)
    return pow(base, ctx.z, ctx.p)


def top_layer_order(h: int, ctx: PrimeContext) -> list[int]:
    """Odd powers h, h^3, ..., h^(2^n - 1) of an order-2**n element h."""
    p = ctx.p
    h2 = h * h % p
    out, cur = [], h
    for _ in range(1 << (ctx.n - 1)):
        out.append(cur)
        cur = cur * h2 % p
    return out


def rk_set(ctx: PrimeContext, k: int) -> list[int]:
    """The subgroup of 2**k-th roots of unity (saturates at k = n)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    k = min(k, ctx.n)
    p = ctx.p
    gen = pow(_two_power_generator(ctx), 1 << (ctx.n - k), p)
    out, cur = [], 1
    for _ in range(1 << k):
        out.append(cur)
        cur = cur * gen % p
    return sorted(out)


def rk_top_layer(ctx: PrimeContext, g_z: int | None = None) -> list[int]:
    """Elements of exact order 2**n, sorted."""
    return sorted(top_layer_order(_two_power_generator(ctx, g_z), ctx))


def find_seed(ctx: PrimeContext) -> SeedPair:
    p, z = ctx.p, ctx.z
    if p == 3:
        return SeedPair(g=1, m_prime=2, g_z=2)
    first_qnr = None
    for m in range(2, p - 1):
        if legendre(m, ctx) == 1:
            if _no_power_is_one(m, ctx, ctx.z_primes, halve=True):
                # m is in r * G_Z; r^z has order 2**n, so m * r^z is primitive
                r = first_qnr if first_qnr is not None else smallest_qnr(ctx, m + 1)
                g_z = m * pow(r, z, p) % p
                break
        else:
            if first_qnr is None:
                first_qnr = m
            if _no_power_is_one(m, ctx, ctx.z_primes, halve=False):
                g_z = m
                break
    else:
        raise AssertionError(f"seed scan exhausted for p = {p}")

    g = g_z * g_z % p
    gz_pow = pow(g, z, p)
    for mp in top_layer_order(pow(g_z, z, p), ctx):
        if gz_pow * pow(mp, 2 * z, p) % p == 1:
            return SeedPair(g=g, m_prime=mp, g_z=g_z)
    raise AssertionError(f"no matching m' for p = {p}")


def _check_multiplier(a: int, ctx: PrimeContext) -> None:
    if a < 1 or a % 2 == 0 or any(a % q == 0 for q in ctx.z_primes):
        raise BadMultiplier(f"a = {a} must be odd and prime to z = {ctx.z}")


def u_sequence(seed: SeedPair, a: int, ctx: PrimeContext) -> list[int]:
    """One full period of U^(a), starting from U[0] = g**a."""
    _check_multiplier(a, ctx)
    p = ctx.p
    u0 = pow(seed.g, a, p)
    mult = pow(seed.m_prime, a, p)
    terms = [u0]
    cur = mult * u0 % p
    cur = cur * cur % p
    while cur != u0:
        terms.append(cur)
        cur = mult * cur % p
        cur = cur * cur % p
    return terms


def logd2_via_sequence(seed: SeedPair, ctx: PrimeContext) -> int:
    """Period of the plain U-sequence, i.e. the order of 2 modulo z."""
    p, g, mp = ctx.p, seed.g, seed.m_prime
    x = 1
    cur = mp * g % p
    cur = cur * cur % p
    while cur != g:
        cur = mp * cur % p
        cur = cur * cur % p
        x += 1
    return x


def _semi_primitive_count(ctx: PrimeContext) -> int:
    count = 1 << max(ctx.n - 2, 0)
    for q, e in ctx.z_factors:
        count *= q ** (e - 1) * (q - 1)
    return count


def enumerate_all(ctx: PrimeContext) -> EnumerationResult:
    """All primitive and semi-primitive roots without any gcd."""
    p = ctx.p
    if p == 3:
        return EnumerationResult(gz=[2], gs=[1], logd2=1, a_set=[])
    seed = find_seed(ctx)
    period = logd2_via_sequence(seed, ctx)
    target = _semi_primitive_count(ctx)
    with_sign = ctx.class4 == 1
    gs: set[int] = set()
    gz: set[int] = set()

    def absorb(a: int) -> None:
        mult = pow(seed.m_prime, a, p)
        cur = pow(seed.g, a, p)
        for _ in range(period):
            gs.add(cur)
            prim = mult * cur % p
            gz.add(prim)
            if with_sign:
                gz.add(p - prim)
            cur = prim * prim % p

    absorb(1)
    a_set = []
    if len(gs) < target:
        for a in prime_stream(3, exclude=ctx.z_primes):
            if pow(seed.g, a, p) in gs:
                continue
            absorb(a)
            a_set.append(a)
            if len(gs) >= target:
                break
    return EnumerationResult(gz=sorted(gz), gs=sorted(gs), logd2=period, a_set=a_set)


def semiprimitive_powers(m: int, ctx: PrimeContext) -> list[int]:
    """m^(2 a_t) for a_t = 2^(n-t) z - 1, t = 1 .. n-1 (empty when n = 1)."""
    p = ctx.p
    return [pow(m, 2 * ((1 << (ctx.n - t)) * ctx.z - 1), p) for t in range(1, ctx.n)]


def inverse_preserves_class(m: int, ctx: PrimeContext) -> int:
    return pow(m, ctx.p - 2, ctx.p)
