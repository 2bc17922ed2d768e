"""Square roots modulo an odd prime through the 2-power root-of-unity tower.

With ``p - 1 = 2**n * z`` and m a quadratic residue, a root of m has the
shape ``m**e * r`` with r a 2**n-th root of unity: ``e = (p + 1) / 4`` and
``r = +-1`` when p = 3 (mod 4), otherwise ``e = (p + 1 - 2z) / 4`` (or
``(p - z) / 2``) and r is found by scanning the tower.  ``batch_solve``
shares the non-residue search and the tower enumeration between all the
right-hand sides it is given.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .arithmetic import PrimeContext, build_context, legendre
from .errors import NotAResidue, WrongPrimeClass
from .root_engine import smallest_qnr

# above this tower height the candidates are generated on the fly
_MATERIALIZE_MAX_N = 20

SOLVED = "solved"
NO_ROOT = "no_root"


@dataclass(frozen=True)
class SqrtSolution:
    """Smallest x >= 0 with p | x^2 + c and x of parity opposite to c."""

    c: int
    status: str
    x: int | None = None

    @property
    def parity_constraint(self) -> str:
        return "even" if self.c % 2 else "odd"

    def to_dict(self) -> dict:
        return {"c": self.c, "x": self.x}

    @classmethod
    def from_dict(cls, d: dict) -> "SqrtSolution":
        x = d["x"]
        return cls(d["c"], NO_ROOT if x is None else SOLVED, x)


class SqrtPlan:
    """Per-prime data shared across queries.

    Candidates r run over R^(n-1) as the even powers of h = g**z (g the
    least non-residue), then over the odd powers for the top layer; each is
    stored with its square since only r**2 enters the test.
    """

    def __init__(self, ctx: PrimeContext):
        self.ctx = ctx
        p = ctx.p
        self.qnr = smallest_qnr(ctx)
        self.h = pow(self.qnr, ctx.z, p)
        self._pairs = None
        if ctx.n <= _MATERIALIZE_MAX_N:
            self._pairs = list(self._generate())

    def _generate(self) -> Iterator[tuple[int, int]]:
        p, n, h = self.ctx.p, self.ctx.n, self.h
        h2 = h * h % p
        half = 1 << max(n - 2, 0)
        for start in (1, h):  # even powers first, then odd powers
            r = start
            for _ in range(half):
                yield r, r * r % p
                yield p - r, r * r % p
                r = r * h2 % p

    def candidates(self) -> Iterator[tuple[int, int]]:
        if self._pairs is not None:
            return iter(self._pairs)
        return self._generate()


@lru_cache(maxsize=256)
def _plan_for(p: int) -> SqrtPlan:
    return SqrtPlan(build_context(p))


def _root_with_factor(m: int, ctx: PrimeContext, exponent: int,
                      plan: SqrtPlan | None) -> tuple[int, int]:
    p = ctx.p
    plan = plan or _plan_for(p)
    base = pow(m, exponent, p)
    t = base * base % p
    for r, r2 in plan.candidates():
        if t * r2 % p == m:
            return base * r % p, r
    raise AssertionError(f"no tower element completes the root of {m} mod {p}")


def _require_p1_residue(m: int, ctx: PrimeContext) -> int:
    if ctx.class4 != 1:
        raise WrongPrimeClass(f"p = {ctx.p} is not 1 mod 4")
    m %= ctx.p
    if legendre(m, ctx) != 1:
        raise NotAResidue(f"{m} is not a quadratic residue mod {ctx.p}")
    return m


def sqrt_p3(m: int, ctx: PrimeContext) -> tuple[int, int] | None:
    """Both roots of m for p = 3 (mod 4), or None when m is a non-residue."""
    if ctx.class4 != 3:
        raise WrongPrimeClass(f"p = {ctx.p} is not 3 mod 4")
    p = ctx.p
    m %= p
    if m == 0:
        return (0, 0)
    # one exponentiation: for a non-residue x^2 comes out as -m instead
    x = pow(m, (p + 1) // 4, p)
    if x * x % p != m:
        return None
    return tuple(sorted((x, p - x)))


def sqrt_p1(m: int, ctx: PrimeContext, tower: SqrtPlan | None = None) -> tuple[int, int]:
    m = _require_p1_residue(m, ctx)
    x, _ = _root_with_factor(m, ctx, (ctx.p + 1 - 2 * ctx.z) // 4, tower)
    return tuple(sorted((x, ctx.p - x)))


def canonical_root(m: int, ctx: PrimeContext,
                   tower: SqrtPlan | None = None) -> tuple[int, int]:
    """(m**((p - z)/2) * r, r) for the first tower element r that works."""
    m = _require_p1_residue(m, ctx)
    return _root_with_factor(m, ctx, (ctx.p - ctx.z) // 2, tower)


def qr_flag_of_root(m: int, ctx: PrimeContext) -> bool:
    root, r = canonical_root(m, ctx)
    flag = legendre(root, ctx) == 1
    if flag != (legendre(r, ctx) == 1):
        raise AssertionError("root and tower factor disagree on residuosity")
    return flag


def batch_solve(cs: Sequence[int], p: int) -> list[SqrtSolution]:
    ctx = build_context(p)
    plan = _plan_for(p) if ctx.class4 == 1 else None
    out = []
    for c in cs:
        if c < 1:
            raise ValueError(f"c must be positive, got {c}")
        want = 1 - c % 2
        cm = c % p
        if cm == 0:
            # x = 0 (mod p); p is odd so 0 or p has the right parity
            out.append(SqrtSolution(c, SOLVED, 0 if want == 0 else p))
            continue
        m = p - cm
        if legendre(m, ctx) != 1:
            out.append(SqrtSolution(c, NO_ROOT))
            continue
        roots = sqrt_p3(m, ctx) if plan is None else sqrt_p1(m, ctx, plan)
        # the two roots sum to p, so exactly one has each parity
        x = roots[0] if roots[0] % 2 == want else roots[1]
        out.append(SqrtSolution(c, SOLVED, x))
    return out


def sqrt_mod_prime(m: int, p: int) -> int | None:
    """One square root of m modulo the odd prime p, or None.

    Same tower scan as ``sqrt_p1`` but without building a context, for hot
    loops over many primes (no factorization of z is needed here).
    """
    m %= p
    if m == 0:
        return 0
    if pow(m, (p - 1) >> 1, p) != 1:
        return None
    if p & 3 == 3:
        return pow(m, (p + 1) >> 2, p)
    z, n = p - 1, 0
    while not z & 1:
        z >>= 1
        n += 1
    g = 2
    while pow(g, (p - 1) >> 1, p) != p - 1:
        g += 1
    h = pow(g, z, p)
    h2 = h * h % p
    h4 = h2 * h2 % p
    base = pow(m, (p + 1 - 2 * z) >> 2, p)
    t = base * base % p
    # +r and -r share a square, so 2**(n-2) steps per parity class suffice
    for r, sq in ((1, t), (h, t * h2 % p)):
        for _ in range(1 << (n - 2)):
            if sq == m:
                return base * r % p
            r = r * h2 % p
            sq = sq * h4 % p
    raise AssertionError(f"no tower element completes the root of {m} mod {p}")
