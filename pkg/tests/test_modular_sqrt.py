import random

import pytest

import residue_forge.modular_sqrt as ms
from residue_forge.arithmetic import build_context, legendre
from residue_forge.errors import EvenPrime, NotAResidue, WrongPrimeClass
from residue_forge.modular_sqrt import (NO_ROOT, SOLVED, SqrtPlan, SqrtSolution,
                                        batch_solve, canonical_root,
                                        qr_flag_of_root, sqrt_mod_prime, sqrt_p1,
                                        sqrt_p3)
from residue_forge import oracle

from conftest import INVARIANT_PRIMES


def _residues(p, k, seed):
    qr = sorted({x * x % p for x in range(1, min(p, 5000))})
    return qr if len(qr) <= k else random.Random(seed).sample(qr, k)


def test_sqrt_p3_examples():
    ctx = build_context(7)
    assert sqrt_p3(2, ctx) == (3, 4)
    assert pow(2, 2, 7) == 4 and 4 * 4 % 7 == 2
    assert sqrt_p3(1, ctx) == (1, 6)
    assert sqrt_p3(3, ctx) is None
    with pytest.raises(WrongPrimeClass):
        sqrt_p3(1, build_context(13))


def test_sqrt_p1_examples():
    ctx = build_context(13)
    assert sqrt_p1(10, ctx) == (6, 7)
    assert sqrt_p1(1, ctx) == (1, 12)
    assert sqrt_p1(4, ctx) == (2, 11)
    with pytest.raises(WrongPrimeClass):
        sqrt_p1(2, build_context(7))
    with pytest.raises(NotAResidue):
        sqrt_p1(2, ctx)


def test_batch_solve_examples():
    assert batch_solve([3], 13) == [SqrtSolution(3, SOLVED, 6)]
    assert batch_solve([1], 7) == [SqrtSolution(1, NO_ROOT)]
    assert batch_solve([4], 5) == [SqrtSolution(4, SOLVED, 1)]
    assert batch_solve([13, 26], 13) == [SqrtSolution(13, SOLVED, 0), SqrtSolution(26, SOLVED, 13)]
    with pytest.raises(EvenPrime):
        batch_solve([1], 2)
    with pytest.raises(ValueError):
        batch_solve([0], 13)


def test_solution_roundtrip():
    for s in batch_solve(range(1, 30), 13):
        assert SqrtSolution.from_dict(s.to_dict()) == s
    assert SqrtSolution(4, SOLVED, 1).parity_constraint == "odd"
    assert SqrtSolution(3, SOLVED, 6).parity_constraint == "even"


def test_qr_flag_examples():
    ctx = build_context(13)
    # 4^5 = 10 and 10^2 = 9, so r^2 = 4 / 9 = 12: r has order 4
    root, r = canonical_root(4, ctx)
    assert r in (5, 8) and root in (2, 11)
    assert qr_flag_of_root(4, ctx) == (legendre(r, 13) == 1)
    assert canonical_root(1, ctx) == (1, 1)
    assert qr_flag_of_root(1, ctx)
    # 6 and 7 are both non-residues mod 13
    assert legendre(6, 13) == legendre(7, 13) == -1
    assert canonical_root(10, ctx)[0] in (6, 7)
    assert not qr_flag_of_root(10, ctx)
    with pytest.raises(NotAResidue):
        qr_flag_of_root(2, ctx)


def test_tower_beyond_lower_layer():
    # at p = 13, m = 10 the completing factor lies in the top layer only
    ctx = build_context(13)
    _, r = ms._root_with_factor(10, ctx, (13 + 1 - 6) // 4, None)
    assert r in (5, 8)


def test_plan_streams_for_tall_towers(monkeypatch):
    monkeypatch.setattr(ms, "_MATERIALIZE_MAX_N", 2)
    plan = SqrtPlan(build_context(257))
    assert plan._pairs is None
    assert sqrt_p1(2, build_context(257), plan) == tuple(sorted(
        oracle.sqrt_all_bruteforce(2, 257)))


def test_sqrt_mod_prime():
    for p in (3, 5, 13, 17, 257, 65537, 1000033, (1 << 61) - 1):
        for m in range(0, 200):
            x = sqrt_mod_prime(m, p)
            if legendre(m, p) == -1:
                assert x is None
            else:
                assert x * x % p == m % p


# invariants over all odd primes <= 500 and 50 random primes < 1e5

@pytest.mark.parametrize("p", INVARIANT_PRIMES)
def test_batch_matches_oracle(p):
    got = batch_solve(range(1, 51), p)
    for s in got:
        want = oracle.smallest_parity_root(s.c, p)
        assert s.x == want
        assert s.status == (NO_ROOT if want is None else SOLVED)


@pytest.mark.parametrize("p", INVARIANT_PRIMES)
def test_pairs_square_to_m(p):
    ctx = build_context(p)
    solve = sqrt_p3 if p % 4 == 3 else sqrt_p1
    for m in _residues(p, 200, p):
        x, y = solve(m, ctx)
        assert x + y == p
        assert x * x % p == m and y * y % p == m


@pytest.mark.parametrize("p", [q for q in INVARIANT_PRIMES if q % 4 == 1])
def test_exponent_identity(p):
    ctx = build_context(p)
    for m in _residues(p, 50, p):
        _, r = ms._root_with_factor(m, ctx, (p + 1 - 2 * ctx.z) // 4, None)
        a = pow(m, (p + 1 - 2 * ctx.z) // 4, p) * r % p
        b = pow(m, (p - ctx.z) // 2, p) * r % p
        assert a * a % p == b * b % p == m


@pytest.mark.parametrize("p", INVARIANT_PRIMES)
def test_query_cost(p, monkeypatch):
    calls = {"pow": 0, "qnr": 0}
    real_qnr = ms.smallest_qnr

    def counting_pow(*args):
        calls["pow"] += 1
        return pow(*args)

    def counting_qnr(*args):
        calls["qnr"] += 1
        return real_qnr(*args)

    ms._plan_for.cache_clear()
    monkeypatch.setattr(ms, "smallest_qnr", counting_qnr)
    ctx = build_context(p)
    if p % 4 == 3:
        monkeypatch.setattr(ms, "pow", counting_pow, raising=False)
        for m in _residues(p, 20, p):
            calls["pow"] = 0
            sqrt_p3(m, ctx)
            assert calls["pow"] == 1
    batch_solve(range(1, 51), p)
    batch_solve(range(51, 101), p)
    assert calls["qnr"] == (1 if p % 4 == 1 else 0)
