"""Integer factorization: trial division to 10^6, then Pollard rho (Brent).

Primality of every reported factor is decided by a deterministic Miller-Rabin
test; the fixed base set below is a proof of primality for n < 3.3 * 10^24.
Larger cofactors are rejected rather than guessed at.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt

from ..errors import FactorizationBudgetExceeded, TopClosureError

TRIAL_LIMIT = 10**6
RHO_BUDGET = 2_000_000
# Deterministic for n < 3317044064679887385961981 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_CERTIFIED_BOUND = 3317044064679887385961981


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(sieve) if f]


_PRIMES = _small_primes(TRIAL_LIMIT)


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p < hi."""
    if hi <= TRIAL_LIMIT:
        return [p for p in _PRIMES if lo <= p < hi]
    return [n for n in range(max(lo, 2), hi) if is_prime(n)]


def is_prime(n: int) -> bool:
    """Deterministic primality; raises if a probable prime is too large to certify."""
    probable = _miller_rabin(n)
    if probable and n >= MR_CERTIFIED_BOUND:
        raise TopClosureError(f"primality of {n} is outside the certified Miller-Rabin range")
    return probable


def _miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int, budget: int) -> int:
    """Brent's variant of Pollard rho; returns a nontrivial factor of composite n."""
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 64):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
            spent += r
            if spent > budget:
                raise FactorizationBudgetExceeded(n, budget)
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactorizationBudgetExceeded(n, budget)


@lru_cache(maxsize=4096)
def _factor_positive(n: int, budget: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}
    for p in _PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m <= TRIAL_LIMIT**2 or is_prime(m):
            # m has no factor below 10^6, so below 10^12 it is prime
            out[m] = out.get(m, 0) + 1
            continue
        d = _rho(m, budget)
        stack.extend((d, m // d))
    return tuple(sorted(out.items()))


def factor_int(n: int, budget: int = RHO_BUDGET) -> tuple[int, dict[int, int]]:
    """Return ``(sign, {prime: exponent})`` with ``sign * prod(p**e) == n``."""
    if n == 0:
        raise ValueError("cannot factor zero")
    sign = 1 if n > 0 else -1
    return sign, dict(_factor_positive(abs(n), budget))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
