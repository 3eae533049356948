"""Integer factorization, primality, totient machinery, and the small
arithmetic predicates the Lehmer-property arguments consume.

Python ints are the ambient arbitrary-precision type and there are no
floating-point paths in this module.  Factorization is budgeted and
explicitly allowed to come back incomplete; callers that need completeness
say so and get IncompleteFactorizationError.
"""

from __future__ import annotations

import bisect
import math
import random
import time
from dataclasses import dataclass


class IncompleteFactorizationError(ValueError):
    """An operation needed a complete factorization but got a partial one."""


class ZeroInputError(ValueError):
    """The 2-adic valuation of zero is undefined."""


class EvenModulusError(ValueError):
    """Jacobi symbols are defined for positive odd moduli only."""


class LimitTooLargeError(ValueError):
    """Sieve limit beyond the documented memory bound."""


# totient_sieve allocates one Python int per slot; 10**7 slots stay within
# roughly half a gigabyte.
SIEVE_LIMIT_MAX = 10**7


@dataclass(frozen=True)
class FactorBudget:
    """Effort caps for factorize.

    trial_limit bounds trial division; rho_iterations caps the squaring
    steps spent on any single cofactor; deadline_ms, when set, is a
    wall-clock limit for the whole call (checked between phases, so it is
    deliberately coarse).
    """

    trial_limit: int = 10**6
    rho_iterations: int = 1 << 24
    deadline_ms: int | None = None

    def __post_init__(self):
        if self.trial_limit < 1 or self.rho_iterations < 1:
            raise ValueError("budget limits must be positive")
        if self.deadline_ms is not None and self.deadline_ms < 1:
            raise ValueError("deadline must be positive")


DEFAULT_BUDGET = FactorBudget()


@dataclass(frozen=True)
class Factorization:
    """Prime-power factors of value plus any unfactored cofactor.

    Invariant: product(p**e) * cofactor == value, primes strictly
    increasing, every listed prime accepted by is_probable_prime.
    """

    value: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int = 1

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def reconstruct(self) -> int:
        acc = self.cofactor
        for p, e in self.factors:
            acc *= p**e
        return acc


def _sieve_flags(limit: int) -> bytearray:
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * len(range(start, limit + 1, p))
    return flags


def prime_flags(limit: int) -> bytearray:
    """Byte per integer in [0, limit]; 1 where prime."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit > 10 * SIEVE_LIMIT_MAX:
        raise LimitTooLargeError(f"prime flag sieve capped at {10 * SIEVE_LIMIT_MAX}")
    if limit < 2:
        return bytearray(limit + 1)
    return _sieve_flags(limit)


# Growing shared prime table, replaced atomically so concurrent readers are
# safe.  _prime_table may return primes beyond the requested point; callers
# that care cut it off themselves.
_PRIMES: tuple[int, ...] = ()
_PRIMES_LIMIT = 0


def _prime_table(limit: int) -> tuple[int, ...]:
    global _PRIMES, _PRIMES_LIMIT
    if limit > _PRIMES_LIMIT:
        new_limit = max(limit, 2 * _PRIMES_LIMIT, 1 << 10)
        flags = _sieve_flags(new_limit)
        _PRIMES = tuple(i for i in range(2, new_limit + 1) if flags[i])
        _PRIMES_LIMIT = new_limit
    return _PRIMES


def primes_upto(limit: int) -> list[int]:
    """All primes p <= limit, ascending."""
    if limit < 2:
        return []
    table = _prime_table(limit)
    return list(table[: bisect.bisect_right(table, limit)])


_TINY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                59, 61, 67, 71, 73, 79, 83, 89, 97)
_TINY_COVER = 101 * 101  # below this, surviving trial division means prime

# Deterministic for every m < 3.3 * 10**24, which covers the 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _strong_pass(m: int, base: int, d: int, s: int) -> bool:
    x = pow(base, d, m)
    if x == 1 or x == m - 1:
        return True
    for _ in range(s - 1):
        x = x * x % m
        if x == m - 1:
            return True
        if x == 1:
            return False
    return False


def _half_mod(x: int, m: int) -> int:
    # division by 2 in Z/m for odd m
    x %= m
    if x & 1:
        x += m
    return (x >> 1) % m


def _strong_lucas_pass(m: int) -> bool:
    # m odd, coprime to the tiny primes.  Selfridge parameter choice:
    # first D in 5, -7, 9, -11, ... with Jacobi(D, m) == -1, P=1, Q=(1-D)/4.
    r = math.isqrt(m)
    if r * r == m:
        return False
    d_param = 5
    while True:
        sym = jacobi(d_param, m)
        if sym == 0:
            return False  # |d_param| < m here, so a proper factor exists
        if sym == -1:
            break
        d_param = -(d_param + 2) if d_param > 0 else -(d_param - 2)
    q = (1 - d_param) // 4
    t = m + 1
    s = (t & -t).bit_length() - 1
    t >>= s
    u, v, qk = 1, 1, q % m  # U_1, V_1 (P = 1), Q**1
    dd = d_param % m
    for bit in bin(t)[3:]:
        u, v = u * v % m, (v * v - 2 * qk) % m
        qk = qk * qk % m
        if bit == "1":
            u, v = _half_mod(u + v, m), _half_mod(dd * u + v, m)
            qk = qk * (q % m) % m
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % m
        if v == 0:
            return True
        qk = qk * qk % m
    return False


def is_probable_prime(m: int) -> bool:
    """Primality test.

    Trial division by tiny primes, then: deterministic Miller-Rabin below
    2**64 (fixed base set), else a base-2 strong test plus a strong Lucas
    test; no composite is known to pass that combination.
    """
    if m < 2:
        return False
    for p in _TINY_PRIMES:
        if m % p == 0:
            return m == p
    if m < _TINY_COVER:
        return True
    d = m - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    if m < 1 << 64:
        return all(_strong_pass(m, b, d, s) for b in _MR_BASES)
    if not _strong_pass(m, 2, d, s):
        return False
    return _strong_lucas_pass(m)


def primality_method(m: int) -> str:
    """Which test is_probable_prime applies at this size (for reports)."""
    if m < _TINY_COVER:
        return "trial-division"
    if m < 1 << 64:
        return "deterministic-miller-rabin"
    return "base2-strong+strong-lucas"


def _brent_rho(n: int, max_steps: int, rng: random.Random) -> int | None:
    """Hunt for a nontrivial factor of odd composite n.

    Brent cycle detection with batched gcds; every squaring of the iterate
    counts one step.  On a failed round the polynomial constant is redrawn
    and the hunt continues while steps remain.
    """
    steps = 0
    while steps < max_steps:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        r = q = g = 1
        x = ys = y
        while g == 1 and steps < max_steps:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            steps += r
            k = 0
            while k < r and g == 1:
                ys = y
                span = min(128, r - k)
                for _ in range(span):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                steps += span
                g = math.gcd(q, n)
                k += span
            r <<= 1
        if g == n:
            # batched gcd overshot; replay one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(x - ys, n)
        if g != 1 and g != n:
            return g
    return None


def factorize(m: int, budget: FactorBudget | None = None, cache=None) -> Factorization:
    """Factor m by trial division, then Brent rho on surviving cofactors.

    Incompleteness is a result state, not an error: whatever the budget
    leaves unfactored is returned (multiplied together) as the cofactor.
    A cache, when given, is consulted first and updated with complete
    results.
    """
    if m < 1:
        raise ValueError(f"factorize needs m >= 1, got {m}")
    budget = budget or DEFAULT_BUDGET
    if cache is not None:
        hit = cache.get(m)
        if hit is not None and hit.complete:
            return Factorization(m, tuple(hit.factors), 1)
    deadline = None
    if budget.deadline_ms is not None:
        deadline = time.monotonic() + budget.deadline_ms / 1000.0

    counts: dict[int, int] = {}
    rest = m
    bound = min(budget.trial_limit, math.isqrt(rest))
    for p in _prime_table(bound):
        if p > bound or p * p > rest:
            break
        while rest % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rest //= p

    pending = [rest] if rest > 1 else []
    leftovers: list[int] = []
    while pending:
        c = pending.pop()
        if deadline is not None and time.monotonic() > deadline:
            leftovers.append(c)
            continue
        if is_probable_prime(c):
            counts[c] = counts.get(c, 0) + 1
            continue
        root = math.isqrt(c)
        if root * root == c:
            pending += [root, root]
            continue
        f = _brent_rho(c, budget.rho_iterations, random.Random(c))
        if f is None:
            leftovers.append(c)
        else:
            pending += [f, c // f]

    result = Factorization(m, tuple(sorted(counts.items())), math.prod(leftovers))
    assert result.reconstruct() == m
    if cache is not None and result.complete:
        cache.record_computed(m, result.factors)
    return result


def _require_complete(f: Factorization) -> None:
    if not f.complete:
        raise IncompleteFactorizationError(
            f"incomplete factorization of {f.value} (cofactor {f.cofactor})"
        )


def totient(f: Factorization) -> int:
    """Euler phi from a complete factorization: prod p**(e-1) * (p-1)."""
    _require_complete(f)
    acc = 1
    for p, e in f.factors:
        acc *= p ** (e - 1) * (p - 1)
    return acc


def omega(f: Factorization) -> int:
    """Number of distinct prime divisors."""
    _require_complete(f)
    return len(f.factors)


def is_squarefree(f: Factorization) -> bool:
    _require_complete(f)
    return all(e == 1 for _, e in f.factors)


def v2(m: int) -> int:
    """Largest e with 2**e dividing m; defined for every nonzero integer."""
    if m == 0:
        raise ZeroInputError("v2(0) is undefined")
    return (m & -m).bit_length() - 1


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a|m) for positive odd m, by binary reciprocity."""
    if m < 1 or m % 2 == 0:
        raise EvenModulusError(f"modulus must be positive and odd, got {m}")
    a %= m
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def fermat_prime_exponent(p: int) -> int | None:
    """k with p == 2**(2**k) + 1 when p is such a prime, else None."""
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    t = p - 1
    if t & (t - 1):
        return None  # p-1 is not a power of two
    e = t.bit_length() - 1
    if e == 0 or e & (e - 1):
        return None  # the exponent must itself be a power of two
    if not is_probable_prime(p):
        return None
    return e.bit_length() - 1


def totient_sieve(limit: int) -> list[int]:
    """phi[k] for 0 <= k <= limit (slot 0 is unused and holds 0)."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    if limit > SIEVE_LIMIT_MAX:
        raise LimitTooLargeError(f"totient sieve capped at {SIEVE_LIMIT_MAX}")
    phi = list(range(limit + 1))
    for i in range(2, limit + 1):
        if phi[i] == i:  # i is prime
            for j in range(i, limit + 1, i):
                phi[j] -= phi[j] // i
    return phi
