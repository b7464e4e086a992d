"""Exact integer arithmetic: factoring, squarefree parts and residue symbols.

Everything here works on plain Python ints and is deterministic; the
factoring budget is the only tunable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

TRIAL_LIMIT = 10**6
RHO_BUDGET = 200_000

# Deterministic for n < 3.317e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_BOUND = 3_317_044_064_679_887_385_961_981


class FactorizationError(ArithmeticError):
    """Raised when the trial-division + rho budget runs out.

    ``cofactor`` is the composite part left unsplit.
    """

    def __init__(self, n: int, cofactor: int):
        super().__init__(f"unfactored: {n} (composite cofactor {cofactor} exceeds budget)")
        self.n = n
        self.cofactor = cofactor


class SymbolUndefined(ValueError):
    """A quartic symbol was requested outside its domain of definition."""

    def __init__(self, a: int, p: int, reason: str):
        super().__init__(f"symbol ({a}/{p})_4 undefined: {reason}")
        self.a = a
        self.p = p


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if math.prod(p**e for p, e in self.factors) != self.value:
            raise ValueError("factors do not recompose to value")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class Place:
    """A place of Q: ``p`` is a prime, or ``None`` for the real place."""

    p: int | None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def infinity(cls) -> Place:
        return cls(None)

    @property
    def tag(self) -> str:
        if self.p is None:
            return "infinity"
        return "two" if self.p == 2 else "odd-prime"

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)


# --------------------------------------------------------------------------
# primes


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    limit = TRIAL_LIMIT
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    # above _MR_BOUND this is still a 13-base strong probable-prime test
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


def _rho(n: int, budget: int) -> int | None:
    """Brent's variant of Pollard rho with fixed seeds; None on budget exhaustion."""
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 64):
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
            spent += r
            if spent > budget:
                return None
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    return None


def factor(n: int, rho_budget: int = RHO_BUDGET) -> Factorization:
    """Factor a positive integer by trial division up to 10**6, then rho.

    >>> factor(12369).factors
    ((3, 1), (7, 1), (19, 1), (31, 1))
    """
    if n < 1:
        raise ValueError("factor() needs n >= 1")
    return _factor_cached(n, rho_budget)


@lru_cache(maxsize=65536)
def _factor_cached(n: int, rho_budget: int) -> Factorization:
    counts: dict[int, int] = {}
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            counts[p] = e
    if m > 1:
        stack = [m]
        while stack:
            k = stack.pop()
            if k == 1:
                continue
            if is_prime(k):
                counts[k] = counts.get(k, 0) + 1
                continue
            r = math.isqrt(k)
            if r * r == k:
                stack.extend([r, r])
                continue
            g = _rho(k, rho_budget)
            if g is None:
                raise FactorizationError(n, k)
            stack.extend([g, k // g])
    return Factorization(n, tuple(sorted(counts.items())))


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Split ``n = core * cofactor**2`` with ``core`` squarefree and signed like ``n``."""
    if n == 0:
        raise ValueError("squarefree_decompose(0) is undefined")
    core, cof = 1, 1
    for p, e in factor(abs(n)):
        if e % 2:
            core *= p
        cof *= p ** (e // 2)
    return (core if n > 0 else -core), cof


def squarefree_core(n: int) -> int:
    return squarefree_decompose(n)[0]


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# --------------------------------------------------------------------------
# residue symbols


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def quartic_symbol(a: int, m: int) -> int:
    """Quartic residue symbol (a/m)_4, multiplicative in the denominator.

    For an odd prime p with p = 1 mod 4 and (a/p) = 1 this is
    a**((p-1)/4) mod p; at p = 2 it is (-1)**((a-1)/8) for a = 1 mod 8.
    """
    if m < 1:
        raise ValueError("denominator must be positive")
    result = 1
    for p, e in factor(m):
        if p == 2:
            if a % 8 != 1:
                raise SymbolUndefined(a, 2, "numerator must be 1 mod 8")
            val = -1 if ((a - 1) // 8) % 2 else 1
        else:
            if p % 4 != 1:
                raise SymbolUndefined(a, p, "prime is not 1 mod 4")
            if kronecker(a, p) != 1:
                raise SymbolUndefined(a, p, "numerator is not a quadratic residue")
            t = pow(a, (p - 1) // 4, p)
            val = 1 if t == 1 else -1
        if e % 2:
            result *= val
    return result


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert(a: int, b: int, v: Place | int | None) -> int:
    """Hilbert symbol (a, b)_v over Q_v; ``v`` may be a Place, a prime, or None for infinity."""
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero entries")
    p = v.p if isinstance(v, Place) else v
    if p is None:
        return -1 if (a < 0 and b < 0) else 1
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p**alpha, b // p**beta
    if p == 2:
        e = _eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker(u, p) ** beta * kronecker(w, p) ** alpha


def relevant_places(*values: int) -> list[Place]:
    """Places where a Hilbert symbol of the given entries can be nontrivial: 2, primes of the entries, infinity."""
    primes = {2}
    for n in values:
        primes.update(factor(abs(n)).primes)
    return [Place(p) for p in sorted(primes)] + [Place.infinity()]
