"""Exact big-integer arithmetic: factorization, square-free parts, square tests.

Everything here is pure and deterministic.  Factorization is trial division
over a small sieve followed by Brent-cycle Pollard rho with deterministic
Miller-Rabin primality testing, which is comfortably fast for the inputs the
search pipeline produces (roughly 128-bit worst case).
"""

from __future__ import annotations

import math
from math import gcd, isqrt

Factorization = list[tuple[int, int]]

_TRIAL_BOUND = 10_000


def _sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i in range(limit + 1) if flags[i]]


_SMALL_PRIMES = _sieve(_TRIAL_BOUND)

# Deterministic Miller-Rabin witness sets.  The first set is provably
# sufficient below 3.3e24 (> 2^64); the same witnesses are reused as a fixed
# set above that, keeping the function deterministic.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class FactorizationError(Exception):
    """Raised when an input cannot be fully factored within effort limits."""


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with a fixed witness set; exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Find a nontrivial factor of composite odd n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    # Deterministic parameter sweep keeps factorize() reproducible.
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
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
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise FactorizationError(f"pollard rho failed on {n}")


def factorize(n: int) -> Factorization:
    """Full prime factorization of n >= 1 as an ordered (prime, exponent) list."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return sorted(factors.items())


def product_of(factors: Factorization) -> int:
    out = 1
    for p, e in factors:
        out *= p**e
    return out


def sfp(n: int) -> int:
    """Square-free part: n divided by its largest square divisor."""
    if n < 1:
        raise ValueError("sfp requires n >= 1")
    out = 1
    for p, e in factorize(n):
        if e % 2:
            out *= p
    return out


def is_square(n: int) -> bool:
    """True iff n is a perfect square (n >= 0)."""
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


def sfp_sieve(limit: int) -> list[int]:
    """sfp(n) for all 0 <= n <= limit, by sieving out square prime powers.

    arr[0] is a placeholder (sfp is undefined at 0).
    """
    arr = list(range(limit + 1))
    for p in range(2, isqrt(limit) + 1):
        sq = p * p
        for m in range(sq, limit + 1, sq):
            while arr[m] % sq == 0:
                arr[m] //= sq
    return arr


def squarefree_divisors(n: int) -> list[int]:
    """All positive square-free divisors of n (i.e. of its radical), sorted."""
    if n == 0:
        raise ValueError("n must be nonzero")
    primes = [p for p, _ in factorize(abs(n))]
    divs = [1]
    for p in primes:
        divs += [d * p for d in divs]
    return sorted(divs)


def sqfree_class(num: int, den: int = 1) -> int:
    """Square-free representative of the class of num/den in Q*/(Q*)^2."""
    if num == 0 or den == 0:
        raise ValueError("zero has no square class")
    v = num * den
    s = sfp(abs(v))
    return s if v > 0 else -s


def valuation(n: int, p: int) -> int:
    """Exponent of p in n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
