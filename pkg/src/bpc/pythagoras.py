"""Admissible Pythagorean parameter pairs and the leg-product SFP signature."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .arith import sfp


@dataclass(frozen=True, order=True)
class ParamPair:
    """Euclid parameters (p, q): coprime, opposite parity, p > q >= 1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if not (p > q >= 1):
            raise ValueError(f"need p > q >= 1, got ({p}, {q})")
        if gcd(p, q) != 1:
            raise ValueError(f"({p}, {q}) not coprime")
        if (p + q) % 2 == 0:
            raise ValueError(f"({p}, {q}) not of opposite parity")

    @property
    def legs(self) -> tuple[int, int]:
        """(even leg, odd leg) of the primitive triple."""
        return 2 * self.p * self.q, self.p * self.p - self.q * self.q

    @property
    def hypotenuse(self) -> int:
        return self.p * self.p + self.q * self.q


def is_admissible(p: int, q: int) -> bool:
    return p > q >= 1 and gcd(p, q) == 1 and (p + q) % 2 == 1


@dataclass(frozen=True)
class PythTriple:
    leg_even: int
    leg_odd: int
    hypotenuse: int
    k: int

    def __post_init__(self) -> None:
        if self.leg_even**2 + self.leg_odd**2 != self.hypotenuse**2:
            raise ValueError("not a Pythagorean triple")

    @property
    def primitive(self) -> bool:
        return self.k == 1


def admissible_pairs(p_max: int, p_start: int = 2, q_start: int = 1) -> Iterator[ParamPair]:
    """All admissible (p, q) with p <= p_max in lexicographic order.

    (p_start, q_start) is a resume cursor: emission begins at the first
    admissible pair >= (p_start, q_start).
    """
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    for p in range(p_start, p_max + 1):
        lo = q_start if p == p_start else 1
        for q in range(lo, p):
            if (p + q) % 2 == 1 and gcd(p, q) == 1:
                yield ParamPair(p, q)


def count_admissible_pairs(p_max: int) -> int:
    return sum(1 for _ in admissible_pairs(p_max))


def triple_from(pair: ParamPair, k: int = 1) -> PythTriple:
    """The triple (2kpq, k(p^2-q^2), k(p^2+q^2))."""
    if k < 1:
        raise ValueError("scale k must be >= 1")
    even, odd = pair.legs
    return PythTriple(k * even, k * odd, k * pair.hypotenuse, k)


def leg_product_sfp(pair: ParamPair) -> int:
    """Square-free part of 2pq(p^2-q^2), the collision-scan signature."""
    p, q = pair.p, pair.q
    return sfp(2 * p * q * (p * p - q * q))


def pair_from_legs(leg_a: int, leg_b: int) -> ParamPair:
    """Recover the admissible (p, q) whose primitive triple has these legs.

    The legs may be given in either order and with a common scale factor;
    raises ValueError if the reduced pair is not a primitive-triple leg pair.
    """
    if leg_a <= 0 or leg_b <= 0:
        raise ValueError("legs must be positive")
    g = gcd(leg_a, leg_b)
    a, b = leg_a // g, leg_b // g
    if a % 2 == b % 2:
        raise ValueError(f"reduced legs ({a}, {b}) are not of opposite parity")
    even, odd = (a, b) if a % 2 == 0 else (b, a)
    h2 = even * even + odd * odd
    from .arith import is_square, isqrt  # local import avoids cycle at module load

    if not is_square(h2):
        raise ValueError(f"legs ({a}, {b}) are not a Pythagorean leg pair")
    h = isqrt(h2)
    p2, q2 = (h + odd) // 2, (h - odd) // 2
    if not (is_square(p2) and is_square(q2)):
        raise ValueError(f"legs ({a}, {b}) do not come from Euclid parameters")
    return ParamPair(isqrt(p2), isqrt(q2))
