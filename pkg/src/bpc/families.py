"""Parametric edge-cuboid families, the square-impossibility check for the
first family's irrational edge, and Saunderson brick construction.

All records are verified exactly at construction time: face diagonals are
recomputed from the edges rather than trusted from the printed closed
forms, and every Pythagorean relation is re-checked.  Where a printed
closed form disagrees with the recomputed value, a warning is logged with
both values (the known case is the first family's edge1-edge2 face
diagonal, whose printed form carries a wrong exponent).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple

from .arith import is_square
from .pythagoras import ParamPair

log = logging.getLogger(__name__)


class FamilyRangeError(ValueError):
    """The pair falls outside the family's admissible parameter range."""


@dataclass(frozen=True)
class EdgeCuboidRecord:
    """An edge cuboid: two integer edges, an irrational third edge given by
    its (non-square) square, three integer face diagonals, integer main
    diagonal."""

    family: str
    pair: ParamPair
    integer_edges: tuple[int, int]
    third_edge_sq: int
    face_diagonals: tuple[int, int, int]
    main_diagonal: int
    third_edge_is_square: bool

    def __post_init__(self) -> None:
        e1, e2 = self.integer_edges
        d12, d1t, d2t = self.face_diagonals
        t = self.third_edge_sq
        checks = (
            e1 * e1 + e2 * e2 == d12 * d12,
            e1 * e1 + t == d1t * d1t,
            e2 * e2 + t == d2t * d2t,
            e1 * e1 + e2 * e2 + t == self.main_diagonal**2,
        )
        if not all(checks):
            raise ValueError(f"inconsistent edge-cuboid record: {self}")


def _exact_sqrt(n: int, what: str) -> int:
    r = isqrt(n)
    if r * r != n:
        raise ValueError(f"{what} = {n} is not a perfect square")
    return r


def _make_record(family: str, pair: ParamPair, e1: int, e2: int, third_sq: int,
                 main: int) -> EdgeCuboidRecord:
    if third_sq <= 0:
        raise FamilyRangeError(
            f"{family} at ({pair.p}, {pair.q}): square of the irrational "
            f"edge is {third_sq} <= 0"
        )
    e1, e2 = sorted((e1, e2))
    d12 = _exact_sqrt(e1 * e1 + e2 * e2, "edge1^2 + edge2^2")
    d1t = _exact_sqrt(e1 * e1 + third_sq, "edge1^2 + third_edge_sq")
    d2t = _exact_sqrt(e2 * e2 + third_sq, "edge2^2 + third_edge_sq")
    sensational = is_square(third_sq)
    if sensational:
        log.warning(
            "%s at (%d, %d): third edge squared %d is a perfect square "
            "(all seven distances integer!)", family, pair.p, pair.q, third_sq
        )
    return EdgeCuboidRecord(
        family=family,
        pair=pair,
        integer_edges=(e1, e2),
        third_edge_sq=third_sq,
        face_diagonals=(d12, d1t, d2t),
        main_diagonal=main,
        third_edge_is_square=sensational,
    )


def _check_printed(family: str, pair: ParamPair, printed: tuple[int, ...],
                   derived: tuple[int, ...]) -> None:
    if set(printed) != set(derived):
        log.warning(
            "%s at (%d, %d): printed face-diagonal values %s disagree with "
            "values recomputed from the edges %s; the recomputed values are "
            "authoritative", family, pair.p, pair.q, sorted(printed),
            sorted(derived),
        )


def _third_edge_sq_t2(p: int, q: int) -> int:
    return (
        (p**4 - 4 * p**3 * q - q**4)
        * (p**4 + 4 * p**3 * q - q**4)
        * (p**4 - 4 * p * q**3 - q**4)
        * (p**4 + 4 * p * q**3 - q**4)
    )


# the two cofactors of the shared main-diagonal closed form
def _main_factors(p: int, q: int) -> tuple[int, int]:
    f1 = p**4 + 2 * p**3 * q + 2 * p**2 * q**2 - 2 * p * q**3 + q**4
    f2 = p**4 - 2 * p**3 * q + 2 * p**2 * q**2 + 2 * p * q**3 + q**4
    return f1, f2


def t2_family(pair: ParamPair) -> EdgeCuboidRecord:
    """First family: edge cuboid with integer edges in ratio (p^2-q^2):2pq.

    Admissible when p^4 - q^4 > 4p^3 q or p^4 - q^4 < 4pq^3 (exact signs).
    """
    p, q = pair.p, pair.q
    lhs = p**4 - q**4
    if not (lhs > 4 * p**3 * q or lhs < 4 * p * q**3):
        raise FamilyRangeError(
            f"({p}, {q}) inadmissible: 4pq^3 = {4 * p * q**3} <= "
            f"p^4 - q^4 = {lhs} <= 4p^3q = {4 * p**3 * q}"
        )
    e1 = 8 * p**2 * q**2 * (p**4 - q**4)
    e2 = 4 * p * q * (p**2 - q**2) * (p**4 - q**4)
    f1, f2 = _main_factors(p, q)
    rec = _make_record("T2", pair, e1, e2, _third_edge_sq_t2(p, q), f1 * f2)
    printed = (
        4 * p * q * (p**2 - q**2) ** 2 * (p**2 + q**2) ** 4,
        abs((p**4 - 4 * p**2 * q**2 - q**4) * (p**4 + 4 * p**2 * q**2 - q**4)),
        abs(
            (p**4 - 2 * p**3 * q - 2 * p**2 * q**2 - 2 * p * q**3 + q**4)
            * (p**4 + 2 * p**3 * q - 2 * p**2 * q**2 + 2 * p * q**3 + q**4)
        ),
    )
    _check_printed("T2", pair, printed, rec.face_diagonals)
    return rec


class T3Report(NamedTuple):
    e: int
    identity_ok: bool
    e_is_square: bool


def t3_check(pair: ParamPair) -> T3Report:
    """Verify (x-y)^2 - 4xy = e for x = (p^2+q^2)^4, y = 4p^2q^2(p^2-q^2)^2,
    where e is the first family's third-edge square, and report whether e
    is a perfect square (it should never be)."""
    p, q = pair.p, pair.q
    x = (p * p + q * q) ** 4
    y = 4 * p * p * q * q * (p * p - q * q) ** 2
    e = _third_edge_sq_t2(p, q)
    identity_ok = (x - y) ** 2 - 4 * x * y == e
    # the progression step 4xy is always the square of 4pq(p^2-q^2)(p^2+q^2)^2
    step_root = 4 * p * q * (p * p - q * q) * (p * p + q * q) ** 2
    identity_ok = identity_ok and 4 * x * y == step_root**2
    return T3Report(e=e, identity_ok=identity_ok, e_is_square=is_square(abs(e)))


def t5a_family(pair: ParamPair) -> EdgeCuboidRecord:
    """Second family: edge cuboid whose internal rectangle has edge ratio
    (p^2-q^2):2pq, from the generator x = 4p^2q^2 - p^4 + q^4."""
    p, q = pair.p, pair.q
    f1, f2 = _main_factors(p, q)
    e1 = (p * p - q * q) * f1 * f2
    e2 = 4 * p * q * (p**4 - q**4) ** 2
    third_sq = (
        -4 * p**2 * q**2
        * (p**4 - 4 * p**2 * q**2 - q**4)
        * (p**4 + 4 * p**2 * q**2 - q**4)
        * (3 * p**4 + q**4)
        * (p**4 + 3 * q**4)
    )
    rec = _make_record("T5a", pair, e1, e2, third_sq, (p * p + q * q) * f1 * f2)
    printed = (
        2 * p * q * f1 * f2,
        abs(
            (p * p + q * q)
            * (p**4 - 2 * p**3 * q - 2 * p**2 * q**2 - 2 * p * q**3 + q**4)
            * (p**4 + 2 * p**3 * q - 2 * p**2 * q**2 + 2 * p * q**3 + q**4)
        ),
        (p * p - q * q)
        * (p**8 + 8 * p**6 * q**2 - 2 * p**4 * q**4 + 8 * p**2 * q**6 + q**8),
    )
    _check_printed("T5a", pair, printed, rec.face_diagonals)
    return rec


def t5b_family(pair: ParamPair) -> EdgeCuboidRecord:
    """Third family: edge cuboid whose internal rectangle has edge ratio
    (p^2-q^2):2pq, from the generator x = (p^2+q^2)(p-q)^2 - 4p^2q^2."""
    p, q = pair.p, pair.q
    f1, f2 = _main_factors(p, q)
    e1 = 2 * p * q * f1 * f2
    e2 = 8 * p**2 * q**2 * (p * p - q * q) * (p * p + q * q) ** 2
    third_sq = (
        (p * p - q * q) ** 2
        * (p**4 - 2 * p**3 * q - 2 * p**2 * q**2 - 2 * p * q**3 + q**4)
        * (p**4 - 2 * p**3 * q + 6 * p**2 * q**2 - 2 * p * q**3 + q**4)
        * (p**4 + 2 * p**3 * q - 2 * p**2 * q**2 + 2 * p * q**3 + q**4)
        * (p**4 + 2 * p**3 * q + 6 * p**2 * q**2 + 2 * p * q**3 + q**4)
    )
    rec = _make_record("T5b", pair, e1, e2, third_sq, (p * p + q * q) * f1 * f2)
    printed = (
        (p * p - q * q) * f1 * f2,
        abs(
            (p * p + q * q)
            * (p**4 - 4 * p**2 * q**2 - q**4)
            * (p**4 + 4 * p**2 * q**2 - q**4)
        ),
        2 * p * q
        * (p**8 + 8 * p**6 * q**2 - 2 * p**4 * q**4 + 8 * p**2 * q**6 + q**8),
    )
    _check_printed("T5b", pair, printed, rec.face_diagonals)
    return rec


@dataclass(frozen=True)
class SaundersonBrick:
    """A two-parameter Euler brick: integer edges and face diagonals, with
    the main diagonal generally irrational."""

    pair: ParamPair
    edges: tuple[int, int, int]
    face_diagonals: tuple[int, int, int]
    main_diagonal_sq: int
    main_is_square: bool


def saunderson(pair: ParamPair) -> SaundersonBrick:
    """The Euler brick with edges 8pq(p^4-q^4), 2pq(3p^2-q^2)|p^2-3q^2|,
    (p^2-q^2)|p^2-4pq+q^2|(p^2+4pq+q^2)."""
    p, q = pair.p, pair.q
    edges = (
        8 * p * q * (p**4 - q**4),
        2 * p * q * (3 * p * p - q * q) * abs(p * p - 3 * q * q),
        (p * p - q * q) * abs(p * p - 4 * p * q + q * q) * (p * p + 4 * p * q + q * q),
    )
    if 0 in edges:
        raise ValueError(f"degenerate brick at ({p}, {q})")
    a, b, c = edges
    # recompute and cross-check the three face diagonals
    dab = _exact_sqrt(a * a + b * b, "a^2 + b^2")
    dac = _exact_sqrt(a * a + c * c, "a^2 + c^2")
    dbc = _exact_sqrt(b * b + c * c, "b^2 + c^2")
    printed = (
        2 * p * q * (5 * p**4 - 6 * p**2 * q**2 + 5 * q**4),
        (p * p - q * q) * (p**4 + 18 * p**2 * q**2 + q**4),
        (p * p + q * q) ** 3,
    )
    _check_printed("Saunderson", pair, printed, (dab, dac, dbc))
    main_sq = a * a + b * b + c * c
    return SaundersonBrick(
        pair=pair,
        edges=edges,
        face_diagonals=(dab, dac, dbc),
        main_diagonal_sq=main_sq,
        main_is_square=is_square(main_sq),
    )
