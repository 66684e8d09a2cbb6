"""Cuboid taxonomy, (k,l,n) picture-frame algebra, plinths and variants.

A cuboid is represented by the squares of its three edges so that cuboids
with one irrational edge (edge cuboids) stay exactly representable.  The
seven inter-vertex distances (IVDs) are the three edges, three face
diagonals and the main diagonal.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Optional

from .arith import is_square, sfp
from .pythagoras import ParamPair, is_admissible

# Slot labels for the seven squared IVDs, in canonical order.
IVD_SLOTS = ("a", "b", "c", "ab", "ac", "bc", "abc")


@dataclass(frozen=True)
class IvdSquares:
    """Squared IVDs of a cuboid with squared edges sa, sb, sc."""

    sa: int
    sb: int
    sc: int

    def __post_init__(self) -> None:
        if min(self.sa, self.sb, self.sc) < 1:
            raise ValueError("squared edges must be positive")

    @property
    def seven(self) -> tuple[int, int, int, int, int, int, int]:
        sa, sb, sc = self.sa, self.sb, self.sc
        return (sa, sb, sc, sa + sb, sa + sc, sb + sc, sa + sb + sc)


class BpcClass(enum.Enum):
    PERFECT = "Perfect"
    EULER_BRICK = "EulerBrick"
    FACE_CUBOID = "FaceCuboid"
    EDGE_CUBOID = "EdgeCuboid"
    TWO_BPC = "TwoBpc"
    F_BPC = "FBpc"
    I_BPC = "IBpc"
    THREE_BPC_OTHER = "ThreeBpcOther"
    NOT_BPC = "NotBpc"


# Six 2-BPC subclasses, keyed by the (sorted) pair of non-square slots after
# primitive reduction.  The paper's parenthetical distinguishes the two
# edge/face-diagonal cases by perpendicularity: an edge is perpendicular to
# the diagonal of the opposite face and coplanar with the diagonals of the
# two faces containing it.
_TWO_BPC_SUBCLASS = {}
for _i, _e in enumerate(("a", "b", "c")):
    for _j, _f in enumerate(("a", "b", "c")):
        if _i < _j:
            _TWO_BPC_SUBCLASS[frozenset((_e, _f))] = 1  # edge, edge
_TWO_BPC_SUBCLASS[frozenset(("a", "bc"))] = 2  # edge, perpendicular face diagonal
_TWO_BPC_SUBCLASS[frozenset(("b", "ac"))] = 2
_TWO_BPC_SUBCLASS[frozenset(("c", "ab"))] = 2
for _e, _ds in (("a", ("ab", "ac")), ("b", ("ab", "bc")), ("c", ("ac", "bc"))):
    for _d in _ds:
        _TWO_BPC_SUBCLASS[frozenset((_e, _d))] = 3  # edge, coplanar face diagonal
for _e in ("a", "b", "c"):
    _TWO_BPC_SUBCLASS[frozenset((_e, "abc"))] = 4  # edge, main diagonal
for _pair in (("ab", "ac"), ("ab", "bc"), ("ac", "bc")):
    _TWO_BPC_SUBCLASS[frozenset(_pair)] = 5  # face diagonal, face diagonal
for _d in ("ab", "ac", "bc"):
    _TWO_BPC_SUBCLASS[frozenset((_d, "abc"))] = 6  # face diagonal, main diagonal

# 3-BPC patterns: a face (two edges plus their diagonal) or an internal
# rectangle (an edge, the opposite face diagonal, the main diagonal).
_FACE_PATTERNS = (
    frozenset(("a", "b", "ab")),
    frozenset(("a", "c", "ac")),
    frozenset(("b", "c", "bc")),
)
_INTERNAL_PATTERNS = (
    frozenset(("a", "bc", "abc")),
    frozenset(("b", "ac", "abc")),
    frozenset(("c", "ab", "abc")),
)


@dataclass(frozen=True)
class BpcClassification:
    cls: BpcClass
    shared_sfp: int
    nonsquare_positions: tuple[str, ...]
    two_bpc_subclass: Optional[int] = None


def classify(sa: int, sb: int, sc: int) -> BpcClassification:
    """Classify the cuboid with squared edges (sa, sb, sc).

    The seven squared IVDs are first divided by their collective GCD
    (primitive reduction); the classification then depends on which of the
    reduced values are perfect squares and whether the non-square ones share
    a single square-free part.
    """
    seven = IvdSquares(sa, sb, sc).seven
    g = 0
    for v in seven:
        g = gcd(g, v)
    reduced = tuple(v // g for v in seven)
    nonsq = tuple(
        slot for slot, v in zip(IVD_SLOTS, reduced) if not is_square(v)
    )
    if not nonsq:
        return BpcClassification(BpcClass.PERFECT, 1, ())

    values = {slot: v for slot, v in zip(IVD_SLOTS, reduced)}
    sfps = {sfp(values[slot]) for slot in nonsq}
    if len(sfps) != 1:
        return BpcClassification(BpcClass.NOT_BPC, 0, nonsq)
    shared = sfps.pop()

    if len(nonsq) == 1:
        slot = nonsq[0]
        if slot == "abc":
            cls = BpcClass.EULER_BRICK
        elif slot in ("ab", "ac", "bc"):
            cls = BpcClass.FACE_CUBOID
        else:
            cls = BpcClass.EDGE_CUBOID
        return BpcClassification(cls, shared, nonsq)
    if len(nonsq) == 2:
        sub = _TWO_BPC_SUBCLASS[frozenset(nonsq)]
        return BpcClassification(BpcClass.TWO_BPC, shared, nonsq, sub)
    if len(nonsq) == 3:
        pattern = frozenset(nonsq)
        if pattern in _FACE_PATTERNS:
            return BpcClassification(BpcClass.F_BPC, shared, nonsq)
        if pattern in _INTERNAL_PATTERNS:
            return BpcClassification(BpcClass.I_BPC, shared, nonsq)
        return BpcClassification(BpcClass.THREE_BPC_OTHER, shared, nonsq)
    return BpcClassification(BpcClass.NOT_BPC, 0, nonsq)


# ---------------------------------------------------------------------------
# (k, l, n) picture-frame algebra


@dataclass(frozen=True)
class KlnTriple:
    """Shared-leg triple (k, l, n) with l > n >= 1.

    The five governing quantities are ln, k^2+l^2, k^2+ln, k^2+n^2 and
    l^2-ln; a perfect cuboid corresponds to all five being squares.
    """

    k: int
    l: int
    n: int

    def __post_init__(self) -> None:
        if not (self.l > self.n >= 1 and self.k >= 1):
            raise ValueError(f"need k >= 1 and l > n >= 1, got {self}")

    @property
    def ln(self) -> int:
        return self.l * self.n

    @property
    def m(self) -> Optional[int]:
        """isqrt(ln) when ln is a perfect square, else None."""
        if is_square(self.ln):
            return isqrt(self.ln)
        return None

    def reduced(self) -> "KlnTriple":
        g = gcd(gcd(self.k, self.l), self.n)
        return KlnTriple(self.k // g, self.l // g, self.n // g)


def kln_quantities(t: KlnTriple) -> tuple[tuple[int, bool], ...]:
    """The five quantities with squareness flags, in the canonical order
    (ln, k^2+l^2, k^2+ln, k^2+n^2, l^2-ln)."""
    k2 = t.k * t.k
    vals = (
        t.ln,
        k2 + t.l * t.l,
        k2 + t.ln,
        k2 + t.n * t.n,
        t.l * t.l - t.ln,
    )
    return tuple((v, is_square(v)) for v in vals)


def cuboid_from_kln(t: KlnTriple) -> IvdSquares:
    """Squared edges ln(k^2+ln), l^2(ln-n^2), k^2(l^2-ln) of the cuboid a
    picture-frame triple induces.  Requires ln to be a perfect square."""
    if not is_square(t.ln):
        raise ValueError("ln must be a perfect square (use classify_variant otherwise)")
    k2 = t.k * t.k
    sa = t.ln * (k2 + t.ln)
    sb = t.l * t.l * (t.ln - t.n * t.n)
    sc = k2 * (t.l * t.l - t.ln)
    return IvdSquares(sa, sb, sc)


def _sqrt_ratio(l: int, n: int) -> Fraction:
    """sqrt(l/n) as an exact Fraction; requires ln to be a perfect square."""
    ln = l * n
    if not is_square(ln):
        raise ValueError("ln must be square for a rational sqrt(l/n)")
    return Fraction(isqrt(ln), n)


def check_cousin(t1: KlnTriple, t2: KlnTriple) -> bool:
    """Cousin relation between two picture-frame triples with square ln:
    2(k^2+ln)/(k(l-n)) of each equals sqrt(l/n) - sqrt(n/l) of the other,
    and both share the same k/sqrt(ln)."""
    for t in (t1, t2):
        if not is_square(t.ln):
            raise ValueError("cousin check requires ln square on both triples")

    def ratio_lhs(t: KlnTriple) -> Fraction:
        return Fraction(2 * (t.k * t.k + t.ln), t.k * (t.l - t.n))

    def ratio_rhs(t: KlnTriple) -> Fraction:
        r = _sqrt_ratio(t.l, t.n)
        return r - 1 / r

    def k_over_m(t: KlnTriple) -> Fraction:
        return Fraction(t.k, isqrt(t.ln))

    return (
        ratio_lhs(t1) == ratio_rhs(t2)
        and ratio_lhs(t2) == ratio_rhs(t1)
        and k_over_m(t1) == k_over_m(t2)
    )


def variant_params_h(
    pp1: ParamPair, pp2: ParamPair
) -> list[tuple[tuple[int, int], Optional[ParamPair]]]:
    """Candidate h-parameters (p1 q2 + q1 p2, |p1 p2 - q1 q2|) with the
    second pair taken in either order.

    Returns (raw, pair) entries where pair is the normalized ParamPair when
    the candidate is admissible and None otherwise.
    """
    out = []
    orders = (
        (pp2.p, pp2.q),
        (pp2.q, pp2.p),
    )
    for p2, q2 in orders:
        raw = (pp1.p * q2 + pp1.q * p2, abs(pp1.p * p2 - pp1.q * q2))
        hi, lo = max(raw), min(raw)
        pair = ParamPair(hi, lo) if is_admissible(hi, lo) else None
        out.append((raw, pair))
    return out


class VariantKind(enum.Enum):
    LM = "LM"
    MN = "MN"
    NONE = "none"


def classify_variant(t: KlnTriple) -> VariantKind:
    """LM/MN-variant test for triples whose ln is NOT a perfect square."""
    if is_square(t.ln):
        raise ValueError("ln is square; use the picture-frame path instead")
    k2 = t.k * t.k
    common = (
        is_square(k2 + t.l * t.l)
        and is_square(k2 + t.ln)
        and is_square(k2 + t.n * t.n)
    )
    if not common:
        return VariantKind.NONE
    if is_square(t.l * t.l - t.ln):
        return VariantKind.LM
    if is_square(t.ln - t.n * t.n):
        return VariantKind.MN
    return VariantKind.NONE


# ---------------------------------------------------------------------------
# Plinths (isosceles rectangular frusta) and perfect picture frames


@dataclass(frozen=True)
class Trapezium:
    """Isosceles trapezium with parallel sides b, c, slant a, diagonal d."""

    b: Fraction
    c: Fraction
    a: Fraction
    d: Fraction

    def identity_holds(self) -> bool:
        return self.d * self.d - self.a * self.a == self.b * self.c


@dataclass(frozen=True)
class Plinth:
    """Isosceles rectangular frustum: base rectangle, centered ceiling
    rectangle, and squared height.  All dimensions are exact rationals."""

    base: tuple[Fraction, Fraction]
    ceiling: tuple[Fraction, Fraction]
    height_sq: Fraction

    def __post_init__(self) -> None:
        if min(*self.base, *self.ceiling) <= 0:
            raise ValueError("rectangle sides must be positive")
        if self.height_sq < 0:
            raise ValueError("height_sq must be non-negative")

    def vertices(self) -> list[tuple[str, Fraction, Fraction, int]]:
        """Eight labelled vertices as (label, x, y, z_flag) with the base at
        z = 0 and the ceiling at z with z^2 = height_sq."""
        b1, b2 = self.base
        c1, c2 = self.ceiling
        half = Fraction(1, 2)
        verts = []
        for name, (sx, sy) in zip("ABCD", ((1, 1), (-1, 1), (-1, -1), (1, -1))):
            verts.append((name, sx * c1 * half, sy * c2 * half, 1))
        for name, (sx, sy) in zip("EFGH", ((1, 1), (-1, 1), (-1, -1), (1, -1))):
            verts.append((name, sx * b1 * half, sy * b2 * half, 0))
        return verts

    def squared_distances(self) -> list[tuple[str, Fraction]]:
        """All 28 pairwise squared inter-vertex distances, labelled."""
        verts = self.vertices()
        out = []
        for i in range(len(verts)):
            for j in range(i + 1, len(verts)):
                n1, x1, y1, z1 = verts[i]
                n2, x2, y2, z2 = verts[j]
                d2 = (x1 - x2) ** 2 + (y1 - y2) ** 2
                if z1 != z2:
                    d2 += self.height_sq
                out.append((n1 + n2, d2))
        return out

    def slant_edge_sq(self) -> Fraction:
        b1, b2 = self.base
        c1, c2 = self.ceiling
        return ((b1 - c1) / 2) ** 2 + ((b2 - c2) / 2) ** 2 + self.height_sq

    def internal_trapezium(self) -> Trapezium:
        """The internal quadrilateral whose parallel edges are the base and
        ceiling diagonals (ACGE in the figure-one labelling)."""
        b1, b2 = self.base
        c1, c2 = self.ceiling
        base_diag_sq = b1 * b1 + b2 * b2
        ceil_diag_sq = c1 * c1 + c2 * c2
        slant_sq = self.slant_edge_sq()
        space_diag_sq = ((b1 + c1) / 2) ** 2 + ((b2 + c2) / 2) ** 2 + self.height_sq
        return Trapezium(
            b=_exact_sqrt(base_diag_sq),
            c=_exact_sqrt(ceil_diag_sq),
            a=_exact_sqrt(slant_sq),
            d=_exact_sqrt(space_diag_sq),
        )


def _exact_sqrt(x: Fraction) -> Fraction:
    if x < 0:
        raise ValueError("negative square")
    num, den = x.numerator, x.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise ValueError(f"{x} is not the square of a rational")
    return Fraction(rn, rd)


def _is_integer_square(x: Fraction) -> bool:
    return x.denominator == 1 and is_square(x.numerator)


@dataclass(frozen=True)
class PlinthReport:
    distances: tuple[tuple[str, Fraction, bool], ...]
    perfect: bool

    def integer_lengths(self) -> list[int]:
        return sorted(isqrt(int(d)) for _, d, ok in self.distances if ok)


def verify_plinth(pl: Plinth) -> PlinthReport:
    """List all 28 squared IVDs and report which are squares of integers."""
    rows = tuple(
        (label, d2, _is_integer_square(d2)) for label, d2 in pl.squared_distances()
    )
    return PlinthReport(rows, all(ok for _, _, ok in rows))


def scale_plinth(pl: Plinth, i: int, j: int) -> Plinth:
    """Scale the ceiling by i^2, the base by j^2 and the slant edge by ij.

    This is the similarity map that preserves perfection; height_sq is
    recomputed from the scaled slant edge.
    """
    if i < 1 or j < 1:
        raise ValueError("scale factors must be >= 1")
    new_base = (pl.base[0] * j * j, pl.base[1] * j * j)
    new_ceiling = (pl.ceiling[0] * i * i, pl.ceiling[1] * i * i)
    new_slant_sq = pl.slant_edge_sq() * (i * j) ** 2
    h2 = (
        new_slant_sq
        - ((new_base[0] - new_ceiling[0]) / 2) ** 2
        - ((new_base[1] - new_ceiling[1]) / 2) ** 2
    )
    if h2 < 0:
        raise ValueError("scaling would force a negative squared height")
    return Plinth(new_base, new_ceiling, h2)


def ppf_from_plinth(pl: Plinth) -> Plinth:
    """Degenerate (height-zero) perfect picture frame in the scaling family
    of a perfect plinth: base scaled by c^2, ceiling by (d-a)^2, slant by
    c(d-a), where (a, c, d) are the internal trapezium's slant, short
    parallel side and diagonal."""
    if not verify_plinth(pl).perfect:
        raise ValueError("input plinth is not perfect")
    tz = pl.internal_trapezium()
    c, d, a = tz.c, tz.d, tz.a
    s_base = c * c
    s_ceiling = (d - a) ** 2
    new_base = (pl.base[0] * s_base, pl.base[1] * s_base)
    new_ceiling = (pl.ceiling[0] * s_ceiling, pl.ceiling[1] * s_ceiling)
    new_slant_sq = pl.slant_edge_sq() * (c * (d - a)) ** 2
    h2 = (
        new_slant_sq
        - ((new_base[0] - new_ceiling[0]) / 2) ** 2
        - ((new_base[1] - new_ceiling[1]) / 2) ** 2
    )
    if h2 != 0:
        raise ValueError("picture-frame scaling did not degenerate the plinth")
    return Plinth(new_base, new_ceiling, Fraction(0))


# The smallest perfect plinth (ceiling diagonal 119, base diagonal 221,
# slant edge 99, face diagonals 125 and 174, space diagonal 190).  Edge
# lengths are reconstructed from the trapezium identity 190^2 - a^2 = 119*221.
SMALLEST_PERFECT_PLINTH = Plinth(
    base=(Fraction(104), Fraction(195)),
    ceiling=(Fraction(56), Fraction(105)),
    height_sq=Fraction(7200),
)
