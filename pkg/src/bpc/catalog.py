"""Constructors for the named split curves used by the exclusion and scan engines.

Each constructor returns a CatalogCurve bundling the curve, its expected
torsion x-coordinates, and any known generators.  Generators are always
validated with on_curve; a printed parametric generator that fails the
check is dropped rather than emitted (see t2_curve).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import is_squarefree
from .elliptic import CurvePoint, SplitCubic, on_curve, torsion_points
from .pythagoras import ParamPair

_FACE_IDS = ("EF1", "EF2", "EF3", "EF4")
_INTERNAL_IDS = ("EI1", "EI2", "EI3", "EI4")


@dataclass(frozen=True)
class CatalogCurve:
    """A named curve instance with its torsion data and known generators."""

    id: str
    params: tuple[int, ...]
    curve: SplitCubic
    expected_torsion_x: tuple[Fraction, ...]
    known_generators: tuple[CurvePoint, ...]

    def __post_init__(self) -> None:
        for g in self.known_generators:
            if not on_curve(self.curve, g):
                raise ValueError(f"generator {g} not on curve {self.id}")

    @property
    def key(self) -> str:
        """Registry key, e.g. 'EF1:5:2' or 'CN:6'."""
        return ":".join([self.id] + [str(v) for v in self.params])


def _build(
    cid: str,
    params: tuple[int, ...],
    curve: SplitCubic,
    generators: tuple[CurvePoint, ...] = (),
) -> CatalogCurve:
    tx = tuple(sorted({p.x for p in torsion_points(curve) if p is not None}))
    return CatalogCurve(cid, params, curve, tx, generators)


def _legs(pair: ParamPair) -> tuple[int, int, int]:
    """(odd leg a, even leg b, hypotenuse d) for the pair."""
    b, a = pair.legs
    return a, b, pair.hypotenuse


def ef_curve(i: int, pair: ParamPair) -> CatalogCurve:
    """Face aspect-ratio curve i in 1..4 at (p, q).

    With a = p^2-q^2 and b = 2pq:
      1: x(x+a^2)(x+b^2)      2: x(x+a^4)(x+b^4)
      3: x(x+a^2)(x+(a+b)^2)  4: x(x+b^2)(x+(a+b)^2)
    """
    a, b, _ = _legs(pair)
    offsets = {
        1: (a * a, b * b),
        2: (a**4, b**4),
        3: (a * a, (a + b) ** 2),
        4: (b * b, (a + b) ** 2),
    }
    if i not in offsets:
        raise ValueError("curve index must be in 1..4")
    r, s = offsets[i]
    curve = SplitCubic.from_offsets(0, r, s)
    return _build(_FACE_IDS[i - 1], (pair.p, pair.q), curve)


def ei_curve(i: int, pair: ParamPair) -> CatalogCurve:
    """Internal-rectangle aspect-ratio curve i in 1..4 at (p, q).

    With a = p^2-q^2, b = 2pq, c = p^2+q^2:
      1: x(x-a^4)(x+b^4+2a^2b^2)   2: x(x-b^4)(x+c^4-b^4)
      3: x(x-a^2)(x-c^2)           4: x(x-b^2)(x-c^2)
    """
    p, q = pair.p, pair.q
    a, b, c = _legs(pair)
    roots = {
        1: (a**4, -8 * p * p * q * q * (p**4 + q**4)),
        2: (b**4, -(c**4 - b**4)),
        3: (a * a, c * c),
        4: (b * b, c * c),
    }
    if i not in roots:
        raise ValueError("curve index must be in 1..4")
    r, s = roots[i]
    curve = SplitCubic.from_roots(0, r, s)
    return _build(_INTERNAL_IDS[i - 1], (pair.p, pair.q), curve)


def congruent_curve(n: int) -> CatalogCurve:
    """The curve x(x-n)(x+n) = y^2 for square-free n >= 1."""
    if n < 1 or not is_squarefree(n):
        raise ValueError("n must be a square-free positive integer")
    curve = SplitCubic.from_roots(0, n, -n)
    return _build("CN", (n,), curve)


def t2_curve(pair: ParamPair) -> CatalogCurve:
    """The edge-cuboid curve (x+a^2)(x+b^2)(x+d^2) = y^2 for legs (a, b)
    and hypotenuse d.

    The non-torsion point (0, abd) is always a generator.  The parametric
    candidate x = 2q^2(p-q)^2, y = x(p^2+2pq-q^2) is also tried, but it
    does not satisfy the curve equation and is therefore dropped.
    """
    p, q = pair.p, pair.q
    a, b, d = _legs(pair)
    curve = SplitCubic.from_offsets(a * a, b * b, d * d)
    gens = [CurvePoint(Fraction(0), Fraction(a * b * d))]
    x0 = Fraction(2 * q * q * (p - q) ** 2)
    cand = CurvePoint(x0, x0 * (p * p + 2 * p * q - q * q))
    if on_curve(curve, cand):
        gens.append(cand)
    return _build("T2", (p, q), curve, tuple(gens))


def t5_curve(pair: ParamPair, variant: str = "a") -> CatalogCurve:
    """The internal-rectangle edge-cuboid curve (x+a^2)(e^2-x)(g^2-x) = y^2.

    The internal right triangle has legs (a, e) and hypotenuse g; the two
    Pythagorean leg assignments give distinct curves:
      variant 'a': (a, e) = (p^2-q^2, 2pq), generator x = 4p^2q^2-p^4+q^4
      variant 'b': (a, e) = (2pq, p^2-q^2), generator x = (p^2+q^2)(p-q)^2-4p^2q^2
    with y = 2pq(p^4-q^4) in both cases; (0, aeg) is always a generator too.
    """
    p, q = pair.p, pair.q
    leg_odd, leg_even, g = _legs(pair)
    if variant == "a":
        a, e = leg_odd, leg_even
        x0 = 4 * p * p * q * q - p**4 + q**4
    elif variant == "b":
        a, e = leg_even, leg_odd
        x0 = (p * p + q * q) * (p - q) ** 2 - 4 * p * p * q * q
    else:
        raise ValueError("variant must be 'a' or 'b'")
    curve = SplitCubic.from_roots(-a * a, e * e, g * g)
    y0 = a * e * g
    gens = (
        CurvePoint(Fraction(0), Fraction(y0)),
        CurvePoint(Fraction(x0), Fraction(y0)),
    )
    return _build("T5" + variant, (p, q), curve, gens)


def face_cuboid_curve(u: int, w: int) -> SplitCubic:
    """Generic face-cuboid curve x(x+u^2)(x+w^2) = y^2."""
    if u < 1 or w < 1 or u == w:
        raise ValueError("need distinct positive u, w")
    return SplitCubic.from_offsets(0, u * u, w * w)


def curve_by_key(key: str) -> CatalogCurve:
    """Rebuild a catalog curve from its registry key (inverse of .key)."""
    parts = key.split(":")
    cid, args = parts[0], [int(v) for v in parts[1:]]
    if cid == "CN":
        return congruent_curve(args[0])
    pair = ParamPair(args[0], args[1])
    if cid in _FACE_IDS:
        return ef_curve(_FACE_IDS.index(cid) + 1, pair)
    if cid in _INTERNAL_IDS:
        return ei_curve(_INTERNAL_IDS.index(cid) + 1, pair)
    if cid == "T2":
        return t2_curve(pair)
    if cid in ("T5a", "T5b"):
        return t5_curve(pair, cid[-1])
    raise ValueError(f"unknown curve id {cid!r}")
