"""Scan engines: the SFP-collision scan, the curve-driven scan, the
aspect-ratio exclusion verdicts, and the empirical 2-BPC scan.

The collision scan exploits that for admissible (p, q) the four numbers
2u, v, p-q, p+q (u the even one of p, q and v the odd one) are pairwise
coprime, so the square-free part of 2pq(p^2-q^2) is the product of their
individual square-free parts, each at most 2*p_max.  Signatures for all
pairs are computed vectorised and collisions found with one sort - a
two-pass design that keeps memory at a few hundred MB for p_max ~ 10^4.
"""

from __future__ import annotations

import enum
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .arith import is_square, sfp_sieve
from .catalog import ef_curve, ei_curve
from .cuboid import (
    BpcClass,
    IvdSquares,
    KlnTriple,
    classify,
    cuboid_from_kln,
    check_cousin,
    _sqrt_ratio,
)
from .elliptic import (
    CurvePoint,
    RankBound,
    RankStatus,
    square_x_points,
    two_descent,
)
from .pythagoras import ParamPair, admissible_pairs, leg_product_sfp

log = logging.getLogger(__name__)

# int64 signature safety: the signature is at most 8 * p_max^4
_MAX_VECTOR_P = 30_000


@dataclass(frozen=True)
class BpcHit:
    kind: BpcClass
    kln: KlnTriple
    source_pairs: tuple[ParamPair, ...]
    shared_sfp: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "kln": [str(self.kln.k), str(self.kln.l), str(self.kln.n)],
            "source_pairs": [[sp.p, sp.q] for sp in self.source_pairs],
            "shared_sfp": str(self.shared_sfp),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BpcHit":
        return cls(
            kind=BpcClass(d["kind"]),
            kln=KlnTriple(*(int(v) for v in d["kln"])),
            source_pairs=tuple(ParamPair(p, q) for p, q in d["source_pairs"]),
            shared_sfp=int(d["shared_sfp"]),
        )


# ---------------------------------------------------------------------------
# Signature computation (vectorised)


def _signature_arrays(p_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(p, q, signature) arrays over all admissible pairs with p <= p_max,
    in lexicographic (p, q) order."""
    if p_max > _MAX_VECTOR_P:
        raise ValueError(
            f"p_max {p_max} exceeds the int64-safe limit {_MAX_VECTOR_P}; "
            "partition the scan by p-blocks with a wider signature type"
        )
    sfp_arr = np.asarray(sfp_sieve(2 * p_max), dtype=np.int64)
    ps, qs, sigs = [], [], []
    for p in range(2, p_max + 1):
        q = np.arange(1 + p % 2, p, 2, dtype=np.int64)
        q = q[np.gcd(np.int64(p), q) == 1]
        if q.size == 0:
            continue
        if p % 2 == 0:
            even_part = int(sfp_arr[2 * p])
            sig = even_part * sfp_arr[q]
        else:
            sig = int(sfp_arr[p]) * sfp_arr[2 * q]
        sig = sig * sfp_arr[p - q] * sfp_arr[p + q]
        ps.append(np.full(q.size, p, dtype=np.int32))
        qs.append(q.astype(np.int32))
        sigs.append(sig)
    return (
        np.concatenate(ps),
        np.concatenate(qs),
        np.concatenate(sigs),
    )


@dataclass
class SfpTable:
    """Map from leg-product square-free part to the pairs attaining it."""

    table: dict[int, list[ParamPair]]

    @classmethod
    def build(cls, p_max: int) -> "SfpTable":
        ps, qs, sigs = _signature_arrays(p_max)
        table: dict[int, list[ParamPair]] = {}
        for p, q, s in zip(ps.tolist(), qs.tolist(), sigs.tolist()):
            table.setdefault(s, []).append(ParamPair(p, q))
        return cls(table)

    def collisions(self) -> list[tuple[int, list[ParamPair]]]:
        return sorted(
            (s, pairs) for s, pairs in self.table.items() if len(pairs) > 1
        )


def _collision_groups(p_max: int) -> list[tuple[int, list[ParamPair]]]:
    """(signature, pairs) for every signature shared by >= 2 pairs."""
    ps, qs, sigs = _signature_arrays(p_max)
    order = np.argsort(sigs, kind="stable")
    s_sorted = sigs[order]
    # boundaries of runs of equal signature
    edges = np.flatnonzero(np.diff(s_sorted) != 0) + 1
    starts = np.concatenate(([0], edges))
    ends = np.concatenate((edges, [s_sorted.size]))
    groups = []
    for a, b in zip(starts.tolist(), ends.tolist()):
        if b - a < 2:
            continue
        idx = order[a:b]
        pairs = sorted(
            ParamPair(int(ps[i]), int(qs[i])) for i in idx
        )
        groups.append((int(s_sorted[a]), pairs))
    groups.sort()
    return groups


# ---------------------------------------------------------------------------
# Collision scan (Algorithm 1)


def pair_to_kln(pp1: ParamPair, pp2: ParamPair) -> list[KlnTriple]:
    """Candidate (k, l, n) triples from two pairs with equal leg-product
    square-free part: each pair contributes one leg to the shared leg k
    (four orientation choices), the other legs become l > n; only triples
    with ln a perfect square are kept, gcd-reduced and deduplicated."""
    out: list[KlnTriple] = []
    e1, o1 = pp1.legs
    e2, o2 = pp2.legs
    for shared1, other1 in ((e1, o1), (o1, e1)):
        for shared2, other2 in ((e2, o2), (o2, e2)):
            k = lcm(shared1, shared2)
            l0 = other1 * (k // shared1)
            n0 = other2 * (k // shared2)
            if l0 == n0:
                continue
            l, n = (l0, n0) if l0 > n0 else (n0, l0)
            if not is_square(l * n):
                continue
            t = KlnTriple(k, l, n).reduced()
            if t not in out:
                out.append(t)
    return out


def conjugate_kln(t: KlnTriple) -> KlnTriple:
    """The other (k, l, n) representation of the same cuboid: the roles of
    k and m = sqrt(ln) swap while l:n is preserved."""
    m = isqrt(t.ln)
    if m * m != t.ln:
        raise ValueError("conjugation requires ln square")
    l2 = Fraction(t.l * t.k, m)
    n2 = Fraction(t.n * t.k, m)
    den = lcm(l2.denominator, n2.denominator)
    return KlnTriple(m * den, int(l2 * den), int(n2 * den)).reduced()


def canonical_kln(t: KlnTriple) -> KlnTriple:
    """Of the two conjugate representations, the one with k <= sqrt(ln)."""
    t = t.reduced()
    return t if t.k <= isqrt(t.ln) else conjugate_kln(t)


def cuboid_key(t: KlnTriple) -> tuple[int, int, int]:
    """Similarity-class key of the cuboid induced by t: the primitive
    squared-edge triple in sorted order."""
    ivd = cuboid_from_kln(t)
    g = gcd(gcd(ivd.sa, ivd.sb), ivd.sc)
    return tuple(sorted((ivd.sa // g, ivd.sb // g, ivd.sc // g)))


def _hit_from_triple(
    t: KlnTriple, sources: tuple[ParamPair, ...]
) -> Optional[BpcHit]:
    """Classify the cuboid induced by t; return a hit for F/I 3-BPCs."""
    k2, ln, l2 = t.k * t.k, t.ln, t.l * t.l
    face_ok = is_square(k2 + ln)
    internal_ok = is_square(l2 - ln)
    if not face_ok and not internal_ok:
        return None
    c = classify(*_ivd_tuple(cuboid_from_kln(t)))
    if c.cls == BpcClass.PERFECT:
        log.critical("PERFECT CUBOID CANDIDATE from %s (sources %s)", t, sources)
    if c.cls not in (BpcClass.F_BPC, BpcClass.I_BPC):
        return None
    expected = BpcClass.F_BPC if face_ok else BpcClass.I_BPC
    if c.cls != expected:
        raise AssertionError(f"classification mismatch for {t}: {c.cls}")
    return BpcHit(kind=c.cls, kln=t, source_pairs=sources, shared_sfp=c.shared_sfp)


def _ivd_tuple(ivd: IvdSquares) -> tuple[int, int, int]:
    return (ivd.sa, ivd.sb, ivd.sc)


def algo1_scan(
    p_max: int, checkpoint_path: Optional[str] = None
) -> list[BpcHit]:
    """SFP-collision scan over all admissible pairs with p <= p_max.

    Deterministic: hits are emitted in order of the (p, q, p', q') collision
    that first produced their reduced triple.  A completed scan can be
    cached at checkpoint_path and is reused verbatim on the next call.
    """
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    if checkpoint_path:
        cached = _load_checkpoint(checkpoint_path, p_max)
        if cached is not None:
            return cached
    hits: list[BpcHit] = []
    seen: set[tuple[int, int, int]] = set()
    for _sig, pairs in _collision_groups(p_max):
        for i in range(len(pairs)):
            for j in range(i + 1, len(pairs)):
                for t in pair_to_kln(pairs[i], pairs[j]):
                    key = cuboid_key(t)
                    if key in seen:
                        continue
                    seen.add(key)
                    hit = _hit_from_triple(
                        canonical_kln(t), (pairs[i], pairs[j])
                    )
                    if hit is not None:
                        hits.append(hit)
    hits.sort(key=lambda h: (h.source_pairs, (h.kln.k, h.kln.l, h.kln.n)))
    if checkpoint_path:
        _save_checkpoint(checkpoint_path, p_max, hits)
    return hits


def _load_checkpoint(path: str, p_max: int) -> Optional[list[BpcHit]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if data.get("p_max") != p_max or data.get("phase") != "done":
        return None
    return [BpcHit.from_dict(d) for d in data["hits"]]


def _save_checkpoint(path: str, p_max: int, hits: list[BpcHit]) -> None:
    payload = {
        "phase": "done",
        "p_max": p_max,
        "hit_count": len(hits),
        "hits": [h.to_dict() for h in hits],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


# ---------------------------------------------------------------------------
# Curve-driven scan (Algorithm 2)


def _integerize(t: Fraction) -> tuple[int, int]:
    return t.numerator, t.denominator


def _cuboid_candidates_face(
    pair: ParamPair, xs: Iterable[Fraction]
) -> list[tuple[int, int, int]]:
    """Map square-x points on the face curve back to cuboid candidates.

    x = a^2 b^2 (d^2 + T)/T gives T = a^2 b^2 d^2/(x - a^2 b^2); the cuboid
    with squared edges proportional to (a^2 T, b^2 T, T^2) is a face 3-BPC
    exactly when the remaining square-class conditions hold, which classify
    decides."""
    b, a = pair.legs
    d = pair.hypotenuse
    out = []
    a2b2 = a * a * b * b
    for x in xs:
        if x <= a2b2:
            continue
        big_t = Fraction(a2b2 * d * d) / (x - a2b2)
        r, s = _integerize(big_t)
        out.append((a * a * r * s, b * b * r * s, r * r))
    return out


def _cuboid_candidates_internal(
    aa: int, f: int, xs: Iterable[Fraction]
) -> list[tuple[int, int, int]]:
    """Map square-x points on an internal curve (irrational-rectangle legs
    aa and f) back to cuboid candidates: T = aa^2 f^2 g^2/(x + aa^2 f^2),
    cuboid proportional to (aa^2 T, T(f^2 - T), T^2)."""
    g2 = aa * aa + f * f
    a2f2 = aa * aa * f * f
    out = []
    for x in xs:
        if x <= -a2f2:
            continue
        big_t = Fraction(a2f2 * g2) / (x + a2f2)
        if not 0 < big_t < f * f:
            continue
        r, s = _integerize(big_t)
        out.append((aa * aa * r * s, r * (f * f * s - r), r * r))
    return out


def kln_from_cuboid(sa: int, sb: int, sc: int) -> Optional[KlnTriple]:
    """Reconstruct the reduced (k, l, n) triple of an F- or I-BPC cuboid.

    The distinguished edge slot (the one whose square is ln(k^2+ln)) obeys
    l/n = (sa+sb+sc)/s_edge and the other two slots have ratio (m/k)^2;
    all assignments are tried and validated by rebuilding the cuboid."""
    total = sa + sb + sc
    for edge, p1, p2 in (
        (sa, sb, sc), (sa, sc, sb), (sb, sa, sc),
        (sb, sc, sa), (sc, sa, sb), (sc, sb, sa),
    ):
        ratio = Fraction(total, edge)
        if ratio <= 1:
            continue
        l0, n0 = ratio.numerator, ratio.denominator
        if not is_square(l0 * n0):
            continue
        m_over_k2 = Fraction(p1, p2)
        num, den = m_over_k2.numerator, m_over_k2.denominator
        if not (is_square(num) and is_square(den)):
            continue
        m0 = isqrt(l0 * n0)
        # k/m = sqrt(den/num); scale (l, n) so that k is integral
        k_num, k_den = m0 * isqrt(den), isqrt(num)
        scale = k_den // gcd(k_num, k_den)
        k = k_num * scale // k_den
        cand = KlnTriple(k, l0 * scale, n0 * scale).reduced()
        rebuilt = cuboid_from_kln(cand)
        ra, rb, rc = sorted((rebuilt.sa, rebuilt.sb, rebuilt.sc))
        oa, ob, oc = sorted((sa, sb, sc))
        if ra * ob == rb * oa and ra * oc == rc * oa:
            return cand
    return None


@dataclass(frozen=True)
class Algo2Result:
    hits: tuple[BpcHit, ...]
    rank_zero_pairs: tuple[tuple[ParamPair, str], ...]
    inconclusive_pairs: tuple[tuple[ParamPair, str], ...]


def algo2_scan(
    pairs: Sequence[ParamPair],
    kind: BpcClass,
    depth: int = 5,
    search_bound: int = 64,
    torsor_bound: int = 200,
) -> Algo2Result:
    """Curve-driven scan: for each pair run a 2-descent on the relevant
    curve(s), harvest points with square x from any certified generators,
    and map them back to cuboids.  Pairs whose descent is inconclusive are
    reported, never silently dropped."""
    if kind not in (BpcClass.F_BPC, BpcClass.I_BPC):
        raise ValueError("kind must be F_BPC or I_BPC")
    hits: list[BpcHit] = []
    seen: set[tuple[int, int, int]] = set()
    rank_zero: list[tuple[ParamPair, str]] = []
    inconclusive: list[tuple[ParamPair, str]] = []
    for pair in pairs:
        if kind == BpcClass.F_BPC:
            jobs = [(ef_curve(2, pair), None)]
        else:
            b, a = pair.legs
            jobs = [(ei_curve(1, pair), (a, b)), (ei_curve(2, pair), (b, a))]
        for cat, legs in jobs:
            rb = two_descent(
                cat.curve,
                known_points=cat.known_generators,
                search_bound=search_bound,
                torsor_bound=torsor_bound,
            )
            if rb.status == RankStatus.RANK_ZERO:
                rank_zero.append((pair, cat.id))
                continue
            if rb.status == RankStatus.INCONCLUSIVE:
                inconclusive.append((pair, cat.id))
                continue
            xs: set[Fraction] = set()
            for gen in rb.witnesses:
                for pt in square_x_points(cat.curve, gen, depth):
                    xs.add(pt.x)
            if kind == BpcClass.F_BPC:
                cands = _cuboid_candidates_face(pair, sorted(xs))
            else:
                cands = _cuboid_candidates_internal(legs[0], legs[1], sorted(xs))
            for sa, sb, sc in cands:
                c = classify(sa, sb, sc)
                if c.cls != kind:
                    continue
                t = kln_from_cuboid(sa, sb, sc)
                if t is None:
                    continue
                t = canonical_kln(t)
                key = cuboid_key(t)
                if key in seen:
                    continue
                seen.add(key)
                hits.append(
                    BpcHit(
                        kind=kind,
                        kln=t,
                        source_pairs=(pair,),
                        shared_sfp=c.shared_sfp,
                    )
                )
    return Algo2Result(tuple(hits), tuple(rank_zero), tuple(inconclusive))


def face_pair_of_hit(hit: BpcHit) -> ParamPair:
    """The Pythagorean parameters of the irrational-rectangle aspect ratio
    of a hit: legs (k, sqrt(ln)) for a face hit, (sqrt(l^2-ln), sqrt(ln))
    for an internal one."""
    t = hit.kln
    m = isqrt(t.ln)
    if hit.kind == BpcClass.F_BPC:
        legs = (t.k, m)
    else:
        legs = (isqrt(t.l * t.l - t.ln), m)
    from .pythagoras import pair_from_legs

    return pair_from_legs(*legs)


# ---------------------------------------------------------------------------
# Exclusion verdicts (Theorems 1 and 4 combinations)


class Verdict(enum.Enum):
    PROHIBITED = "Prohibited"
    NOT_PROHIBITED = "NotProhibited"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ExclusionVerdict:
    pair: ParamPair
    target: str  # "Face" or "Internal"
    verdict: Verdict
    bounds: tuple[tuple[str, RankBound], ...]

    def bound(self, curve_id: str) -> RankBound:
        return dict(self.bounds)[curve_id]


def _rank_statuses(
    pair: ParamPair,
    builder,
    search_bound: int,
    torsor_bound: int,
) -> list[tuple[str, RankBound]]:
    out = []
    for i in (1, 2, 3, 4):
        cat = builder(i, pair)
        rb = two_descent(
            cat.curve,
            known_points=cat.known_generators,
            search_bound=search_bound,
            torsor_bound=torsor_bound,
        )
        out.append((cat.id, rb))
    return out


def exclude_face(
    pair: ParamPair, search_bound: int = 64, torsor_bound: int = 200
) -> ExclusionVerdict:
    """Face aspect-ratio verdict: Prohibited when curve 1 or curve 2 (or
    both of 3 and 4) certify rank zero; NotProhibited when 1 and 2 and at
    least one of 3/4 certify positive rank; Unknown otherwise."""
    bounds = _rank_statuses(pair, ef_curve, search_bound, torsor_bound)
    st = {cid: rb.status for cid, rb in bounds}
    zero = lambda c: st[c] == RankStatus.RANK_ZERO
    pos = lambda c: st[c] == RankStatus.POSITIVE
    if zero("EF1") or zero("EF2") or (zero("EF3") and zero("EF4")):
        verdict = Verdict.PROHIBITED
    elif pos("EF1") and pos("EF2") and (pos("EF3") or pos("EF4")):
        verdict = Verdict.NOT_PROHIBITED
    else:
        verdict = Verdict.UNKNOWN
    return ExclusionVerdict(pair, "Face", verdict, tuple(bounds))


def exclude_internal(
    pair: ParamPair, search_bound: int = 64, torsor_bound: int = 200
) -> ExclusionVerdict:
    """Internal-rectangle verdict: Prohibited when both of curves 1/2 or
    both of curves 3/4 certify rank zero; NotProhibited when at least one
    of 1/2 and at least one of 3/4 certify positive rank."""
    bounds = _rank_statuses(pair, ei_curve, search_bound, torsor_bound)
    st = {cid: rb.status for cid, rb in bounds}
    zero = lambda c: st[c] == RankStatus.RANK_ZERO
    pos = lambda c: st[c] == RankStatus.POSITIVE
    if (zero("EI1") and zero("EI2")) or (zero("EI3") and zero("EI4")):
        verdict = Verdict.PROHIBITED
    elif (pos("EI1") or pos("EI2")) and (pos("EI3") or pos("EI4")):
        verdict = Verdict.NOT_PROHIBITED
    else:
        verdict = Verdict.UNKNOWN
    return ExclusionVerdict(pair, "Internal", verdict, tuple(bounds))


# ---------------------------------------------------------------------------
# 2-BPC empirical scan and pentacycle check


def two_bpc_scan(edge_bound: int) -> list[tuple[int, int, int]]:
    """Exhaustive scan of primitive squared-edge triples sa <= sb <= sc up
    to edge_bound for cuboids with exactly two irrational IVDs sharing a
    square-free part.  Expected empty at any tested scale."""
    if edge_bound < 2:
        raise ValueError("edge_bound must be >= 2")
    limit = 3 * edge_bound
    sfp_arr = sfp_sieve(limit)
    issq = bytearray(limit + 1)
    r = 0
    while r * r <= limit:
        issq[r * r] = 1
        r += 1
    found = []
    for sa in range(1, edge_bound + 1):
        for sb in range(sa, edge_bound + 1):
            for sc in range(sb, edge_bound + 1):
                if gcd(gcd(sa, sb), sc) != 1:
                    continue
                nonsq = []
                for v in (sa, sb, sc, sa + sb, sa + sc, sb + sc, sa + sb + sc):
                    if not issq[v]:
                        nonsq.append(v)
                        if len(nonsq) > 2:
                            break
                if len(nonsq) != 2:
                    continue
                if sfp_arr[nonsq[0]] != sfp_arr[nonsq[1]]:
                    continue
                c = classify(sa, sb, sc)
                if c.cls == BpcClass.TWO_BPC:
                    found.append((sa, sb, sc))
    return found


def pentacycle_check(
    trio: tuple[Fraction, Fraction, Fraction],
    t1: KlnTriple,
    t2: KlnTriple,
) -> bool:
    """True iff the middle fraction is the cousins' shared sqrt(ln)/k and
    the flanking fractions are sqrt(l/n) of the two triples in some order."""
    if not check_cousin(t1, t2):
        return False
    left, middle, right = (Fraction(v) for v in trio)
    shared = Fraction(isqrt(t1.ln), t1.k)
    flanks = {_sqrt_ratio(t1.l, t1.n), _sqrt_ratio(t2.l, t2.n)}
    return middle == shared and {left, right} == flanks
