"""Non-decreasing piecewise-affine endomorphisms of the tropical line.

A :class:`MonotoneEndo` maps a departure time to an arrival time.  Addition
is the pointwise minimum and multiplication is composition
``(w * v)(t) = w(v(t))``.  Maps are right-continuous: at a breakpoint the
value comes from the piece that starts there.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from ..intervals import INF, format_scalar, scalar
from .base import Semiring

# A piece is (start, slope, intercept); intercept INF (with slope 0) is the
# constant-infinity map.  The first piece starts at -INF.


def _value(slope, intercept, t):
    if intercept == INF:
        return INF
    return slope * t + intercept


def _rep(lo, hi):
    if lo == -INF:
        return hi - 1 if hi != INF else Fraction(0)
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


@dataclass(frozen=True)
class MonotoneEndo:
    pieces: tuple

    def __post_init__(self):
        pieces = []
        for start, slope, intercept in self.pieces:
            start, slope, intercept = scalar(start), scalar(slope), scalar(intercept)
            if intercept == INF:
                slope = Fraction(0)
            if slope < 0:
                raise ValueError("pieces must have non-negative slope")
            if pieces and pieces[-1][1:] == (slope, intercept):
                continue
            pieces.append((start, slope, intercept))
        if not pieces or pieces[0][0] != -INF:
            raise ValueError("the first piece must start at -inf")
        for (s0, a0, b0), (s1, a1, b1) in zip(pieces, pieces[1:]):
            if not s0 < s1:
                raise ValueError("piece starts must increase")
            if _value(a0, b0, s1) > _value(a1, b1, s1):
                raise ValueError(f"map decreases at t={s1}")
        last_slope, last_icpt = pieces[-1][1:]
        if last_icpt != INF and last_slope == 0:
            raise ValueError("map must tend to infinity")
        object.__setattr__(self, "pieces", tuple(pieces))

    def __call__(self, t):
        if t == INF:
            return INF
        piece = self.pieces[0]
        for p in self.pieces[1:]:
            if p[0] > t:
                break
            piece = p
        return _value(piece[1], piece[2], t)

    def breaks(self) -> list:
        return [p[0] for p in self.pieces[1:]]

    def segments(self):
        """Yield ``(lo, hi, slope, intercept)`` over ``[lo, hi)``."""
        ends = self.breaks() + [INF]
        for (start, a, b), end in zip(self.pieces, ends):
            yield start, end, a, b

    def __str__(self) -> str:
        out = []
        for lo, hi, a, b in self.segments():
            f = "inf" if b == INF else f"{format_scalar(a)}*t+{format_scalar(b)}"
            out.append(f"[{format_scalar(lo)},{format_scalar(hi)}): {f}")
        return "; ".join(out)

    @classmethod
    def affine(cls, slope, intercept) -> "MonotoneEndo":
        return cls(((-INF, slope, intercept),))


IDENTITY = MonotoneEndo.affine(1, 0)
NEVER = MonotoneEndo(((-INF, 0, INF),))


def endo_min(w: MonotoneEndo, v: MonotoneEndo) -> MonotoneEndo:
    cuts = sorted(set(w.breaks()) | set(v.breaks()))
    bounds = [-INF] + cuts + [INF]
    pieces = []
    for lo, hi in zip(bounds, bounds[1:]):
        t = _rep(lo, hi)
        fw = _piece_at(w, t)
        fv = _piece_at(v, t)
        sub = [lo]
        if INF not in (fw[1], fv[1]) and fw[0] != fv[0]:
            x = (fv[1] - fw[1]) / (fw[0] - fv[0])
            if lo < x < hi:
                sub.append(x)
        sub.append(hi)
        for a, b in zip(sub, sub[1:]):
            r = _rep(a, b)
            lower = fw if _value(*fw, r) <= _value(*fv, r) else fv
            pieces.append((a, *lower))
    return MonotoneEndo(tuple(pieces))


def _piece_at(w: MonotoneEndo, t):
    piece = w.pieces[0]
    for p in w.pieces[1:]:
        if p[0] > t:
            break
        piece = p
    return piece[1], piece[2]


def endo_compose(w: MonotoneEndo, v: MonotoneEndo) -> MonotoneEndo:
    """``t -> w(v(t))``; w's breakpoints are pulled back through v's affine pieces."""
    pieces = []
    wbreaks = w.breaks()
    for lo, hi, a, b in v.segments():
        if b == INF:
            pieces.append((lo, Fraction(0), INF))
            continue
        if a == 0:
            wa, wb = _piece_at(w, b)
            pieces.append((lo, Fraction(0), INF if wb == INF else wa * b + wb))
            continue
        vlo = -INF if lo == -INF else a * lo + b
        vhi = INF if hi == INF else a * hi + b
        sub = [lo] + [(x - b) / a for x in wbreaks if vlo < x < vhi] + [hi]
        for s, e in zip(sub, sub[1:]):
            wa, wb = _piece_at(w, a * _rep(s, e) + b)
            if wb == INF:
                pieces.append((s, Fraction(0), INF))
            else:
                pieces.append((s, wa * a, wa * b + wb))
    return MonotoneEndo(tuple(pieces))


ENDO = Semiring("endomorphism", add=endo_min, mul=endo_compose, zero=NEVER, one=IDENTITY)


def random_endo(rng: random.Random, max_breaks: int = 3, scale: int = 20) -> MonotoneEndo:
    """Random arrival-time map with ``w(t) >= t``; sometimes ends in a never-arrives tail."""
    k = rng.randint(0, max_breaks)
    starts = sorted(rng.sample(range(-scale, scale), k))
    starts = [Fraction(s, rng.choice((1, 2))) for s in starts]
    starts = sorted(set(starts))
    pieces = [(-INF, Fraction(1), Fraction(rng.randint(0, 5)))]
    for i, s in enumerate(starts):
        prev = pieces[-1]
        left = _value(prev[1], prev[2], s)
        if left == INF:
            break
        last = i == len(starts) - 1
        if last and rng.random() < 0.2:
            pieces.append((s, Fraction(0), INF))
            break
        slope = Fraction(rng.choice((1, 2) if last else (0, 1, 2, Fraction(1, 2))))
        base = max(left, s) + rng.randint(0, 4)
        if slope == 0:
            base = max(base, starts[i + 1])
        elif slope < 1 and not last:
            # keep w(t) >= t across the piece
            end = starts[i + 1]
            base = max(base, end - slope * (end - s))
        pieces.append((s, slope, base - slope * s))
    return MonotoneEndo(tuple(pieces))
