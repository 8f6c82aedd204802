"""Homomorphisms between the contact semi-ring and its classical sub-quotients.

Each map checks that its argument lies in the sub-semi-ring it is defined
on and raises :class:`NotInSubsemiring` otherwise.
"""
from __future__ import annotations

import random
from fractions import Fraction

from ..intervals import EMPTY, INF, IntervalSet
from .contact import CONTACT_ONE, CONTACT_ZERO, ContactMap, _cells, contact_add
from .delay import DelayedLifetime
from .endo import MonotoneEndo


class NotInSubsemiring(ValueError):
    pass


def bool_to_contact(x: bool) -> ContactMap:
    return CONTACT_ONE if x else CONTACT_ZERO


def lifetime_to_contact(lifetime: IntervalSet) -> ContactMap:
    """``I -> (t -> {0} on I, empty elsewhere)``."""
    return ContactMap.window(lifetime, 0)


def contact_to_lifetime(f: ContactMap) -> IntervalSet:
    """Inverse of :func:`lifetime_to_contact` on its image."""
    support = f.support()
    if f != lifetime_to_contact(support):
        raise NotInSubsemiring("map is not an indicator of a lifetime")
    return support


def _is_degenerate(span) -> bool:
    return all(lo == hi for lo, hi in span)


def contact_to_tropical(f: ContactMap):
    """Constant map to a finite set ``X`` goes to ``min X`` (``inf`` for the empty set)."""
    if f.breaks or not _is_degenerate(f.spans[0]) or any(lo[1] != 0 for lo, _ in f.spans[0]):
        raise NotInSubsemiring("tropical image needs a constant map to a finite set")
    span = f.spans[0]
    return span[0][0][0] if span else INF


def contact_to_delay(f: ContactMap) -> DelayedLifetime:
    """Additive map ``phi -> (support, sup of all delays)``.

    Defined on maps with finite, non-negative, bounded delay sets.
    """
    m = Fraction(0)
    for (lo, hi), span in zip(_cells(f.breaks), f.spans):
        if not _is_degenerate(span):
            raise NotInSubsemiring("delay sets must be finite")
        for p, _ in span:
            ends = [x for x in (lo, hi) if x not in (INF, -INF)]
            if (lo == -INF and p[1] < 0) or (hi == INF and p[1] > 0):
                raise NotInSubsemiring("delays must be bounded")
            vals = [p[0] + p[1] * x for x in ends] or [p[0]]
            m = max(m, *vals)
            if min(vals) < 0:
                raise NotInSubsemiring("delays must be non-negative")
    for v in f.points:
        for c, d in v:
            if c != d or c < 0:
                raise NotInSubsemiring("delay sets must be finite and non-negative")
            m = max(m, d)
    return DelayedLifetime(f.support(), m)


def contact_to_endo(f: ContactMap) -> MonotoneEndo:
    """``phi -> (t -> min phi(t) + t)``, ``inf`` where ``phi(t)`` is empty.

    Products reverse order: ``contact_to_endo(x * y)`` is
    ``endo_compose(contact_to_endo(y), contact_to_endo(x))``, since a walk
    applies x's arrival map first.

    The image must be right-continuous and non-decreasing; anything else is
    outside the sub-semi-ring.
    """
    pieces = []
    cells = _cells(f.breaks)
    for k, ((lo, hi), span) in enumerate(zip(cells, f.spans)):
        if not _is_degenerate(span):
            raise NotInSubsemiring("delay sets must be finite")
        if span:
            p = span[0][0]
            piece = (p[1] + 1, p[0])
        else:
            piece = (Fraction(0), INF)
        if k > 0:
            b = f.breaks[k - 1]
            right = INF if piece[1] == INF else piece[0] * b + piece[1]
            v = f.points[k - 1]
            here = v.lower + b if v else INF
            if here != right:
                raise NotInSubsemiring(f"image is not right-continuous at t={b}")
        pieces.append((lo, *piece))
    try:
        return MonotoneEndo(tuple(pieces))
    except ValueError as exc:
        raise NotInSubsemiring(str(exc)) from None


def endo_to_contact(w: MonotoneEndo) -> ContactMap:
    """A preimage of ``w`` under :func:`contact_to_endo`: ``t -> {w(t) - t}``."""
    breaks, points, spans = [], [], []
    for lo, hi, a, b in w.segments():
        if lo != -INF:
            breaks.append(lo)
            points.append(EMPTY if b == INF else IntervalSet.point(a * lo + b - lo))
        if b == INF:
            spans.append(())
        else:
            fn = (b, a - 1)
            spans.append(((fn, fn),))
    return ContactMap(tuple(breaks), tuple(points), tuple(spans))


def random_tropical_contact(rng: random.Random) -> ContactMap:
    vals = rng.sample(range(0, 20), rng.randint(0, 3))
    return ContactMap.from_records([(-INF, INF, True, [(v, v) for v in vals])]) if vals else CONTACT_ZERO


def random_delay_contact(rng: random.Random) -> ContactMap:
    out = CONTACT_ZERO
    for _ in range(rng.randint(0, 3)):
        a = Fraction(rng.randint(-10, 10), rng.choice((1, 2)))
        b = a + rng.randint(0, 6)
        out = contact_add(out, ContactMap.window(IntervalSet([(a, b)]), rng.randint(0, 9)))
    return out


def random_endo_contact(rng: random.Random) -> ContactMap:
    from .endo import random_endo
    return endo_to_contact(random_endo(rng))
