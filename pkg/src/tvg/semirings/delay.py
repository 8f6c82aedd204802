"""Propagation-delay semi-ring: lifetimes paired with accumulated delay.

``(I, s) * (J, t) = (I & (J - s), s + t)`` and ``(I, s) + (J, t) = (I | J, max(s, t))``.
Every element with an empty lifetime is identified with ``(empty, 0)``;
without that quotient the zero element fails to annihilate.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..intervals import (EMPTY, INF, REALS, IntervalSet, format_intervalset, format_scalar,
                         intersect, parse_intervalset, scalar, shift, union)
from .base import Semiring


@dataclass(frozen=True)
class DelayedLifetime:
    lifetime: IntervalSet
    delay: Fraction = Fraction(0)

    def __post_init__(self):
        d = scalar(self.delay)
        if d < 0 or d == INF:
            raise ValueError(f"delay must be finite and non-negative, got {self.delay}")
        object.__setattr__(self, "delay", Fraction(0) if not self.lifetime else d)

    def __str__(self) -> str:
        return format_delayed(self)

    def arrivals(self) -> IntervalSet:
        """Worst-case arrival times: each send time shifted by the delay."""
        return shift(self.lifetime, self.delay)


PDS_ZERO = DelayedLifetime(EMPTY)
PDS_ONE = DelayedLifetime(REALS)


def pds_mul(a: DelayedLifetime, b: DelayedLifetime) -> DelayedLifetime:
    if not a.lifetime or not b.lifetime:
        return PDS_ZERO
    return DelayedLifetime(intersect(a.lifetime, shift(b.lifetime, -a.delay)), a.delay + b.delay)


def pds_add(a: DelayedLifetime, b: DelayedLifetime) -> DelayedLifetime:
    return DelayedLifetime(union(a.lifetime, b.lifetime), max(a.delay, b.delay))


DELAY = Semiring("delay", add=pds_add, mul=pds_mul, zero=PDS_ZERO, one=PDS_ONE,
                 format=lambda x: format_delayed(x))


# The literal definition on raw (lifetime, delay) tuples, with no quotient.
# Kept so the annihilation failure it exhibits stays under test.
LITERAL_DELAY = Semiring(
    "delay (unnormalized)",
    add=lambda a, b: (union(a[0], b[0]), max(a[1], b[1])),
    mul=lambda a, b: (intersect(a[0], shift(b[0], -a[1])), a[1] + b[1]),
    zero=(EMPTY, Fraction(0)),
    one=(REALS, Fraction(0)),
)


def format_delayed(x: DelayedLifetime) -> str:
    return f"({format_intervalset(x.lifetime)}; {format_scalar(x.delay)})"


_TEXT = re.compile(r"^\(\s*(.*)\s*;\s*([^;()]+?)\s*\)$")


def parse_delayed(text: str) -> DelayedLifetime:
    """Parse ``(intervalset; delay)``."""
    m = _TEXT.match(text.strip())
    if not m:
        raise ValueError(f"malformed delayed lifetime {text!r}")
    return DelayedLifetime(parse_intervalset(m.group(1)), scalar(m.group(2)))
