"""Exact finite unions of closed intervals.

An :class:`IntervalSet` is the carrier of the lifetime semi-ring: a finite,
sorted, pairwise non-touching list of closed intervals whose endpoints are
exact rationals (:class:`fractions.Fraction`) or the float infinities.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator, Union

INF = float("inf")

Scalar = Union[Fraction, float]


class InfiniteMeasure(ValueError):
    """Raised when the Lebesgue measure of an unbounded set is requested."""


def scalar(x) -> Scalar:
    """Coerce ``x`` to an exact Scalar.

    Ints, Fractions and decimal/rational strings become Fractions; floats are
    read through their shortest decimal repr so ``0.1`` means one tenth.
    The infinities pass through unchanged.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x in (INF, -INF):
            return x
        if x != x:
            raise ValueError("NaN is not a Scalar")
        return Fraction(repr(x))
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        if s in ("-inf", "-infinity"):
            return -INF
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a Scalar")


def format_scalar(x: Scalar) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _normalize(pairs: Iterable[tuple]) -> tuple:
    items = []
    for lo, hi in pairs:
        lo, hi = scalar(lo), scalar(hi)
        if lo > hi:
            raise ValueError(f"interval [{lo}, {hi}] has lo > hi")
        if lo == INF or hi == -INF:
            raise ValueError("an interval must contain a real number")
        items.append((lo, hi))
    return _merge(sorted(items))


def _merge(items: list) -> tuple:
    out: list = []
    for lo, hi in items:
        # closed intervals that touch are merged
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


class IntervalSet:
    """A finite union of closed intervals, stored in canonical form.

    Two IntervalSets are equal as subsets of the real line iff their
    ``parts`` tuples are identical.
    """

    __slots__ = ("parts", "_hash")

    def __init__(self, intervals: Iterable[tuple] = ()):
        self.parts = _normalize(intervals)
        self._hash = None

    @classmethod
    def _raw(cls, parts: tuple) -> "IntervalSet":
        obj = cls.__new__(cls)
        obj.parts = parts
        obj._hash = None
        return obj

    @classmethod
    def empty(cls) -> "IntervalSet":
        return EMPTY

    @classmethod
    def reals(cls) -> "IntervalSet":
        return REALS

    @classmethod
    def point(cls, x) -> "IntervalSet":
        x = scalar(x)
        return cls([(x, x)])

    @classmethod
    def interval(cls, lo, hi) -> "IntervalSet":
        return cls([(lo, hi)])

    # -- container protocol -------------------------------------------------
    def __iter__(self) -> Iterator[tuple]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.parts)
        return self._hash

    def __repr__(self) -> str:
        return f"IntervalSet({format_intervalset(self)})"

    def __str__(self) -> str:
        return format_intervalset(self)

    def __contains__(self, t) -> bool:
        t = scalar(t)
        for lo, hi in self.parts:
            if t < lo:
                return False
            if t <= hi:
                return True
        return False

    # -- semi-ring operations -----------------------------------------------
    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return union(self, other)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return intersect(self, other)

    def issubset(self, other: "IntervalSet") -> bool:
        return union(self, other) == other

    @property
    def bounded(self) -> bool:
        return not self.parts or (self.parts[0][0] != -INF and self.parts[-1][1] != INF)

    @property
    def lower(self) -> Scalar:
        return self.parts[0][0]

    @property
    def upper(self) -> Scalar:
        return self.parts[-1][1]

    def endpoints(self) -> set:
        """Finite endpoints of all components."""
        return {x for pair in self.parts for x in pair if x not in (INF, -INF)}


EMPTY = IntervalSet()
REALS = IntervalSet([(-INF, INF)])


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    if not a.parts:
        return b
    if not b.parts:
        return a
    return IntervalSet._raw(_merge(sorted(a.parts + b.parts)))


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    out = []
    i = j = 0
    pa, pb = a.parts, b.parts
    while i < len(pa) and j < len(pb):
        lo = max(pa[i][0], pb[j][0])
        hi = min(pa[i][1], pb[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if pa[i][1] < pb[j][1]:
            i += 1
        else:
            j += 1
    # components of a and b are non-touching, so pieces are already disjoint
    return IntervalSet._raw(tuple(out))


def complement(a: IntervalSet, window: IntervalSet) -> IntervalSet:
    """Closure of ``window \\ a``; ``window`` must be a single interval."""
    if len(window) != 1:
        raise ValueError("complement window must be a single interval")
    wlo, whi = window.parts[0]
    out = []
    cur = wlo
    for lo, hi in a.parts:
        if hi < cur:
            continue
        if lo > whi:
            break
        if lo > cur:
            out.append((cur, lo))
        cur = hi
        if cur >= whi:
            return IntervalSet(out)
    out.append((cur, whi))
    return IntervalSet(out)


def shift(a: IntervalSet, s) -> IntervalSet:
    """Minkowski translate ``{x + s : x in a}``."""
    s = scalar(s)
    if s in (INF, -INF):
        raise ValueError("shift amount must be finite")
    if s == 0:
        return a
    return IntervalSet._raw(tuple((lo + s, hi + s) for lo, hi in a.parts))


def thicken(a: IntervalSet, eps) -> IntervalSet:
    eps = scalar(eps)
    if eps < 0 or eps == INF:
        raise ValueError("thickening radius must be finite and non-negative")
    return IntervalSet((lo - eps, hi + eps) for lo, hi in a.parts)


def measure(a: IntervalSet) -> Fraction:
    if not a.bounded:
        raise InfiniteMeasure(f"{a} has infinite measure")
    return sum((hi - lo for lo, hi in a.parts), Fraction(0))


def _distance_to(x: Fraction, b: IntervalSet) -> Scalar:
    best = INF
    for lo, hi in b.parts:
        if lo <= x <= hi:
            return Fraction(0)
        best = min(best, lo - x if x < lo else x - hi)
    return best


def _directed(a: IntervalSet, b: IntervalSet) -> Scalar:
    """sup over x in a of the distance from x to b."""
    if not a.parts:
        return Fraction(0)
    if not b.parts:
        return INF
    if a.lower == -INF and b.lower != -INF:
        return INF
    if a.upper == INF and b.upper != INF:
        return INF
    gaps = [(b.parts[k][1] + b.parts[k + 1][0]) / 2 for k in range(len(b.parts) - 1)]
    best: Scalar = Fraction(0)
    for lo, hi in a.parts:
        candidates = [x for x in (lo, hi) if x not in (INF, -INF)]
        candidates += [m for m in gaps if lo <= m <= hi]
        for x in candidates:
            best = max(best, _distance_to(x, b))
    return best


def hausdorff(a: IntervalSet, b: IntervalSet) -> Scalar:
    """Exact Hausdorff distance; ``INF`` when no thickening ever covers."""
    return max(_directed(a, b), _directed(b, a))


# -- text form ----------------------------------------------------------------

_PART = re.compile(r"\[\s*([^,\]]+)\s*,\s*([^\]]+)\s*\]")


def format_intervalset(a: IntervalSet) -> str:
    if not a.parts:
        return "empty"
    if a == REALS:
        return "R"
    return "u".join(f"[{format_scalar(lo)},{format_scalar(hi)}]" for lo, hi in a.parts)


def parse_intervalset(text: str) -> IntervalSet:
    """Inverse of :func:`format_intervalset`; also accepts a bare number as a point."""
    s = text.strip()
    if s in ("", "empty", "{}", "∅"):
        return EMPTY
    if s in ("R", "ℝ"):
        return REALS
    if not s.startswith("["):
        return IntervalSet.point(s)
    parts = []
    for chunk in re.split(r"\s*[uU∪]\s*", s):
        m = _PART.fullmatch(chunk.strip())
        if not m:
            raise ValueError(f"malformed interval set {text!r} near {chunk!r}")
        parts.append((scalar(m.group(1)), scalar(m.group(2))))
    return IntervalSet(parts)
