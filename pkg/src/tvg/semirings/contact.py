"""Piecewise-affine fragment of the universal contact semi-ring.

A :class:`ContactMap` sends a send time ``t`` to the set of achievable
delivery delays.  The real line is cut at sorted breakpoints; each
breakpoint carries a constant :class:`IntervalSet` and each open cell between
breakpoints carries a list of parametric intervals ``[lo(t), hi(t)]`` whose
endpoints are affine in ``t`` (``hi`` may be ``+inf``).

Canonical form: inside every open cell no two endpoint functions cross, the
parametric intervals are disjoint and sorted, and no breakpoint is
removable.  Equal maps therefore have equal representations.

Products are taken in closure: each connected piece of
``t -> U_{x in f(t)} g(x + t) + x`` is reported as a closed interval.  For
maps with closed graphs (every map built from closed contact windows) this
is exact.
"""
from __future__ import annotations

import bisect
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from ..intervals import INF, IntervalSet, format_scalar, scalar
from .base import Semiring

# Affine functions are pairs (c0, c1) meaning c0 + c1*t; (INF, 0) is +inf.
POS_INF = (INF, Fraction(0))
ZERO_FN = (Fraction(0), Fraction(0))


class OutsideFragment(ArithmeticError):
    """A result is not representable with affine endpoints."""


def _at(f, t):
    if f[0] == INF or f[0] == -INF:
        return f[0]
    return f[0] + f[1] * t


def _const(c):
    return (c, Fraction(0)) if c not in (INF, -INF) else (c, Fraction(0))


def _compose(p, x):
    """``p(x(t))`` where ``p`` is affine in u and ``x`` affine in t (or infinite)."""
    if p[0] == INF:
        return POS_INF
    if x[0] in (INF, -INF):
        if p[1] == 0:
            return (p[0], Fraction(0))
        return ((INF if p[1] > 0 else -INF) if x[0] == INF else (-INF if p[1] > 0 else INF), Fraction(0))
    return (p[0] + p[1] * x[0], p[1] * x[1])


def _minus_t(f):
    if f[0] in (INF, -INF):
        return f
    return (f[0], f[1] - 1)


def _plus_t(f):
    if f[0] in (INF, -INF):
        return f
    return (f[0], f[1] + 1)


def _crossing(f, g):
    if f[0] in (INF, -INF) or g[0] in (INF, -INF) or f[1] == g[1]:
        return None
    return (g[0] - f[0]) / (f[1] - g[1])


def _rep(lo, hi):
    if lo == -INF:
        return hi - 1 if hi != INF else Fraction(0)
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


def _eval_span(span, t) -> IntervalSet:
    return IntervalSet((_at(lo, t), _at(hi, t)) for lo, hi in span)


def _union_span(span, t):
    """Disjoint sorted union of a span whose endpoint order is fixed on its cell."""
    items = sorted(span, key=lambda p: (_at(p[0], t), _at(p[1], t)))
    out = []
    for lo, hi in items:
        if out and _at(lo, t) <= _at(out[-1][1], t):
            if _at(hi, t) > _at(out[-1][1], t):
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def _cells(breaks):
    bounds = [-INF] + list(breaks) + [INF]
    return list(zip(bounds, bounds[1:]))


def _check_piece(lo, hi, a, b):
    if lo[0] in (INF, -INF):
        raise ValueError("lower endpoint of a delay interval must be finite")
    if hi[0] == INF:
        return
    if a == -INF and b == INF:
        ok = hi[1] == lo[1] and hi[0] >= lo[0]
    elif a == -INF:
        ok = hi[1] <= lo[1] and _at(hi, b) >= _at(lo, b)
    elif b == INF:
        ok = hi[1] >= lo[1] and _at(hi, a) >= _at(lo, a)
    else:
        ok = _at(hi, a) >= _at(lo, a) and _at(hi, b) >= _at(lo, b)
    if not ok:
        raise ValueError(f"parametric interval is empty somewhere on ({a}, {b})")


@dataclass(frozen=True)
class ContactMap:
    breaks: tuple = ()
    points: tuple = ()
    spans: tuple = ((),)

    def __post_init__(self):
        if len(self.points) != len(self.breaks) or len(self.spans) != len(self.breaks) + 1:
            raise ValueError("need one point value per breakpoint and one span per cell")
        breaks, points, spans = _canonical(list(self.breaks), list(self.points),
                                           [list(s) for s in self.spans], check=True)
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "spans", spans)

    @classmethod
    def _raw(cls, breaks, points, spans) -> "ContactMap":
        obj = cls.__new__(cls)
        b, p, s = _canonical(list(breaks), list(points), [list(x) for x in spans])
        object.__setattr__(obj, "breaks", b)
        object.__setattr__(obj, "points", p)
        object.__setattr__(obj, "spans", s)
        return obj

    def __call__(self, t) -> IntervalSet:
        t = scalar(t)
        i = bisect.bisect_left(self.breaks, t)
        if i < len(self.breaks) and self.breaks[i] == t:
            return self.points[i]
        return _eval_span(self.spans[i], t)

    def arrivals(self, t) -> IntervalSet:
        """Delivery times ``t + f(t)`` for a message sent at ``t``."""
        from ..intervals import shift
        return shift(self(t), t)

    def support(self) -> IntervalSet:
        parts = []
        for (lo, hi), span in zip(_cells(self.breaks), self.spans):
            if span:
                parts.append((lo, hi))
        for b, v in zip(self.breaks, self.points):
            if v:
                parts.append((b, b))
        return IntervalSet(parts)

    def __str__(self) -> str:
        return format_contact(self)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "ContactMap":
        return CONTACT_ZERO

    @classmethod
    def one(cls) -> "ContactMap":
        return CONTACT_ONE

    @classmethod
    def from_records(cls, records) -> "ContactMap":
        """Sum of records ``(t_lo, t_hi, closed, [(lo_fn, hi_fn), ...])``.

        Each record contributes the parametric intervals on ``[t_lo, t_hi]``
        (or the open range when ``closed`` is false).
        """
        recs = []
        cuts = set()
        for t_lo, t_hi, closed, pieces in records:
            t_lo, t_hi = scalar(t_lo), scalar(t_hi)
            if t_lo > t_hi or (not closed and t_lo == t_hi):
                raise ValueError(f"empty record range ({t_lo}, {t_hi})")
            pieces = [(_fn(lo), _fn(hi)) for lo, hi in pieces]
            for lo, hi in pieces:
                _check_piece(lo, hi, t_lo, t_hi)
            recs.append((t_lo, t_hi, closed, pieces))
            cuts |= {x for x in (t_lo, t_hi) if x not in (INF, -INF)}
        breaks = sorted(cuts)
        points = []
        for b in breaks:
            vals = [(_at(lo, b), _at(hi, b)) for t_lo, t_hi, closed, pieces in recs
                    for lo, hi in pieces
                    if (t_lo <= b <= t_hi if closed else t_lo < b < t_hi)]
            points.append(IntervalSet(vals))
        spans = []
        for lo, hi in _cells(breaks):
            spans.append([p for t_lo, t_hi, _, pieces in recs if t_lo <= lo and hi <= t_hi
                          for p in pieces])
        return cls(tuple(breaks), tuple(points), tuple(spans))

    @classmethod
    def window(cls, lifetime: IntervalSet, delay=0) -> "ContactMap":
        """``t -> {delay}`` for ``t`` in ``lifetime``, empty otherwise."""
        d = scalar(delay)
        return cls.from_records([(lo, hi, True, [(d, d)]) for lo, hi in lifetime])

    @classmethod
    def constant(cls, value: IntervalSet) -> "ContactMap":
        return cls.from_records([(-INF, INF, True, [(lo, hi) for lo, hi in value])]) if value else CONTACT_ZERO

    @classmethod
    def storage(cls, capacity=None) -> "ContactMap":
        """Store-and-forward self-loop: ``t -> [0, capacity]`` (unbounded by default)."""
        hi = INF if capacity is None else scalar(capacity)
        return cls.constant(IntervalSet([(0, hi)]))


def _fn(x):
    if isinstance(x, tuple):
        c0, c1 = x
        c0 = scalar(c0)
        if c0 in (INF, -INF):
            return (c0, Fraction(0))
        return (c0, scalar(c1))
    return _const(scalar(x))


def _canonical(breaks, points, spans, check=False):
    # pass 1: cut cells where endpoint functions cross, union each sub-cell
    nb, np_, ns = [], [], []
    for k, (lo, hi) in enumerate(_cells(breaks)):
        span = spans[k]
        if check:
            for p in span:
                _check_piece(p[0], p[1], lo, hi)
        fns = {f for p in span for f in p}
        cuts = set()
        fl = list(fns)
        for i in range(len(fl)):
            for j in range(i + 1, len(fl)):
                x = _crossing(fl[i], fl[j])
                if x is not None and lo < x < hi:
                    cuts.add(x)
        bounds = [lo] + sorted(cuts) + [hi]
        for j, (a, b) in enumerate(zip(bounds, bounds[1:])):
            if j > 0:
                nb.append(a)
                np_.append(_eval_span(span, a))
            ns.append(_union_span(span, _rep(a, b)))
        if k < len(breaks):
            nb.append(breaks[k])
            np_.append(points[k] if isinstance(points[k], IntervalSet) else IntervalSet(points[k]))
    # pass 2: drop breakpoints that change nothing
    out_b, out_p, out_s = [], [], [ns[0]]
    for b, p, s in zip(nb, np_, ns[1:]):
        if s == out_s[-1] and p == _eval_span(s, b):
            continue
        out_b.append(b)
        out_p.append(p)
        out_s.append(s)
    return tuple(out_b), tuple(out_p), tuple(out_s)


CONTACT_ZERO = ContactMap()
CONTACT_ONE = ContactMap((), (), (((ZERO_FN, ZERO_FN),),))


def _refine(f: ContactMap, extra) -> tuple:
    """Subdivide ``f`` at extra breakpoints without canonicalizing."""
    breaks = sorted(set(f.breaks) | set(extra))
    points = [f(b) for b in breaks]
    spans = []
    for lo, hi in _cells(breaks):
        i = bisect.bisect_left(f.breaks, _rep(lo, hi))
        spans.append(list(f.spans[i]))
    return breaks, points, spans


def contact_add(f: ContactMap, g: ContactMap) -> ContactMap:
    if f is CONTACT_ZERO or not (f.breaks or f.spans[0]):
        return g
    if g is CONTACT_ZERO or not (g.breaks or g.spans[0]):
        return f
    cuts = set(f.breaks) | set(g.breaks)
    fb, fp, fs = _refine(f, cuts)
    gb, gp, gs = _refine(g, cuts)
    points = [a | b for a, b in zip(fp, gp)]
    spans = [a + b for a, b in zip(fs, gs)]
    return ContactMap._raw(fb, points, spans)


def _range_pieces(A, B, g: ContactMap, t):
    """Parametric pieces (in t) of ``U_{u in [A(t), B(t)]} g(u) + u - t``.

    ``t`` is a representative point of a cell on which the position of
    ``A`` and ``B`` relative to every breakpoint of ``g`` is fixed.
    """
    a, b = _at(A, t), _at(B, t)
    out = []
    for k, (ulo, uhi) in enumerate(_cells(g.breaks)):
        if k > 0:
            u = g.breaks[k - 1]
            if a <= u <= b:
                for c, d in g.points[k - 1]:
                    out.append((_minus_t(_const(c + u)),
                                POS_INF if d == INF else _minus_t(_const(d + u))))
        if not g.spans[k] or not (a < uhi and b > ulo):
            continue
        L = A if a > ulo else _const(ulo)
        R = B if b < uhi else _const(uhi)
        for p, q in g.spans[k]:
            P, Q = _plus_t(p), _plus_t(q)
            lo = _compose(P, L if P[1] >= 0 else R)
            hi = POS_INF if Q[0] == INF else _compose(Q, R if Q[1] >= 0 else L)
            if lo[0] in (INF, -INF):
                raise OutsideFragment("product has a delay set unbounded below")
            out.append((_minus_t(lo), _minus_t(hi)))
    return out


def contact_mul(f: ContactMap, g: ContactMap) -> ContactMap:
    """``(f * g)(t) = U_{x in f(t)} g(x + t) + x``."""
    if not (f.breaks or f.spans[0]) or not (g.breaks or g.spans[0]):
        return CONTACT_ZERO
    # cut f's cells where a send window's arrival range crosses a breakpoint of g
    cuts = set()
    for (lo, hi), span in zip(_cells(f.breaks), f.spans):
        for p, q in span:
            for fn in (_plus_t(p), _plus_t(q)):
                if fn[0] == INF:
                    continue
                for u in g.breaks:
                    if fn[1] != 0:
                        x = (u - fn[0]) / fn[1]
                        if lo < x < hi:
                            cuts.add(x)
    breaks, points, spans = _refine(f, cuts)
    new_points = []
    for b, value in zip(breaks, points):
        pieces = []
        for lo, hi in value:
            A = _const(lo + b)
            B = POS_INF if hi == INF else _const(hi + b)
            pieces += _range_pieces(A, B, g, b)
        new_points.append(_eval_span(pieces, b))
    new_spans = []
    for (lo, hi), span in zip(_cells(breaks), spans):
        t = _rep(lo, hi)
        pieces = []
        for p, q in span:
            pieces += _range_pieces(_plus_t(p), POS_INF if q[0] == INF else _plus_t(q), g, t)
        new_spans.append(pieces)
    return ContactMap._raw(breaks, new_points, new_spans)


CONTACT = Semiring("contact", add=contact_add, mul=contact_mul,
                   zero=CONTACT_ZERO, one=CONTACT_ONE, format=lambda f: format_contact(f))


# -- text form ------------------------------------------------------------------

def format_affine(f) -> str:
    if f[0] == INF:
        return "inf"
    c0, c1 = f
    if c1 == 0:
        return format_scalar(c0)
    sign = "-" if c1 < 0 else "+"
    return f"{format_scalar(c0)}{sign}{format_scalar(abs(c1))}*t"


def parse_affine(text: str):
    s = text.replace(" ", "")
    if s.endswith("*t") or s.endswith("t"):
        body = s[:-2] if s.endswith("*t") else s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            coef = body or "1"
            if coef in ("+", "-"):
                coef += "1"
            return (Fraction(0), scalar(coef))
        c1 = body[cut:]
        if c1 in ("+", "-"):
            c1 += "1"
        return (scalar(body[:cut]), scalar(c1))
    return _const(scalar(s))


def format_contact(f: ContactMap) -> str:
    """Records ``piece (l,r): {...}`` for open cells and ``piece [b,b]: {...}`` for breakpoints."""
    recs = []
    cells = _cells(f.breaks)
    for k, ((lo, hi), span) in enumerate(zip(cells, f.spans)):
        if k > 0:
            b, v = f.breaks[k - 1], f.points[k - 1]
            if v:
                body = ", ".join(f"[{format_scalar(c)}, {format_scalar(d)}]" for c, d in v)
                recs.append(f"piece [{format_scalar(b)},{format_scalar(b)}]: {{{body}}}")
        if span:
            body = ", ".join(f"[{format_affine(p)}, {format_affine(q)}]" for p, q in span)
            recs.append(f"piece ({format_scalar(lo)},{format_scalar(hi)}): {{{body}}}")
    return "; ".join(recs) if recs else "empty"


_RECORD = re.compile(r"piece\s*([\[(])\s*([^,]+?)\s*,\s*([^\])]+?)\s*([\])])\s*:\s*\{(.*?)\}")
_PIECE = re.compile(r"\[\s*([^,\]]+?)\s*,\s*([^\]]+?)\s*\]")


def parse_contact(text: str) -> ContactMap:
    """Parse the record form.  ``[a,b]`` ranges are closed, ``(a,b)`` open."""
    s = text.strip()
    if s in ("", "empty", "0"):
        return CONTACT_ZERO
    records = []
    for m in _RECORD.finditer(s):
        lb, t_lo, t_hi, rb, body = m.groups()
        closed = lb == "[" and rb == "]"
        if (lb == "[") != (rb == "]"):
            raise ValueError("half-open record ranges are not supported")
        pieces = [(parse_affine(a), parse_affine(b)) for a, b in _PIECE.findall(body)]
        records.append((scalar(t_lo), scalar(t_hi), closed, pieces))
    if not records:
        raise ValueError(f"malformed contact map {text!r}")
    return ContactMap.from_records(records)


# -- random elements for property tests -------------------------------------------

def random_contact(rng: random.Random, max_records: int = 2, scale: int = 8) -> ContactMap:
    """A sum of closed contact records with small rational slopes (closed graph)."""
    records = []
    for _ in range(rng.randint(0, max_records)):
        kind = rng.random()
        if kind < 0.15:
            lo = rng.randint(0, 3)
            hi = INF if rng.random() < 0.5 else lo + rng.randint(0, 4)
            records.append((-INF, INF, True, [(lo, hi)]))
            continue
        a = Fraction(rng.randint(-scale, scale), rng.choice((1, 2)))
        b = a + rng.randint(0, scale)
        lo_slope = Fraction(rng.choice((0, 0, -1, 1, Fraction(-1, 2))))
        lo0 = Fraction(rng.randint(0, scale))
        lo_fn = (lo0 - lo_slope * a, lo_slope)
        # ensure lo >= 0 on the range when the slope is negative
        if lo_slope < 0:
            lo_fn = (lo_fn[0] + (-lo_slope) * (b - a), lo_slope)
        width = Fraction(rng.choice((0, 0, 1, 2)))
        hi_fn = (lo_fn[0] + width, lo_fn[1]) if rng.random() < 0.8 else POS_INF
        records.append((a, b, True, [(lo_fn, hi_fn)]))
    return ContactMap.from_records(records)
