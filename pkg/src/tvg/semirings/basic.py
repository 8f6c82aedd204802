"""Boolean, lifetime, tropical and path semi-rings."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..intervals import EMPTY, INF, REALS, format_scalar, intersect, union
from .base import Semiring

BOOL = Semiring(
    "boolean",
    add=lambda a, b: a or b,
    mul=lambda a, b: a and b,
    zero=False,
    one=True,
    format=lambda x: "1" if x else "0",
)

LIFETIME = Semiring("lifetime", add=union, mul=intersect, zero=EMPTY, one=REALS)


def _tropical_mul(a, b):
    if a == INF or b == INF:
        return INF
    return a + b


TROPICAL = Semiring(
    "tropical",
    add=min,
    mul=_tropical_mul,
    zero=INF,
    one=Fraction(0),
    format=format_scalar,
)


class WalkBudgetExceeded(RuntimeError):
    """A path-sum product would exceed its configured size or length budget."""


PathSum = frozenset


def walk(*vertices) -> PathSum:
    return frozenset([tuple(vertices)])


def path_add(a: PathSum, b: PathSum) -> PathSum:
    return a | b


def path_mul(a: PathSum, b: PathSum, max_terms: int | None = None,
             max_length: int | None = None) -> PathSum:
    """All concatenations ``x * y`` with ``x[-1] == y[0]``; mismatches vanish."""
    by_head: dict = {}
    for y in b:
        by_head.setdefault(y[0], []).append(y)
    out = set()
    for x in a:
        for y in by_head.get(x[-1], ()):
            w = x + y[1:]
            if max_length is not None and len(w) - 1 > max_length:
                raise WalkBudgetExceeded(f"walk of length {len(w) - 1} exceeds budget {max_length}")
            out.add(w)
            if max_terms is not None and len(out) > max_terms:
                raise WalkBudgetExceeded(f"path sum exceeds {max_terms} walks")
    return frozenset(out)


def path_semiring(vertices: Sequence, max_terms: int | None = 100_000,
                  max_length: int | None = None) -> Semiring:
    """Path semi-ring over a fixed vertex universe; one is the sum of length-0 walks."""
    one = frozenset((v,) for v in vertices)
    return Semiring(
        "path",
        add=path_add,
        mul=lambda a, b: path_mul(a, b, max_terms, max_length),
        zero=frozenset(),
        one=one,
        format=lambda s: " + ".join("".join(map(str, w)) for w in sorted(s, key=repr)) or "0",
    )


def edge_sums(edges: Iterable[tuple]) -> dict:
    """Adjacency entries of the path semi-ring: each edge ``(u, v)`` as the walk ``[u, v]``."""
    return {(u, v): walk(u, v) for u, v in edges}
