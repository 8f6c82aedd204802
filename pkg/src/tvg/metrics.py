"""Distances between TVGs and between barcodes.

Barcode matching costs treat an interval ``(a, b)`` as a point of the plane.
Unmatched bars pay their distance to the diagonal.  Bars with an infinite
endpoint ("essential" bars) can only be matched to bars whose endpoints are
infinite at the same ends; the infinite coordinates then cost nothing.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .intervals import INF, IntervalSet, hausdorff, intersect, scalar

# -- barcodes -------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class BarcodeInterval:
    birth: Fraction
    death: Fraction
    open_l: bool = False
    open_r: bool = False

    def __post_init__(self):
        b, d = scalar(self.birth), scalar(self.death)
        if b > d:
            raise ValueError(f"birth {b} after death {d}")
        object.__setattr__(self, "birth", b)
        object.__setattr__(self, "death", d)

    @property
    def kind(self) -> tuple:
        """Which ends are infinite; only bars of one kind can be matched."""
        return (self.birth == -INF, self.death == INF)

    @property
    def essential(self) -> bool:
        return self.kind != (False, False)

    def contains(self, t) -> bool:
        lo_ok = self.birth < t or (self.birth == t and not self.open_l)
        hi_ok = t < self.death or (t == self.death and not self.open_r)
        return lo_ok and hi_ok

    def __str__(self) -> str:
        from .intervals import format_scalar
        left = "(" if self.open_l else "["
        right = ")" if self.open_r else "]"
        return f"{left}{format_scalar(self.birth)},{format_scalar(self.death)}{right}"


class Barcode:
    """Finite multiset of :class:`BarcodeInterval`."""

    __slots__ = ("counts",)

    def __init__(self, bars: Iterable = ()):
        c: Counter = Counter()
        for bar in bars:
            if isinstance(bar, tuple) and len(bar) == 2 and isinstance(bar[0], BarcodeInterval):
                bar, m = bar
            else:
                m = 1
            if not isinstance(bar, BarcodeInterval):
                bar = BarcodeInterval(*bar)
            if m < 1:
                raise ValueError("multiplicities must be positive")
            c[bar] += m
        self.counts = c

    def bars(self) -> list:
        """Expanded, sorted list with repeats."""
        return [b for b in sorted(self.counts) for _ in range(self.counts[b])]

    def items(self) -> list:
        return sorted(self.counts.items())

    def __len__(self) -> int:
        return sum(self.counts.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Barcode) and self.counts == other.counts

    def __repr__(self) -> str:
        return "Barcode(" + ", ".join(f"{b}x{m}" if m > 1 else str(b) for b, m in self.items()) + ")"

    def count_containing(self, t) -> int:
        return sum(m for b, m in self.counts.items() if b.contains(t))


# -- matching costs -------------------------------------------------------------

def _gap(x, y):
    if x == y:  # covers inf - inf
        return Fraction(0)
    return abs(x - y)


def _pow(x, p):
    if isinstance(p, int) and not isinstance(x, float):
        return x ** p
    return float(x) ** p


def pair_cost(I: BarcodeInterval, J: BarcodeInterval, p):
    """``||I - J||_p`` raised to the power p (for finite p); plain sup-norm for ``p = inf``."""
    if I.kind != J.kind:
        return INF
    db, dd = _gap(I.birth, J.birth), _gap(I.death, J.death)
    if p == INF:
        return max(db, dd)
    return _pow(db, p) + _pow(dd, p)


def diagonal_cost(I: BarcodeInterval, p):
    """``||I - Mid(I)||_p``, raised to the power p for finite p."""
    if I.essential:
        return INF
    half = (I.death - I.birth) / 2
    if p == INF:
        return half
    return 2 * _pow(half, p)


def _check_p(p):
    if p == INF or p == math.inf:
        return INF
    if isinstance(p, float) and p.is_integer():
        p = int(p)
    if isinstance(p, (int, Fraction)) and p >= 1:
        return int(p) if p == int(p) else float(p)
    if isinstance(p, float) and p >= 1:
        return p
    raise ValueError(f"p must be >= 1 or inf, got {p!r}")


def hungarian(cost: list) -> tuple:
    """Minimum-cost perfect assignment of a square matrix.

    Exact over any ordered field (Fractions stay Fractions).  Returns
    ``(total, assignment)`` with ``assignment[i]`` the column of row i.
    """
    n = len(cost)
    if n == 0:
        return 0, []
    zero = cost[0][0] - cost[0][0]
    u = [zero] * (n + 1)
    v = [zero] * (n + 1)
    match = [0] * (n + 1)  # column -> row, 1-based
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = None
            j1 = 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while True:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
            if j0 == 0:
                break
    assignment = [0] * n
    for j in range(1, n + 1):
        assignment[match[j] - 1] = j - 1
    return sum((cost[i][assignment[i]] for i in range(n)), zero), assignment


def _augmented(B: list, C: list, p):
    """Square cost matrix: rows are B then one diagonal slot per C bar,
    columns are C then one diagonal slot per B bar."""
    n, m = len(B), len(C)
    finite = [pair_cost(b, c, p) for b in B for c in C] + [diagonal_cost(x, p) for x in B + C]
    finite = [x for x in finite if x != INF]
    big = sum(finite, Fraction(0)) + 1
    zero = Fraction(0)

    def fix(x):
        return big if x == INF else x

    rows = []
    for i, b in enumerate(B):
        rows.append([fix(pair_cost(b, c, p)) for c in C] +
                    [fix(diagonal_cost(b, p)) if k == i else big for k in range(n)])
    for j, c in enumerate(C):
        rows.append([fix(diagonal_cost(c, p)) if k == j else big for k in range(m)] + [zero] * n)
    return rows, big


def _split_kinds(B: Barcode, C: Barcode):
    groups: dict = {}
    for side, code in ((0, B), (1, C)):
        for bar in code.bars():
            groups.setdefault(bar.kind, ([], []))[side].append(bar)
    return groups


def matching_cost(B: Barcode, C: Barcode, p):
    """Optimal p-cost raised to the power p (exact for integer p); bottleneck value for ``p = inf``."""
    p = _check_p(p)
    groups = _split_kinds(B, C)
    total = Fraction(0)
    for kind, (bs, cs) in groups.items():
        if kind != (False, False) and len(bs) != len(cs):
            return INF
        if p == INF:
            total = max(total, _bottleneck(bs, cs))
        else:
            rows, big = _augmented(bs, cs, p)
            value, _ = hungarian(rows)
            if value >= big:
                return INF
            total = total + value
    return total


def _root(x, p):
    if x == INF or p == INF or p == 1:
        return x
    if isinstance(x, Fraction):
        num, den = x.numerator, x.denominator
        rn, rd = round(num ** (1 / p)), round(den ** (1 / p))
        if rn ** p == num and rd ** p == den:
            return Fraction(rn, rd)
    return float(x) ** (1 / p)


def matching_distance(B: Barcode, C: Barcode, p) -> Fraction | float:
    """Wasserstein-p matching distance; ``p = inf`` gives the bottleneck distance.

    Exact rationals for ``p`` in {1, inf} and whenever the optimal p-th power
    sum is a perfect p-th power; otherwise a float.
    """
    p = _check_p(p)
    return _root(matching_cost(B, C, p), p)


def bottleneck(B: Barcode, C: Barcode):
    return matching_distance(B, C, INF)


def _has_perfect(adj: list, n_right: int) -> bool:
    match_r = [-1] * n_right

    def augment(u, seen):
        for w in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if match_r[w] < 0 or augment(match_r[w], seen):
                match_r[w] = u
                return True
        return False

    return all(augment(u, set()) for u in range(len(adj)))


def _bottleneck(B: list, C: list):
    """Smallest candidate cost admitting a perfect matching of the augmented graph."""
    n, m = len(B), len(C)
    pc = [[pair_cost(b, c, INF) for c in C] for b in B]
    db = [diagonal_cost(b, INF) for b in B]
    dc = [diagonal_cost(c, INF) for c in C]
    cands = sorted({x for row in pc for x in row if x != INF} | {x for x in db + dc if x != INF}
                   | {Fraction(0)})

    def feasible(eps) -> bool:
        adj = []
        for i in range(n):
            adj.append([j for j in range(m) if pc[i][j] <= eps] + ([m + i] if db[i] <= eps else []))
        for j in range(m):
            adj.append(([j] if dc[j] <= eps else []) + [m + i for i in range(n)])
        return _has_perfect(adj, m + n)

    lo, hi = 0, len(cands) - 1
    if not feasible(cands[hi]):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


# -- TVG distances --------------------------------------------------------------

def _same_shape(M, N, labels=True):
    if M.n != N.n:
        raise ValueError(f"matrices have different sizes {M.n} and {N.n}")
    if labels and M.labels != N.labels:
        raise ValueError("matrices have different label orders")


def tvg_hausdorff(M, N):
    """Largest per-entry Hausdorff distance."""
    _same_shape(M, N)
    best = Fraction(0)
    for ra, rb in zip(M.entries, N.entries):
        for a, b in zip(ra, rb):
            best = max(best, hausdorff(a, b))
            if best == INF:
                return INF
    return best


def disconnect_barcode(A: IntervalSet, W: IntervalSet) -> Barcode:
    """Gaps of ``A & W`` in the whole line, closures included.

    The two outer gaps are unbounded, so they become essential bars; the
    empty set has the single bar ``(-inf, inf)``.
    """
    parts = intersect(A, W).parts
    if not parts:
        return Barcode([BarcodeInterval(-INF, INF, True, True)])
    bars = [BarcodeInterval(-INF, parts[0][0], True, True)]
    bars += [BarcodeInterval(a[1], b[0], True, True) for a, b in zip(parts, parts[1:])]
    bars.append(BarcodeInterval(parts[-1][1], INF, True, True))
    return Barcode(bars)


def disconnect_distance(M, N, p, q, W: IntervalSet):
    """``l^q`` norm over entries of the p-matching distance between disconnect barcodes."""
    _same_shape(M, N)
    if len(W) != 1 or not W.bounded:
        raise ValueError("the window must be one bounded interval")
    p, q = _check_p(p), _check_p(q)
    vals = []
    for ra, rb in zip(M.entries, N.entries):
        for a, b in zip(ra, rb):
            vals.append(matching_cost(disconnect_barcode(a, W), disconnect_barcode(b, W), p))
    if any(v == INF for v in vals):
        return INF
    if p == q:
        return _root(max(vals) if p == INF else sum(vals, Fraction(0)), p)
    ds = [_root(v, p) for v in vals]
    if q == INF:
        return max(ds)
    return _root(sum((_pow(d, q) for d in ds), Fraction(0)), q)


@dataclass
class SymmetrizedResult:
    distance: object
    sigma: tuple
    exact: bool


def _perm_hausdorff(M, N, sigma):
    n = M.n
    best = Fraction(0)
    for i in range(n):
        for j in range(n):
            best = max(best, hausdorff(M.entries[i][j], N.entries[sigma[i]][sigma[j]]))
    return best


def symmetrized_hausdorff(M, N, mode: str = "exact") -> SymmetrizedResult:
    """Smallest Hausdorff distance over relabelings ``N_ij -> N_sigma(i)sigma(j)``.

    ``greedy`` returns a local optimum of pairwise swaps from the identity, an
    upper bound only.
    """
    _same_shape(M, N, labels=False)
    n = M.n
    if mode == "greedy":
        sigma = list(range(n))
        best = _perm_hausdorff(M, N, sigma)
        improved = True
        while improved and best > 0:
            improved = False
            for a, b in itertools.combinations(range(n), 2):
                sigma[a], sigma[b] = sigma[b], sigma[a]
                d = _perm_hausdorff(M, N, sigma)
                if d < best:
                    best, improved = d, True
                else:
                    sigma[a], sigma[b] = sigma[b], sigma[a]
        return SymmetrizedResult(best, tuple(sigma), False)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if n > 9:
        raise ValueError("exact symmetrized Hausdorff is limited to n <= 9")
    h = {}
    for i, j in itertools.product(range(n), repeat=2):
        for a, b in itertools.product(range(n), repeat=2):
            h[i, j, a, b] = hausdorff(M.entries[i][j], N.entries[a][b])
    ident = tuple(range(n))
    best = [max((h[i, j, i, j] for i in range(n) for j in range(n)), default=Fraction(0)), ident]

    def search(sigma: list, used: set, cost):
        k = len(sigma)
        if k == n:
            if cost < best[0]:
                best[0], best[1] = cost, tuple(sigma)
            return
        for a in range(n):
            if a in used:
                continue
            c = max(cost, h[k, k, a, a])
            for i in range(k):
                c = max(c, h[i, k, sigma[i], a], h[k, i, a, sigma[i]])
                if c >= best[0]:
                    break
            if c >= best[0]:
                continue
            # every later row still has to land somewhere unused
            free = [b for b in range(n) if b not in used and b != a]
            bound = c
            for j in range(k + 1, n):
                bound = max(bound, min(h[k, j, a, b] for b in free))
                if bound >= best[0]:
                    break
            if bound >= best[0]:
                continue
            sigma.append(a)
            used.add(a)
            search(sigma, used, c)
            sigma.pop()
            used.discard(a)

    if best[0] > 0:
        search([], set(), Fraction(0))
    return SymmetrizedResult(best[0], best[1], True)


def interleaving_distance(M, N, symmetrized: bool = False):
    """Interleaving distance of the summary cosheaves, computed through the
    Hausdorff isometry."""
    if symmetrized:
        return symmetrized_hausdorff(M, N, "exact" if M.n <= 9 else "greedy").distance
    return tvg_hausdorff(M, N)
