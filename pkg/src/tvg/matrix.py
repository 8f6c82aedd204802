"""Square matrices over a semi-ring and the TVG machinery built on them.

Lifetime matrices carry ``REALS`` on the diagonal (vertices always alive);
adjacency matrices carry the semi-ring zero there.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .intervals import INF, REALS, IntervalSet, intersect, measure, scalar
from .semirings.base import Semiring
from .semirings.basic import BOOL, LIFETIME


class LabelMismatch(ValueError):
    pass


class TvgMatrix:
    """Immutable ``n x n`` matrix of semi-ring elements indexed by node labels."""

    __slots__ = ("labels", "entries", "semiring", "_index")

    def __init__(self, labels: Sequence, entries, semiring: Semiring):
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("node labels must be unique")
        rows = tuple(tuple(r) for r in entries)
        n = len(labels)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"expected a {n}x{n} entry array")
        self.labels = labels
        self.entries = rows
        self.semiring = semiring
        self._index = {v: i for i, v in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def entry(self, u, v):
        return self.entries[self._index[u]][self._index[v]]

    def index(self, label) -> int:
        return self._index[label]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TvgMatrix) or self.labels != other.labels:
            return False
        eq = self.semiring.equals
        return all(eq(a, b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    __hash__ = None

    def __add__(self, other: "TvgMatrix") -> "TvgMatrix":
        return mat_add(self, other)

    def __matmul__(self, other: "TvgMatrix") -> "TvgMatrix":
        return mat_mul(self, other)

    def __repr__(self) -> str:
        fmt = self.semiring.format
        rows = ["  " + " | ".join(fmt(x) for x in r) for r in self.entries]
        return f"TvgMatrix<{self.semiring.name}>{list(self.labels)}\n" + "\n".join(rows)

    def map(self, fn, semiring: Semiring) -> "TvgMatrix":
        return TvgMatrix(self.labels, [[fn(x) for x in r] for r in self.entries], semiring)

    @classmethod
    def identity(cls, labels, S: Semiring) -> "TvgMatrix":
        n = len(labels)
        return cls(labels, [[S.one if i == j else S.zero for j in range(n)] for i in range(n)], S)

    @classmethod
    def zeros(cls, labels, S: Semiring) -> "TvgMatrix":
        n = len(labels)
        return cls(labels, [[S.zero] * n for _ in range(n)], S)

    @classmethod
    def from_edges(cls, labels, edges: dict, S: Semiring, diagonal=None) -> "TvgMatrix":
        """Entries from ``{(u, v): value}``; missing pairs get zero, the diagonal ``diagonal``
        (default: zero, i.e. an adjacency matrix)."""
        labels = tuple(labels)
        idx = {v: i for i, v in enumerate(labels)}
        n = len(labels)
        diag = S.zero if diagonal is None else diagonal
        rows = [[diag if i == j else S.zero for j in range(n)] for i in range(n)]
        for (u, v), x in edges.items():
            rows[idx[u]][idx[v]] = S.add(rows[idx[u]][idx[v]], x)
        return cls(labels, rows, S)


def _check(M: TvgMatrix, N: TvgMatrix):
    if M.labels != N.labels:
        raise LabelMismatch(f"label orders differ: {list(M.labels)} vs {list(N.labels)}")


def mat_add(M: TvgMatrix, N: TvgMatrix) -> TvgMatrix:
    _check(M, N)
    add = M.semiring.add
    return TvgMatrix(M.labels, [[add(a, b) for a, b in zip(ra, rb)]
                                for ra, rb in zip(M.entries, N.entries)], M.semiring)


def mat_mul(M: TvgMatrix, N: TvgMatrix) -> TvgMatrix:
    _check(M, N)
    S = M.semiring
    add, mul, eq, zero = S.add, S.mul, S.equals, S.zero
    n = M.n
    nz_cols = [[(k, x) for k, x in enumerate(col) if not eq(x, zero)]
               for col in zip(*N.entries)]
    rows = []
    for r in M.entries:
        nz = {k: x for k, x in enumerate(r) if not eq(x, zero)}
        out = []
        for j in range(n):
            acc = zero
            for k, y in nz_cols[j]:
                x = nz.get(k)
                if x is not None:
                    acc = add(acc, mul(x, y))
            out.append(acc)
        rows.append(out)
    return TvgMatrix(M.labels, rows, S)


def matrix_semiring(S: Semiring, labels) -> Semiring:
    """The semi-ring of ``len(labels)``-square matrices over ``S``."""
    labels = tuple(labels)
    return Semiring(f"{S.name} {len(labels)}x{len(labels)} matrices", add=mat_add, mul=mat_mul,
                    zero=TvgMatrix.zeros(labels, S), one=TvgMatrix.identity(labels, S),
                    idempotent=S.idempotent)


def snapshot(M: TvgMatrix, t) -> TvgMatrix:
    t = scalar(t)
    if t in (INF, -INF):
        raise ValueError("snapshot time must be finite")
    return M.map(lambda x: t in x, BOOL)


def snapshot_array(M: TvgMatrix, t) -> np.ndarray:
    t = scalar(t)
    return np.array([[t in x for x in r] for r in M.entries], dtype=bool)


def power(A: TvgMatrix, k: int) -> TvgMatrix:
    if k < 0:
        raise ValueError("k must be non-negative")
    out = TvgMatrix.identity(A.labels, A.semiring)
    base = A
    while k:
        if k & 1:
            out = mat_mul(out, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return out


def cumulant(A: TvgMatrix, k: int) -> TvgMatrix:
    """``I + A + ... + A^k``; by repeated squaring of ``I + A`` when the semi-ring is idempotent."""
    if k < 0:
        raise ValueError("k must be non-negative")
    I = TvgMatrix.identity(A.labels, A.semiring)
    if A.semiring.idempotent:
        return power(mat_add(I, A), k)
    out, term = I, I
    for _ in range(k):
        term = mat_mul(term, A)
        out = mat_add(out, term)
    return out


@dataclass
class StarResult:
    star: TvgMatrix
    converged_at: int | None
    history: list = field(default_factory=list, repr=False)


def kleene_star(A: TvgMatrix, max_k: int | None = None, keep_history: bool = False) -> StarResult:
    """Iterate ``C_{k+1} = I + C_k A`` until ``C_{k+1} = C_k`` or ``k = max_k``.

    ``converged_at`` is the first k with ``C_k = C_{k+1}``, or ``None`` if the
    budget ran out (the last cumulant computed is returned as ``star``).
    """
    if max_k is None:
        max_k = 4 * A.n
    I = TvgMatrix.identity(A.labels, A.semiring)
    C = I
    history = [C] if keep_history else []
    for k in range(max_k):
        nxt = mat_add(I, mat_mul(C, A))
        if nxt == C:
            return StarResult(C, k, history)
        C = nxt
        if keep_history:
            history.append(C)
    return StarResult(C, None, history)


def entry_sizes(M: TvgMatrix) -> dict:
    """Telemetry: component counts of the entries (``len`` of each entry)."""
    sizes = [len(x) for r in M.entries for x in r]
    return {"max": max(sizes, default=0), "total": sum(sizes),
            "mean": Fraction(sum(sizes), len(sizes)) if sizes else Fraction(0)}


@dataclass
class LifetimeCurve:
    ks: list
    per_pair: dict
    average: list
    telemetry: list = field(default_factory=list)


def lifetime_curve(M: TvgMatrix, k_max: int, W: IntervalSet) -> LifetimeCurve:
    """``mu(M^k_ij & W)`` for k = 0..k_max; the average runs over off-diagonal pairs."""
    if not W.bounded:
        raise ValueError("the window must be bounded")
    n = M.n
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    per_pair = {(M.labels[i], M.labels[j]): [] for i, j in pairs}
    average, telemetry = [], []
    P = TvgMatrix.identity(M.labels, M.semiring)
    for k in range(k_max + 1):
        if k:
            P = mat_mul(P, M)
        total = Fraction(0)
        for i, j in pairs:
            m = measure(intersect(P.entries[i][j], W))
            per_pair[(M.labels[i], M.labels[j])].append(m)
            total += m
        average.append(total / len(pairs) if pairs else Fraction(0))
        telemetry.append(entry_sizes(P))
    return LifetimeCurve(list(range(k_max + 1)), per_pair, average, telemetry)


def sample_times(values) -> list:
    """One time per constancy region: each critical value, each gap midpoint and
    one point beyond either end."""
    vals = sorted(set(values))
    if not vals:
        return [Fraction(0)]
    out = [vals[0] - 1]
    for a, b in zip(vals, vals[1:]):
        out += [a, (a + b) / 2]
    out += [vals[-1], vals[-1] + 1]
    return out


def critical_times(M: TvgMatrix) -> list:
    vals = set()
    for r in M.entries:
        for x in r:
            vals |= x.endpoints()
    return sample_times(vals)


def _hops(adj: np.ndarray) -> np.ndarray:
    a = adj.copy()
    np.fill_diagonal(a, False)
    d = shortest_path(csr_matrix(a.astype(np.int8)), method="D", directed=True, unweighted=True)
    return d


@dataclass
class Diameter:
    per_pair: dict
    diameter: int


def temporal_diameter(M: TvgMatrix) -> Diameter:
    """Longest snapshot shortest path, maximized over one sample per constancy region.

    Pairs never connected at any time are absent from ``per_pair``.
    """
    n = M.n
    best = np.full((n, n), -1.0)
    for t in critical_times(M):
        d = _hops(snapshot_array(M, t))
        d[~np.isfinite(d)] = -1
        best = np.maximum(best, d)
    np.fill_diagonal(best, 0)
    per_pair = {(M.labels[i], M.labels[j]): int(best[i, j])
                for i in range(n) for j in range(n) if best[i, j] >= 0}
    return Diameter(per_pair, int(best.max()) if n else 0)


def kleene_radius(M: TvgMatrix) -> int:
    """Convergence radius of the Kleene star of a lifetime matrix, found per snapshot
    with Boolean matrix powers (snapshots commute with sums and products)."""
    n = M.n
    radius = 0
    eye = np.eye(n, dtype=bool)
    for t in critical_times(M):
        step = (snapshot_array(M, t) | eye).astype(np.float64)
        C = eye.copy()
        k = 0
        while True:
            nxt = (C.astype(np.float64) @ step) > 0
            if (nxt == C).all():
                break
            C = nxt
            k += 1
        radius = max(radius, k)
    return radius


def strongly_connected(M: TvgMatrix, W: IntervalSet) -> bool:
    """Every entry of ``M*`` covers ``W``."""
    star = kleene_star(M, max_k=max(M.n, 1)).star
    return all(W.issubset(x) for r in star.entries for x in r)


# -- ping ---------------------------------------------------------------------

def row_times(v: list, A: TvgMatrix) -> list:
    S = A.semiring
    out = []
    for j in range(A.n):
        acc = S.zero
        for i, x in enumerate(v):
            if S.equals(x, S.zero):
                continue
            acc = S.add(acc, S.mul(x, A.entries[i][j]))
        out.append(acc)
    return out


def ping_vector(A: TvgMatrix, source, start) -> list:
    """Row vector with ``start`` at ``source`` and zero elsewhere.

    ``start`` may be a scalar (a singleton send time) or a ready semi-ring element.
    """
    from .semirings.contact import ContactMap
    from .semirings.delay import DelayedLifetime

    S = A.semiring
    if isinstance(start, (int, float, Fraction, str, IntervalSet)):
        life = start if isinstance(start, IntervalSet) else IntervalSet.point(start)
        if S.name == "delay":
            start = DelayedLifetime(life)
        elif S.name == "contact":
            start = ContactMap.window(life, 0)
        elif S is LIFETIME or S.name == "lifetime":
            start = life
        else:
            raise ValueError(f"cannot build a start element for the {S.name} semi-ring")
    v = [S.zero] * A.n
    v[A.index(source)] = start
    return v


def ping(A: TvgMatrix, source, start, k_max: int) -> list:
    """Rows ``v C_k(A)`` for k = 0..k_max."""
    S = A.semiring
    v = ping_vector(A, source, start)
    rows = [v]
    cur = v
    for _ in range(k_max):
        cur = [S.add(a, b) for a, b in zip(v, row_times(cur, A))]
        rows.append(cur)
    return rows


def arrival_summary(x) -> str:
    """Short description of when a ping entry arrives."""
    from .intervals import format_intervalset
    from .semirings.contact import ContactMap
    from .semirings.delay import DelayedLifetime

    if isinstance(x, DelayedLifetime):
        if not x.lifetime:
            return "none"
        return f"sent {format_intervalset(x.lifetime)} max delay {x.delay}"
    if isinstance(x, ContactMap):
        sup = x.support()
        if not sup:
            return "none"
        return f"sent {format_intervalset(sup)} delays {x}"
    if isinstance(x, IntervalSet):
        return format_intervalset(x) if x else "none"
    return str(x)


def lifetime_matrix(labels, edges: dict) -> TvgMatrix:
    """Lifetime matrix with ``REALS`` diagonal from ``{(u, v): IntervalSet}``."""
    return TvgMatrix.from_edges(labels, edges, LIFETIME, diagonal=REALS)


def adjacency(M: TvgMatrix) -> TvgMatrix:
    """The same matrix with the diagonal set to zero."""
    S = M.semiring
    return TvgMatrix(M.labels, [[S.zero if i == j else x for j, x in enumerate(r)]
                                for i, r in enumerate(M.entries)], S)


__all__ = [
    "TvgMatrix", "LabelMismatch", "mat_add", "mat_mul", "matrix_semiring", "snapshot", "power",
    "cumulant", "kleene_star", "StarResult", "lifetime_curve", "LifetimeCurve", "temporal_diameter",
    "Diameter", "kleene_radius", "strongly_connected", "ping", "arrival_summary", "lifetime_matrix",
    "adjacency", "entry_sizes", "critical_times", "sample_times",
]
