"""Synthetic TVGs: random lifetime matrices, sphere constellations, a two-class corpus."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .intervals import EMPTY, REALS, IntervalSet, scalar
from .matrix import TvgMatrix
from .semirings.basic import LIFETIME


def gen_random_tvg(n: int, window=(0, 100), density: float = 0.5, max_contacts: int = 3,
                   seed: int = 0, symmetric: bool = False, resolution: int = 1,
                   max_length=None) -> TvgMatrix:
    """Random lifetime matrix on nodes ``0..n-1``.

    Each ordered pair (unordered if ``symmetric``) gets contacts with probability
    ``density``; a linked pair has 1..max_contacts windows with endpoints on a
    grid of spacing ``1/resolution`` inside ``window``.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    rng = random.Random(seed)
    lo, hi = scalar(window[0]), scalar(window[1])
    steps = int((hi - lo) * resolution)
    longest = steps if max_length is None else int(scalar(max_length) * resolution)
    rows = [[REALS if i == j else EMPTY for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j or (symmetric and j < i):
                continue
            if rng.random() >= density:
                continue
            parts = []
            for _ in range(rng.randint(1, max_contacts)):
                a = rng.randint(0, steps)
                b = min(steps, a + rng.randint(0, longest))
                parts.append((lo + Fraction(a, resolution), lo + Fraction(b, resolution)))
            rows[i][j] = IntervalSet(parts)
            if symmetric:
                rows[j][i] = rows[i][j]
    return TvgMatrix(range(n), rows, LIFETIME)


# -- sphere constellations ---------------------------------------------------------

@dataclass
class SphereConstellation:
    points: np.ndarray  # (n, 3) at time 0
    theta: float
    axes: np.ndarray | None = None  # rotation axis per node
    rates: np.ndarray | None = None  # radians per unit time

    def positions(self, t) -> np.ndarray:
        """Node positions at the times ``t`` (shape ``(len(t), n, 3)``)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.axes is None:
            return np.broadcast_to(self.points, (len(t),) + self.points.shape)
        k, p = self.axes, self.points
        ang = t[:, None] * self.rates[None, :]
        cos, sin = np.cos(ang)[..., None], np.sin(ang)[..., None]
        kxp = np.cross(k, p)
        kdp = np.sum(k * p, axis=1)[:, None] * k
        # Rodrigues rotation of each point about its own axis
        return p[None] * cos + kxp[None] * sin + kdp[None] * (1 - cos)


def sphere_points(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def make_constellation(n: int, theta: float, seed: int = 0, rotating: bool = False,
                       rate_range=(2 * math.pi, 4 * math.pi)) -> SphereConstellation:
    """Uniform points on the unit sphere; when rotating, each node circles a random
    axis perpendicular to its start position at a rate drawn from ``rate_range``
    (radians per unit of the duration)."""
    if n < 2:
        raise ValueError("need at least two nodes")
    if not 0 < theta < math.pi:
        raise ValueError("theta must lie in (0, pi)")
    pts = sphere_points(n, seed)
    if not rotating:
        return SphereConstellation(pts, theta)
    rng = np.random.default_rng(seed + 1)
    raw = rng.normal(size=(n, 3))
    axes = raw - np.sum(raw * pts, axis=1, keepdims=True) * pts
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    rates = rng.uniform(*rate_range, size=n)
    return SphereConstellation(pts, theta, axes, rates)


def _runs(alive: np.ndarray, times: list) -> IntervalSet:
    """Closed intervals spanning each maximal run of alive samples."""
    idx = np.flatnonzero(alive)
    if not len(idx):
        return EMPTY
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([idx[0]], idx[breaks + 1]))
    ends = np.concatenate((idx[breaks], [idx[-1]]))
    return IntervalSet((times[s], times[e]) for s, e in zip(starts, ends))


def constellation_tvg(c: SphereConstellation, duration=1, steps: int = 1000) -> TvgMatrix:
    """Edges alive while the angular distance is at most theta.

    Static constellations are exact: each edge lives on ``[0, duration]`` or
    never.  Rotating ones are sampled at ``steps + 1`` evenly spaced times.
    """
    duration = scalar(duration)
    n = len(c.points)
    cos_t = math.cos(c.theta)
    full = IntervalSet([(0, duration)])
    if c.axes is None:
        close = (c.points @ c.points.T) >= cos_t
        rows = [[REALS if i == j else (full if close[i, j] else EMPTY) for j in range(n)]
                for i in range(n)]
        return TvgMatrix(range(n), rows, LIFETIME)
    times = [duration * Fraction(k, steps) for k in range(steps + 1)]
    pos = c.positions([float(t) for t in times])
    dots = np.einsum("tia,tja->tij", pos, pos) >= cos_t
    rows = [[REALS] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = _runs(dots[:, i, j], times)
    return TvgMatrix(range(n), rows, LIFETIME)


def gen_sphere_constellation(n: int, theta: float = math.pi / 3, duration=1, rotating: bool = False,
                             seed: int = 0, steps: int = 1000) -> TvgMatrix:
    return constellation_tvg(make_constellation(n, theta, seed, rotating), duration, steps)


# -- two-class corpus --------------------------------------------------------------

@dataclass
class CorpusSample:
    id: str
    label: str
    tvg: TvgMatrix


def _churn_tvg(rng: random.Random, n: int, horizon: int) -> TvgMatrix:
    """Class A: every pair flickers through many short contacts."""
    rows = [[REALS if i == j else EMPTY for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.8:
                parts = []
                for _ in range(rng.randint(3, 6)):
                    a = rng.randint(0, horizon - 4)
                    parts.append((a, a + rng.randint(1, 4)))
                rows[i][j] = rows[j][i] = IntervalSet(parts)
    return TvgMatrix(range(n), rows, LIFETIME)


def _relay_tvg(rng: random.Random, n: int, horizon: int) -> TvgMatrix:
    """Class B: a long-lived relay ring with a few long chords; cycles persist."""
    rows = [[REALS if i == j else EMPTY for j in range(n)] for i in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    links = [(order[k], order[(k + 1) % n]) for k in range(n)]
    for _ in range(rng.randint(1, 2)):
        u, v = rng.sample(range(n), 2)
        if (u, v) not in links and (v, u) not in links:
            links.append((u, v))
    for u, v in links:
        a = rng.randint(0, horizon // 5)
        b = rng.randint(4 * horizon // 5, horizon)
        if rng.random() < 0.5:
            gap = rng.randint(a + 1, b - 4)
            life = IntervalSet([(a, gap), (gap + rng.randint(1, 3), b)])
        else:
            life = IntervalSet([(a, b)])
        rows[u][v] = rows[v][u] = life
    return TvgMatrix(range(n), rows, LIFETIME)


def gen_two_class_corpus(m: int = 20, seed: int = 0, n: int = 7, horizon: int = 60) -> list:
    """``m`` samples of each class, interleaved A, B, A, B, ..."""
    if m < 2:
        raise ValueError("need at least two samples per class")
    rng = random.Random(seed)
    out = []
    for k in range(m):
        out.append(CorpusSample(f"A{k:03d}", "A", _churn_tvg(rng, n, horizon)))
        out.append(CorpusSample(f"B{k:03d}", "B", _relay_tvg(rng, n, horizon)))
    return out
