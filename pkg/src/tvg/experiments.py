"""Hop diameters and Kleene convergence radii of static sphere constellations."""
from __future__ import annotations

import math
import statistics
from collections import Counter
from dataclasses import dataclass

from .generators import gen_sphere_constellation
from .matrix import kleene_radius, temporal_diameter


@dataclass
class ConstellationRun:
    n: int
    seed: int
    diameter: int
    radius: int
    connected: bool


def constellation_runs(ns=(100, 200, 500), seeds=range(20), theta=math.pi / 3) -> list:
    runs = []
    for n in ns:
        for seed in seeds:
            M = gen_sphere_constellation(n, theta, seed=seed)
            d = temporal_diameter(M)
            runs.append(ConstellationRun(n, seed, d.diameter, kleene_radius(M),
                                         len(d.per_pair) == n * n))
    return runs


def summarize(runs: list, bound: int = 5) -> str:
    lines = [f"# n  runs  connected  diameter(min/median/max)  radius(min/median/max)  "
             f"radius<={bound}  diameter histogram"]
    for n in sorted({r.n for r in runs}):
        rs = [r for r in runs if r.n == n]
        ds = [r.diameter for r in rs]
        ks = [r.radius for r in rs]
        hist = " ".join(f"{d}:{c}" for d, c in sorted(Counter(ds).items()))
        lines.append(f"{n} {len(rs)} {sum(r.connected for r in rs)} "
                     f"{min(ds)}/{statistics.median(ds)}/{max(ds)} "
                     f"{min(ks)}/{statistics.median(ks)}/{max(ks)} "
                     f"{sum(k <= bound for k in ks)}/{len(rs)} {hist}")
    return "\n".join(lines) + "\n"
