"""Barcode distance matrices and K-nearest-neighbour classification."""
from __future__ import annotations

import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .metrics import matching_distance
from .zigzag import zigzag_barcode


@dataclass
class LabeledCorpus:
    ids: list
    labels: list
    tvgs: list = field(default_factory=list)
    barcodes: dict = field(default_factory=dict)  # dim -> list of Barcode

    def __post_init__(self):
        if len(self.ids) != len(self.labels):
            raise ValueError("ids and labels differ in length")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("sample ids must be unique")

    @classmethod
    def from_samples(cls, samples) -> "LabeledCorpus":
        return cls([s.id for s in samples], [s.label for s in samples], [s.tvg for s in samples])

    def featurize(self, dim: int) -> list:
        if dim not in self.barcodes:
            self.barcodes[dim] = [zigzag_barcode(M, dim) for M in self.tvgs]
        return self.barcodes[dim]


def _row(args):
    i, bars, p = args
    return [matching_distance(bars[i], bars[j], p) for j in range(i + 1, len(bars))]


def distance_matrix(corpus: LabeledCorpus, dim: int, p, jobs: int = 1) -> list:
    """Symmetric matrix of matching distances with a zero diagonal."""
    bars = corpus.featurize(dim)
    n = len(bars)
    tasks = [(i, bars, p) for i in range(n)]
    if jobs > 1 and n > 8:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            upper = list(ex.map(_row, tasks))
    else:
        upper = [_row(t) for t in tasks]
    D = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(upper):
        for off, d in enumerate(row):
            j = i + 1 + off
            D[i][j] = D[j][i] = d
    return D


def knn_classify(D, labels, train, test, k: int):
    """Majority vote among the k nearest training samples.

    Training samples tied with the k-th distance all vote.  Vote ties go to
    the label whose voters have the smaller mean distance, then to the
    lexicographically smaller label.
    """
    if not train or not test:
        raise ValueError("train and test sets must be non-empty")
    if not 1 <= k <= len(train):
        raise ValueError(f"k must lie in 1..{len(train)}")
    preds = []
    correct = 0
    for t in test:
        ranked = sorted(train, key=lambda s: D[t][s])
        cutoff = D[t][ranked[k - 1]]
        voters = [s for s in ranked if D[t][s] <= cutoff]
        dists = defaultdict(list)
        for s in voters:
            dists[labels[s]].append(D[t][s])
        pred = min(dists, key=lambda lab: (-len(dists[lab]), sum(dists[lab]) / len(dists[lab]), str(lab)))
        preds.append(pred)
        correct += pred == labels[t]
    return preds, correct / len(test)


def stratified_split(labels, fraction: float, rng: random.Random):
    if not 0 < fraction < 1:
        raise ValueError("train fraction must lie strictly between 0 and 1")
    by_class = defaultdict(list)
    for i, lab in enumerate(labels):
        by_class[lab].append(i)
    train, test = [], []
    for lab in sorted(by_class, key=str):
        members = by_class[lab][:]
        rng.shuffle(members)
        cut = round(fraction * len(members))
        if cut < 1 or cut >= len(members):
            raise ValueError(f"class {lab!r} with {len(members)} samples cannot be split at {fraction}")
        train += members[:cut]
        test += members[cut:]
    return sorted(train), sorted(test)


def split_runner(D, labels, fraction: float = 0.8, repeats: int = 100, seed: int = 0,
                 k_values=range(1, 11)) -> dict:
    """Mean test accuracy for each k over ``repeats`` stratified splits."""
    rng = random.Random(seed)
    totals = {k: 0.0 for k in k_values}
    for _ in range(repeats):
        train, test = stratified_split(labels, fraction, rng)
        for k in k_values:
            if k <= len(train):
                totals[k] += knn_classify(D, labels, train, test, k)[1]
    return {k: v / repeats for k, v in totals.items()}


def shuffled(labels, seed: int) -> list:
    out = list(labels)
    random.Random(seed).shuffle(out)
    return out


def format_dat(curves: dict, header: list | None = None) -> str:
    """``.dat`` columns: k, then one accuracy column per named curve."""
    names = list(curves)
    ks = sorted({k for c in curves.values() for k in c})
    lines = list(header or [])
    lines.append("# k " + " ".join(names))
    for k in ks:
        lines.append(f"{k} " + " ".join(f"{curves[n].get(k, float('nan')):.6f}" for n in names))
    return "\n".join(lines) + "\n"


def parse_dat(text: str) -> dict:
    names = None
    curves: dict = {}
    for line in text.splitlines():
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            parts = s[1:].split()
            if parts and parts[0] == "k":
                names = parts[1:]
                curves = {n: {} for n in names}
            continue
        vals = s.split()
        for n, v in zip(names, vals[1:]):
            curves[n][int(vals[0])] = float(v)
    return curves
