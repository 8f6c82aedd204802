"""Zigzag persistence of lifetime-matrix TVGs over GF(2).

The snapshot graphs are sampled once per constancy region and once per
critical value, giving the alternating diagram

    G_0 -> G_1 <- G_2 -> G_3 <- ... <- G_2m

where odd indices are the critical values and even indices the open regions
between them.  Edges are undirected with lifetime ``M_ij | M_ji``; vertex
lifetimes come from the diagonal, and an edge only lives while both of its
endpoints do.

Homology classes are stored as bitmasks in one ambient space per degree
(vertex sets for H0, edge sets for H1).  Every map in the diagram is the
identity on these representatives, so each space only needs a coordinate
function and a basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intervals import INF
from .matrix import TvgMatrix
from .metrics import Barcode, BarcodeInterval, matching_distance


@dataclass
class CriticalSequence:
    values: list
    samples: list  # one time per diagram index

    def index_time(self, i: int):
        return self.samples[i]


def critical_values(M: TvgMatrix) -> CriticalSequence:
    vals = set()
    for i, row in enumerate(M.entries):
        for j, x in enumerate(row):
            if i != j and not x.bounded:
                raise ValueError(f"entry ({M.labels[i]},{M.labels[j]}) is unbounded")
            vals |= x.endpoints()
    vals = sorted(vals)
    if not vals:
        return CriticalSequence([], [Fraction(0)])
    samples = [vals[0] - 1]
    for a, b in zip(vals, vals[1:]):
        samples += [a, (a + b) / 2]
    samples += [vals[-1], vals[-1] + 1]
    return CriticalSequence(vals, samples)


# -- graphs ---------------------------------------------------------------------

def _undirected(M: TvgMatrix):
    edges = []
    for i in range(M.n):
        for j in range(i + 1, M.n):
            life = (M.entries[i][j] | M.entries[j][i]) & M.entries[i][i] & M.entries[j][j]
            if life:
                edges.append((i, j, life))
    return edges


class _Graph:
    """Snapshot graph with its H0 and H1 coordinate systems."""

    def __init__(self, n, alive: list, edges: list):
        self.alive = alive
        self.edges = edges  # (global edge id, u, v)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        cycles = []
        tree: dict = {v: [] for v in alive}
        for e, u, v in edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                cycles.append((e, u, v))
            else:
                parent[ru] = rv
                tree[u].append((v, e))
                tree[v].append((u, e))
        comp: dict = {}
        for v in alive:
            comp.setdefault(find(v), len(comp))
        self.comp_of = {v: comp[find(v)] for v in alive}
        self.n_comp = len(comp)
        # spanning-forest paths give the fundamental cycles
        self.h1_basis = [self._tree_path(tree, u, v) | (1 << e) for e, u, v in cycles]
        roots: dict = {}
        for v in alive:
            roots.setdefault(self.comp_of[v], v)
        self.h0_basis = [1 << v for v in roots.values()]

    @staticmethod
    def _tree_path(tree, u, v) -> int:
        prev = {u: None}
        stack = [u]
        while stack:
            x = stack.pop()
            if x == v:
                break
            for y, e in tree[x]:
                if y not in prev:
                    prev[y] = (x, e)
                    stack.append(y)
        mask = 0
        while prev[v] is not None:
            x, e = prev[v]
            mask |= 1 << e
            v = x
        return mask

    def h0_coords(self, z: int) -> int:
        out = 0
        comp_of = self.comp_of
        while z:
            low = z & -z
            v = low.bit_length() - 1
            out ^= 1 << comp_of[v]
            z ^= low
        return out


def diagram(M: TvgMatrix):
    crit = critical_values(M)
    n = M.n
    edges = _undirected(M)
    graphs = []
    for t in crit.samples:
        alive = [v for v in range(n) if t in M.entries[v][v]]
        live = [(e, u, v) for e, (u, v, life) in enumerate(edges) if t in life]
        graphs.append(_Graph(n, alive, live))
    return crit, graphs


# -- GF(2) elimination ------------------------------------------------------------

class _Echelon:
    """Row echelon basis keyed by leading bit; each row carries a combination tag."""

    def __init__(self):
        self.rows: dict = {}

    def reduce(self, v: int, tag: int = 0):
        rows = self.rows
        while v:
            p = v.bit_length() - 1
            row = rows.get(p)
            if row is None:
                return v, tag
            v ^= row[0]
            tag ^= row[1]
        return 0, tag

    def add(self, v: int, tag: int):
        self.rows[v.bit_length() - 1] = (v, tag)

    def full_reduce(self, v: int, tag: int = 0):
        """Canonical remainder: clear every pivot bit, highest first."""
        for p in sorted(self.rows, reverse=True):
            if v >> p & 1:
                row = self.rows[p]
                v ^= row[0]
                tag ^= row[1]
        return v, tag


def _rank(birth: int, forward: bool):
    return (1, birth) if forward else (0, -birth)


def zigzag_intervals(n_spaces: int, coords, bases, directions) -> list:
    """Interval decomposition of a zigzag whose maps are the identity on representatives.

    ``coords[i](z)`` gives the coordinates of a representative in space i,
    ``bases[i]`` lists representatives of a basis of space i and
    ``directions[i]`` is True when the arrow between i and i+1 points forward.
    Returns ``(birth_index, death_index)`` pairs.
    """
    out = []
    # active intervals: [rank, birth, rep]
    active = [[_rank(0, True), 0, z] for z in bases[0]]
    for i in range(n_spaces - 1):
        nxt = i + 1
        active.sort(key=lambda a: a[0])
        if directions[i]:
            ech = _Echelon()
            survivors = []
            for k, (rank, birth, z) in enumerate(active):
                rem, _ = ech.reduce(coords[nxt](z))
                if rem:
                    ech.add(rem, 0)
                    survivors.append([rank, birth, z])
                else:
                    out.append((birth, i))
            for z in bases[nxt]:
                rem, _ = ech.reduce(coords[nxt](z))
                if rem:
                    ech.add(rem, 0)
                    survivors.append([_rank(nxt, True), nxt, z])
            active = survivors
        else:
            basis = bases[nxt]
            image = _Echelon()
            kernel = []
            for k, z in enumerate(basis):
                rem, tag = image.reduce(coords[i](z), 1 << k)
                if rem:
                    image.add(rem, tag)
                else:
                    kernel.append(tag)
            # make the image basis fully reduced so remainders are canonical
            for p in sorted(image.rows):
                v, tag = image.rows[p]
                low = v ^ (1 << p)
                for q in sorted(image.rows):
                    if q < p and low >> q & 1:
                        v ^= image.rows[q][0]
                        tag ^= image.rows[q][1]
                        low = v ^ (1 << p)
                image.rows[p] = (v, tag)
            quotient = _Echelon()
            survivors = []
            for k, (rank, birth, z) in enumerate(active):
                q, _ = image.full_reduce(coords[i](z))
                rem, combo = quotient.reduce(q, 1 << k)
                if rem:
                    quotient.add(rem, combo)
                    out.append((birth, i))
                    continue
                # z plus lower-ranked reps lies in the image; pull it back
                target = coords[i](z)
                for l in range(k):
                    if combo >> l & 1:
                        target ^= coords[i](active[l][2])
                _, tag = image.full_reduce(target)
                pre = 0
                for b in range(len(basis)):
                    if tag >> b & 1:
                        pre ^= basis[b]
                survivors.append([rank, birth, pre])
            for tag in kernel:
                rep = 0
                for b in range(len(basis)):
                    if tag >> b & 1:
                        rep ^= basis[b]
                survivors.append([_rank(nxt, False), nxt, rep])
            active = survivors
    out += [(birth, n_spaces - 1) for _, birth, _ in active]
    return out


def _to_real(crit: CriticalSequence, s: int, e: int) -> BarcodeInterval:
    vals = crit.values
    last = len(crit.samples) - 1
    if s % 2:
        birth, open_l = vals[s // 2], False
    else:
        birth, open_l = (-INF if s == 0 else vals[s // 2 - 1]), True
    if e % 2:
        death, open_r = vals[e // 2], False
    else:
        death, open_r = (INF if e == last else vals[e // 2]), True
    return BarcodeInterval(birth, death, open_l, open_r)


def zigzag_barcode(M: TvgMatrix, k: int) -> Barcode:
    """Degree-k zigzag barcode (k = 0 components, k = 1 independent cycles)."""
    if k not in (0, 1):
        raise ValueError("only degrees 0 and 1 exist for graphs")
    crit, graphs = diagram(M)
    if k == 0:
        coords = [g.h0_coords for g in graphs]
        bases = [g.h0_basis for g in graphs]
    else:
        coords = [(lambda z: z) for _ in graphs]
        bases = [g.h1_basis for g in graphs]
    # even index -> odd index is forward (a region sits inside its closure)
    directions = [i % 2 == 0 for i in range(len(graphs) - 1)]
    pairs = zigzag_intervals(len(graphs), coords, bases, directions)
    return Barcode(_to_real(crit, s, e) for s, e in pairs)


def betti(M: TvgMatrix, t, k: int) -> int:
    """Betti number of the undirected snapshot at time t."""
    alive = [v for v in range(M.n) if t in M.entries[v][v]]
    live = [(e, u, v) for e, (u, v, life) in enumerate(_undirected(M)) if t in life]
    g = _Graph(M.n, alive, live)
    return g.n_comp if k == 0 else len(live) - len(alive) + g.n_comp


def barcode_feature_distance(G1: TvgMatrix, G2: TvgMatrix, k: int, p):
    return matching_distance(zigzag_barcode(G1, k), zigzag_barcode(G2, k), p)
