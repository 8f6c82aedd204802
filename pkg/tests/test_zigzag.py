"""Zigzag barcodes against a generalized-rank oracle.

For every interval [s, e] of the alternating diagram the oracle computes the
rank of the canonical map from the limit to the colimit of the restricted
diagram by plain GF(2) linear algebra; Moebius inversion of these ranks gives
the interval multiplicities.  Homology bases and induced maps come from
networkx (components and cycle bases), independently of the library's
union-find and fundamental cycles.
"""
import itertools
import random
from collections import Counter
from fractions import Fraction

import networkx as nx
import pytest

from conftest import random_lifetime_matrix
from tvg.intervals import INF, REALS, IntervalSet
from tvg.matrix import TvgMatrix, lifetime_matrix, snapshot
from tvg.metrics import Barcode, BarcodeInterval, bottleneck, matching_distance
from tvg.semirings.basic import LIFETIME
from tvg.zigzag import barcode_feature_distance, betti, critical_values, zigzag_barcode

F = Fraction
I = IntervalSet


# -- GF(2) helpers over int bitmasks ----------------------------------------------------

def gf2_rank(vectors):
    basis = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def gf2_nullspace(constraints, nvars):
    """Basis of {x : <c, x> = 0 for every constraint c}."""
    pivots = {}  # pivot column -> reduced row
    for c in constraints:
        for col, row in pivots.items():
            if c >> col & 1:
                c ^= row
        if not c:
            continue
        col = c.bit_length() - 1
        for k in list(pivots):
            if pivots[k] >> col & 1:
                pivots[k] ^= c
        pivots[col] = c
    out = []
    for free in range(nvars):
        if free in pivots:
            continue
        x = 1 << free
        for col, row in pivots.items():
            if row >> free & 1:
                x |= 1 << col
        out.append(x)
    return out


def gf2_solve(basis, target):
    """Coefficients (bitmask over basis indices) writing target in the basis."""
    rows = {}
    for idx, v in enumerate(basis):
        tag = 1 << idx
        while v:
            top = v.bit_length() - 1
            if top not in rows:
                rows[top] = (v, tag)
                break
            v, tag = v ^ rows[top][0], tag ^ rows[top][1]
    coeff = 0
    while target:
        top = target.bit_length() - 1
        v, tag = rows[top]
        target ^= v
        coeff ^= tag
    return coeff


# -- homology of snapshots via networkx -----------------------------------------------

def snapshot_graphs(M, samples):
    n = M.n
    graphs = []
    for t in samples:
        g = nx.Graph()
        g.add_nodes_from(v for v in range(n) if t in M.entries[v][v])
        for u, v in itertools.combinations(range(n), 2):
            if u in g and v in g and (t in M.entries[u][v] or t in M.entries[v][u]):
                g.add_edge(u, v)
        graphs.append(g)
    return graphs


def edge_vector(cycle, index):
    vec = 0
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        vec ^= 1 << index[frozenset((a, b))]
    return vec


def homology(graphs, k, n):
    """Per-space dimensions and induced maps ``maps[(a, b)] = [image bitmask per basis vector]``."""
    index = {frozenset(p): i for i, p in enumerate(itertools.combinations(range(n), 2))}
    if k == 0:
        bases = [sorted((frozenset(c) for c in nx.connected_components(g)), key=min) for g in graphs]
    else:
        bases = [[edge_vector(c, index) for c in nx.cycle_basis(g)] for g in graphs]
    maps = {}
    for i in range(len(graphs) - 1):
        a, b = (i, i + 1) if i % 2 == 0 else (i + 1, i)
        if k == 0:
            img = [1 << next(j for j, d in enumerate(bases[b]) if comp <= d) for comp in bases[a]]
        else:
            img = [gf2_solve(bases[b], z) for z in bases[a]]
        maps[(a, b)] = img
    return [len(b) for b in bases], maps


def generalized_rank(dims, maps, s, e):
    offset, total = {}, 0
    for i in range(s, e + 1):
        offset[i] = total
        total += dims[i]
    arrows = [(a, b) for (a, b) in maps if s <= min(a, b) and max(a, b) <= e]
    constraints, relations = [], []
    for a, b in arrows:
        img = maps[(a, b)]
        for r in range(dims[b]):
            c = 1 << (offset[b] + r)
            for col, v in enumerate(img):
                if v >> r & 1:
                    c |= 1 << (offset[a] + col)
            constraints.append(c)
        for col, v in enumerate(img):
            relations.append((1 << (offset[a] + col)) | (v << offset[b]))
    lim = gf2_nullspace(constraints, total)
    mask = ((1 << dims[s]) - 1) << offset[s]
    images = [x & mask for x in lim]
    return gf2_rank(relations + images) - gf2_rank(relations)


def oracle_intervals(M, k):
    crit = critical_values(M)
    graphs = snapshot_graphs(M, crit.samples)
    dims, maps = homology(graphs, k, M.n)
    m = len(graphs)
    rk = {}

    def r(s, e):
        if s < 0 or e >= m:
            return 0
        if (s, e) not in rk:
            rk[s, e] = generalized_rank(dims, maps, s, e)
        return rk[s, e]

    out = Counter()
    for s in range(m):
        for e in range(s, m):
            mult = r(s, e) - r(s - 1, e) - r(s, e + 1) + r(s - 1, e + 1)
            assert mult >= 0
            if mult:
                out[(s, e)] = mult
    return crit, out


def index_to_real(vals, last, s, e):
    # odd indices are the critical values; even ones the open regions between them
    if s % 2:
        lo, open_l = vals[s // 2], False
    else:
        lo, open_l = (-INF if s == 0 else vals[s // 2 - 1]), True
    if e % 2:
        hi, open_r = vals[e // 2], False
    else:
        hi, open_r = (INF if e == last else vals[e // 2]), True
    return BarcodeInterval(lo, hi, open_l, open_r)


def oracle_barcode(M, k):
    crit, counts = oracle_intervals(M, k)
    last = len(crit.samples) - 1
    return Barcode((index_to_real(crit.values, last, s, e), m) for (s, e), m in counts.items())


def small_instance(rng, n, edges, diag_window=False):
    pairs = rng.sample([(i, j) for i in range(n) for j in range(n) if i != j], edges)
    E = {}
    for p in pairs:
        parts = []
        for _ in range(rng.randint(1, 2)):
            a = rng.randint(0, 8)
            parts.append((a, a + rng.randint(0, 4)))
        E[p] = I(parts)
    if diag_window:
        return TvgMatrix.from_edges(range(n), E, LIFETIME, diagonal=I([(rng.randint(0, 2), rng.randint(8, 12))]))
    return lifetime_matrix(range(n), E)


@pytest.mark.parametrize("k", [0, 1])
def test_barcode_matches_generalized_rank_oracle(k):
    rng = random.Random(100 + k)
    cycles = 0
    for _ in range(40):
        n = rng.randint(2 + k, 5)
        top = min(7 + 5 * k, n * (n - 1))
        M = small_instance(rng, n, rng.randint(1 + 3 * k, top), diag_window=rng.random() < 0.3)
        B = zigzag_barcode(M, k)
        assert B == oracle_barcode(M, k)
        cycles += len(B)
    assert cycles >= 40


def test_oracle_on_a_merge_then_split():
    # a-b alive on [0,4], b-c on [2,6]: one component throughout the middle
    M = lifetime_matrix("abc", {("a", "b"): I([(0, 4)]), ("b", "c"): I([(2, 6)])})
    B = zigzag_barcode(M, 0)
    assert B == oracle_barcode(M, 0)
    assert B.count_containing(3) == 1 and B.count_containing(5) == 2 and B.count_containing(-1) == 3


def sample_times(M, rng, count=50):
    crit = critical_values(M)
    ts = list(crit.samples)
    lo, hi = min(ts), max(ts)
    while len(ts) < count:
        ts.append(lo + (hi - lo) * F(rng.randint(0, 1000), 1000))
    return ts[:max(count, len(crit.samples))]


def nx_betti(M, t):
    g = snapshot_graphs(M, [t])[0]
    c = nx.number_connected_components(g)
    return c, g.number_of_edges() - g.number_of_nodes() + c, g


def test_betti_consistency_random_instances():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 6)
        M = random_lifetime_matrix(rng, n, density=rng.choice((0.3, 0.5, 0.8)), scale=12)
        B0, B1 = zigzag_barcode(M, 0), zigzag_barcode(M, 1)
        for t in sample_times(M, rng):
            b0, b1, g = nx_betti(M, t)
            assert B0.count_containing(t) == b0 == betti(M, t, 0)
            assert B1.count_containing(t) == b1 == betti(M, t, 1)
            # Euler characteristic of the snapshot
            assert b0 - b1 == g.number_of_nodes() - g.number_of_edges()


def test_bar_endpoints_lie_on_critical_values():
    rng = random.Random(8)
    for _ in range(20):
        M = random_lifetime_matrix(rng, 5, scale=12)
        allowed = set(critical_values(M).values) | {INF, -INF}
        B0 = zigzag_barcode(M, 0)
        ts = critical_values(M).samples
        assert len(B0) >= max(nx_betti(M, t)[0] for t in ts)
        for k in (0, 1):
            for bar in zigzag_barcode(M, k).bars():
                assert bar.birth in allowed and bar.death in allowed


def static_graph(T, diagonal):
    # two components: a 4-cycle with a chord (two independent cycles) and a single edge
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5)]
    E = {e: I([(0, T)]) for e in edges}
    return TvgMatrix.from_edges(range(7), E, LIFETIME, diagonal=diagonal), 3, 2


def test_static_graph_with_windowed_vertices():
    T = 10
    M, c, b1 = static_graph(T, I([(0, T)]))
    assert zigzag_barcode(M, 0) == Barcode([(BarcodeInterval(0, T), c)])
    assert zigzag_barcode(M, 1) == Barcode([(BarcodeInterval(0, T), b1)])


def test_static_graph_with_always_alive_vertices():
    T = 10
    M, c, b1 = static_graph(T, REALS)
    n = 7
    assert zigzag_barcode(M, 0) == Barcode([
        (BarcodeInterval(-INF, INF, True, True), c),
        (BarcodeInterval(-INF, 0, True, True), n - c),
        (BarcodeInterval(T, INF, True, True), n - c)])
    assert zigzag_barcode(M, 1) == Barcode([(BarcodeInterval(0, T), b1)])


def triangle(short_edge):
    E = {(0, 1): I([(0, 10)]), (1, 2): I([(0, 10)]), (2, 0): I([(0, short_edge)])}
    return lifetime_matrix(range(3), E)


def test_dying_edge_triangle():
    B = zigzag_barcode(triangle(5), 1)
    assert B == Barcode([BarcodeInterval(0, 5)])
    full = zigzag_barcode(triangle(10), 1)
    assert full == Barcode([BarcodeInterval(0, 10)])
    # matching [0,5] with [0,10] costs 5; leaving both unmatched costs max(2.5, 5)
    assert bottleneck(B, full) == 5
    assert barcode_feature_distance(triangle(5), triangle(10), 1, INF) == 5
    assert barcode_feature_distance(triangle(5), triangle(5), 1, 2) == 0


def test_critical_value_examples():
    M = lifetime_matrix("ab", {("a", "b"): I([(2, 5)])})
    crit = critical_values(M)
    assert crit.values == [2, 5]
    assert F(7, 2) in crit.samples and crit.samples[0] < 2 and crit.samples[-1] > 5
    assert critical_values(lifetime_matrix("ab", {})).values == []
    with pytest.raises(ValueError):
        critical_values(lifetime_matrix("ab", {("a", "b"): I([(0, INF)])}))


def test_snapshots_constant_within_regions():
    rng = random.Random(9)
    for _ in range(20):
        M = random_lifetime_matrix(rng, 4, scale=10)
        vals = critical_values(M).values
        for a, b in zip(vals, vals[1:]):
            assert snapshot(M, a + (b - a) / 3) == snapshot(M, a + 2 * (b - a) / 3)


def test_label_permutation_does_not_change_barcodes():
    rng = random.Random(10)
    for _ in range(20):
        n = rng.randint(3, 6)
        M = random_lifetime_matrix(rng, n, scale=12)
        sigma = list(range(n))
        rng.shuffle(sigma)
        P = TvgMatrix([M.labels[s] for s in sigma],
                      [[M.entries[sigma[i]][sigma[j]] for j in range(n)] for i in range(n)], LIFETIME)
        for k in (0, 1):
            assert zigzag_barcode(M, k) == zigzag_barcode(P, k)


def test_degree_must_be_zero_or_one():
    with pytest.raises(ValueError):
        zigzag_barcode(triangle(5), 2)


def reparametrize(M, knots, values):
    """Apply the increasing piecewise-linear map knots -> values to every endpoint."""
    def phi(t):
        if t in (INF, -INF):
            return t
        for (x0, y0), (x1, y1) in zip(zip(knots, values), zip(knots[1:], values[1:])):
            if x0 <= t <= x1:
                return y0 + (y1 - y0) * (t - x0) / (x1 - x0)
        raise ValueError(t)

    return M.map(lambda x: I((phi(a), phi(b)) for a, b in x), LIFETIME), phi


@pytest.mark.parametrize("eps", [F(1, 100), F(1, 10), F(1)])
def test_monotone_time_change_moves_bars_by_at_most_eps(eps):
    # an increasing time change keeps the order of all events, so bars move
    # exactly through it and the bottleneck distance is at most eps
    rng = random.Random(int(1 / eps))
    for _ in range(20):
        M = random_lifetime_matrix(rng, rng.randint(2, 5), scale=12)
        knots = [F(k, 2) for k in range(-4, 66)]
        values, prev = [], None
        for x in knots:
            lo = -eps if prev is None else max(-eps, prev - x + F(1, 10))
            d = lo + (eps - lo) * F(rng.randint(0, 100), 100)
            values.append(x + d)
            prev = x + d
        N, phi = reparametrize(M, knots, values)
        for k in (0, 1):
            B, C = zigzag_barcode(M, k), zigzag_barcode(N, k)
            moved = Barcode((BarcodeInterval(phi(b.birth), phi(b.death), b.open_l, b.open_r), m)
                            for b, m in B.items())
            assert C == moved
            assert matching_distance(B, C, INF) <= eps


def test_small_gap_moves_hausdorff_little_but_splits_cycle():
    # a 0.02 gap in one edge is invisible to the Hausdorff distance (0.01)
    # but splits the H1 bar, so barcode distance is not bounded by it
    full = {(0, 1): I([(0, 10)]), (1, 2): I([(0, 10)]), (2, 0): I([(0, 10)])}
    gap = dict(full)
    gap[(2, 0)] = I([(0, F(499, 100)), (F(501, 100), 10)])
    A, B = lifetime_matrix(range(3), full), lifetime_matrix(range(3), gap)
    from tvg.metrics import tvg_hausdorff
    assert tvg_hausdorff(A, B) == F(1, 100)
    assert zigzag_barcode(B, 1) == Barcode([BarcodeInterval(0, F(499, 100)), BarcodeInterval(F(501, 100), 10)])
    assert bottleneck(zigzag_barcode(A, 1), zigzag_barcode(B, 1)) == 5
