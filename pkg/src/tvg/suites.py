"""Named random samplers for the semi-ring identity checker."""
from __future__ import annotations

import random
from fractions import Fraction

from .intervals import INF, REALS, IntervalSet
from .matrix import TvgMatrix, matrix_semiring
from .semirings.base import AxiomReport, Semiring, axioms_check
from .semirings.basic import BOOL, LIFETIME, TROPICAL, path_semiring
from .semirings.contact import CONTACT, random_contact
from .semirings.delay import DELAY, LITERAL_DELAY, DelayedLifetime
from .semirings.endo import ENDO, random_endo


def random_bool(rng: random.Random) -> bool:
    return rng.random() < 0.5


def random_intervalset(rng: random.Random, scale: int = 12) -> IntervalSet:
    r = rng.random()
    if r < 0.05:
        return REALS
    if r < 0.1:
        return IntervalSet([(-INF, rng.randint(-scale, scale))])
    parts = []
    for _ in range(rng.randint(0, 3)):
        a = Fraction(rng.randint(-2 * scale, 2 * scale), 2)
        parts.append((a, a + Fraction(rng.randint(0, 8), 2)))
    return IntervalSet(parts)


def random_tropical(rng: random.Random):
    return INF if rng.random() < 0.15 else Fraction(rng.randint(-20, 20), rng.choice((1, 2, 3)))


def random_delayed(rng: random.Random) -> DelayedLifetime:
    return DelayedLifetime(random_intervalset(rng), Fraction(rng.randint(0, 10), rng.choice((1, 2))))


def random_raw_delayed(rng: random.Random) -> tuple:
    life = random_intervalset(rng)
    # raw pairs keep delays on empty lifetimes, which is what breaks annihilation
    return (life, Fraction(rng.randint(0, 10)))


PATH_VERTICES = ("a", "b", "c")
PATH = path_semiring(PATH_VERTICES)


def random_path_sum(rng: random.Random) -> frozenset:
    walks = set()
    for _ in range(rng.randint(0, 3)):
        length = rng.randint(0, 2)
        walks.add(tuple(rng.choice(PATH_VERTICES) for _ in range(length + 1)))
    return frozenset(walks)


def _matrix_sampler(inner, S: Semiring, labels=("x", "y", "z")):
    def sample(rng):
        n = len(labels)
        return TvgMatrix(labels, [[inner(rng) for _ in range(n)] for _ in range(n)], S)
    return sample


SUITES = {
    "boolean": (BOOL, random_bool),
    "lifetime": (LIFETIME, random_intervalset),
    "tropical": (TROPICAL, random_tropical),
    "endomorphism": (ENDO, random_endo),
    "delay": (DELAY, random_delayed),
    "delay-literal": (LITERAL_DELAY, random_raw_delayed),
    "contact": (CONTACT, random_contact),
    "path": (PATH, random_path_sum),
    "matrix-boolean": (matrix_semiring(BOOL, "xyz"), _matrix_sampler(random_bool, BOOL)),
    "matrix-lifetime": (matrix_semiring(LIFETIME, "xyz"), _matrix_sampler(random_intervalset, LIFETIME)),
    "matrix-tropical": (matrix_semiring(TROPICAL, "xyz"), _matrix_sampler(random_tropical, TROPICAL)),
    "matrix-delay": (matrix_semiring(DELAY, "xyz"), _matrix_sampler(random_delayed, DELAY)),
    "matrix-contact": (matrix_semiring(CONTACT, "xyz"), _matrix_sampler(random_contact, CONTACT)),
}


def run_suite(name: str, trials: int = 1000, seed: int = 0) -> AxiomReport:
    S, sampler = SUITES[name]
    return axioms_check(S, sampler, trials, seed)
