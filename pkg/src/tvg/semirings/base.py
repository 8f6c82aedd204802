"""Pluggable semi-ring specifications and a randomized axiom checker."""
from __future__ import annotations

import operator
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Iterable


@dataclass(frozen=True)
class Semiring:
    """Operations and neutral elements of a semi-ring ``(S, add, mul, zero, one)``.

    ``equals`` must decide equality of canonical representatives; Kleene
    iteration relies on it to detect convergence.
    """

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    equals: Callable[[Any, Any], bool] = operator.eq
    idempotent: bool = True
    format: Callable[[Any], str] = str

    def sum(self, items: Iterable) -> Any:
        return reduce(self.add, items, self.zero)

    def product(self, items: Iterable) -> Any:
        return reduce(self.mul, items, self.one)

    def leq(self, a, b) -> bool:
        """Natural order of an idempotent semi-ring: ``a <= b`` iff ``a + b == b``."""
        return self.equals(self.add(a, b), b)


@dataclass
class Violation:
    identity: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.identity} fails for {self.witness!r}"


@dataclass
class AxiomReport:
    semiring: str
    trials: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return f"{self.semiring}: {self.trials} trials, all identities hold"
        lines = [f"{self.semiring}: {len(self.violations)} identities violated"]
        lines += [f"  {v}" for v in self.violations]
        return "\n".join(lines)


def _identities(S: Semiring):
    add, mul, eq, zero, one = S.add, S.mul, S.equals, S.zero, S.one
    return [
        ("additive associativity", lambda a, b, c: eq(add(add(a, b), c), add(a, add(b, c)))),
        ("additive commutativity", lambda a, b, c: eq(add(a, b), add(b, a))),
        ("additive identity", lambda a, b, c: eq(add(zero, a), a) and eq(add(a, zero), a)),
        ("multiplicative associativity", lambda a, b, c: eq(mul(mul(a, b), c), mul(a, mul(b, c)))),
        ("multiplicative identity", lambda a, b, c: eq(mul(one, a), a) and eq(mul(a, one), a)),
        ("left distributivity", lambda a, b, c: eq(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))),
        ("right distributivity", lambda a, b, c: eq(mul(add(a, b), c), add(mul(a, c), mul(b, c)))),
        ("annihilation", lambda a, b, c: eq(mul(zero, a), zero) and eq(mul(a, zero), zero)),
    ]


def axioms_check(S: Semiring, sampler: Callable[[random.Random], Any],
                 trials: int = 1000, seed: int = 0) -> AxiomReport:
    """Evaluate every semi-ring identity on ``trials`` random triples.

    At most one witness is kept per violated identity.
    """
    rng = random.Random(seed)
    report = AxiomReport(S.name, trials)
    failed: set = set()
    identities = _identities(S)
    for _ in range(trials):
        a, b, c = sampler(rng), sampler(rng), sampler(rng)
        for name, holds in identities:
            if name in failed:
                continue
            if not holds(a, b, c):
                failed.add(name)
                report.violations.append(Violation(name, (a, b, c)))
    return report
