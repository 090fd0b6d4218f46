"""Seeded random instances for the verification suites.

Everything is driven by a single random.Random so identical seeds reproduce
identical instances bit for bit.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .copulas import EmpiricalCopula
from .distributions import Empirical, Uniform
from .oracle import DiscreteMeasureND


def random_empirical(rng: random.Random, max_atoms: int = 12) -> Empirical:
    """Empirical law with distinct locations and rational weights."""
    n = rng.randint(1, max_atoms)
    locs = [round(rng.uniform(-5.0, 5.0), 6) for _ in range(n)]
    weights = [Fraction(rng.randint(1, 9)) for _ in range(n)]
    return Empirical(zip(locs, weights))


def random_rank_rows(rng: random.Random, n: int, d: int) -> list[tuple[float, ...]]:
    """Pseudo-observation rows whose columns are permutations of
    {0, 1/n, ..., (n-1)/n}, the shifted-rank convention of
    EmpiricalCopula.from_data."""
    cols = []
    for _ in range(d):
        ranks = list(range(n))
        rng.shuffle(ranks)
        cols.append([r / n for r in ranks])
    return [tuple(cols[i][j] for i in range(d)) for j in range(n)]


def random_empirical_copula(rng: random.Random, n: int, d: int) -> EmpiricalCopula:
    return EmpiricalCopula(random_rank_rows(rng, n, d))


def random_margin(rng: random.Random):
    """Either a uniform interval or a small empirical law."""
    if rng.random() < 0.5:
        a = rng.uniform(-3.0, 3.0)
        return Uniform(a, a + rng.uniform(0.5, 4.0))
    return random_empirical(rng, max_atoms=6)


def random_shared_instance(
    rng: random.Random, d: int, max_rows: int = 10
) -> tuple[EmpiricalCopula, list, list]:
    """A copula with rank rows plus two lists of d margins."""
    n = rng.randint(2, max_rows)
    C = random_empirical_copula(rng, n, d)
    marginsF = [random_margin(rng) for _ in range(d)]
    marginsG = [random_margin(rng) for _ in range(d)]
    return C, marginsF, marginsG


def random_discrete_nd(
    rng: random.Random, d: int, max_atoms: int = 6
) -> DiscreteMeasureND:
    """Arbitrary (non-shared-copula) discrete measure on R^d."""
    n = rng.randint(1, max_atoms)
    atoms = []
    for _ in range(n):
        loc = tuple(round(rng.uniform(-3.0, 3.0), 6) for _ in range(d))
        atoms.append((loc, Fraction(rng.randint(1, 9))))
    return DiscreteMeasureND(atoms)


def necessity_instance() -> tuple[DiscreteMeasureND, DiscreteMeasureND]:
    """Two laws with identical uniform margins but different copulas.

    The first puts mass on the diagonal pseudo-observations, the second on
    the antidiagonal; any coupling must move mass, so the optimal cost is
    strictly positive while every coordinatewise distance vanishes.
    """
    half = Fraction(1, 2)
    mu = DiscreteMeasureND([((0.25, 0.25), half), ((0.75, 0.75), half)])
    nu = DiscreteMeasureND([((0.25, 0.75), half), ((0.75, 0.25), half)])
    return mu, nu
