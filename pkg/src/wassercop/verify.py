"""Verification suites: every theorem-level identity checked against the
exact discrete optimal-transport oracle on seeded random instances."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .copulas import frechet_hoeffding_check
from .distributions import Empirical, Uniform
from .instances import (
    necessity_instance,
    random_discrete_nd,
    random_empirical,
    random_empirical_copula,
    random_shared_instance,
)
from .oracle import (
    DiscreteMeasureND,
    brute_force_assignment,
    power_cost,
    solve_assignment,
    solve_ot,
    verify_comonotone_optimal,
    verify_projection_bound,
    verify_shared_copula_decomposition,
    verify_wpq_sandwich,
)
from .wasserstein import w1_cdf, wp_quantile, wp_via_M


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_gap: float
    checks: int
    detail: str = ""


def suite_comonotone_optimality(
    seed: int, pairs: int = 200, formula_shift: float = 0.0
) -> SuiteResult:
    """Quantile-integral power equals the LP minimum, p in {1, 2, 3}."""
    rng = random.Random(seed)
    worst = 0.0
    checks = 0
    ok = True
    for _ in range(pairs):
        F, G = random_empirical(rng), random_empirical(rng)
        for p in (1.0, 2.0, 3.0):
            r = verify_comonotone_optimal(F, G, p, formula_shift=formula_shift)
            worst = max(worst, r.gap / max(1.0, r.lp_value))
            ok = ok and r.passed
            checks += 1
    return SuiteResult("comonotone_optimality", ok, worst, checks)


def suite_formula_triangle(seed: int, pairs: int = 200) -> SuiteResult:
    """CDF-integral, quantile-integral and copula-integral routes agree."""
    rng = random.Random(seed)
    worst = 0.0
    checks = 0
    for _ in range(pairs):
        F, G = random_empirical(rng), random_empirical(rng)
        q1 = wp_quantile(F, G, 1.0).power_value
        worst = max(worst, abs(w1_cdf(F, G).power_value - q1))
        checks += 1
        for p in (1.0, 2.0, 3.0):
            gap = abs(wp_via_M(F, G, p).power_value - wp_quantile(F, G, p).power_value)
            worst = max(worst, gap)
            checks += 1
    return SuiteResult("formula_triangle", worst <= 1e-10, worst, checks)


def suite_metric_axioms(seed: int, triples: int = 1000) -> SuiteResult:
    """Identity, symmetry and the triangle inequality, p in {1, 2}."""
    rng = random.Random(seed)
    worst = 0.0
    ok = True
    checks = 0
    for _ in range(triples):
        mu, nu, rho = (random_empirical(rng) for _ in range(3))
        for p in (1.0, 2.0):
            if wp_quantile(mu, mu, p).value != 0.0:
                ok = False
            ab = wp_quantile(mu, nu, p).value
            ba = wp_quantile(nu, mu, p).value
            ac = wp_quantile(mu, rho, p).value
            cb = wp_quantile(rho, nu, p).value
            worst = max(worst, abs(ab - ba))
            if abs(ab - ba) > 1e-12:
                ok = False
            violation = ab - (ac + cb)
            worst = max(worst, violation)
            if violation > 1e-10:
                ok = False
            checks += 3
    return SuiteResult("metric_axioms", ok, worst, checks)


def suite_decomposition(seed: int, count: int = 100) -> SuiteResult:
    """Shared-copula LP equals the coordinatewise sum, d in {2, 3}, p in {1, 2, 3}."""
    rng = random.Random(seed)
    worst = 0.0
    ok = True
    checks = 0
    for k in range(count):
        d = 2 + (k % 2)
        C, mf, mg = random_shared_instance(rng, d)
        for p in (1.0, 2.0, 3.0):
            r = verify_shared_copula_decomposition(C, mf, mg, p)
            worst = max(worst, r.gap / max(1.0, r.lp_value))
            ok = ok and r.passed
            checks += 1
    return SuiteResult("decomposition", ok, worst, checks)


def suite_necessity(seed: int, count: int = 100) -> SuiteResult:
    """Different copulas with equal margins: LP > 0 while the sum vanishes;
    the projection lower bound holds on arbitrary instances."""
    rng = random.Random(seed)
    mu, nu = necessity_instance()
    lp, _ = solve_ot(mu, nu, power_cost(2.0))
    naive = verify_projection_bound(mu, nu, 2.0).formula_value
    ok = lp >= 0.1 and naive == 0.0
    detail = f"witness: lp={lp!r}, coordinatewise sum={naive!r}"
    worst = 0.0
    checks = 1
    for k in range(count):
        d = 2 + (k % 2)
        a = random_discrete_nd(rng, d)
        b = random_discrete_nd(rng, d)
        r = verify_projection_bound(a, b, 2.0)
        worst = max(worst, r.gap)
        ok = ok and r.passed
        checks += 1
    return SuiteResult("necessity", ok, worst, checks, detail)


def suite_frechet_hoeffding(seed: int, evaluations: int = 10_000) -> SuiteResult:
    """W <= C <= M on random evaluations of empirical copulas, d in {2, 3, 4}."""
    rng = random.Random(seed)
    ok = True
    worst = 0.0
    copulas = [
        random_empirical_copula(rng, rng.randint(2, 20), d)
        for d in (2, 3, 4)
        for _ in range(5)
    ]
    per = max(1, evaluations // len(copulas))
    checks = 0
    for c in copulas:
        slack = 1.0 / c.n + 1e-12
        for _ in range(per):
            u = tuple(rng.random() for _ in range(c.dim))
            r = frechet_hoeffding_check(c, u)
            ok = ok and r.ok
            # excess over the permitted 1/n discretization slack
            worst = max(worst, r.lower - r.value - slack, r.value - r.upper - slack)
            checks += 1
    return SuiteResult("frechet_hoeffding", ok, worst, checks)


def suite_wpq_sandwich(seed: int, per_case: int = 50) -> SuiteResult:
    """Exact W_{p,q}^p inside the norm-equivalence sandwich."""
    rng = random.Random(seed)
    ok = True
    worst = -math.inf
    checks = 0
    for p, q in ((1.0, 2.0), (2.0, 1.0), (2.0, 3.0), (3.0, 2.0)):
        for d in (2, 3):
            for _ in range(per_case):
                C, mf, mg = random_shared_instance(rng, d)
                r = verify_wpq_sandwich(C, mf, mg, p, q)
                ok = ok and r.passed
                worst = max(worst, r.gap)
                checks += 1
    return SuiteResult("wpq_sandwich", ok, worst, checks)


def suite_continuous_sanity(seed: int = 0, atoms: int = 200) -> SuiteResult:
    """W_2(U(0,1), U(0,2))^2 = 1/3 by quadrature, and near the discretized LP."""
    F, G = Uniform(0.0, 1.0), Uniform(0.0, 2.0)
    quad = wp_quantile(F, G, 2.0).power_value
    gap_quad = abs(quad - 1.0 / 3.0)
    w = Fraction(1, atoms)
    mu = DiscreteMeasureND([((F.quantile((k + 0.5) / atoms),), w) for k in range(atoms)])
    nu = DiscreteMeasureND([((G.quantile((k + 0.5) / atoms),), w) for k in range(atoms)])
    lp, _ = solve_ot(mu, nu, power_cost(2.0), atom_cap=atoms)
    gap_lp = abs(lp - 1.0 / 3.0) / (1.0 / 3.0)
    ok = gap_quad <= 1e-8 and gap_lp <= 0.02
    return SuiteResult(
        "continuous_sanity",
        ok,
        max(gap_quad, gap_lp),
        2,
        f"quad={quad!r}, lp={lp!r}",
    )


def suite_assignment(seed: int, count: int = 40) -> SuiteResult:
    """Assignment solver equals exhaustive enumeration for n <= 6."""
    rng = random.Random(seed)
    ok = True
    worst = 0.0
    checks = 0
    for _ in range(count):
        n = rng.randint(1, 6)
        d = rng.randint(1, 3)
        w = Fraction(1, n)
        mu = DiscreteMeasureND(
            [(tuple(rng.uniform(-2, 2) for _ in range(d)), w) for _ in range(n)]
        )
        nu = DiscreteMeasureND(
            [(tuple(rng.uniform(-2, 2) for _ in range(d)), w) for _ in range(n)]
        )
        if len(mu) != n or len(nu) != n:  # duplicate merge would break uniformity
            continue
        cost = power_cost(2.0)
        fast, _ = solve_assignment(mu, nu, cost)
        brute = brute_force_assignment(mu, nu, cost)
        gap = abs(fast - brute)
        worst = max(worst, gap)
        ok = ok and gap == 0.0
        checks += 1
    return SuiteResult("assignment", ok, worst, checks)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "comonotone": suite_comonotone_optimality,
    "formula_triangle": suite_formula_triangle,
    "metric": suite_metric_axioms,
    "decomposition": suite_decomposition,
    "necessity": suite_necessity,
    "frechet_hoeffding": suite_frechet_hoeffding,
    "wpq_sandwich": suite_wpq_sandwich,
    "continuous": suite_continuous_sanity,
    "assignment": suite_assignment,
}


def run_suites(
    names: list[str] | None = None, seed: int = 0, formula_shift: float = 0.0
) -> list[SuiteResult]:
    chosen = names or list(SUITES)
    results = []
    for name in chosen:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
        fn = SUITES[name]
        if name == "comonotone":
            results.append(fn(seed, formula_shift=formula_shift))
        else:
            results.append(fn(seed))
    return results
