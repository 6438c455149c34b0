"""Numeric checks on cost functions: validity, phi-stability and the pricing-difference bound."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from pm_ftrl.config import (
    KINK_THRESHOLD,
    SAMPLING_BOX,
    TOLERANCES,
    TRANSLATION_SHIFTS,
    VALIDITY_TOLERANCES,
    Tolerances,
)
from pm_ftrl.errors import InvalidParameter
from pm_ftrl.markets.cost import CostFunction
from pm_ftrl.simplex import ArrayLike, as_finite_vector


@dataclass
class PropertyCheck:
    name: str
    passed: bool
    worst_violation: float
    tolerance: float
    # Sampled points sitting on a kink of the price functions.
    boundary_points: int = 0


@dataclass
class ValidityReport:
    checks: list[PropertyCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def __getitem__(self, name: str) -> PropertyCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


@dataclass
class BoundReport:
    trials: int
    eps: float
    phi: float
    bound: float
    max_abs_gap: float
    # Gap of largest magnitude, sign kept.
    signed_worst_gap: float
    violations: int

    @property
    def passed(self) -> bool:
        return self.violations == 0


def _check_samples(samples: int):
    if samples < 1:
        raise InvalidParameter(f"samples must be at least 1, got {samples}")


def _sample_quantities(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    return rng.uniform(-SAMPLING_BOX, SAMPLING_BOX, size=(size, n))


def _price_array(cf: CostFunction, q: np.ndarray) -> np.ndarray:
    return np.asarray(cf.prices(q), dtype=np.float64)


def _one_sided_jacobians(
    cf: CostFunction, q: np.ndarray, h: float
) -> tuple[np.ndarray, np.ndarray]:
    n = q.size
    center = _price_array(cf, q)
    forward = np.empty((n, n))
    backward = np.empty((n, n))
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        forward[:, j] = (_price_array(cf, q + step) - center) / h
        backward[:, j] = (center - _price_array(cf, q - step)) / h
    return forward, backward


def price_sensitivity(
    cf: CostFunction, q: ArrayLike, tolerances: Tolerances = TOLERANCES
) -> float:
    """sum_ij |dp_i/dq_j| at q by central differences.

    Columns whose one-sided differences disagree (a kink) take the one-sided
    difference with the larger magnitude.
    """
    q = as_finite_vector(q, "q")
    forward, backward = _one_sided_jacobians(cf, q, tolerances.finitediff_h)
    central = 0.5 * (forward + backward)
    total = 0.0
    for j in range(q.size):
        if np.max(np.abs(forward[:, j] - backward[:, j])) > KINK_THRESHOLD:
            total += max(np.abs(forward[:, j]).sum(), np.abs(backward[:, j]).sum())
        else:
            total += np.abs(central[:, j]).sum()
    return float(total)


def estimate_phi(
    cf: CostFunction, samples: int, seed: int, tolerances: Tolerances = TOLERANCES
) -> float:
    """Largest sampled sum_ij |D_ij|; a lower estimate of the true phi."""
    _check_samples(samples)
    rng = np.random.default_rng(seed)
    return max(
        price_sensitivity(cf, q, tolerances)
        for q in _sample_quantities(rng, cf.n, samples)
    )


def check_validity(
    cf: CostFunction, samples: int, seed: int, tolerances: Tolerances = TOLERANCES
) -> ValidityReport:
    """Sampled check of differentiability, increasing monotonicity and translation invariance."""
    _check_samples(samples)
    rng = np.random.default_rng(seed)
    n, h = cf.n, tolerances.finitediff_h
    points = _sample_quantities(rng, n, samples)
    bumps = rng.uniform(0.0, 1.0, size=(samples, n))

    worst_gradient = worst_monotone = worst_shift = 0.0
    kinks = 0
    for q, bump in zip(points, bumps):
        base = cf.cost(q)
        prices = _price_array(cf, q)

        finite_diff = np.empty(n)
        for j in range(n):
            step = np.zeros(n)
            step[j] = h
            finite_diff[j] = (cf.cost(q + step) - cf.cost(q - step)) / (2.0 * h)
        worst_gradient = max(worst_gradient, float(np.max(np.abs(finite_diff - prices))))

        # Kinks of the price functions, i.e. active-set boundaries of the Quad market.
        forward, backward = _one_sided_jacobians(cf, q, h)
        if np.max(np.abs(forward - backward)) > KINK_THRESHOLD:
            kinks += 1

        worst_monotone = max(worst_monotone, base - cf.cost(q + bump))

        for k in TRANSLATION_SHIFTS:
            worst_shift = max(worst_shift, abs(cf.cost(q + k) - base - k))

    observed = {
        "differentiability": (worst_gradient, kinks),
        "monotonicity": (worst_monotone, 0),
        "translation_invariance": (worst_shift, 0),
    }
    return ValidityReport(
        [
            PropertyCheck(
                name=name,
                passed=violation <= VALIDITY_TOLERANCES[name],
                worst_violation=violation,
                tolerance=VALIDITY_TOLERANCES[name],
                boundary_points=boundary,
            )
            for name, (violation, boundary) in observed.items()
        ]
    )


def verify_pricing_diff_bound(
    cf: CostFunction,
    eps: float,
    trials: int,
    seed: int,
    phi: Optional[float] = None,
    tolerances: Tolerances = TOLERANCES,
) -> BoundReport:
    """|C(q + r) - C(q) - p(q).r| <= eps^2 phi / 2 for random |r_i| <= eps."""
    if not eps > 0:
        raise InvalidParameter(f"eps must be positive, got {eps}")
    _check_samples(trials)
    if phi is None:
        phi = cf.phi_bound if cf.phi_bound is not None else estimate_phi(cf, trials, seed, tolerances)

    rng = np.random.default_rng(seed)
    points = _sample_quantities(rng, cf.n, trials)
    moves = rng.uniform(-eps, eps, size=(trials, cf.n))
    bound = eps * eps * phi / 2.0

    gaps = np.array(
        [cf.cost(q + r) - cf.cost(q) - _price_array(cf, q) @ r for q, r in zip(points, moves)]
    )
    worst = int(np.argmax(np.abs(gaps)))
    return BoundReport(
        trials=trials,
        eps=eps,
        phi=phi,
        bound=bound,
        max_abs_gap=float(np.abs(gaps[worst])),
        signed_worst_gap=float(gaps[worst]),
        violations=int(np.sum(np.abs(gaps) > bound)),
    )
