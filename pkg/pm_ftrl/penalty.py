"""Penalty functions on the simplex and the maximization that turns them into cost functions.

For a convex penalty alpha the cost function is

    C(q) = sup_{p in simplex} sum_i p_i q_i - alpha(p)

and the prices p(q) are the maximizer. Entropic penalties give the LMSR
(softmax / log-sum-exp), quadratic penalties the Quad market (a simplex
projection); anything else goes through projected gradient ascent.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.special import logsumexp, softmax

from pm_ftrl.config import (
    CONVEXITY_PAIRS,
    CONVEXITY_SLACK,
    CONVEXITY_WEIGHTS,
    PENALTY_RANGE_ITERATIONS,
    PENALTY_RANGE_STARTS,
    SOLVER_FLOOR,
    SOLVER_MAX_ITERATIONS,
    TOLERANCES,
    Tolerances,
)
from pm_ftrl.errors import InvalidParameter, InvalidPenalty, SolverDiverged
from pm_ftrl.simplex import (
    ArrayLike,
    ProbVector,
    _project,
    as_finite_vector,
    random_interior,
)


class PenaltyKind(str, Enum):
    ENTROPIC = "entropic"
    QUADRATIC = "quadratic"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class PenaltyFunction:
    value: Callable[[np.ndarray], float]
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    kind: PenaltyKind = PenaltyKind.CUSTOM
    b: Optional[float] = None

    def __post_init__(self):
        if self.kind != PenaltyKind.CUSTOM and not (self.b is not None and self.b > 0):
            raise InvalidParameter(f"{self.kind.value} penalty needs b > 0, got {self.b}")

    def __call__(self, p: ArrayLike) -> float:
        return float(self.value(np.asarray(p, dtype=np.float64)))

    def grad(self, p: ArrayLike) -> np.ndarray:
        if self.gradient is None:
            raise InvalidPenalty("penalty has no gradient")
        return np.asarray(self.gradient(np.asarray(p, dtype=np.float64)), dtype=np.float64)

    def scaled(self, factor: float) -> "PenaltyFunction":
        """factor * alpha; tagged kinds stay tagged with b * factor."""
        if not factor > 0:
            raise InvalidParameter(f"scale factor must be positive, got {factor}")
        value, gradient = self.value, self.gradient
        return replace(
            self,
            value=lambda p: factor * value(p),
            gradient=None if gradient is None else (lambda p: factor * gradient(p)),
            b=None if self.b is None else self.b * factor,
        )

    def as_custom(self) -> "PenaltyFunction":
        """Same function without its tag, so maximize() uses the generic solver."""
        return PenaltyFunction(self.value, self.gradient, PenaltyKind.CUSTOM, None)


def _xlogx(p: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0.0, p * np.log(np.where(p > 0.0, p, 1.0)), 0.0)


def entropic_penalty(b: float) -> PenaltyFunction:
    """alpha(p) = b * sum_i p_i log p_i (negative entropy, scaled)."""

    def gradient(p: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return b * (np.log(p) + 1.0)

    return PenaltyFunction(
        value=lambda p: b * _xlogx(p).sum(axis=-1),
        gradient=gradient,
        kind=PenaltyKind.ENTROPIC,
        b=b,
    )


def quadratic_penalty(b: float) -> PenaltyFunction:
    """alpha(p) = b * sum_i p_i^2."""
    return PenaltyFunction(
        value=lambda p: b * np.sum(p * p, axis=-1),
        gradient=lambda p: 2.0 * b * p,
        kind=PenaltyKind.QUADRATIC,
        b=b,
    )


def custom_penalty(
    value: Callable[[np.ndarray], float],
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> PenaltyFunction:
    return PenaltyFunction(value, gradient, PenaltyKind.CUSTOM, None)


@dataclass(frozen=True, eq=False)
class SolveResult:
    prices: ProbVector
    cost: float
    iterations: int
    # (lambda, mu) of  q_i = d alpha / d p_i + lambda - mu_i
    kkt_multipliers: tuple[float, np.ndarray]


def log_sum_exp(q: np.ndarray, b: float) -> tuple[float, np.ndarray]:
    """(b * log sum_i exp(q_i / b), softmax(q / b))."""
    z = q / b
    return float(b * logsumexp(z)), softmax(z)


def _kkt_multipliers(
    alpha: PenaltyFunction, q: np.ndarray, p: np.ndarray
) -> tuple[float, np.ndarray]:
    support = p > SOLVER_FLOOR * 10
    g = alpha.grad(np.where(support, p, SOLVER_FLOOR))
    lam = float(np.mean(q[support] - g[support]))
    mu = np.where(support, 0.0, np.maximum(g + lam - q, 0.0))
    return lam, mu


def quad_price_closed_form(b: float, q: ArrayLike) -> tuple[ProbVector, np.ndarray]:
    """Quad-market prices and KKT multipliers by active-set elimination.

    Solves p_i = 1/N + (q_i + mu_i)/(2b) - sum_j (q_j + mu_j)/(2bN) with
    mu_i p_i = 0, p >= 0, mu >= 0: re-solve on the support, drop the most
    negative price, repeat (at most N - 1 rounds).
    """
    if not b > 0:
        raise InvalidParameter(f"b must be positive, got {b}")
    q = as_finite_vector(q, "q")
    n = q.size
    support = np.ones(n, dtype=bool)
    p = np.zeros(n)

    while True:
        k = int(support.sum())
        qs = q[support]
        p[:] = 0.0
        p[support] = 1.0 / k + (qs - qs.mean()) / (2.0 * b)
        candidates = np.where(support, p, np.inf)
        worst = int(np.argmin(candidates))
        if candidates[worst] >= 0.0:
            break
        support[worst] = False

    lam = (q[support].sum() - 2.0 * b) / support.sum()
    mu = np.where(support, 0.0, np.maximum(lam - q, 0.0))
    return ProbVector(np.maximum(p, 0.0)), mu


def _custom_maximize(
    alpha: PenaltyFunction, q: np.ndarray, tolerances: Tolerances
) -> SolveResult:
    """Spectral projected gradient ascent on p.q - alpha(p) from the uniform point.

    Step lengths are Barzilai-Borwein with an Armijo backtracking line search,
    not a fixed 1/k schedule. Iterates are kept in
    {p >= SOLVER_FLOOR, sum p = 1}, where the gradient is defined for
    penalties like the entropy. Stops once the projected-gradient step
    ||P(p + g) - p|| drops below solver_eps.
    """
    n = q.size
    radius = 1.0 - n * SOLVER_FLOOR

    def project(v: np.ndarray) -> np.ndarray:
        return SOLVER_FLOOR + _project(v - SOLVER_FLOOR, radius)

    def objective(p: np.ndarray) -> float:
        return float(p @ q - alpha(p))

    def ascent(p: np.ndarray) -> np.ndarray:
        return q - alpha.grad(p)

    p = np.full(n, 1.0 / n)
    f = objective(p)
    if not np.isfinite(f):
        rng = np.random.default_rng(0)
        for start in random_interior(rng, n, size=10, floor=1e-3):
            if np.isfinite(objective(start)):
                p, f = start, objective(start)
                break
        else:
            raise InvalidPenalty("penalty is not finite anywhere in the simplex interior")

    def result(p: np.ndarray, iterations: int) -> SolveResult:
        return SolveResult(
            prices=ProbVector(p),
            cost=objective(p),
            iterations=iterations,
            kkt_multipliers=_kkt_multipliers(alpha, q, p),
        )

    g = ascent(p)
    step = 1.0
    for iteration in range(1, SOLVER_MAX_ITERATIONS + 1):
        if not np.all(np.isfinite(g)):
            raise SolverDiverged("penalty gradient became non-finite", p, iteration)
        residual = np.linalg.norm(project(p + g) - p)
        if residual < tolerances.solver_eps:
            return result(p, iteration)

        direction = project(p + step * g) - p
        slope = float(g @ direction)
        # Rounding noise in f must not block progress once the slope is tiny.
        noise = 1e-14 * (1.0 + abs(f))
        t = 1.0
        while True:
            candidate = p + t * direction
            f_candidate = objective(candidate)
            if np.isfinite(f_candidate) and f_candidate >= f + 1e-4 * t * slope - noise:
                break
            t *= 0.5
            if t < 1e-20:
                if residual < 1e3 * tolerances.solver_eps:
                    return result(p, iteration)
                raise SolverDiverged("line search stalled", p, iteration)

        g_candidate = ascent(candidate)
        s = candidate - p
        y = g_candidate - g
        sy = float(s @ y)
        step = float(np.clip(s @ s / -sy, 1e-10, 1e10)) if sy < 0 else 1e10
        p, f, g = candidate, f_candidate, g_candidate

    raise SolverDiverged(
        f"no convergence in {SOLVER_MAX_ITERATIONS} iterations", p, SOLVER_MAX_ITERATIONS
    )


def maximize(
    alpha: PenaltyFunction, q: ArrayLike, tolerances: Tolerances = TOLERANCES
) -> SolveResult:
    """Cost C(q) = sup_p p.q - alpha(p) and the maximizing price vector."""
    q = as_finite_vector(q, "q")

    if q.size == 1:
        point = np.ones(1)
        return SolveResult(
            prices=ProbVector(point),
            cost=float(q[0] - alpha(point)),
            iterations=0,
            kkt_multipliers=(0.0, np.zeros(1)),
        )

    if alpha.kind == PenaltyKind.ENTROPIC:
        cost, prices = log_sum_exp(q, alpha.b)
        return SolveResult(
            prices=ProbVector(prices),
            cost=cost,
            iterations=0,
            kkt_multipliers=(cost - alpha.b, np.zeros(q.size)),
        )

    if alpha.kind == PenaltyKind.QUADRATIC:
        p = _project(q / (2.0 * alpha.b))
        return SolveResult(
            prices=ProbVector(p),
            cost=float(p @ q - alpha.b * (p @ p)),
            iterations=0,
            kkt_multipliers=_kkt_multipliers(alpha, q, p),
        )

    return _custom_maximize(alpha, q, tolerances)


class PenaltyRange(NamedTuple):
    value: float
    # True when the value is a numeric lower bound rather than the analytic range.
    is_estimate: bool


def _range_ascent(alpha: PenaltyFunction, start: np.ndarray) -> float:
    """Projected gradient ascent of alpha itself (step 1/k); convex alpha peaks at vertices."""
    n = start.size
    radius = 1.0 - n * SOLVER_FLOOR
    p = start
    best = alpha(p)
    for k in range(1, PENALTY_RANGE_ITERATIONS + 1):
        g = alpha.grad(p)
        if not np.all(np.isfinite(g)):
            break
        p = SOLVER_FLOOR + _project(p + g / k - SOLVER_FLOOR, radius)
        value = alpha(p)
        if np.isfinite(value):
            best = max(best, value)
    return best


def penalty_range(alpha: PenaltyFunction, n: int, seed: int = 0) -> PenaltyRange:
    """sup_{p, p'} alpha(p) - alpha(p'), the worst-case loss of the induced market."""
    if n == 1:
        return PenaltyRange(0.0, False)
    if alpha.kind == PenaltyKind.ENTROPIC:
        return PenaltyRange(alpha.b * float(np.log(n)), False)
    if alpha.kind == PenaltyKind.QUADRATIC:
        return PenaltyRange(alpha.b * (n - 1) / n, False)

    lowest = -maximize(alpha, np.zeros(n)).cost

    vertices = [alpha(row) for row in np.eye(n)]
    highest = max((v for v in vertices if np.isfinite(v)), default=-np.inf)
    rng = np.random.default_rng(seed)
    if alpha.gradient is not None:
        for start in random_interior(rng, n, size=PENALTY_RANGE_STARTS, floor=1e-6):
            highest = max(highest, _range_ascent(alpha, start))
    return PenaltyRange(float(highest - lowest), True)


def check_convexity(
    alpha: PenaltyFunction, n: int, seed: int = 0, pairs: int = CONVEXITY_PAIRS
) -> float:
    """Worst violation of alpha(l p + (1-l) p') <= l alpha(p) + (1-l) alpha(p').

    Non-positive means the spot-check passed (up to CONVEXITY_SLACK).
    """
    rng = np.random.default_rng(seed)
    first = random_interior(rng, n, size=pairs)
    second = random_interior(rng, n, size=pairs)
    worst = -np.inf
    for p, p_prime in zip(first, second):
        a, a_prime = alpha(p), alpha(p_prime)
        for weight in CONVEXITY_WEIGHTS:
            mixed = alpha(weight * p + (1.0 - weight) * p_prime)
            violation = mixed - (weight * a + (1.0 - weight) * a_prime)
            if not np.isfinite(violation):
                return np.inf
            worst = max(worst, violation)
    return float(worst)


def is_convex(alpha: PenaltyFunction, n: int, seed: int = 0) -> bool:
    return check_convexity(alpha, n, seed) <= CONVEXITY_SLACK
