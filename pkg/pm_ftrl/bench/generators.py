"""Seeded expert-loss sequences for regret experiments."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from pm_ftrl.errors import InvalidParameter
from pm_ftrl.learning.learners import LearnerConfig, start_learner, step_learner
from pm_ftrl.simplex import LossMatrix


class GeneratorKind(str, Enum):
    ALTERNATING = "alt"
    BERNOULLI = "bernoulli"
    UNIFORM = "uniform"
    ADAPTIVE = "adaptive"


@dataclass(frozen=True)
class LossGenerator:
    kind: GeneratorKind
    seed: int
    n: int
    t: int
    # Per-expert loss probabilities of the Bernoulli generator; drawn from the seed when missing.
    probabilities: Optional[tuple[float, ...]] = None
    # Learner whose top-weighted expert the adaptive adversary hits each round.
    shadow: Optional[LearnerConfig] = field(default=None, compare=False)


def _alternating(t: int) -> np.ndarray:
    rows = np.empty((t, 2))
    rows[0] = (0.5, 0.0)
    rows[1::2] = (0.0, 1.0)
    rows[2::2] = (1.0, 0.0)
    return rows


def _adaptive(shadow: LearnerConfig, n: int, t: int) -> np.ndarray:
    rows = np.zeros((t, n))
    state = start_learner(shadow, n)
    for k in range(t):
        rows[k, int(np.argmax(np.asarray(state.weights)))] = 1.0
        state, _ = step_learner(state, rows[k])
    return rows


def generate(gen: LossGenerator) -> LossMatrix:
    if gen.n < 2:
        raise InvalidParameter(f"need at least 2 experts, got {gen.n}")
    if gen.t < 1:
        raise InvalidParameter(f"need at least 1 round, got {gen.t}")
    rng = np.random.default_rng(gen.seed)

    if gen.kind == GeneratorKind.ALTERNATING:
        if gen.n != 2:
            raise InvalidParameter(f"the alternating adversary has exactly 2 experts, got {gen.n}")
        return LossMatrix(_alternating(gen.t))

    if gen.kind == GeneratorKind.BERNOULLI:
        if gen.probabilities is None:
            probabilities = rng.uniform(0.0, 1.0, size=gen.n)
        else:
            probabilities = np.asarray(gen.probabilities, dtype=np.float64)
            if probabilities.shape != (gen.n,) or probabilities.min() < 0 or probabilities.max() > 1:
                raise InvalidParameter(f"need {gen.n} probabilities in [0, 1], got {gen.probabilities}")
        return LossMatrix((rng.uniform(size=(gen.t, gen.n)) < probabilities).astype(np.float64))

    if gen.kind == GeneratorKind.UNIFORM:
        return LossMatrix(rng.uniform(0.0, 1.0, size=(gen.t, gen.n)))

    if gen.kind == GeneratorKind.ADAPTIVE:
        if gen.shadow is None:
            raise InvalidParameter("the adaptive adversary needs a shadow learner")
        return LossMatrix(_adaptive(gen.shadow, gen.n, gen.t))

    raise InvalidParameter(f"unknown generator {gen.kind!r}")
