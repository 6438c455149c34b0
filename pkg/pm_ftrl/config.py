from dataclasses import dataclass, fields

from pm_ftrl.errors import InvalidParameter


@dataclass(frozen=True)
class Tolerances:
    simplex_eps: float = 1e-9
    solver_eps: float = 1e-8
    finitediff_h: float = 1e-5
    equality_eps: float = 1e-6

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if not value > 0:
                raise InvalidParameter(
                    f"Tolerance '{field.name}' must be strictly positive, got {value}"
                )


TOLERANCES = Tolerances()

# Negative probability entries down to -CLAMP_EPS are rounding noise and get clamped to 0.
CLAMP_EPS = 1e-12

SOLVER_MAX_ITERATIONS = 100_000
# Generic solver iterates stay at least this far inside the simplex.
SOLVER_FLOOR = 1e-12

CONVEXITY_PAIRS = 200
CONVEXITY_WEIGHTS = (0.25, 0.5, 0.75)
CONVEXITY_SLACK = 1e-9

PENALTY_RANGE_STARTS = 50
PENALTY_RANGE_ITERATIONS = 2_000

# Theorem-3 payoff equivalence only holds while every price is positive.
INTERIOR_PRICE_FLOOR = 0.01

# Random quantity vectors are drawn from [-SAMPLING_BOX, SAMPLING_BOX]^N.
SAMPLING_BOX = 10.0

LIMIT_ORDER_SHARE_TOL = 1e-10
LIMIT_ORDER_MAX_EXPANSIONS = 200

# One-sided price differences that disagree by more than this mark a kink.
KINK_THRESHOLD = 1e-3

VALIDITY_TOLERANCES = {
    "differentiability": 1e-4,
    "monotonicity": 1e-9,
    "translation_invariance": 1e-7,
}
TRANSLATION_SHIFTS = (-3.0, 0.5, 7.0)

# Largest simplex grid evaluated by the oracle searches.
MAX_GRID_POINTS = 1_000_000
MSR_GRID_RESOLUTION = 1e-3

VERIFICATION_SUITE = {
    "validity": {"markets": {"lmsr": 1.0, "quad": 1.0}, "n": 3, "samples": 1_000},
    "phi": {"b": (0.5, 1.0, 5.0), "n": (2, 3, 10), "samples": 10_000},
    "pricing_diff": {"eps": (0.01, 0.1, 1.0), "n": 3, "b": 1.0, "trials": 10_000},
    "maker_loss": {"b": 1.0, "n": 4, "sessions": 100, "trades": 200},
    "equivalence": {"b": 1.0, "n": 3, "trials": 500, "reach_trials": 100},
    "round_trip": {"b": 1.0, "n": 3, "points": 100},
    "reduction": {"b": 1.0, "n": 4, "epsilon": 0.3, "vectors": 1_000},
    "oracle": {
        "b": 1.0,
        "n": (2, 3, 4),
        "spacing": 100,
        "queries": 5,
        "random_q": 1_000,
        "softmax_q": 100,
    },
    "dominance": {
        "b": (0.5, 1.0, 5.0),
        "n": (2, 10),
        "t": 10_000,
        "generators": ("alt", "bernoulli", "uniform", "adaptive"),
    },
    "ftl": {"t": 1_000},
}
