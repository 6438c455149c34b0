from typing import Optional

import numpy as np


class PmFtrlError(Exception):
    """Base class for every error raised by pm_ftrl."""


class InvalidInput(PmFtrlError, ValueError):
    pass


class InvalidParameter(PmFtrlError, ValueError):
    pass


class InvalidPenalty(PmFtrlError, ValueError):
    pass


class InvalidOutcome(PmFtrlError, ValueError):
    pass


class InadmissibleReport(PmFtrlError, ValueError):
    pass


class InvalidTrace(PmFtrlError, ValueError):
    pass


class SolverDiverged(PmFtrlError, RuntimeError):
    """The generic penalty solver hit its iteration cap or stalled."""

    def __init__(
        self, message: str, last_iterate: Optional[np.ndarray], iterations: int
    ):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations
