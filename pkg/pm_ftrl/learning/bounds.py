"""Closed-form regret bounds and step-size tuning."""

import numpy as np

from pm_ftrl.errors import InvalidParameter


def _check(**values: float):
    for name, value in values.items():
        if not value > 0:
            raise InvalidParameter(f"{name} must be positive, got {value}")


def _check_horizon(t: int):
    if t < 1:
        raise InvalidParameter(f"T must be at least 1, got {t}")


def tune_epsilon(B: float, phi: float, t: int) -> float:
    """epsilon = sqrt(2B / (phi T)), the minimizer of B / epsilon + epsilon phi T / 2."""
    _check(B=B, phi=phi)
    _check_horizon(t)
    return float(np.sqrt(2.0 * B / (phi * t)))


def theorem2_bound(B: float, phi: float, t: int) -> float:
    """Regret of the tuned market reduction: sqrt(2 B phi T)."""
    _check(B=B, phi=phi)
    _check_horizon(t)
    return float(np.sqrt(2.0 * B * phi * t))


def ftrl_bound(lam: float, reg_range: float, t: int) -> float:
    """2 sqrt(2 lambda range(R) T) for FTRL with optimally tuned eta."""
    _check(lam=lam, reg_range=reg_range)
    _check_horizon(t)
    return float(2.0 * np.sqrt(2.0 * lam * reg_range * t))


def wm_bound(eta: float, n: int, t: int) -> float:
    """eta T + log(N) / eta."""
    _check(eta=eta)
    _check_horizon(t)
    if n < 1:
        raise InvalidParameter(f"n must be positive, got {n}")
    return float(eta * t + np.log(n) / eta)


def doubling_periods(t: int) -> list[tuple[int, int]]:
    """[start, stop) of the periods 1, 2, 4, ...; the last one is cut at T."""
    _check_horizon(t)
    periods, start, length = [], 0, 1
    while start < t:
        periods.append((start, min(start + length, t)))
        start += length
        length *= 2
    return periods


def doubling_bound(B: float, phi: float, t: int) -> float:
    """sum_k sqrt(2 B phi 2^k) over the doubling periods that cover T rounds."""
    _check(B=B, phi=phi)
    return float(
        sum(np.sqrt(2.0 * B * phi * (2 ** k)) for k in range(len(doubling_periods(t))))
    )


def reduction_bound(B: float, phi: float, t: int, epsilon: float) -> float:
    """B / epsilon + epsilon phi T / 2 for any fixed epsilon; equals theorem2_bound when tuned."""
    _check(B=B, phi=phi, epsilon=epsilon)
    _check_horizon(t)
    return float(B / epsilon + epsilon * phi * t / 2.0)
