"""Value types for points on the probability simplex and their arithmetic."""

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from pm_ftrl.config import CLAMP_EPS, TOLERANCES
from pm_ftrl.errors import InvalidInput

ArrayLike = Union[Sequence[float], np.ndarray, "ProbVector", "QuantityVector"]


def as_finite_vector(values: ArrayLike, name: str = "vector") -> np.ndarray:
    array = np.array(values, dtype=np.float64).reshape(-1)
    if array.size == 0:
        raise InvalidInput(f"{name} must have at least one entry")
    if not np.all(np.isfinite(array)):
        raise InvalidInput(f"{name} has non-finite entries: {array}")
    return array


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ProbVector:
    entries: np.ndarray

    def __post_init__(self):
        p = as_finite_vector(self.entries, "ProbVector")

        if np.any(p < -CLAMP_EPS):
            raise InvalidInput(f"ProbVector has negative entries: {p}")
        p = np.where(p < 0.0, 0.0, p)

        total = p.sum()
        if abs(total - 1.0) > TOLERANCES.simplex_eps:
            raise InvalidInput(f"ProbVector entries sum to {total!r}, not 1")

        object.__setattr__(self, "entries", _frozen(p / total))

    @classmethod
    def uniform(cls, n: int) -> "ProbVector":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, index: int) -> "ProbVector":
        p = np.zeros(n)
        p[index] = 1.0
        return cls(p)

    @property
    def n(self) -> int:
        return self.entries.size

    def is_interior(self, floor: float = 0.0) -> bool:
        return bool(np.all(self.entries > floor))

    def tolist(self) -> list[float]:
        return self.entries.tolist()

    def __len__(self) -> int:
        return self.entries.size

    def __iter__(self) -> Iterator[float]:
        return iter(self.entries.tolist())

    def __getitem__(self, index):
        return self.entries[index]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"ProbVector({self.entries.tolist()})"


@dataclass(frozen=True, eq=False)
class QuantityVector:
    entries: np.ndarray

    def __post_init__(self):
        q = as_finite_vector(self.entries, "QuantityVector")
        object.__setattr__(self, "entries", _frozen(q))

    @classmethod
    def zeros(cls, n: int) -> "QuantityVector":
        return cls(np.zeros(n))

    @property
    def n(self) -> int:
        return self.entries.size

    def __add__(self, other: ArrayLike) -> "QuantityVector":
        return QuantityVector(self.entries + np.asarray(other, dtype=np.float64))

    def __len__(self) -> int:
        return self.entries.size

    def __iter__(self) -> Iterator[float]:
        return iter(self.entries.tolist())

    def __getitem__(self, index):
        return self.entries[index]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"QuantityVector({self.entries.tolist()})"


@dataclass(frozen=True, eq=False)
class LossMatrix:
    """Per-round, per-expert losses; row t holds the losses of round t + 1."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] == 0 or rows.shape[1] == 0:
            raise InvalidInput(f"LossMatrix must be a non-empty T x N array, got {rows.shape}")
        if not np.all(np.isfinite(rows)) or rows.min() < 0.0 or rows.max() > 1.0:
            raise InvalidInput("LossMatrix entries must lie in [0, 1]")
        object.__setattr__(self, "rows", _frozen(rows))

    @property
    def t(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def cumulative(self) -> np.ndarray:
        """(T + 1) x N cumulative losses; row 0 is L_0 = 0."""
        out = np.zeros((self.t + 1, self.n))
        np.cumsum(self.rows, axis=0, out=out[1:])
        return out

    def slice(self, start: int, stop: int) -> "LossMatrix":
        return LossMatrix(self.rows[start:stop])

    def __len__(self) -> int:
        return self.t

    def __getitem__(self, index):
        return self.rows[index]


def _project(v: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Euclidean projection of v onto {x >= 0, sum(x) = radius}.

    Sorted-threshold algorithm; the stable sort keeps ties in index order.
    """
    n = v.size
    order = np.argsort(-v, kind="stable")
    u = v[order]
    css = np.cumsum(u) - radius
    active = u - css / np.arange(1, n + 1) > 0
    rho = np.nonzero(active)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def project_to_simplex(v: ArrayLike) -> ProbVector:
    return ProbVector(_project(as_finite_vector(v, "projection input")))


def entropy(p: ProbVector) -> float:
    x = np.asarray(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(x > 0.0, x * np.log(x), 0.0)
    return float(-terms.sum())


def _compositions(n: int, m: int) -> np.ndarray:
    if n == 1:
        return np.array([[m]])
    if n == 2:
        first = np.arange(m + 1)
        return np.column_stack([first, m - first])
    blocks = []
    for first in range(m + 1):
        rest = _compositions(n - 1, m - first)
        blocks.append(np.column_stack([np.full(len(rest), first), rest]))
    return np.vstack(blocks)


def simplex_grid(n: int, m: int) -> np.ndarray:
    """Every point of the n-simplex whose coordinates are multiples of 1/m."""
    return _compositions(n, m) / m


def random_interior(
    rng: np.random.Generator, n: int, size: Optional[int] = None, floor: float = 0.0
) -> np.ndarray:
    """Dirichlet(1) draws mixed with the uniform point so every entry >= floor."""
    if not 0.0 <= floor * n < 1.0:
        raise InvalidInput(f"floor {floor} is infeasible for n={n}")
    draws = rng.dirichlet(np.ones(n), size=size)
    return floor + (1.0 - n * floor) * draws
