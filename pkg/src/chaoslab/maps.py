"""Logistic, generalized logistic, and Arnold cat maps.

Scalar maps work on IEEE-754 doubles; the cat map family only acts on the
integer lattice Z_N x Z_N (pixel coordinates), never on the unit torus.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

Matrix2 = tuple[tuple[int, int], tuple[int, int]]

IDENTITY: Matrix2 = ((1, 0), (0, 1))


@dataclass(frozen=True)
class LogisticState:
    r: float
    x: float

    def __post_init__(self):
        if not 0.0 < self.r <= 4.0:
            raise DomainError(f"logistic parameter r={self.r!r} outside (0, 4]")
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(f"logistic state x={self.x!r} outside [0, 1]")


def logistic_step(state: LogisticState) -> LogisticState:
    r, x = state.r, state.x
    return LogisticState(r, r * x * (1.0 - x))


def logistic_orbit(state: LogisticState, burn_in: int, n: int) -> list[float]:
    """Discard ``burn_in`` iterates, then return the next ``n`` in order."""
    if n < 1:
        raise DomainError("orbit length must be at least 1")
    r, x = state.r, state.x
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    out = []
    for _ in range(n):
        x = r * x * (1.0 - x)
        out.append(x)
    return out


@dataclass(frozen=True)
class GlmParams:
    p: float
    q: float

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise DomainError(f"GLM vertex p={self.p!r} outside (0, 1)")
        if not 0.0 <= self.q <= 1.0:
            raise DomainError(f"GLM height q={self.q!r} outside [0, 1]")


def glm_step(params: GlmParams, x: float) -> float:
    """One step of the generalized logistic map (piecewise parabola peaking at (p, q))."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"GLM input x={x!r} outside [0, 1]")
    p, q = params.p, params.q
    d = p - x
    if x <= p:
        y = q - q / (p * p) * d * d
    else:
        y = q - q / ((1.0 - p) * (1.0 - p)) * d * d
    # rounding can push the endpoints a hair below zero
    return min(max(y, 0.0), q)


def mat_mul_mod(m1: Matrix2, m2: Matrix2, n: int) -> Matrix2:
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return (
        ((a * e + b * g) % n, (a * f + b * h) % n),
        ((c * e + d * g) % n, (c * f + d * h) % n),
    )


def mat_pow_mod(m: Matrix2, k: int, n: int) -> Matrix2:
    """Square-and-multiply power of a 2x2 integer matrix, reduced mod n each step."""
    if k < 0:
        raise DomainError("negative matrix power")
    result = ((1 % n, 0), (0, 1 % n))
    base = tuple(tuple(v % n for v in row) for row in m)
    while k:
        if k & 1:
            result = mat_mul_mod(result, base, n)
        base = mat_mul_mod(base, base, n)
        k >>= 1
    return result


@dataclass(frozen=True)
class TorusMap:
    """Generalized cat map [[1, a], [b, 1 + ab]] acting on Z_N x Z_N."""

    a: int = 1
    b: int = 1
    modulus: int = 2

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise DomainError("cat map parameters a, b must be nonnegative")
        if self.modulus < 2:
            raise DomainError("lattice modulus must be at least 2")

    @classmethod
    def classical(cls, modulus: int) -> "TorusMap":
        return cls(1, 1, modulus)

    @property
    def is_classical(self) -> bool:
        return self.a == 1 and self.b == 1

    @property
    def matrix(self) -> Matrix2:
        return ((1, self.a), (self.b, 1 + self.a * self.b))

    @property
    def inverse_matrix(self) -> Matrix2:
        # det = 1, so the adjugate is the inverse; entries reduced into [0, N)
        n = self.modulus
        return (((1 + self.a * self.b) % n, -self.a % n), (-self.b % n, 1 % n))

    def power(self, k: int) -> Matrix2:
        return mat_pow_mod(self.matrix, k, self.modulus)


@dataclass(frozen=True)
class LatticePoint:
    x: int
    y: int


def lattice_point(x: int, y: int, modulus: int) -> LatticePoint:
    return LatticePoint(x % modulus, y % modulus)


def _apply(m: Matrix2, pt: LatticePoint, n: int) -> LatticePoint:
    (a, b), (c, d) = m
    return LatticePoint((a * pt.x + b * pt.y) % n, (c * pt.x + d * pt.y) % n)


def cat_forward(tmap: TorusMap, pt: LatticePoint) -> LatticePoint:
    return _apply(tmap.matrix, pt, tmap.modulus)


def cat_inverse(tmap: TorusMap, pt: LatticePoint) -> LatticePoint:
    return _apply(tmap.inverse_matrix, pt, tmap.modulus)


@lru_cache(maxsize=256)
def permutation_indices(m: Matrix2, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, y = np.indices((n, n), dtype=np.int64)
    (a, b), (c, d) = m
    nx = (a * x + b * y) % n
    ny = (c * x + d * y) % n
    nx.setflags(write=False)
    ny.setflags(write=False)
    return nx, ny


def _check_grid(tmap: TorusMap, grid: np.ndarray, k: int) -> None:
    if grid.ndim < 2 or grid.shape[0] != grid.shape[1]:
        raise DomainError(f"grid must be square, got shape {grid.shape}")
    if grid.shape[0] != tmap.modulus:
        raise DomainError(
            f"grid side {grid.shape[0]} does not match map modulus {tmap.modulus}"
        )
    if k < 0:
        raise DomainError("iteration count must be nonnegative")


def scramble_lattice(tmap: TorusMap, grid: np.ndarray, k: int) -> np.ndarray:
    """Move the entry at (x, y) to cat_forward^k(x, y).

    The k-fold map is collapsed to a single matrix power, so the cost is one
    gather regardless of k.
    """
    grid = np.asarray(grid)
    _check_grid(tmap, grid, k)
    nx, ny = permutation_indices(tmap.power(k), tmap.modulus)
    out = np.empty_like(grid)
    out[nx, ny] = grid
    return out


def unscramble_lattice(tmap: TorusMap, grid: np.ndarray, k: int) -> np.ndarray:
    """Inverse of :func:`scramble_lattice` for the same map and k."""
    grid = np.asarray(grid)
    _check_grid(tmap, grid, k)
    nx, ny = permutation_indices(tmap.power(k), tmap.modulus)
    return grid[nx, ny]
