"""Lyapunov exponents of the logistic map and parameter screening."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

BURN_IN = 1000
SWEEP_SAMPLES = 10**5
POINT_SAMPLES = 10**6
SCREEN_SAMPLES = 10**5
# margin against estimator noise; tunable
CHAOS_THRESHOLD = 0.05


@dataclass(frozen=True)
class LyapunovEstimate:
    r: float
    x0: float
    burn_in: int
    samples: int
    lam: float  # nats per iteration
    singular: bool = False
    skipped: int = 0


def _check_domain(r: float, x0: float) -> None:
    if not 0.0 < r <= 4.0:
        raise DomainError(f"r={r!r} outside (0, 4]")
    if not 0.0 < x0 < 1.0:
        raise DomainError(f"x0={x0!r} outside (0, 1)")


def lyapunov_logistic(
    r: float, x0: float, burn_in: int = BURN_IN, samples: int = POINT_SAMPLES
) -> LyapunovEstimate:
    """Average of ln|r(1 - 2x)| along the orbit after ``burn_in`` steps.

    A term with derivative exactly zero is skipped and the estimate flagged
    singular; the average runs over the remaining terms (-inf if none remain).
    """
    _check_domain(r, x0)
    if samples < 1:
        raise DomainError("samples must be at least 1")
    x = x0
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    log = math.log
    total = 0.0
    skipped = 0
    for _ in range(samples):
        d = abs(r * (1.0 - 2.0 * x))
        if d == 0.0:
            skipped += 1
        else:
            total += log(d)
        x = r * x * (1.0 - x)
    used = samples - skipped
    lam = total / used if used else -math.inf
    return LyapunovEstimate(r, x0, burn_in, samples, lam, skipped > 0, skipped)


def lyapunov_batch(
    r: np.ndarray, x0: np.ndarray, burn_in: int = BURN_IN, samples: int = SWEEP_SAMPLES
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized estimator over broadcast (r, x0) arrays.

    Returns (lambda, skipped_counts); same skipping rule as
    :func:`lyapunov_logistic`.
    """
    r, x = np.broadcast_arrays(np.asarray(r, dtype=np.float64), np.asarray(x0, dtype=np.float64))
    r = r.copy()
    x = x.copy()
    if np.any((r <= 0) | (r > 4)) or np.any((x <= 0) | (x >= 1)):
        raise DomainError("batch contains (r, x0) outside (0, 4] x (0, 1)")
    for _ in range(burn_in):
        x = r * x * (1.0 - x)
    total = np.zeros_like(x)
    skipped = np.zeros(x.shape, dtype=np.int64)
    with np.errstate(divide="ignore"):
        for _ in range(samples):
            d = np.abs(r * (1.0 - 2.0 * x))
            zero = d == 0.0
            if zero.any():
                skipped += zero
                d = np.where(zero, 1.0, d)
            total += np.log(d)
            x = r * x * (1.0 - x)
    used = samples - skipped
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(used > 0, total / np.maximum(used, 1), -np.inf)
    return lam, skipped


@dataclass(frozen=True)
class SweepEntry:
    r: float
    lam: float
    chaotic: bool


@dataclass(frozen=True)
class SweepReport:
    r_min: float
    r_max: float
    step: float
    x0: float
    entries: tuple[SweepEntry, ...]

    @property
    def negative(self) -> list[SweepEntry]:
        return [e for e in self.entries if e.lam < 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "lambda", "chaotic"])
        for e in self.entries:
            w.writerow([repr(e.r), repr(e.lam), int(e.chaotic)])
        return buf.getvalue()


def sweep_grid(r_min: float, r_max: float, step: float) -> np.ndarray:
    if step <= 0:
        raise DomainError("sweep step must be positive")
    if r_max < r_min:
        raise DomainError("r_max must not be below r_min")
    count = int(math.floor((r_max - r_min) / step + 1e-9)) + 1
    # accumulated rounding must not push the last point past r_max
    return np.minimum(r_min + step * np.arange(count, dtype=np.float64), r_max)


def lyapunov_sweep(
    r_min: float,
    r_max: float,
    step: float,
    x0: float = 0.2,
    burn_in: int = BURN_IN,
    samples: int = SWEEP_SAMPLES,
) -> SweepReport:
    grid = sweep_grid(r_min, r_max, step)
    lam, _ = lyapunov_batch(grid, x0, burn_in, samples)
    entries = tuple(
        SweepEntry(float(r), float(v), bool(v > 0)) for r, v in zip(grid, lam)
    )
    return SweepReport(r_min, r_max, step, x0, entries)


def screen_parameter(r: float, x0: float, threshold: float = CHAOS_THRESHOLD) -> bool:
    """Key-quality gate: estimated exponent must clear ``threshold``."""
    return lyapunov_logistic(r, x0, BURN_IN, SCREEN_SAMPLES).lam > threshold
