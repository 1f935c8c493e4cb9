"""Ciphertext statistics: entropy, adjacent-pixel correlation, NPCR/UACI, MSE/PSNR."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .cipher import encrypt_image
from .errors import DomainError, UndefinedCorrelation

DIRECTIONS = ("horizontal", "vertical", "diagonal")
DEFAULT_PAIRS = 4096


def shannon_entropy(data) -> float:
    """Entropy in bits of the empirical symbol distribution of ``data``."""
    arr = np.asarray(data).ravel()
    if arr.size == 0:
        raise DomainError("entropy of empty data is undefined")
    _, counts = np.unique(arr, return_counts=True)
    p = counts / arr.size
    h = float(-np.sum(p * np.log2(p)))
    return h if h > 0 else 0.0


def block_entropy(words: np.ndarray) -> float:
    """Entropy of 64-bit words bucketed into 256 bins by their top byte."""
    top = (np.asarray(words, dtype=np.uint64) >> np.uint64(56)).astype(np.uint8)
    return shannon_entropy(top)


def histogram(img: np.ndarray) -> np.ndarray:
    return np.bincount(np.asarray(img, dtype=np.uint8).ravel(), minlength=256)


def format_histogram(img: np.ndarray) -> str:
    return "".join(f"{c}\n" for c in histogram(img))


def _pairs(img: np.ndarray, direction: str) -> tuple[np.ndarray, np.ndarray]:
    img = np.asarray(img)
    if direction == "horizontal":
        return img[:, :-1], img[:, 1:]
    if direction == "vertical":
        return img[:-1, :], img[1:, :]
    if direction == "diagonal":
        return img[:-1, :-1], img[1:, 1:]
    raise DomainError(f"unknown direction {direction!r}")


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("correlation undefined: zero variance")
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def _check_min_size(img: np.ndarray) -> None:
    if img.ndim != 2 or img.shape[0] < 2 or img.shape[1] < 2:
        raise DomainError("correlation needs an image of at least 2x2")


def full_correlation(img: np.ndarray, direction: str) -> float:
    """Pearson correlation over every adjacent pair in ``direction``."""
    img = np.asarray(img)
    _check_min_size(img)
    a, b = _pairs(img, direction)
    return pearson(a, b)


def adjacent_correlation(
    img: np.ndarray, direction: str, sample_count: int = DEFAULT_PAIRS, rng=None
) -> float:
    """Pearson correlation over ``sample_count`` uniformly sampled adjacent pairs."""
    img = np.asarray(img)
    _check_min_size(img)
    if sample_count < 2:
        raise DomainError("need at least two sampled pairs")
    rng = rng if rng is not None else np.random.default_rng()
    a, b = _pairs(img, direction)
    idx = rng.integers(0, a.size, size=sample_count)
    return pearson(a.ravel()[idx], b.ravel()[idx])


def _same_shape(img1, img2) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(img1)
    b = np.asarray(img2)
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def npcr(img1, img2) -> float:
    a, b = _same_shape(img1, img2)
    return 100.0 * np.count_nonzero(a != b) / a.size


def uaci(img1, img2) -> float:
    a, b = _same_shape(img1, img2)
    diff = np.abs(a.astype(np.int64) - b.astype(np.int64))
    return 100.0 * float(diff.mean()) / 255.0


def mse_psnr(img1, img2) -> tuple[float, float]:
    a, b = _same_shape(img1, img2)
    d = a.astype(np.float64) - b.astype(np.float64)
    mse = float(np.mean(d * d))
    psnr = math.inf if mse == 0 else 10.0 * math.log10(255.0**2 / mse)
    return mse, psnr


def differential_pair(img: np.ndarray, params, flip: tuple[int, int]) -> tuple[float, float]:
    """Encrypt ``img`` and a copy with one pixel bumped by 1 (mod 256); compare the ciphertexts."""
    img = np.asarray(img, dtype=np.uint8)
    i, j = flip
    if not (0 <= i < img.shape[0] and 0 <= j < img.shape[1]):
        raise DomainError(f"flip position {flip} outside image of shape {img.shape}")
    other = img.copy()
    other[i, j] = (int(other[i, j]) + 1) % 256
    c1 = encrypt_image(img, params)
    c2 = encrypt_image(other, params)
    return npcr(c1, c2), uaci(c1, c2)


@dataclass
class AnalysisReport:
    entropy_bits: float | None = None
    corr_h: float | None = None
    corr_v: float | None = None
    corr_d: float | None = None
    npcr_pct: float | None = None
    uaci_pct: float | None = None
    mse: float | None = None
    psnr_db: float | None = None
    alphabet: str = "bytes(256)"

    def to_text(self) -> str:
        """Flat ``key=value`` lines; unset fields are omitted, undefined correlations print ``undefined``."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            lines.append(f"{f.name}={v}")
        return "\n".join(lines) + "\n"


def analyze(img1: np.ndarray, img2: np.ndarray | None = None, *, sample_count=None, rng=None) -> AnalysisReport:
    """Single-image entropy and correlations; pair mode adds NPCR/UACI/MSE/PSNR.

    ``sample_count=None`` uses every adjacent pair.
    """
    img1 = np.asarray(img1, dtype=np.uint8)
    rep = AnalysisReport(entropy_bits=shannon_entropy(img1))
    for attr, direction in zip(("corr_h", "corr_v", "corr_d"), DIRECTIONS):
        try:
            if sample_count is None:
                val = full_correlation(img1, direction)
            else:
                val = adjacent_correlation(img1, direction, sample_count, rng)
        except UndefinedCorrelation:
            val = "undefined"
        setattr(rep, attr, val)
    if img2 is not None:
        img2 = np.asarray(img2, dtype=np.uint8)
        rep.npcr_pct = npcr(img1, img2)
        rep.uaci_pct = uaci(img1, img2)
        rep.mse, rep.psnr_db = mse_psnr(img1, img2)
    return rep
