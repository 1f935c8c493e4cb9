"""Two-layer cipher: cat-map confusion followed by logistic-keystream XOR.

Text mode embeds log_base(byte) values among uniform decoys in an s x s
matrix of doubles, scrambles cell positions, and XORs the raw IEEE-754 bit
patterns with 64-bit keystream words.  Image mode scrambles pixels and XORs
bytes; it is deterministic (no decoys).
"""

from __future__ import annotations

import math
import random
import struct
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, IntegrityError
from .keying import CipherParams
from .maps import TorusMap, scramble_lattice, unscramble_lattice
from .periods import classical_period

KEYSTREAM_BURN_IN = 256
PRINTABLE_MIN, PRINTABLE_MAX = 32, 126
DECOY_LOW, DECOY_HIGH = 65, 122
# a genuine cell decodes to within ~1e-12 of an integer
DECODE_TOLERANCE = 1e-6

MAGIC = b"CHLB"
VERSION = 1
HEADER = struct.Struct(">4sBIQB")

_TWO64 = float(2**64)
_TWO53 = float(2**53)
_MASK64 = 2**64 - 1


class DegenerateKeystreamWarning(UserWarning):
    """The logistic orbit collapsed onto the fixed point 0."""


def validate_plaintext(pt: bytes | str) -> bytes:
    if isinstance(pt, str):
        try:
            pt = pt.encode("ascii")
        except UnicodeEncodeError:
            raise DomainError("plaintext must be printable ASCII") from None
    pt = bytes(pt)
    if not pt:
        raise DomainError("plaintext must not be empty")
    bad = [b for b in pt if not PRINTABLE_MIN <= b <= PRINTABLE_MAX]
    if bad:
        raise DomainError(f"plaintext byte {bad[0]} outside printable ASCII 32..126")
    return pt


def side_for(length: int) -> int:
    """Smallest s with s*s >= 2*length."""
    s = math.isqrt(2 * length)
    return s if s * s >= 2 * length else s + 1


def effective_iterations(k: int, side: int) -> int:
    """Bump k by one when k iterations would return the grid to itself."""
    return k + 1 if k % classical_period(side) == 0 else k


def _logistic_tail(r: float, x0: float, count: int):
    x = x0
    for _ in range(KEYSTREAM_BURN_IN):
        x = r * x * (1.0 - x)
    for _ in range(count):
        x = r * x * (1.0 - x)
        yield x
    if x == 0.0:
        warnings.warn(
            f"logistic orbit from (r={r}, x0={x0}) absorbed at 0; keystream is constant",
            DegenerateKeystreamWarning,
            stacklevel=3,
        )


def keystream_words(params: CipherParams, count: int) -> np.ndarray:
    """``count`` 64-bit words floor(x * 2**64) from the orbit after burn-in."""
    words = [int(x * _TWO64) & _MASK64 for x in _logistic_tail(params.r, params.x0, count)]
    return np.array(words, dtype=np.uint64)


def keystream(params: CipherParams, side: int) -> np.ndarray:
    return keystream_words(params, side * side).reshape(side, side)


def keystream_bytes(params: CipherParams, count: int) -> np.ndarray:
    """Byte stream floor(x * 2**53) mod 256 for image mode."""
    vals = [int(x * _TWO53) & 0xFF for x in _logistic_tail(params.r, params.x0, count)]
    return np.array(vals, dtype=np.uint8)


def _uniform_open(rng, lo: float, hi: float) -> float:
    while True:
        v = lo + (hi - lo) * rng.random()
        if lo < v < hi:
            return v


def embed_plaintext(pt: bytes | str, base: float, rng=None) -> np.ndarray:
    """Lay out log_base(byte) row-major in an s x s matrix padded with decoys.

    Decoys are drawn uniformly from (log_base 65, log_base 122), so they decode
    to plausible letters.  ``rng`` needs a ``random()`` method; defaults to the
    OS CSPRNG.
    """
    pt = validate_plaintext(pt)
    if not base > 1.0:
        raise DomainError(f"logarithm base {base!r} must exceed 1")
    rng = rng if rng is not None else random.SystemRandom()
    n = len(pt)
    s = side_for(n)
    ln_b = math.log(base)
    cells = [math.log(c) / ln_b for c in pt]
    lo, hi = math.log(DECOY_LOW) / ln_b, math.log(DECOY_HIGH) / ln_b
    cells.extend(_uniform_open(rng, lo, hi) for _ in range(s * s - n))
    return np.array(cells, dtype=np.float64).reshape(s, s)


@dataclass(frozen=True)
class CipherBlock:
    side: int
    payload_len: int
    words: np.ndarray
    base_tag: int = 0
    version: int = VERSION

    def __post_init__(self):
        if self.side < 1 or self.payload_len < 1:
            raise FormatError("side and payload length must be positive")
        if self.side * self.side < 2 * self.payload_len:
            raise FormatError(
                f"header inconsistent: side {self.side} cannot hold {self.payload_len} payload cells"
            )
        if self.words.shape != (self.side, self.side) or self.words.dtype != np.uint64:
            raise FormatError("cipher block words must be an s x s uint64 array")

    def to_bytes(self) -> bytes:
        head = HEADER.pack(MAGIC, self.version, self.side, self.payload_len, self.base_tag)
        return head + self.words.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CipherBlock":
        if len(data) < HEADER.size:
            raise FormatError("ciphertext shorter than its header")
        magic, version, side, n, tag = HEADER.unpack_from(data)
        if magic != MAGIC:
            raise FormatError("bad ciphertext magic")
        if version != VERSION:
            raise FormatError(f"unsupported container version {version}")
        body = data[HEADER.size :]
        if len(body) != 8 * side * side:
            raise FormatError(
                f"container body has {len(body)} bytes, expected {8 * side * side}"
            )
        words = np.frombuffer(body, dtype="<u8").astype(np.uint64).reshape(side, side)
        return cls(side, n, words, tag, version)


def encrypt(pt: bytes | str, params: CipherParams, rng=None) -> CipherBlock:
    pt = validate_plaintext(pt)
    grid = embed_plaintext(pt, params.base, rng).view(np.uint64)
    s = grid.shape[0]
    k = effective_iterations(params.iterations, s)
    scrambled = scramble_lattice(TorusMap.classical(s), grid, k)
    return CipherBlock(s, len(pt), scrambled ^ keystream(params, s))


def decrypt(cb: CipherBlock, params: CipherParams) -> bytes:
    s, n = cb.side, cb.payload_len
    grid = cb.words ^ keystream(params, s)
    k = effective_iterations(params.iterations, s)
    cells = unscramble_lattice(TorusMap.classical(s), grid, k).view(np.float64).ravel()[:n]
    with np.errstate(all="ignore"):
        vals = np.power(params.base, cells)
    if not np.all(np.isfinite(vals)):
        raise IntegrityError("decryption integrity failure: non-finite cell")
    rounded = np.floor(vals + 0.5)
    if np.any(np.abs(vals - rounded) > DECODE_TOLERANCE):
        raise IntegrityError("decryption integrity failure: cell does not decode to a byte")
    if np.any((rounded < PRINTABLE_MIN) | (rounded > PRINTABLE_MAX)):
        raise IntegrityError("decryption integrity failure: byte outside printable ASCII")
    return rounded.astype(np.uint8).tobytes()


def _check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] != img.shape[1]:
        raise DomainError(f"image must be square, got shape {img.shape}")
    if img.dtype != np.uint8:
        raise DomainError("image must be 8-bit grayscale (uint8)")
    if img.shape[0] < 2:
        raise DomainError("image side must be at least 2")
    return img


def encrypt_image(img: np.ndarray, params: CipherParams) -> np.ndarray:
    img = _check_image(img)
    n = img.shape[0]
    k = effective_iterations(params.iterations, n)
    scrambled = scramble_lattice(TorusMap.classical(n), img, k)
    return scrambled ^ keystream_bytes(params, n * n).reshape(n, n)


def decrypt_image(img: np.ndarray, params: CipherParams) -> np.ndarray:
    img = _check_image(img)
    n = img.shape[0]
    k = effective_iterations(params.iterations, n)
    unmasked = img ^ keystream_bytes(params, n * n).reshape(n, n)
    return unscramble_lattice(TorusMap.classical(n), unmasked, k)
