"""Secret keys (40 uppercase hex characters) and parameter extraction.

Layout of the key, in 10-character chunks::

    [0:10]  control parameter r  = 3.d1..d10, d1 promoted to >= 6
    [10:20] initial state x0     = 0.d1..d10
    [20:30] logarithm base       = 1.d2..d10 (d1 forced to 1)
    [30:40] scramble iterations  = hex value of character 35

Each character contributes one decimal digit, its hex value mod 10, so the
pairs {0,A}, {1,B}, ..., {5,F} are indistinguishable.
"""

from __future__ import annotations

import math
import re
import secrets
from dataclasses import dataclass
from typing import Callable

from .errors import FormatError

KEY_LENGTH = 40
ITERATION_INDEX = 35
HEX_DIGITS = "0123456789ABCDEF"
_KEY_RE = re.compile(r"^[0-9A-F]{40}$")

EntropySource = Callable[[int], bytes]


@dataclass(frozen=True)
class SecretKey:
    chars: str

    def __post_init__(self):
        if not isinstance(self.chars, str) or not _KEY_RE.match(self.chars):
            raise FormatError("secret key must be exactly 40 uppercase hex characters")

    def __str__(self):
        return self.chars

    @classmethod
    def parse(cls, text: str) -> "SecretKey":
        """Accept surrounding whitespace and lowercase, normalize to the canonical form."""
        return cls(text.strip().upper())


@dataclass(frozen=True)
class CipherParams:
    r: float
    x0: float
    base: float
    iterations: int


def generate_key(entropy_source: EntropySource = secrets.token_bytes) -> SecretKey:
    """40 independent uniform hex characters (20 bytes from ``entropy_source``)."""
    raw = entropy_source(KEY_LENGTH // 2)
    if len(raw) != KEY_LENGTH // 2:
        raise OSError("entropy source returned a short read")
    return SecretKey(raw.hex().upper())


def _digits(chunk: str) -> list[int]:
    return [int(c, 16) % 10 for c in chunk]


def extract_params(key: SecretKey | str) -> CipherParams:
    if isinstance(key, str):
        key = SecretKey(key)
    k = key.chars

    r_d = _digits(k[0:10])
    if r_d[0] < 6:
        r_d[0] = 6
    if r_d == [6] + [0] * 9:
        # 3.6 itself sits on the open interval's edge
        r_d[-1] = 1

    x_d = _digits(k[10:20])
    if not any(x_d):
        x_d[-1] = 1

    b_d = _digits(k[20:30])
    b_d[0] = 1
    if not any(b_d[1:]):
        b_d[1] = 5

    iterations = int(k[ITERATION_INDEX], 16) or 1

    def join(ds):
        return "".join(map(str, ds))

    return CipherParams(
        r=float("3." + join(r_d)),
        x0=float("0." + join(x_d)),
        base=float(f"{b_d[0]}." + join(b_d[1:])),
        iterations=iterations,
    )


@dataclass(frozen=True)
class AvalancheViolation:
    position: int
    original: str
    replacement: str


@dataclass
class AvalancheReport:
    key: SecretKey
    violations: list[AvalancheViolation]
    inert_positions: list[int]  # positions where no substitution changes the params

    def violating_positions(self) -> set[int]:
        return {v.position for v in self.violations}

    def summary(self) -> str:
        lines = [f"single-character edits leaving params unchanged: {len(self.violations)}"]
        for v in self.violations:
            lines.append(f"  pos {v.position:2d}: {v.original} -> {v.replacement}")
        lines.append("unused positions: " + ",".join(map(str, self.inert_positions)))
        return "\n".join(lines)


def avalanche_check(key: SecretKey) -> AvalancheReport:
    """Try every single-character substitution and record those that leave all four parameters unchanged.

    Positions where every substitution is a no-op are reported as inert rather
    than as fifteen separate violations.
    """
    base = extract_params(key)
    chars = key.chars
    violations = []
    inert = []
    for pos in range(KEY_LENGTH):
        hits = [
            AvalancheViolation(pos, chars[pos], alt)
            for alt in HEX_DIGITS
            if alt != chars[pos]
            and extract_params(SecretKey(chars[:pos] + alt + chars[pos + 1 :])) == base
        ]
        if len(hits) == len(HEX_DIGITS) - 1:
            inert.append(pos)
        else:
            violations.extend(hits)
    return AvalancheReport(key, violations, inert)


def effective_key_bits() -> float:
    """log2 of the count of distinct parameter tuples reachable from keys."""
    # r: first digit in 6..9 (4 values) + 9 free digits; x0: 10 digits (the all-zero
    # chunk folds onto ...01); base: 9 digits (all-zero folds onto 5000...);
    # iterations: 15 values (0 folds onto 1)
    r_count = 4 * 10**9 - 1
    x_count = 10**10 - 1
    b_count = 10**9 - 1
    it_count = 15
    return math.log2(r_count) + math.log2(x_count) + math.log2(b_count) + math.log2(it_count)
