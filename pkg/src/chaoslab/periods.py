"""Minimal periods of the cat map family.

Three independent routes: iterated matrix multiplication, the Fibonacci
criterion (classical map only), and closed-form special cases for the
generalized map.  ``check_dyson_bounds`` audits the classical periods against
the 3N / 2N / (12/7)N ladder.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .errors import DomainError, PeriodNotFound
from .maps import IDENTITY, Matrix2, TorusMap, mat_mul_mod, mat_pow_mod

DEFAULT_CAP = 10**6


class Method(str, Enum):
    MATRIX_POWER = "matrix_power"
    FIBONACCI = "fibonacci"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class PeriodResult:
    modulus: int
    a: int
    b: int
    period: int
    method: Method
    case: int | None = None  # closed-form template number, 1..6


@dataclass(frozen=True)
class FibSequenceMod:
    modulus: int
    values: tuple[int, ...]


def fibonacci_mod(count: int, modulus: int) -> FibSequenceMod:
    """First ``count`` Fibonacci numbers F_0, F_1, ... reduced mod ``modulus``."""
    vals = []
    a, b = 0, 1 % modulus
    for _ in range(count):
        vals.append(a)
        a, b = b, (a + b) % modulus
    return FibSequenceMod(modulus, tuple(vals))


def period_matrix_power(tmap: TorusMap, cap: int = DEFAULT_CAP) -> PeriodResult:
    n = tmap.modulus
    m = tuple(tuple(v % n for v in row) for row in tmap.matrix)
    p = m
    for k in range(1, cap + 1):
        if p == IDENTITY:
            return PeriodResult(n, tmap.a, tmap.b, k, Method.MATRIX_POWER)
        p = mat_mul_mod(p, m, n)
    raise PeriodNotFound(
        f"period of (a={tmap.a}, b={tmap.b}) mod {n} not found within {cap} iterations"
    )


@lru_cache(maxsize=4096)
def classical_period(n: int) -> int:
    """Cached minimal period of the classical map mod n."""
    return period_matrix_power(TorusMap.classical(n)).period


def period_fibonacci(n: int) -> PeriodResult:
    """Smallest k with F_{2k} = 0 and F_{2k-1} = 1 (mod n).

    Streams the sequence two terms at a time, holding only (F_{2k-1}, F_{2k}).
    """
    if n < 2:
        raise DomainError("modulus must be at least 2")
    odd, even = 1 % n, 1 % n  # F_1, F_2
    k = 1
    while not (even == 0 and odd == 1):
        odd = (odd + even) % n
        even = (odd + even) % n
        k += 1
    return PeriodResult(n, 1, 1, k, Method.FIBONACCI)


def fibonacci_matrix_identity_check(n: int, modulus: int) -> bool:
    """True iff F^n = [[F_{n-1}, F_n], [F_n, F_{n+1}]] and A^n = [[F_{2n-1}, F_{2n}], [F_{2n}, F_{2n+1}]] mod ``modulus``."""
    if n < 1:
        raise DomainError("power must be at least 1")
    fib = fibonacci_mod(2 * n + 2, modulus).values
    q: Matrix2 = ((0, 1), (1, 1))
    a: Matrix2 = ((1, 1), (1, 2))
    qn = mat_pow_mod(q, n, modulus)
    an = mat_pow_mod(a, n, modulus)
    return qn == ((fib[n - 1], fib[n]), (fib[n], fib[n + 1])) and an == (
        (fib[2 * n - 1], fib[2 * n]),
        (fib[2 * n], fib[2 * n + 1]),
    )


def _power_of(n: int, base: int) -> int | None:
    """Exponent y with n == base**y, else None."""
    y = 0
    while n % base == 0:
        n //= base
        y += 1
    return y if n == 1 else None


def bound_class(n: int) -> tuple[str, Fraction]:
    """Tightest bound the ladder assigns to n, as (label, multiplier of N).

    The 3N family N = 2*5^y is taken with y >= 1: at y = 0 (N = 2) the true
    period is 3, not 6.
    """
    if n % 2 == 0 and (y := _power_of(n // 2, 5)) is not None and y >= 1:
        return "3N", Fraction(3)
    if _power_of(n, 5) is not None:
        return "2N", Fraction(2)
    if n % 6 == 0 and _power_of(n // 6, 5) is not None:
        return "2N", Fraction(2)
    return "12N/7", Fraction(12, 7)


@dataclass(frozen=True)
class BoundRecord:
    N: int
    period: int
    bound_class: str
    bound: float
    equality: bool
    violation: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass
class DysonReport:
    records: list[BoundRecord]

    @property
    def violations(self) -> list[BoundRecord]:
        return [r for r in self.records if r.violation]

    def equality_set(self, label: str) -> list[int]:
        return [r.N for r in self.records if r.equality and r.bound_class == label]

    def findings(self) -> list[str]:
        out = []
        for rec in self.records:
            if rec.N == 2:
                out.append(
                    f"N=2 has period {rec.period}, below 3N=6 although 2 = 2*5^0;"
                    " the 3N equality family holds only for y >= 1"
                )
        return out

    def to_jsonl(self) -> str:
        return "".join(rec.to_json() + "\n" for rec in self.records)


def check_dyson_bounds(n_max: int) -> DysonReport:
    """Brute-force the classical period for every N in [2, n_max] and grade it."""
    if n_max < 2:
        raise DomainError("n_max must be at least 2")
    records = []
    for n in range(2, n_max + 1):
        period = classical_period(n)
        label, mult = bound_class(n)
        limit = mult * n
        records.append(
            BoundRecord(
                N=n,
                period=period,
                bound_class=label,
                bound=float(limit),
                equality=period == limit,
                violation=period > limit,
            )
        )
    return DysonReport(records)


def _bao_templates(a: int, b: int) -> Iterable[tuple[int, int, int]]:
    """Yield (case, N, period) for the closed-form generalized-map periods."""
    ab = a * b
    if a != 1 and b != 1:
        yield 1, ab + 1, 6
    yield 2, ab + 2, 4
    yield 3, ab + 3, 3
    yield 4, ab * ab + 5 * ab + 5, 5
    yield 5, ab**3 + 7 * ab * ab + 14 * ab + 7, 7
    yield 6, ab * ab + 4 * ab + 2, 8


def bao_closed_form(a: int, b: int) -> list[PeriodResult]:
    """Every closed-form (N, period) pair implied by the parameters (a, b).

    Several templates apply to any admissible (a, b), so all of them are
    returned in case order.
    """
    if a < 1 or b < 1:
        raise DomainError("closed forms need a, b >= 1")
    return [
        PeriodResult(n, a, b, period, Method.CLOSED_FORM, case)
        for case, n, period in _bao_templates(a, b)
        if n >= 2
    ]


@dataclass(frozen=True)
class BaoMismatch:
    a: int
    b: int
    N: int
    case: int
    stated: int
    brute_force: int


def check_bao(a_max: int = 12, b_max: int = 12, cap: int = DEFAULT_CAP) -> list[BaoMismatch]:
    """Compare each closed form against brute force over [1, a_max] x [1, b_max]."""
    mismatches = []
    for a in range(1, a_max + 1):
        for b in range(1, b_max + 1):
            for res in bao_closed_form(a, b):
                actual = period_matrix_power(TorusMap(a, b, res.modulus), cap).period
                if actual != res.period:
                    mismatches.append(BaoMismatch(a, b, res.modulus, res.case, res.period, actual))
    return mismatches
