"""Closed-form rate bounds and regime classification.

All quantities are exact :class:`fractions.Fraction`; nothing in this module
touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional


class RegimeError(ValueError):
    pass


INFEASIBLE = "infeasible"
TIGHT_AT_MIN = "tight-at-N-min"
INTERMEDIATE = "intermediate"
FULL_RATE = "full-rate"


def _check_km(K: int, M: int):
    if K < 1 or not 1 <= M <= K:
        raise RegimeError(f"need 1 <= M <= K, got K={K}, M={M}")


def min_servers(K: int, M: int) -> int:
    """Fewest servers that can hold every message: ceil(K/M)."""
    _check_km(K, M)
    return -(-K // M)


def full_rate_threshold(K: int, M: int) -> int:
    """Server count from which rate M/K is achievable.

    K/g - (M/g - 1)(floor(K/M) - 1) with g = gcd(K, M).
    """
    _check_km(K, M)
    g = gcd(K, M)
    return K // g - (M // g - 1) * (K // M - 1)


def replication_level(K: int, M: int, N: int) -> int:
    """Number of copies of each first-set message in the intermediate scheme.

    This is also the message length of that scheme.
    """
    _check_km(K, M)
    if K % M == 0:
        raise RegimeError(f"M={M} divides K={K}; there is no intermediate regime")
    if N < min_servers(K, M):
        raise RegimeError(f"N={N} < ceil(K/M)={min_servers(K, M)}")
    q = K // M
    return ((N - q + 1) * M) // (K - (q - 1) * M)


def intermediate_rate(K: int, M: int, N: int) -> Fraction:
    l = replication_level(K, M, N)
    return Fraction(l, N + (l - 1) * (K // M - 1))


def best_lower_bound(K: int, M: int, N: int) -> tuple[Fraction, int]:
    """Best achievable rate over N' in [ceil(K/M) : min(N, threshold)].

    Returns ``(rate, witness_N)``; ties go to the smaller N'.
    """
    n_min = min_servers(K, M)
    if N < n_min:
        raise RegimeError(f"N={N} < ceil(K/M)={n_min}: infeasible")
    if K % M == 0:
        return Fraction(M, K), n_min
    best, witness = Fraction(0), n_min
    for n in range(n_min, min(N, full_rate_threshold(K, M)) + 1):
        r = intermediate_rate(K, M, n)
        if r > best:
            best, witness = r, n
    return best, witness


@dataclass(frozen=True)
class CapacityReport:
    K: int
    M: int
    N: int
    feasible: bool
    lower: Fraction
    upper: Fraction
    regime: str
    witness_N: Optional[int] = None

    @property
    def exact(self) -> Optional[Fraction]:
        return self.lower if self.lower == self.upper else None

    def to_dict(self) -> dict:
        def frac(x):
            return None if x is None else {"num": x.numerator, "den": x.denominator}

        return {
            "K": self.K,
            "M": self.M,
            "N": self.N,
            "feasible": self.feasible,
            "lower": frac(self.lower),
            "upper": frac(self.upper),
            "exact": frac(self.exact),
            "regime": self.regime,
            "witness_N": self.witness_N,
        }


def capacity_report(K: int, M: int, N: int) -> CapacityReport:
    _check_km(K, M)
    if N < 0:
        raise RegimeError("N must be non-negative")
    n_min = min_servers(K, M)
    if N < n_min:
        return CapacityReport(K, M, N, False, Fraction(0), Fraction(0), INFEASIBLE)
    upper = Fraction(M, K)
    if K % M == 0 or N >= full_rate_threshold(K, M):
        return CapacityReport(K, M, N, True, upper, upper, FULL_RATE, full_rate_threshold(K, M))
    if N == n_min:
        r = Fraction(1, n_min)
        return CapacityReport(K, M, N, True, r, r, TIGHT_AT_MIN, n_min)
    lower, witness = best_lower_bound(K, M, N)
    return CapacityReport(K, M, N, True, lower, upper, INTERMEDIATE, witness)
