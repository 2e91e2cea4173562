from fractions import Fraction
from math import ceil, gcd

import pytest
from hypothesis import given, strategies as st

from pidkit.capacity import (
    FULL_RATE,
    INFEASIBLE,
    INTERMEDIATE,
    TIGHT_AT_MIN,
    RegimeError,
    best_lower_bound,
    capacity_report,
    full_rate_threshold,
    min_servers,
    replication_level,
)
from pidkit.schemes import build_scheme


def test_threshold_examples():
    assert full_rate_threshold(8, 3) == 6
    assert full_rate_threshold(5, 2) == 4
    for K in range(3, 40, 2):
        assert full_rate_threshold(K, 2) == ceil(K / 2) + 1


def test_threshold_when_m_divides_k():
    for K in range(1, 31):
        for M in range(1, K + 1):
            if K % M == 0:
                assert full_rate_threshold(K, M) == K // M


def test_intermediate_width_bound():
    for K in range(1, 41):
        for M in range(1, K + 1):
            g = gcd(K, M)
            assert full_rate_threshold(K, M) - min_servers(K, M) < Fraction(2 * M, g) - 1


def test_replication_level_examples():
    assert replication_level(7, 3, 4) == 2
    assert replication_level(5, 4, 3) == 2
    assert replication_level(5, 4, 4) == 3
    for K in range(2, 20):
        for M in range(1, K):
            if K % M:
                assert replication_level(K, M, min_servers(K, M)) == 1
    with pytest.raises(RegimeError):
        replication_level(6, 3, 2)
    with pytest.raises(RegimeError):
        replication_level(7, 3, 2)


def test_best_lower_bound_examples():
    assert best_lower_bound(7, 3, 4) == (Fraction(2, 5), 4)
    assert best_lower_bound(7, 3, 5) == (Fraction(3, 7), 5)
    assert best_lower_bound(7, 3, 9) == (Fraction(3, 7), 5)
    with pytest.raises(RegimeError):
        best_lower_bound(7, 3, 2)


def test_best_lower_bound_monotone_and_matches_builders():
    for K in range(1, 13):
        for M in range(1, K + 1):
            lo, hi = min_servers(K, M), full_rate_threshold(K, M)
            prev = Fraction(0)
            for N in range(lo, hi + 3):
                rate, witness = best_lower_bound(K, M, N)
                assert rate >= prev
                prev = rate
                rep = capacity_report(K, M, N)
                assert rep.lower == rate
                assert build_scheme(K, M, witness).rate == rate
                # no smaller-or-equal server count does strictly better
                best = max(build_scheme(K, M, n).rate for n in range(lo, min(N, hi) + 1))
                assert best == rate


def test_report_examples():
    assert capacity_report(3, 1, 3).exact == Fraction(1, 3)
    assert capacity_report(3, 2, 3).exact == Fraction(2, 3)
    r = capacity_report(7, 3, 4)
    assert (r.lower, r.upper, r.exact, r.regime) == (Fraction(2, 5), Fraction(3, 7), None, INTERMEDIATE)
    assert capacity_report(7, 3, 2).regime == INFEASIBLE
    assert capacity_report(7, 3, 3).regime == TIGHT_AT_MIN
    assert capacity_report(7, 3, 5).regime == FULL_RATE
    assert capacity_report(6, 3, 2).exact == Fraction(1, 2)


def test_report_document():
    doc = capacity_report(7, 3, 4).to_dict()
    assert doc["lower"] == {"num": 2, "den": 5}
    assert doc["exact"] is None


@given(st.integers(1, 30).flatmap(lambda K: st.tuples(st.just(K), st.integers(1, K), st.integers(0, 40))))
def test_report_invariants(kmn):
    K, M, N = kmn
    r = capacity_report(K, M, N)
    assert r.lower <= r.upper <= Fraction(M, K)
    assert (r.exact is not None) == (r.lower == r.upper)
    infeasible = N < ceil(K / M)
    assert infeasible == (not r.feasible) == (r.regime == INFEASIBLE)
    if infeasible:
        assert r.lower == r.upper == 0
    else:
        assert r.lower >= Fraction(1, ceil(K / M))


def two_per_server_capacity(K, N):
    half = ceil(K / 2)
    if N >= half + 1:
        return Fraction(2, K)
    if N == half:
        return Fraction(1, half)
    return Fraction(0)


def test_two_per_server_odd_k():
    # K = 1 would have M > K
    for K in range(3, 22, 2):
        for N in range(0, K + 4):
            assert capacity_report(K, 2, N).exact == two_per_server_capacity(K, N)


def test_bad_parameters():
    with pytest.raises(RegimeError):
        capacity_report(3, 4, 3)
    with pytest.raises(RegimeError):
        capacity_report(0, 1, 1)
