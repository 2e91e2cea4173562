from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pidkit.capacity import full_rate_threshold, min_servers
from pidkit.schemes import build_basic, build_full_rate, build_intermediate, build_scheme, cyclic_pair_scheme_f5
from pidkit.simulator import (
    DeliveryError,
    StorageViolation,
    deal_randomness,
    random_messages,
    run_delivery,
    server_answer,
    user_decode,
)

INV2 = pow(2, -1, 5)


def test_randomness_is_replayable():
    s = build_full_rate(8, 3)
    assert np.array_equal(deal_randomness(s, 42), deal_randomness(s, 42))
    assert deal_randomness(s, 42).shape == (5,)
    assert deal_randomness(build_basic(1, 1), 0).size == 0
    assert deal_randomness(build_full_rate(4, 4), 0).size == 0


def test_randomness_roughly_uniform():
    s = build_intermediate(7, 3, 4)
    assert s.p == 5
    draws = np.concatenate([deal_randomness(s, seed) for seed in range(34000)])
    assert draws.size >= 10**5
    counts = np.bincount(draws, minlength=5)
    expected = draws.size / 5
    sigma = np.sqrt(draws.size * 0.2 * 0.8)
    assert np.all(np.abs(counts - expected) < 5 * sigma)


def test_three_bit_table():
    s = build_basic(3, 1)
    w = [1]
    for z1 in (0, 1):
        for z2 in (0, 1):
            z = [z1, z2]
            assert server_answer(s, 2, 1, None, z).tolist() == [z2]
            expected = {
                1: [(1 + z1) % 2, z2, (z1 + z2) % 2],
                2: [z1, (1 + z2) % 2, (z1 + z2) % 2],
                3: [z1, z2, (1 + z1 + z2) % 2],
            }
            for k in (1, 2, 3):
                ans = [server_answer(s, n, k, w if n == k else None, z)[0] for n in (1, 2, 3)]
                assert ans == expected[k]
                assert user_decode(s, [[a] for a in ans]).tolist() == [1]


def hand_answers(k, w, z):
    """Answers of the hand-built F_5 scheme, written out symbol by symbol."""
    a1, a2 = w
    if k == 1:
        out = [3 * INV2 * a1 - INV2 * a2 + z, -2 * z, -INV2 * a1 + INV2 * a2 + z]
    elif k == 2:
        out = [2 * a1 - a2 + z, -a1 + a2 - 2 * z, z]
    else:
        out = [z, 3 * a1 - a2 - 2 * z, -2 * a1 + a2 + z]
    return [v % 5 for v in out]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_five_symbol_table(k):
    s = cyclic_pair_scheme_f5()
    rng = np.random.default_rng(k)
    for _ in range(30):
        msgs = random_messages(s, rng)
        t = run_delivery(s, k, msgs, seed=int(rng.integers(1 << 30)))
        assert [a[0] for a in t.answers] == hand_answers(k, msgs[k - 1].tolist(), t.z[0])
        assert t.success
        a = [x[0] for x in t.answers]
        assert t.decoded == ((a[0] + a[1] + a[2]) % 5, (a[0] + 2 * a[1] + 3 * a[2]) % 5)


def test_five_symbol_table_server_three_for_second_message():
    s = cyclic_pair_scheme_f5()
    assert server_answer(s, 3, 2, None, [4]).tolist() == [4]


def test_zero_inputs_give_zero():
    s = build_full_rate(8, 3)
    for n in range(1, s.N + 1):
        holds = s.storage.stores(n, 1)
        assert not server_answer(s, n, 1, [0, 0, 0] if holds else None, [0] * 5).any()
    assert not user_decode(s, [[0] * d for d in s.D]).any()
    t = run_delivery(s, 4, [[0, 0, 0]] * 8, seed=3)
    assert t.decoded == (0, 0, 0)


def test_storage_is_enforced():
    s = build_basic(3, 1)
    with pytest.raises(StorageViolation):
        server_answer(s, 2, 1, [1], [0, 0])
    with pytest.raises(DeliveryError):
        server_answer(s, 1, 1, None, [0, 0])


def test_undelivered_messages_are_never_read():
    class Untouchable:
        def __array__(self, *a, **kw):
            raise AssertionError("read an undelivered message")

        def __len__(self):
            raise AssertionError("read an undelivered message")

    s = build_scheme(7, 3, 4)
    for k in range(1, 8):
        msgs = [Untouchable()] * 7
        msgs[k - 1] = [1, 2]
        assert run_delivery(s, k, msgs, seed=k).success


def test_transcript_document():
    s = build_scheme(7, 3, 4)
    t = run_delivery(s, 2, [[1, 1]] * 7, seed=5)
    doc = t.to_dict()
    assert set(doc) == {"k", "seed", "z", "answers", "decoded", "download", "success"}
    assert [len(a) for a in doc["answers"]] == list(s.D)
    assert doc["download"] == s.download
    assert "message" in t.to_dict(include_message=True)
    assert run_delivery(s, 2, [[1, 1]] * 7, seed=5) == t
    assert run_delivery(s, 2, [[1, 1]] * 7, z=t.z).answers == t.answers


def test_bad_inputs():
    s = build_basic(3, 1)
    with pytest.raises(DeliveryError):
        run_delivery(s, 4, [[0]] * 3)
    with pytest.raises(DeliveryError):
        run_delivery(s, 1, [[0]] * 2)
    with pytest.raises(DeliveryError):
        run_delivery(s, 1, [[0, 0]] * 3)
    with pytest.raises(DeliveryError):
        user_decode(s, [[0], [0]])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12).flatmap(lambda K: st.tuples(st.just(K), st.integers(1, K))), st.integers(0, 2**32), st.data())
def test_any_built_scheme_decodes(km, seed, data):
    K, M = km
    N = data.draw(st.integers(min_servers(K, M), full_rate_threshold(K, M)))
    s = build_scheme(K, M, N)
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(1, K))
    t = run_delivery(s, k, random_messages(s, rng), seed=seed)
    assert t.success
    assert t.download == s.download
    assert Fraction(len(t.message), t.download) == s.rate
