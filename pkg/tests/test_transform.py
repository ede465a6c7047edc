import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgcipher.quasigroup import SymbolRangeError, parastrophe_set, random_quasigroup
from qgcipher.transform import (
    BlockRecord,
    PEKey,
    RoundParams,
    e_chain,
    e_chain_inverse,
    e_inverse,
    e_transform,
    pe_decrypt,
    pe_encrypt,
    pe_encrypt_rounds,
    pe_round_decrypt,
    pe_round_encrypt,
    pe_trace_schedule,
)
from tests.oracles import pe_round_reference

WORKED_PLAIN = [1, 2, 3, 1, 2]
WORKED_CIPHER = [3, 2, 3, 4, 2]


# -- E ---------------------------------------------------------------------

def test_e_transform_hand_example(q4):
    assert e_transform(q4, 4, [1, 2, 3]).tolist() == [2, 4, 3]


def test_e_inverse_hand_example(q4):
    assert e_inverse(q4, 4, [2, 4, 3]).tolist() == [1, 2, 3]


def test_e_empty(q4):
    assert e_transform(q4, 2, []).tolist() == []
    assert e_inverse(q4, 2, []).tolist() == []


def test_e_single_symbol_exhaustive(q4):
    for l, x in itertools.product(range(1, 5), repeat=2):
        assert e_transform(q4, l, [x]).tolist() == [q4(l, x)]


def test_e_round_trip_random(q4, rng):
    msg = rng.integers(1, 5, size=1000)
    for l in range(1, 5):
        assert np.array_equal(e_inverse(q4, l, e_transform(q4, l, msg)), msg)


def test_e_range_errors(q4):
    with pytest.raises(SymbolRangeError):
        e_transform(q4, 5, [1])
    with pytest.raises(SymbolRangeError):
        e_transform(q4, 1, [1, 0])


def test_e_chain_hand_example(q4):
    assert e_chain([(q4, 4), (q4, 1)], [1, 2, 3]).tolist() == [2, 1, 4]


def test_e_chain_single_equals_e(q4, rng):
    msg = rng.integers(1, 5, size=50)
    assert np.array_equal(e_chain([(q4, 3)], msg), e_transform(q4, 3, msg))


def test_e_chain_inverse(q4, rng):
    other = random_quasigroup(4, 5)
    chain = [(q4, 4), (other, 2), (q4, 1)]
    msg = rng.integers(1, 5, size=200)
    assert np.array_equal(e_chain_inverse(chain, e_chain(chain, msg)), msg)


def test_e_chain_errors(q4):
    with pytest.raises(ValueError, match="at least one"):
        e_chain([], [1])
    with pytest.raises(ValueError, match="alphabet mismatch"):
        e_chain([(q4, 1), (random_quasigroup(5, 0), 1)], [1])


# -- PE worked example ------------------------------------------------------

def test_pe_worked_example(pset4):
    cipher, sched = pe_round_encrypt(pset4, RoundParams(4, 3), WORKED_PLAIN)
    assert cipher.tolist() == WORKED_CIPHER
    assert sched == [
        BlockRecord(start=1, planned_length=3, actual_length=3, parastrophe=4, leader=4),
        BlockRecord(start=4, planned_length=11, actual_length=2, parastrophe=6, leader=3),
    ]


def test_pe_worked_example_decrypt(pset4):
    assert pe_round_decrypt(pset4, RoundParams(4, 3), WORKED_CIPHER).tolist() == WORKED_PLAIN


def test_trace_schedule_both_sides(pset4):
    params = RoundParams(4, 3)
    enc = pe_trace_schedule(pset4, params, WORKED_PLAIN)
    dec = pe_trace_schedule(pset4, params, WORKED_CIPHER, from_cipher=True)
    assert [(b.planned_length, b.parastrophe) for b in enc] == [(3, 4), (11, 6)]
    assert enc == dec


def test_message_shorter_than_d1(pset4):
    sched = pe_trace_schedule(pset4, RoundParams(2, 9), [1, 2, 3])
    assert len(sched) == 1
    assert sched[0].actual_length == 3 and sched[0].planned_length == 9
    assert sched[0].parastrophe == 9 % 6 + 1


def test_single_symbol_message(pset4):
    for l, x, d1 in itertools.product(range(1, 5), range(1, 5), (2, 3, 7)):
        cipher, sched = pe_round_encrypt(pset4, RoundParams(l, d1), [x])
        s = d1 % 6 + 1
        assert cipher.tolist() == [pset4[s](l, x)]
        assert len(sched) == 1 and sched[0].actual_length == 1


def test_empty_message_rejected(pset4, q4):
    with pytest.raises(ValueError, match="empty"):
        pe_round_encrypt(pset4, RoundParams(1, 2), [])
    with pytest.raises(ValueError, match="empty"):
        pe_encrypt(PEKey(q4, (RoundParams(1, 2),)), [])
    with pytest.raises(ValueError, match="empty"):
        pe_decrypt(PEKey(q4, (RoundParams(1, 2),)), [])


def test_round_params_validation(q4):
    with pytest.raises(ValueError):
        RoundParams(1, 1)
    with pytest.raises(SymbolRangeError):
        PEKey(q4, (RoundParams(5, 3),))
    with pytest.raises(ValueError):
        PEKey(q4, ())


# -- PE against the block-by-block reference --------------------------------

@given(
    a=st.sampled_from([2, 3, 4, 5, 8]),
    seed=st.integers(0, 2**32),
    leader_frac=st.floats(0, 0.999),
    d1=st.integers(2, 70),
    msg=st.lists(st.integers(0, 10**6), min_size=1, max_size=120),
)
@settings(max_examples=150, deadline=None)
def test_pe_matches_reference(a, seed, leader_frac, d1, msg):
    op = random_quasigroup(a, seed)
    ps = parastrophe_set(op)
    leader = 1 + int(leader_frac * a)
    message = [1 + v % a for v in msg]
    cipher, sched = pe_round_encrypt(ps, RoundParams(leader, d1), message)
    ref_cipher, ref_blocks = pe_round_reference(op.rows(), leader, d1, message)
    assert cipher.tolist() == ref_cipher
    assert [(b.start, b.planned_length, b.actual_length, b.parastrophe, b.leader) for b in sched] == ref_blocks


def test_flat_recurrence_equals_blockwise_e(rng):
    # blocks reassembled with e_transform on the scheduled parastrophe
    for trial in range(30):
        a = int(rng.choice([2, 4, 16]))
        ps = parastrophe_set(random_quasigroup(a, trial))
        msg = rng.integers(1, a + 1, size=int(rng.integers(1, 500)))
        params = RoundParams(int(rng.integers(1, a + 1)), int(rng.integers(2, 40)))
        cipher, sched = pe_round_encrypt(ps, params, msg)
        pieces = [
            e_transform(ps[b.parastrophe], b.leader, msg[b.start - 1:b.start - 1 + b.actual_length])
            for b in sched
        ]
        assert np.array_equal(np.concatenate(pieces), cipher)


def test_block_arithmetic_invariants(rng):
    for trial in range(30):
        a = int(rng.choice([2, 3, 4, 16]))
        ps = parastrophe_set(random_quasigroup(a, trial))
        msg = rng.integers(1, a + 1, size=2000)
        cipher, sched = pe_round_encrypt(ps, RoundParams(1, int(rng.integers(2, 30))), msg)
        assert sum(b.actual_length for b in sched) == msg.size
        for prev, b in zip(sched, sched[1:]):
            assert a + 1 <= b.planned_length <= a * a + a
            assert b.parastrophe == b.planned_length % 6 + 1
            end = prev.start + prev.actual_length - 1
            u, v = cipher[end - 2], cipher[end - 1]
            assert b.planned_length == a * u + v
            assert b.leader == v
        assert all(b.actual_length >= 1 for b in sched)


def test_prefix_property(pset4, rng):
    msg = rng.integers(1, 5, size=3000)
    params = RoundParams(2, 5)
    cipher, sched = pe_round_encrypt(pset4, params, msg)
    for b in sched[:-1]:
        q = b.start + b.actual_length - 1
        prefix, _ = pe_round_encrypt(pset4, params, msg[:q])
        assert np.array_equal(prefix, cipher[:q])


def test_exhaustive_round_trip_small():
    op = random_quasigroup(4, 7)
    key = PEKey(op, (RoundParams(3, 2), RoundParams(1, 5)))
    seen = set()
    for k in range(1, 7):
        for msg in itertools.product(range(1, 5), repeat=k):
            c = pe_encrypt(key, msg)
            assert pe_decrypt(key, c).tolist() == list(msg)
            seen.add(tuple(c))
    assert len(seen) == sum(4**k for k in range(1, 7))


def test_round_trip_random(rng):
    for trial in range(200):
        a = int(rng.choice([2, 4, 16]))
        rounds = tuple(
            RoundParams(int(rng.integers(1, a + 1)), int(rng.integers(2, a * a + a + 1)))
            for _ in range(int(rng.integers(1, 6)))
        )
        key = PEKey(random_quasigroup(a, trial), rounds)
        msg = rng.integers(1, a + 1, size=int(rng.integers(1, 2000)))
        c = pe_encrypt(key, msg)
        assert c.size == msg.size
        assert np.array_equal(pe_decrypt(key, c), msg)


def test_one_round_key_equals_round_function(pset4, q4, rng):
    msg = rng.integers(1, 5, size=300)
    key = PEKey(q4, (RoundParams(4, 3),))
    cipher, _ = pe_round_encrypt(pset4, RoundParams(4, 3), msg)
    assert np.array_equal(pe_encrypt(key, msg), cipher)
    assert np.array_equal(pe_decrypt(key, cipher), pe_round_decrypt(pset4, RoundParams(4, 3), cipher))


def test_rounds_compose_in_order(q4, rng):
    msg = rng.integers(1, 5, size=300)
    r1, r2 = RoundParams(4, 3), RoundParams(2, 8)
    key = PEKey(q4, (r1, r2))
    ps = key.parastrophes
    step, _ = pe_round_encrypt(ps, r1, msg)
    step, _ = pe_round_encrypt(ps, r2, step)
    assert np.array_equal(pe_encrypt(key, msg), step)
    outs = pe_encrypt_rounds(key, msg)
    assert np.array_equal(outs[-1], step)


def test_huge_d1_is_one_block(pset4):
    cipher, sched = pe_round_encrypt(pset4, RoundParams(1, 10**15), [1, 2, 3, 4])
    assert len(sched) == 1
    assert pe_round_decrypt(pset4, RoundParams(1, 10**15), cipher).tolist() == [1, 2, 3, 4]
