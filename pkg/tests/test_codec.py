import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgcipher.codec import (
    CodecError,
    KeyFormatError,
    bytes_to_symbols,
    format_symbol_text,
    parse_key,
    parse_symbol_text,
    sample_message,
    serialize_key,
    symbols_to_bytes,
)
from qgcipher.quasigroup import random_quasigroup
from qgcipher.transform import PEKey, RoundParams
from tests.conftest import TABLE2

REFERENCE_KEY_TEXT = (
    "PEKEY 1\n"
    "order 4\n"
    "row 1 2 4 3\n"
    "row 3 4 2 1\n"
    "row 4 3 1 2\n"
    "row 2 1 3 4\n"
    "round 4 3\n"
    "round 4 3\n"
    "round 4 3\n"
)


@pytest.mark.parametrize(
    "data, a, symbols",
    [(b"\x1b", 4, [1, 2, 3, 4]), (b"\xff", 16, [16, 16]), (b"\x00\x7f", 256, [1, 128]),
     (b"\xa5", 2, [2, 1, 2, 1, 1, 2, 1, 2])],
)
def test_byte_codec_examples(data, a, symbols):
    assert bytes_to_symbols(data, a).tolist() == symbols
    assert symbols_to_bytes(symbols, a) == data


def test_every_byte_value_at_256():
    data = bytes(range(256))
    assert bytes_to_symbols(data, 256).tolist() == list(range(1, 257))


def test_unsupported_order():
    with pytest.raises(CodecError, match="supports orders"):
        bytes_to_symbols(b"\x00", 8)


def test_length_not_divisible():
    with pytest.raises(CodecError, match="length 3 not divisible by 4"):
        symbols_to_bytes([1, 2, 3], 4)


@given(data=st.binary(max_size=300), a=st.sampled_from([2, 4, 16, 256]))
@settings(max_examples=200)
def test_byte_round_trip(data, a):
    assert symbols_to_bytes(bytes_to_symbols(data, a), a) == data


def test_parse_symbol_text():
    assert parse_symbol_text("1 2 3 1 2", 4).tolist() == [1, 2, 3, 1, 2]
    assert parse_symbol_text("", 4).tolist() == []
    assert parse_symbol_text(" 1\n2\t3 ", 4).tolist() == [1, 2, 3]


def test_parse_symbol_text_errors():
    with pytest.raises(CodecError, match="token 1 value 5"):
        parse_symbol_text("5", 4)
    with pytest.raises(CodecError, match="token 2"):
        parse_symbol_text("1 x", 4)


def test_symbol_text_round_trip(rng):
    s = rng.integers(1, 17, size=100)
    assert np.array_equal(parse_symbol_text(format_symbol_text(s), 16), s)


def test_sample_message_frequency():
    msg = sample_message(TABLE2, 10**5, 2024)
    assert abs(np.mean(msg == 1) - 0.700) <= 0.0043
    assert msg.min() >= 1 and msg.max() <= 4


def test_sample_message_deterministic():
    assert np.array_equal(sample_message(TABLE2, 1000, 5), sample_message(TABLE2, 1000, 5))


def test_sample_message_kolmogorov_distance():
    cdf = np.cumsum(TABLE2)
    for k in (10**3, 10**4, 10**5):
        msg = sample_message(TABLE2, k, k)
        emp = np.cumsum(np.bincount(msg, minlength=5)[1:]) / k
        assert np.max(np.abs(emp - cdf)) < 3 / np.sqrt(k)


def test_sample_message_errors():
    with pytest.raises(ValueError):
        sample_message([0.5, 0.4], 10, 0)
    with pytest.raises(ValueError):
        sample_message(TABLE2, 0, 0)


def test_reference_key_file(q4):
    key = PEKey(q4, (RoundParams(4, 3),) * 3)
    text = serialize_key(key)
    assert text == REFERENCE_KEY_TEXT
    assert len(text.splitlines()) == 9
    assert parse_key(text) == key


def test_key_duplicate_row_entry():
    bad = REFERENCE_KEY_TEXT.replace("row 3 4 2 1", "row 3 3 2 1")
    with pytest.raises(KeyFormatError, match="duplicate in row") as err:
        parse_key(bad)
    assert err.value.line == 4


@pytest.mark.parametrize(
    "text, line",
    [
        ("PEKEY 2\n", 1),
        ("PEKEY 1\norder x\n", 2),
        ("PEKEY 1\norder 2\nrow 1 2\n", 4),
        ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\n", 5),
        ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 3 2\n", 5),
        ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1 1\n", 5),
        ("PEKEY 1\norder 2\nrow 1  2\nrow 2 1\nround 1 2\n", 3),
        ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 1 2\n\n", 6),
        ("PEKEY 1\r\norder 2\n", 1),
        ("PEKEY 1\norder 2\nrow 1 2\nrow 2 1\nround 01 2\n", 5),
    ],
)
def test_key_grammar_errors(text, line):
    with pytest.raises(KeyFormatError) as err:
        parse_key(text)
    assert err.value.line == line


def _random_key(rng):
    a = int(rng.integers(2, 33))
    rounds = tuple(
        RoundParams(int(rng.integers(1, a + 1)), int(rng.integers(2, 10**6)))
        for _ in range(int(rng.integers(1, 6)))
    )
    return PEKey(random_quasigroup(a, rng), rounds)


def test_key_round_trip_random(rng):
    for _ in range(200):
        key = _random_key(rng)
        text = serialize_key(key)
        again = parse_key(text)
        assert again == key
        assert serialize_key(again) == text
