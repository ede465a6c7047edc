"""Byte and text codecs, plaintext sampling, and the key file format.

Key files are UTF-8 with LF line endings::

    PEKEY 1
    order 4
    row 1 2 4 3
    row 3 4 2 1
    row 4 3 1 2
    row 2 1 3 4
    round 4 3

one ``row`` line per table row (1-based symbols) and one ``round <leader>
<d1>`` line per round, applied top to bottom.
"""
from __future__ import annotations

import numpy as np

from .quasigroup import InvalidTableError, validate_table
from .symbols import to_internal, to_external
from .stats import letter_distribution
from .transform import PEKey, RoundParams

BYTE_ORDERS = {2: 1, 4: 2, 16: 4, 256: 8}


class CodecError(ValueError):
    pass


class KeyFormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _bits(a):
    try:
        return BYTE_ORDERS[a]
    except KeyError:
        raise CodecError(f"byte codec supports orders {sorted(BYTE_ORDERS)}, not {a}") from None


def bytes_to_symbols(data: bytes, a: int) -> np.ndarray:
    """Split each byte big-endian into ``log2(a)``-bit groups; group ``g`` -> symbol ``g + 1``."""
    bits = _bits(a)
    raw = np.frombuffer(bytes(data), dtype=np.uint8).astype(np.int64)
    per_byte = 8 // bits
    shifts = np.arange(per_byte - 1, -1, -1) * bits
    return ((raw[:, None] >> shifts) & (a - 1)).ravel() + 1


def symbols_to_bytes(symbols, a: int) -> bytes:
    bits = _bits(a)
    per_byte = 8 // bits
    x = to_internal(symbols, a)
    if x.size % per_byte:
        raise CodecError(f"length {x.size} not divisible by {per_byte}")
    shifts = np.arange(per_byte - 1, -1, -1) * bits
    return (x.reshape(-1, per_byte) << shifts).sum(axis=1).astype(np.uint8).tobytes()


def parse_symbol_text(text: str, a: int) -> np.ndarray:
    tokens = text.split()
    values = np.empty(len(tokens), dtype=np.int64)
    for i, tok in enumerate(tokens):
        try:
            v = int(tok)
        except ValueError:
            raise CodecError(f"token {i + 1} ({tok!r}) is not an integer") from None
        if not 1 <= v <= a:
            raise CodecError(f"token {i + 1} value {v} outside 1..{a}")
        values[i] = v
    return values


def format_symbol_text(symbols) -> str:
    return " ".join(map(str, np.asarray(symbols).tolist())) + "\n"


def sample_message(p, k: int, seed=None) -> np.ndarray:
    """``k`` independent letters drawn from ``p`` by inverse CDF.

    Uses numpy's default generator (PCG64) seeded with ``seed``.
    """
    p = letter_distribution(p)
    if k < 1:
        raise ValueError("message length must be at least 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(k), side="right")
    return to_external(idx.astype(np.int64))


def serialize_key(key: PEKey) -> str:
    lines = ["PEKEY 1", f"order {key.order}"]
    lines += ["row " + " ".join(map(str, row)) for row in key.quasigroup.rows()]
    lines += [f"round {r.leader} {r.d1}" for r in key.rounds]
    return "\n".join(lines) + "\n"


def _ints(fields, lineno):
    out = []
    for f in fields:
        if not (f.isascii() and f.isdigit()) or (f.startswith("0") and f != "0"):
            raise KeyFormatError(lineno, f"expected a canonical positive integer, got {f!r}")
        out.append(int(f))
    return out


def parse_key(text: str) -> PEKey:
    """Parse a key file; the text must be in canonical form."""
    if "\r" in text:
        raise KeyFormatError(1, "CR characters are not allowed; use LF line endings")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "PEKEY 1":
        raise KeyFormatError(1, "expected header 'PEKEY 1'")
    fields = lines[1].split(" ") if len(lines) > 1 else []
    if len(fields) != 2 or fields[0] != "order":
        raise KeyFormatError(2, "expected 'order <a>'")
    (a,) = _ints(fields[1:], 2)
    if a < 2:
        raise KeyFormatError(2, f"order must be at least 2, got {a}")
    rows = []
    for i in range(a):
        lineno = 3 + i
        if lineno > len(lines):
            raise KeyFormatError(lineno, f"expected {a} 'row' lines, found {i}")
        fields = lines[lineno - 1].split(" ")
        if fields[0] != "row" or len(fields) != a + 1:
            raise KeyFormatError(lineno, f"expected 'row' followed by {a} symbols")
        rows.append(_ints(fields[1:], lineno))
    try:
        table = validate_table(rows, a)
    except InvalidTableError as exc:
        raise KeyFormatError(2 + (exc.row or 1), str(exc)) from None
    rounds = []
    for lineno in range(3 + a, len(lines) + 1):
        fields = lines[lineno - 1].split(" ")
        if fields[0] != "round" or len(fields) != 3:
            raise KeyFormatError(lineno, "expected 'round <leader> <d1>'")
        leader, d1 = _ints(fields[1:], lineno)
        if not 1 <= leader <= a:
            raise KeyFormatError(lineno, f"leader {leader} outside 1..{a}")
        try:
            rounds.append(RoundParams(leader, d1))
        except ValueError as exc:
            raise KeyFormatError(lineno, str(exc)) from None
    if not rounds:
        raise KeyFormatError(len(lines) + 1, "missing 'round' lines")
    return PEKey(table, tuple(rounds))
