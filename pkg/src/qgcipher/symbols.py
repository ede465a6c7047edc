"""Conversions between 1-based symbol strings and 0-based internal arrays.

A symbol string is any integer sequence with values in ``1..a``; functions
in this package return them as 1-D ``int64`` numpy arrays.
"""
import numpy as np

from .quasigroup import SymbolRangeError


def to_internal(symbols, order: int) -> np.ndarray:
    arr = np.asarray(symbols)
    if arr.ndim != 1:
        raise ValueError(f"symbol string must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    if not np.issubdtype(arr.dtype, np.integer):
        raise SymbolRangeError(f"symbols must be integers, got dtype {arr.dtype}")
    arr = arr.astype(np.int64) - 1
    bad = np.flatnonzero((arr < 0) | (arr >= order))
    if bad.size:
        i = bad[0]
        raise SymbolRangeError(
            f"symbol {arr[i] + 1} at position {i + 1} outside 1..{order}"
        )
    return arr


def to_external(internal: np.ndarray) -> np.ndarray:
    return internal + 1
