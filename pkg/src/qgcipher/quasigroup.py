"""Finite quasigroups stored as Latin-square operation tables.

Symbols are exposed with the 1-based labels ``1..a``.  Tables are stored
0-based (``internal = external - 1``) so they can be used directly as
lookup arrays by the transform kernels.
"""
from __future__ import annotations

import numpy as np

PARASTROPHE_NAMES = {1: "*", 2: "\\", 3: "/", 4: ".", 5: "//", 6: "\\\\"}


class InvalidTableError(ValueError):
    """Raised when a table is not a Latin square over ``1..a``.

    ``row`` and ``column`` hold the 1-based offending index when known.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class SymbolRangeError(ValueError):
    """Raised when a symbol lies outside the alphabet."""


SYMBOL_DTYPE = np.int32
# index of the parastrophe that is the right inverse of parastrophe i (0-based)
INVERSE_INDEX = np.array([1, 0, 5, 4, 3, 2])


def _readonly(arr):
    arr = np.ascontiguousarray(arr, dtype=SYMBOL_DTYPE)
    arr.setflags(write=False)
    return arr


def _right_inverse(table):
    # inv[u, table[u, x]] = x; each row is a permutation
    return np.argsort(table, axis=1)


def _left_inverse(table):
    # inv[table[z, y], y] = z; each column is a permutation
    return np.argsort(table, axis=0)


class OperationTable:
    """An order-``a`` quasigroup operation given by its Cayley table.

    Construct instances through :func:`validate_table` (1-based input) or
    :meth:`from_internal` (already validated 0-based array).  Instances are
    immutable.
    """

    def __init__(self, internal, right_inverse=None):
        self._table = _readonly(internal)
        self._inverse = None if right_inverse is None else _readonly(right_inverse)

    @classmethod
    def from_internal(cls, internal) -> "OperationTable":
        return cls(internal)

    @property
    def order(self) -> int:
        return self._table.shape[0]

    @property
    def table(self) -> np.ndarray:
        """0-based read-only ``a x a`` array."""
        return self._table

    @property
    def right_inverse(self) -> np.ndarray:
        """0-based array ``r`` with ``table[u, r[u, v]] == v``."""
        if self._inverse is None:
            self._inverse = _readonly(_right_inverse(self._table))
        return self._inverse

    def rows(self) -> list[list[int]]:
        """Rows with 1-based symbols."""
        return (self._table + 1).tolist()

    def check_symbol(self, *symbols: int) -> None:
        for s in symbols:
            if not 1 <= s <= self.order:
                raise SymbolRangeError(f"symbol {s} outside 1..{self.order}")

    def __call__(self, x: int, y: int) -> int:
        return apply_op(self, x, y)

    def __eq__(self, other):
        if not isinstance(other, OperationTable):
            return NotImplemented
        return np.array_equal(self._table, other._table)

    def __hash__(self):
        return hash(self._table.tobytes())

    def __repr__(self):
        return f"OperationTable(order={self.order}, rows={self.rows()})"


def validate_table(raw, a: int | None = None) -> OperationTable:
    """Check that ``raw`` (1-based entries) is a Latin square and wrap it."""
    if a is None:
        a = len(raw)
    if a < 2:
        raise InvalidTableError(f"order must be at least 2, got {a}")
    try:
        arr = np.array(raw, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise InvalidTableError(f"table is not a rectangular integer array: {exc}") from None
    if arr.shape != (a, a):
        raise InvalidTableError(f"expected a {a}x{a} table, got shape {arr.shape}")
    bad = np.argwhere((arr < 1) | (arr > a))
    if bad.size:
        r, c = bad[0]
        raise InvalidTableError(
            f"entry {arr[r, c]} at row {r + 1}, column {c + 1} outside 1..{a}",
            row=r + 1,
            column=c + 1,
        )
    expected = np.arange(1, a + 1)
    for r in range(a):
        if not np.array_equal(np.sort(arr[r]), expected):
            raise InvalidTableError(f"duplicate in row {r + 1}", row=r + 1)
    for c in range(a):
        if not np.array_equal(np.sort(arr[:, c]), expected):
            raise InvalidTableError(f"duplicate in column {c + 1}", column=c + 1)
    return OperationTable(arr - 1)


def derive_parastrophe(base: OperationTable, s: int) -> OperationTable:
    """Return the table of the parastrophe ``f_s`` of ``base``.

    ``f1(x,y) = x*y``, ``f2(x,y) = z`` iff ``x*z = y``, ``f3(x,y) = z`` iff
    ``z*y = x``, ``f4(x,y) = y*x``, ``f5(x,y) = z`` iff ``z*x = y`` and
    ``f6(x,y) = z`` iff ``y*z = x``.
    """
    if not 1 <= s <= 6:
        raise ValueError(f"parastrophe index must be in 1..6, got {s}")
    if s == 1:
        return base
    return ParastropheSet(base)[s]


class ParastropheSet:
    """The six parastrophes of a quasigroup, precomputed with their inverses.

    Indexing is 1-based: ``pset[1]`` is the base operation.  ``stack`` is the
    ``(6, a, a)`` array used by the kernels; the right inverse of
    ``stack[i]`` is ``stack[INVERSE_INDEX[i]]``.
    """

    def __init__(self, base: OperationTable):
        self.base = base
        t = base.table
        r = base.right_inverse
        lft = _left_inverse(t)
        # the right inverse of each parastrophe is again a parastrophe:
        # f1<->f2, f3<->f6, f4<->f5
        self.stack = _readonly(np.stack([t, r, lft, t.T, lft.T, r.T]))
        self.tables = (base,) + tuple(
            OperationTable(self.stack[i], self.stack[INVERSE_INDEX[i]]) for i in range(1, 6)
        )

    @property
    def order(self) -> int:
        return self.base.order

    def __getitem__(self, s: int) -> OperationTable:
        if not 1 <= s <= 6:
            raise IndexError(f"parastrophe index must be in 1..6, got {s}")
        return self.tables[s - 1]

    def __repr__(self):
        return f"ParastropheSet(order={self.order})"


def parastrophe_set(base: OperationTable) -> ParastropheSet:
    return ParastropheSet(base)


def apply_op(op: OperationTable, x: int, y: int) -> int:
    op.check_symbol(x, y)
    return int(op.table[x - 1, y - 1]) + 1


def solve_right_operand(op: OperationTable, u: int, v: int) -> int:
    """The unique ``x`` with ``op(u, x) == v``."""
    op.check_symbol(u, v)
    return int(op.right_inverse[u - 1, v - 1]) + 1


def random_quasigroup(a: int, seed: int | None = None) -> OperationTable:
    """Random Latin square isotopic to the cyclic group of order ``a``.

    Independent uniform row, column and symbol permutations are applied to
    ``(x + y) mod a``.  This does not sample uniformly from all quasigroups
    of order ``a``.
    """
    if a < 2:
        raise ValueError(f"order must be at least 2, got {a}")
    rng = np.random.default_rng(seed)
    rows = rng.permutation(a)
    cols = rng.permutation(a)
    syms = rng.permutation(a)
    return OperationTable(syms[(rows[:, None] + cols[None, :]) % a])


# The quasigroup used in the reference experiment (1-based rows).
REFERENCE_ROWS = (
    (1, 2, 4, 3),
    (3, 4, 2, 1),
    (4, 3, 1, 2),
    (2, 1, 3, 4),
)


def reference_quasigroup() -> OperationTable:
    return validate_table(REFERENCE_ROWS, 4)
