"""E-transformation, its chained form, and the parastrophic PE-transformation.

All public functions take and return 1-based symbols.  A PE round splits the
message into blocks.  The first block has the key's length ``d1`` and uses
the key's leader.  Every later block takes its planned length from the last
two ciphertext symbols ``u, v`` of the previous block as ``a*u + v``, and
uses ``v`` as its leader.  Block ``i`` is encrypted with parastrophe
``(d_i mod 6) + 1``.  The final block is cut short when the message runs out.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .quasigroup import INVERSE_INDEX, OperationTable, ParastropheSet, SymbolRangeError
from .symbols import to_external, to_internal

MAX_D1 = 2**62


@dataclass(frozen=True)
class RoundParams:
    leader: int
    d1: int

    def __post_init__(self):
        if not 2 <= self.d1 < MAX_D1:
            raise ValueError(f"d1 must be at least 2, got {self.d1}")
        if self.leader < 1:
            raise SymbolRangeError(f"leader {self.leader} must be >= 1")


@dataclass(frozen=True)
class BlockRecord:
    """Schedule entry for one PE block; ``start`` and ``leader`` are 1-based."""

    start: int
    planned_length: int
    actual_length: int
    parastrophe: int
    leader: int


@dataclass(frozen=True, eq=False)
class PEKey:
    quasigroup: OperationTable
    rounds: tuple[RoundParams, ...] = field(default=())

    def __post_init__(self):
        rounds = tuple(self.rounds)
        object.__setattr__(self, "rounds", rounds)
        if not rounds:
            raise ValueError("a key needs at least one round")
        for r in rounds:
            self.quasigroup.check_symbol(r.leader)

    @property
    def order(self) -> int:
        return self.quasigroup.order

    @cached_property
    def parastrophes(self) -> ParastropheSet:
        return ParastropheSet(self.quasigroup)

    def __eq__(self, other):
        if not isinstance(other, PEKey):
            return NotImplemented
        return self.quasigroup == other.quasigroup and self.rounds == other.rounds

    def __hash__(self):
        return hash((self.quasigroup, self.rounds))


# -- E ---------------------------------------------------------------------

def e_transform(op: OperationTable, leader: int, symbols) -> np.ndarray:
    """``y1 = l*x1``, ``yi = y(i-1)*xi``."""
    op.check_symbol(leader)
    x = to_internal(symbols, op.order)
    out = np.empty_like(x)
    _kernels.e_forward(op.table, leader - 1, x, out)
    return to_external(out)


def e_inverse(op: OperationTable, leader: int, symbols) -> np.ndarray:
    op.check_symbol(leader)
    y = to_internal(symbols, op.order)
    if y.size == 0:
        return to_external(y)
    prev = np.concatenate(([leader - 1], y[:-1]))
    return to_external(op.right_inverse[prev, y])


def _chain_order(ops_and_leaders):
    if not ops_and_leaders:
        raise ValueError("chain must contain at least one (operation, leader) pair")
    orders = {op.order for op, _ in ops_and_leaders}
    if len(orders) != 1:
        raise ValueError(f"alphabet mismatch in chain: orders {sorted(orders)}")


def e_chain(ops_and_leaders: Sequence[tuple[OperationTable, int]], symbols) -> np.ndarray:
    """Apply ``e_transform`` once per pair, first pair first."""
    _chain_order(ops_and_leaders)
    out = symbols
    for op, leader in ops_and_leaders:
        out = e_transform(op, leader, out)
    return np.asarray(out)


def e_chain_inverse(ops_and_leaders: Sequence[tuple[OperationTable, int]], symbols) -> np.ndarray:
    _chain_order(ops_and_leaders)
    out = symbols
    for op, leader in reversed(ops_and_leaders):
        out = e_inverse(op, leader, out)
    return np.asarray(out)


# -- PE --------------------------------------------------------------------

def _check_round(pset: ParastropheSet, params: RoundParams, x: np.ndarray):
    if x.size == 0:
        raise ValueError("PE is not defined on the empty string")
    pset.base.check_symbol(params.leader)


def _records(sched, nb) -> list[BlockRecord]:
    return [
        BlockRecord(int(r[0]) + 1, int(r[1]), int(r[2]), int(r[3]) + 1, int(r[4]) + 1)
        for r in sched[:nb]
    ]


def _encrypt_internal(pset, params, x):
    out = np.empty_like(x)
    sched = _kernels.schedule_buffer(x.size, params.d1, pset.order)
    nb = _kernels.pe_forward(pset.stack, params.leader - 1, params.d1, x, out, sched)
    return out, sched, nb


def _decrypt_internal(pset, params, y):
    out = np.empty_like(y)
    sched = _kernels.schedule_buffer(y.size, params.d1, pset.order)
    nb = _kernels.pe_backward(pset.stack, INVERSE_INDEX, params.leader - 1, params.d1, y, out, sched)
    return out, sched, nb


def pe_round_encrypt(
    pset: ParastropheSet, params: RoundParams, message
) -> tuple[np.ndarray, list[BlockRecord]]:
    """One PE round.  Returns the ciphertext and the block schedule."""
    x = to_internal(message, pset.order)
    _check_round(pset, params, x)
    out, sched, nb = _encrypt_internal(pset, params, x)
    return to_external(out), _records(sched, nb)


def pe_round_decrypt(pset: ParastropheSet, params: RoundParams, cipher) -> np.ndarray:
    y = to_internal(cipher, pset.order)
    _check_round(pset, params, y)
    out, _, _ = _decrypt_internal(pset, params, y)
    return to_external(out)


def pe_trace_schedule(
    pset: ParastropheSet, params: RoundParams, symbols, from_cipher: bool = False
) -> list[BlockRecord]:
    """Block schedule of one round, simulated from a plaintext or read from a ciphertext."""
    s = to_internal(symbols, pset.order)
    _check_round(pset, params, s)
    if from_cipher:
        _, sched, nb = _decrypt_internal(pset, params, s)
    else:
        _, sched, nb = _encrypt_internal(pset, params, s)
    return _records(sched, nb)


def pe_encrypt(key: PEKey, message) -> np.ndarray:
    pset = key.parastrophes
    x = to_internal(message, key.order)
    if x.size == 0:
        raise ValueError("PE is not defined on the empty string")
    for params in key.rounds:
        x, _, _ = _encrypt_internal(pset, params, x)
    return to_external(x)


def pe_decrypt(key: PEKey, cipher) -> np.ndarray:
    pset = key.parastrophes
    y = to_internal(cipher, key.order)
    if y.size == 0:
        raise ValueError("PE is not defined on the empty string")
    for params in reversed(key.rounds):
        y, _, _ = _decrypt_internal(pset, params, y)
    return to_external(y)


def pe_encrypt_rounds(key: PEKey, message) -> list[np.ndarray]:
    """Ciphertext after each round (``result[i]`` is after round ``i + 1``)."""
    pset = key.parastrophes
    x = to_internal(message, key.order)
    if x.size == 0:
        raise ValueError("PE is not defined on the empty string")
    outs = []
    for params in key.rounds:
        x, _, _ = _encrypt_internal(pset, params, x)
        outs.append(to_external(x))
    return outs
