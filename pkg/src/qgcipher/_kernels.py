"""Compiled inner loops.  Everything here works on 0-based integer arrays."""
import numpy as np
from numba import njit


@njit(cache=True)
def e_forward(table, leader, x, out):
    y = leader
    for i in range(x.shape[0]):
        y = table[y, x[i]]
        out[i] = y


@njit(cache=True)
def pe_forward(stack, leader, d1, x, out, sched):
    """One PE round.  Writes ciphertext into ``out`` and one row per block
    ``(start, planned, actual, s, leader)`` into ``sched``; returns the
    number of blocks."""
    a = stack.shape[1]
    k = x.shape[0]
    pos = 0
    d = d1
    lead = leader
    nb = 0
    while pos < k:
        s = d % 6
        n = min(d, k - pos)
        sched[nb, 0] = pos
        sched[nb, 1] = d
        sched[nb, 2] = n
        sched[nb, 3] = s
        sched[nb, 4] = lead
        nb += 1
        t = stack[s]
        y = lead
        for i in range(pos, pos + n):
            y = t[y, x[i]]
            out[i] = y
        pos += n
        if pos < k:
            d = a * (out[pos - 2] + 1) + out[pos - 1] + 1
            lead = out[pos - 1]
    return nb


@njit(cache=True)
def pe_backward(stack, inverse_index, leader, d1, y, out, sched):
    """Inverse of :func:`pe_forward`; the schedule is read off ``y``.

    ``stack[inverse_index[s]]`` is the right inverse of ``stack[s]``.
    """
    a = stack.shape[1]
    k = y.shape[0]
    pos = 0
    d = d1
    lead = leader
    nb = 0
    while pos < k:
        s = d % 6
        n = min(d, k - pos)
        sched[nb, 0] = pos
        sched[nb, 1] = d
        sched[nb, 2] = n
        sched[nb, 3] = s
        sched[nb, 4] = lead
        nb += 1
        inv = stack[inverse_index[s]]
        prev = lead
        for i in range(pos, pos + n):
            out[i] = inv[prev, y[i]]
            prev = y[i]
        pos += n
        if pos < k:
            d = a * (y[pos - 2] + 1) + y[pos - 1] + 1
            lead = y[pos - 1]
    return nb


def schedule_buffer(k, d1, a):
    # blocks after the first have length >= a + 1
    return np.empty((2 + max(k - min(d1, k), 0) // (a + 1), 5), dtype=np.int64)
