"""Compiled inner loops for the odd cycle transversal DP.

Keys are base-3 integers (0 = deleted, 1 = left, 2 = right). A bound table
maps the digits found at ``powers`` (most significant first) to the cheapest
completion of one piece; an empty ``powers`` with a one-entry table is a
constant term.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _term(key, powers, table):
    index = 0
    for p in powers:
        index = index * 3 + (key // p) % 3
    return table[index]


@njit(cache=True)
def oct_introduce(keys, costs, nbr_powers, weight, old_powers, old_table, new_powers, new_table, limit):
    n = len(keys)
    out_keys = np.empty(3 * n, dtype=np.int64)
    out_costs = np.empty(3 * n, dtype=np.int64)
    out_prev = np.empty(3 * n, dtype=np.int64)
    out_choice = np.empty(3 * n, dtype=np.int64)
    size = 0
    for i in range(n):
        key = keys[i]
        has_l = False
        has_r = False
        for p in nbr_powers:
            d = (key // p) % 3
            if d == 1:
                has_l = True
            elif d == 2:
                has_r = True
        base = costs[i] - _term(key, old_powers, old_table)
        for d in range(3):
            if (d == 1 and has_l) or (d == 2 and has_r):
                continue
            new_key = key * 3 + d
            c = base + _term(new_key, new_powers, new_table)
            if d == 0:
                c += weight
            if c <= limit:
                out_keys[size] = new_key
                out_costs[size] = c
                out_prev[size] = key
                out_choice[size] = d
                size += 1
    return out_keys[:size], out_costs[:size], out_prev[:size], out_choice[:size]


@njit(cache=True)
def oct_forget(keys, costs, power, old_powers, old_table, new_powers, new_table, limit):
    """Drop the digit at ``power``; results are unsorted and may repeat keys."""
    n = len(keys)
    out_keys = np.empty(n, dtype=np.int64)
    out_costs = np.empty(n, dtype=np.int64)
    out_prev = np.empty(n, dtype=np.int64)
    out_choice = np.empty(n, dtype=np.int64)
    size = 0
    for i in range(n):
        key = keys[i]
        new_key = (key // (power * 3)) * power + key % power
        c = costs[i] - _term(key, old_powers, old_table) + _term(new_key, new_powers, new_table)
        if c <= limit:
            out_keys[size] = new_key
            out_costs[size] = c
            out_prev[size] = key
            out_choice[size] = (key // power) % 3
            size += 1
    return out_keys[:size], out_costs[:size], out_prev[:size], out_choice[:size]
