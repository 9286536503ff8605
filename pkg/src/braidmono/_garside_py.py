"""Pure-Python left-greedy Garside normal form.

A simple element (positive permutation braid) is stored as a pair of lists:
``pos[j]`` is the final position of the strand that starts at ``j`` and
``inv`` is its inverse.  All indices are 0-based here.

The running state of a word is ``Delta^p * B_1 ... B_k * Delta^q``.  Letters are
appended on the right; a negative letter is rewritten through the Garside
element so that only simple factors are ever appended.
"""

from __future__ import annotations

from typing import Sequence

NormalFormTuple = tuple[int, tuple[tuple[int, ...], ...]]


def _fix_pair(a_pos: list[int], a_inv: list[int], b_pos: list[int], b_inv: list[int], n: int) -> bool:
    """Make (A, B) left-weighted in place. Returns True if anything moved."""
    moved = False
    i = 0
    while i < n - 1:
        # i in L(B): strands starting at i, i+1 cross in B.
        # i not in R(A): strands ending at i, i+1 in A have not crossed yet.
        if b_pos[i] > b_pos[i + 1] and a_inv[i] < a_inv[i + 1]:
            s, t = a_inv[i], a_inv[i + 1]
            a_inv[i], a_inv[i + 1] = t, s
            a_pos[s], a_pos[t] = i + 1, i
            u, v = b_pos[i], b_pos[i + 1]
            b_pos[i], b_pos[i + 1] = v, u
            b_inv[v], b_inv[u] = i, i + 1
            moved = True
            i = i - 1 if i > 0 else 0
        else:
            i += 1
    return moved


def _tau(pos: list[int], n: int) -> list[int]:
    return [n - 1 - pos[n - 1 - j] for j in range(n)]


def _inverse(pos: list[int]) -> list[int]:
    inv = [0] * len(pos)
    for j, p in enumerate(pos):
        inv[p] = j
    return inv


def normal_form(n: int, letters: Sequence[int]) -> NormalFormTuple:
    """Left normal form of a word of signed 1-based generator indices."""
    if n < 1:
        raise ValueError("strand count must be positive")
    ident = list(range(n))
    delta = [n - 1 - j for j in range(n)]
    front = 0
    back = 0
    pos_list: list[list[int]] = []
    inv_list: list[list[int]] = []

    for letter in letters:
        i = abs(letter) - 1
        if not 0 <= i < n - 1:
            raise ValueError(f"generator {letter} out of range for {n} strands")
        if letter > 0:
            if back % 2:
                i = n - 2 - i
            pos = ident[:]
            pos[i], pos[i + 1] = i + 1, i
        else:
            back -= 1
            pos = delta[:]
            # Delta * s_i^{-1}: reverse, then undo the crossing at i, i+1.
            for j in range(n):
                if pos[j] == i:
                    pos[j] = i + 1
                elif pos[j] == i + 1:
                    pos[j] = i
            if back % 2:
                pos = _tau(pos, n)
        pos_list.append(pos)
        inv_list.append(_inverse(pos))

        k = len(pos_list) - 2
        while k >= 0:
            if not _fix_pair(pos_list[k], inv_list[k], pos_list[k + 1], inv_list[k + 1], n):
                break
            k -= 1

        while pos_list and pos_list[0] == delta:
            pos_list.pop(0)
            inv_list.pop(0)
            front += 1
        while pos_list and pos_list[-1] == ident:
            pos_list.pop()
            inv_list.pop()

    if back % 2:
        pos_list = [_tau(p, n) for p in pos_list]
    return front + back, tuple(tuple(p) for p in pos_list)
