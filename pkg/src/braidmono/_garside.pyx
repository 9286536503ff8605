# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled left-greedy Garside normal form; same contract as _garside_py."""

from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy


cdef inline bint _fix_pair(int* a_pos, int* a_inv, int* b_pos, int* b_inv, int n) nogil:
    cdef bint moved = False
    cdef int i = 0
    cdef int s, t, u, v
    while i < n - 1:
        if b_pos[i] > b_pos[i + 1] and a_inv[i] < a_inv[i + 1]:
            s = a_inv[i]
            t = a_inv[i + 1]
            a_inv[i] = t
            a_inv[i + 1] = s
            a_pos[s] = i + 1
            a_pos[t] = i
            u = b_pos[i]
            v = b_pos[i + 1]
            b_pos[i] = v
            b_pos[i + 1] = u
            b_inv[v] = i
            b_inv[u] = i + 1
            moved = True
            if i > 0:
                i -= 1
        else:
            i += 1
    return moved


cdef inline bint _is_delta(int* pos, int n) nogil:
    cdef int j
    for j in range(n):
        if pos[j] != n - 1 - j:
            return False
    return True


cdef inline bint _is_ident(int* pos, int n) nogil:
    cdef int j
    for j in range(n):
        if pos[j] != j:
            return False
    return True


def normal_form(int n, letters):
    """Left normal form of a word of signed 1-based generator indices."""
    if n < 1:
        raise ValueError("strand count must be positive")
    cdef Py_ssize_t m = len(letters)
    cdef int* word = <int*> malloc((m + 1) * sizeof(int))
    cdef Py_ssize_t cap = 16
    cdef int* pos = <int*> malloc(cap * n * sizeof(int))
    cdef int* inv = <int*> malloc(cap * n * sizeof(int))
    cdef int* tmp = <int*> malloc(n * sizeof(int))
    if word == NULL or pos == NULL or inv == NULL or tmp == NULL:
        free(word); free(pos); free(inv); free(tmp)
        raise MemoryError()
    cdef Py_ssize_t idx
    for idx in range(m):
        word[idx] = letters[idx]
        if word[idx] == 0 or word[idx] >= n or word[idx] <= -n:
            free(word); free(pos); free(inv); free(tmp)
            raise ValueError(f"generator {letters[idx]} out of range for {n} strands")

    cdef int front = 0
    cdef int back = 0
    cdef Py_ssize_t start = 0   # index of first live factor
    cdef Py_ssize_t count = 0   # live factors
    cdef Py_ssize_t k, last
    cdef int i, j, letter
    cdef int* p
    cdef int* q
    try:
        for idx in range(m):
            letter = word[idx]
            if start + count + 1 > cap:
                # compact first, grow if still needed
                if start > 0:
                    memcpy(pos, pos + start * n, count * n * sizeof(int))
                    memcpy(inv, inv + start * n, count * n * sizeof(int))
                    start = 0
                if count + 1 > cap:
                    cap *= 2
                    pos = <int*> realloc(pos, cap * n * sizeof(int))
                    inv = <int*> realloc(inv, cap * n * sizeof(int))
                    if pos == NULL or inv == NULL:
                        raise MemoryError()
            last = start + count
            p = pos + last * n
            q = inv + last * n
            if letter > 0:
                i = letter - 1
                if back % 2:
                    i = n - 2 - i
                for j in range(n):
                    p[j] = j
                p[i] = i + 1
                p[i + 1] = i
            else:
                i = -letter - 1
                back -= 1
                for j in range(n):
                    tmp[j] = n - 1 - j
                    if tmp[j] == i:
                        tmp[j] = i + 1
                    elif tmp[j] == i + 1:
                        tmp[j] = i
                if back % 2:
                    for j in range(n):
                        p[j] = n - 1 - tmp[n - 1 - j]
                else:
                    for j in range(n):
                        p[j] = tmp[j]
            for j in range(n):
                q[p[j]] = j
            count += 1

            k = start + count - 2
            while k >= start:
                if not _fix_pair(pos + k * n, inv + k * n, pos + (k + 1) * n, inv + (k + 1) * n, n):
                    break
                k -= 1

            while count > 0 and _is_delta(pos + start * n, n):
                start += 1
                count -= 1
                front += 1
            while count > 0 and _is_ident(pos + (start + count - 1) * n, n):
                count -= 1

        factors = []
        for k in range(start, start + count):
            p = pos + k * n
            if back % 2:
                factors.append(tuple([n - 1 - p[n - 1 - j] for j in range(n)]))
            else:
                factors.append(tuple([p[j] for j in range(n)]))
        return front + back, tuple(factors)
    finally:
        free(word)
        free(pos)
        free(inv)
        free(tmp)
