# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled transition kernels; semantics identical to pure.py."""

from cpython cimport array
import array

IMPL = "compiled"


def refine_round(int n, int k, delta, block):
    cdef array.array dar = array.array('l', delta)
    cdef array.array bar = array.array('l', block)
    cdef long[:] d = dar
    cdef long[:] b = bar
    cdef array.array out_arr = array.array('l', bytes(8 * n))
    cdef long[:] out = out_arr
    cdef dict sig_ids = {}
    cdef int q, s
    cdef long bid
    cdef tuple sig
    for q in range(n):
        sig = (b[q],) + tuple([b[d[q * k + s]] for s in range(k)])
        if sig in sig_ids:
            bid = sig_ids[sig]
        else:
            bid = len(sig_ids)
            sig_ids[sig] = bid
        out[q] = bid
    return list(out_arr)


def close_transitions(int n, int k, delta, int cap):
    cdef array.array dar = array.array('l', delta)
    cdef long[:] d = dar
    cdef list rows = []
    cdef list via = []
    cdef dict index = {}
    cdef list frontier, next_frontier
    cdef tuple ident = tuple(range(n))
    cdef tuple f, h
    cdef int fi, s, q
    cdef array.array buf_arr = array.array('l', bytes(8 * n))
    cdef long[:] buf = buf_arr

    rows.append(ident)
    via.append(None)
    index[ident] = 0
    frontier = [0]
    while frontier:
        next_frontier = []
        for fi in frontier:
            f = rows[fi]
            for s in range(k):
                for q in range(n):
                    buf[q] = d[(<long> f[q]) * k + s]
                h = tuple(buf_arr)
                if h not in index:
                    if len(rows) >= cap:
                        return rows, via, True
                    index[h] = len(rows)
                    rows.append(h)
                    via.append((fi, s))
                    next_frontier.append(index[h])
        frontier = next_frontier
    return rows, via, False


def product_witness(int k, d1, f1, int i1, int n1, d2, f2, int i2, int n2):
    cdef array.array d1a = array.array('l', d1)
    cdef array.array d2a = array.array('l', d2)
    cdef array.array f1a = array.array('l', f1)
    cdef array.array f2a = array.array('l', f2)
    cdef long[:] dd1 = d1a
    cdef long[:] dd2 = d2a
    cdef long[:] ff1 = f1a
    cdef long[:] ff2 = f2a
    cdef long start = (<long> i1) * n2 + i2
    cdef dict seen = {start: (-1, -1)}
    cdef list frontier, next_frontier, word
    cdef long pair, q1, q2, r1, r2, nxt, cur
    cdef int s
    if ff1[i1] != ff2[i2]:
        return ()
    frontier = [start]
    while frontier:
        next_frontier = []
        for pair in frontier:
            q1 = pair // n2
            q2 = pair % n2
            for s in range(k):
                r1 = dd1[q1 * k + s]
                r2 = dd2[q2 * k + s]
                nxt = r1 * n2 + r2
                if nxt not in seen:
                    seen[nxt] = (pair, s)
                    if ff1[r1] != ff2[r2]:
                        word = []
                        cur = nxt
                        while cur != start:
                            prev, letter = seen[cur]
                            word.append(letter)
                            cur = prev
                        word.reverse()
                        return tuple(word)
                    next_frontier.append(nxt)
        frontier = next_frontier
    return None
