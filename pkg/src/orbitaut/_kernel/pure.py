"""Pure-Python transition kernels.

These are the inner loops of the three pipelines: one Moore refinement
round (minimization), breadth-first closure of the per-letter transition
functions (transition monoids), and synchronous-product search (language
equivalence).  orbitaut._kernel picks these or the compiled twins from
_speedups.pyx at import time; both implementations must agree bit for bit.

Encoding: states are 0..n-1, letters 0..k-1, ``delta[q * k + s]`` is the
successor of q under s.
"""

IMPL = "pure"


def refine_round(n, k, delta, block):
    """One refinement round: split every block by successor-block pattern.

    Returns the new block assignment, numbered by first occurrence so the
    result is canonical for a fixed state order.
    """
    sig_ids = {}
    out = [0] * n
    for q in range(n):
        base = q * k
        sig = (block[q],) + tuple(block[delta[base + s]] for s in range(k))
        bid = sig_ids.get(sig)
        if bid is None:
            bid = len(sig_ids)
            sig_ids[sig] = bid
        out[q] = bid
    return out


def close_transitions(n, k, delta, cap):
    """Close the per-letter transition functions under composition.

    Starts from the identity and explores words breadth-first with letters
    in increasing order, so every function is discovered via its shortlex
    least word.  Returns ``(rows, via, truncated)`` where ``rows[i]`` is the
    i-th function as a tuple, ``via[i] = (parent_row, letter)`` reconstructs
    the witness word (``via[0]`` is None for the identity), and ``truncated``
    reports whether the cap stopped the closure.
    """
    letters = []
    for s in range(k):
        letters.append(tuple(delta[q * k + s] for q in range(n)))
    ident = tuple(range(n))
    rows = [ident]
    via = [None]
    index = {ident: 0}
    frontier = [0]
    while frontier:
        next_frontier = []
        for fi in frontier:
            f = rows[fi]
            for s in range(k):
                g = letters[s]
                h = tuple(g[f[q]] for q in range(n))
                if h not in index:
                    if len(rows) >= cap:
                        return rows, via, True
                    index[h] = len(rows)
                    rows.append(h)
                    via.append((fi, s))
                    next_frontier.append(index[h])
        frontier = next_frontier
    return rows, via, False


def product_witness(k, d1, f1, i1, n1, d2, f2, i2, n2):
    """Search the synchronous product for a pair with differing finality.

    Breadth-first from ``(i1, i2)`` with letters in increasing order, so a
    returned witness word is shortest and lex-least among shortest.  Returns
    the witness as a tuple of letters, or None when the languages agree on
    every word.
    """
    start = i1 * n2 + i2
    seen = {start: (-1, -1)}
    if f1[i1] != f2[i2]:
        return ()
    frontier = [start]
    while frontier:
        next_frontier = []
        for pair in frontier:
            q1, q2 = divmod(pair, n2)
            for s in range(k):
                r1 = d1[q1 * k + s]
                r2 = d2[q2 * k + s]
                nxt = r1 * n2 + r2
                if nxt not in seen:
                    seen[nxt] = (pair, s)
                    if f1[r1] != f2[r2]:
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
