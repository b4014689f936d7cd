"""Reference kernels in Python/numpy.

Every function here has a compiled twin in ``_core.pyx`` with the same
signature and the same output, bit for bit.  Arrays are ``int64``.
"""

import numpy as np


def unique_keys(src, dst, n):
    """Sorted, deduplicated edge keys ``src * n + dst``."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    return np.unique(src * n + dst)


def edge_image_keys(src, dst, codes, n_target):
    """Sorted, deduplicated keys of the edges ``(codes[s], codes[d])``."""
    codes = np.asarray(codes, dtype=np.int64)
    return unique_keys(codes[src], codes[dst], n_target)


def degree_defects(src, dst, n):
    """First vertex without an outgoing edge and first without an incoming
    edge, ``-1`` where there is none."""
    out_deg = np.bincount(np.asarray(src, dtype=np.int64), minlength=n)
    in_deg = np.bincount(np.asarray(dst, dtype=np.int64), minlength=n)
    missing_out = np.flatnonzero(out_deg[:n] == 0)
    missing_in = np.flatnonzero(in_deg[:n] == 0)
    first_out = int(missing_out[0]) if missing_out.size else -1
    first_in = int(missing_in[0]) if missing_in.size else -1
    return first_out, first_in


def closed_cycles(local):
    """Cycles of a partial injection on ``range(len(local))``.

    ``local[i]`` is the image of ``i`` or ``-1`` when the image leaves the
    set.  Only cycles that close up inside the set are reported, as two
    arrays ``(mins, lengths)`` ordered by minimal element.
    """
    local = [int(v) for v in local]
    size = len(local)
    seen = [False] * size
    mins = []
    lengths = []
    for start in range(size):
        if seen[start]:
            continue
        length = 0
        x = start
        closed = False
        while True:
            seen[x] = True
            length += 1
            x = local[x]
            if x < 0:
                break
            if x == start:
                closed = True
                break
            if seen[x]:
                break
        if closed:
            mins.append(start)
            lengths.append(length)
    return np.array(mins, dtype=np.int64), np.array(lengths, dtype=np.int64)


def witness_arrays(pi1, pi2, total, base):
    """Swap witness ``(a, b)`` on ``range(total)``, zero-based.

    ``pi1``/``pi2`` permute ``range(s)``; the exchanger sends ``x`` to
    ``base + x``.
    """
    pi1 = np.asarray(pi1, dtype=np.int64)
    pi2 = np.asarray(pi2, dtype=np.int64)
    s = pi1.shape[0]
    a = np.arange(total, dtype=np.int64)
    b = np.arange(total, dtype=np.int64)
    a[:s] = pi1
    a[base:base + s] = base + pi2
    b[:s] = base + np.arange(s)
    b[base:base + s] = np.arange(s)
    return a, b


def witness_sweep(perms, block_of, n, base):
    """Check the Swap witness for every ordered pair of rows of ``perms``.

    Returns ``(passed, fail_i, fail_j)`` with ``(-1, -1)`` when nothing
    failed.
    """
    perms = np.asarray(perms, dtype=np.int64)
    block_of = np.asarray(block_of, dtype=np.int64)
    count, s = perms.shape
    total = block_of.shape[0]
    ident = np.arange(total, dtype=np.int64)
    b = ident.copy()
    b[:s] = base + np.arange(s)
    b[base:base + s] = np.arange(s)

    def in_level(maps):
        # rows of `maps` preserve J^n and each later block
        blocks = block_of[maps]
        ok_head = (blocks[:, :s] <= n).all(axis=1)
        ok_tail = (blocks[:, s:] == block_of[s:]).all(axis=1)
        return ok_head & ok_tail

    passed = 0
    for i in range(count):
        a = np.tile(ident, (count, 1))
        a[:, :s] = perms[i]
        a[:, base:base + s] = base + perms
        c = b[np.take_along_axis(a, np.tile(b, (count, 1)), axis=1)]
        ok = in_level(a) & (a[:, :s] == perms[i]).all(axis=1)
        ok &= in_level(c) & (c[:, :s] == perms).all(axis=1)
        bad = np.flatnonzero(~ok)
        if bad.size:
            return passed + int(bad[0]), i, int(bad[0])
        passed += count
    return passed, -1, -1
