# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Same contract as ``_core_py``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t
from libc.stdlib cimport qsort

cnp.import_array()


cdef int _cmp_i64(const void *a, const void *b) noexcept nogil:
    cdef int64_t x = (<const int64_t *> a)[0]
    cdef int64_t y = (<const int64_t *> b)[0]
    return (x > y) - (x < y)


cdef inline void _sort_segment(int64_t *seg, Py_ssize_t length) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int64_t v
    if length > 24:
        qsort(seg, length, sizeof(int64_t), _cmp_i64)
        return
    for i in range(1, length):
        v = seg[i]
        j = i - 1
        while j >= 0 and seg[j] > v:
            seg[j + 1] = seg[j]
            j -= 1
        seg[j + 1] = v


def edge_image_keys(src, dst, codes, int64_t n_target):
    cdef const int64_t[::1] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef const int64_t[::1] d = np.ascontiguousarray(dst, dtype=np.int64)
    cdef const int64_t[::1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef Py_ssize_t m = s.shape[0]
    cdef Py_ssize_t i, p, j, seg
    cdef int64_t u, v
    starts_arr = np.zeros(n_target + 1, dtype=np.int64)
    fill_arr = np.empty(max(m, 1), dtype=np.int64)
    mark_arr = np.full(max(n_target, 1), -1, dtype=np.int64)
    out_arr = np.empty(max(m, 1), dtype=np.int64)
    cdef int64_t[::1] starts = starts_arr
    cdef int64_t[::1] fill = fill_arr
    cdef int64_t[::1] mark = mark_arr
    cdef int64_t[::1] out = out_arr
    with nogil:
        for i in range(m):
            starts[c[s[i]] + 1] += 1
        for u in range(n_target):
            starts[u + 1] += starts[u]
        for i in range(m):
            u = c[s[i]]
            fill[starts[u]] = c[d[i]]
            starts[u] += 1
        # starts[u] now holds the end of bucket u
        j = 0
        p = 0
        for u in range(n_target):
            seg = j
            while p < starts[u]:
                v = fill[p]
                if mark[v] != u:
                    mark[v] = u
                    out[j] = v
                    j += 1
                p += 1
            _sort_segment(&out[seg], j - seg)
            for i in range(seg, j):
                out[i] = u * n_target + out[i]
    return out_arr[:j].copy()


def unique_keys(src, dst, int64_t n):
    return edge_image_keys(src, dst, np.arange(n, dtype=np.int64), n)


def degree_defects(src, dst, int64_t n):
    cdef const int64_t[::1] s = np.ascontiguousarray(src, dtype=np.int64)
    cdef const int64_t[::1] d = np.ascontiguousarray(dst, dtype=np.int64)
    cdef Py_ssize_t m = s.shape[0]
    cdef Py_ssize_t i
    out_arr = np.zeros(max(n, 1), dtype=np.uint8)
    in_arr = np.zeros(max(n, 1), dtype=np.uint8)
    cdef unsigned char[::1] has_out = out_arr
    cdef unsigned char[::1] has_in = in_arr
    cdef int64_t first_out = -1, first_in = -1
    with nogil:
        for i in range(m):
            has_out[s[i]] = 1
            has_in[d[i]] = 1
        for i in range(n):
            if first_out < 0 and not has_out[i]:
                first_out = i
            if first_in < 0 and not has_in[i]:
                first_in = i
    return int(first_out), int(first_in)


def closed_cycles(local):
    cdef const int64_t[::1] f = np.ascontiguousarray(local, dtype=np.int64)
    cdef Py_ssize_t size = f.shape[0]
    seen_arr = np.zeros(max(size, 1), dtype=np.uint8)
    mins_arr = np.empty(max(size, 1), dtype=np.int64)
    lens_arr = np.empty(max(size, 1), dtype=np.int64)
    cdef unsigned char[::1] seen = seen_arr
    cdef int64_t[::1] mins = mins_arr
    cdef int64_t[::1] lens = lens_arr
    cdef Py_ssize_t start, count = 0
    cdef int64_t x, length
    cdef bint closed
    with nogil:
        for start in range(size):
            if seen[start]:
                continue
            length = 0
            x = start
            closed = False
            while True:
                seen[x] = 1
                length += 1
                x = f[x]
                if x < 0:
                    break
                if x == start:
                    closed = True
                    break
                if seen[x]:
                    break
            if closed:
                mins[count] = start
                lens[count] = length
                count += 1
    return mins_arr[:count].copy(), lens_arr[:count].copy()


def witness_arrays(pi1, pi2, int64_t total, int64_t base):
    cdef const int64_t[::1] p1 = np.ascontiguousarray(pi1, dtype=np.int64)
    cdef const int64_t[::1] p2 = np.ascontiguousarray(pi2, dtype=np.int64)
    cdef Py_ssize_t s = p1.shape[0], x
    a_arr = np.arange(total, dtype=np.int64)
    b_arr = np.arange(total, dtype=np.int64)
    cdef int64_t[::1] a = a_arr
    cdef int64_t[::1] b = b_arr
    for x in range(s):
        a[x] = p1[x]
        a[base + x] = base + p2[x]
        b[x] = base + x
        b[base + x] = x
    return a_arr, b_arr


cdef inline bint _in_level(const int64_t *f, const int64_t[::1] block_of,
                           Py_ssize_t s, Py_ssize_t total, int64_t n) noexcept nogil:
    cdef Py_ssize_t x
    for x in range(s):
        if block_of[f[x]] > n:
            return False
    for x in range(s, total):
        if block_of[f[x]] != block_of[x]:
            return False
    return True


def witness_sweep(perms, block_of, int64_t n, int64_t base):
    cdef const int64_t[:, ::1] P = np.ascontiguousarray(perms, dtype=np.int64)
    cdef const int64_t[::1] blk = np.ascontiguousarray(block_of, dtype=np.int64)
    cdef Py_ssize_t count = P.shape[0], s = P.shape[1], total = blk.shape[0]
    cdef Py_ssize_t i, j, x
    a_arr = np.arange(total, dtype=np.int64)
    b_arr = np.arange(total, dtype=np.int64)
    c_arr = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] a = a_arr
    cdef int64_t[::1] b = b_arr
    cdef int64_t[::1] c = c_arr
    cdef int64_t passed = 0, fail_i = -1, fail_j = -1
    cdef bint ok
    for x in range(s):
        b[x] = base + x
        b[base + x] = x
    with nogil:
        for i in range(count):
            for x in range(s):
                a[x] = P[i, x]
            for j in range(count):
                for x in range(s):
                    a[base + x] = base + P[j, x]
                for x in range(total):
                    c[x] = b[a[b[x]]]
                ok = _in_level(&a[0], blk, s, total, n) and _in_level(&c[0], blk, s, total, n)
                if ok:
                    for x in range(s):
                        if a[x] != P[i, x] or c[x] != P[j, x]:
                            ok = False
                            break
                if not ok:
                    fail_i = i
                    fail_j = j
                    break
                passed += 1
            if fail_i >= 0:
                break
    return int(passed), int(fail_i), int(fail_j)
