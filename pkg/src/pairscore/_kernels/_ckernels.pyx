# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_py.py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs, sqrt, INFINITY

cnp.import_array()


def equipartition(sorted_vals, Py_ssize_t k):
    cdef double[::1] vals = np.ascontiguousarray(sorted_vals, dtype=np.float64)
    cdef Py_ssize_t n = vals.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t i = 0, j, s, h = 0, curr = 0
    cdef double size = <double>n / <double>k
    while i < n:
        s = 1
        while i + s < n and vals[i + s] == vals[i]:
            s += 1
        if h != 0 and fabs(h + s - size) >= fabs(h - size):
            curr += 1
            h = 0
            if k > curr:
                size = <double>(n - i) / <double>(k - curr)
            else:
                size = INFINITY
        for j in range(s):
            out[i + j] = curr
        i += s
        h += s
    return out_arr, curr + 1


def clumps(sorted_x, rows):
    cdef double[::1] xs = np.ascontiguousarray(sorted_x, dtype=np.float64)
    q_arr = np.array(rows, dtype=np.int64)
    cdef cnp.int64_t[::1] q = q_arr
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i = 0, j, s
    cdef cnp.int64_t c = -1
    cdef bint mixed
    while i < n:
        s = 1
        mixed = False
        while i + s < n and xs[i + s] == xs[i]:
            if q[i + s] != q[i]:
                mixed = True
            s += 1
        if s > 1 and mixed:
            for j in range(s):
                q[i + j] = c
            c -= 1
        i += s
    out_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef cnp.int64_t flag = 0
    for j in range(1, n):
        if q[j] != q[j - 1]:
            flag += 1
        out[j] = flag
    return out_arr, (flag + 1 if n else 0)


cdef inline double _xlogx(double c, double total) nogil:
    cdef double p
    if c <= 0:
        return 0.0
    p = c / total
    return p * log(p)


def optimize_x_axis(rows, Py_ssize_t n_rows, cols, Py_ssize_t n_cols, Py_ssize_t max_cols):
    cdef Py_ssize_t p = n_cols, q = n_rows
    if p <= 1 or q <= 1 or max_cols < 2:
        return np.zeros(max(max_cols - 1, 0))
    cdef cnp.int64_t[::1] r = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.int64_t[::1] cl = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t n = r.shape[0]
    cum_arr = np.zeros((p + 1, q), dtype=np.float64)
    cdef double[:, ::1] cum = cum_arr
    c_arr = np.zeros(p + 1, dtype=np.float64)
    cdef double[::1] c = c_arr
    cdef Py_ssize_t i, j, s, t, l, lmax
    for i in range(n):
        cum[cl[i] + 1, r[i]] += 1.0
    for t in range(1, p + 1):
        for j in range(q):
            cum[t, j] += cum[t - 1, j]
            c[t] += cum[t, j]

    cdef double hq = 0.0
    for j in range(q):
        hq -= _xlogx(cum[p, j], c[p])

    hp2q_arr = np.zeros((p + 1, p + 1), dtype=np.float64)
    cdef double[:, ::1] hp2q = hp2q_arr
    cdef double tot, acc
    for t in range(1, p + 1):
        for s in range(0, t):
            tot = c[t] - c[s]
            if tot <= 0:
                continue
            acc = 0.0
            for j in range(q):
                acc -= _xlogx(cum[t, j] - cum[s, j], tot)
            hp2q[s, t] = acc

    lmax = max_cols if max_cols > 2 else 2
    I_arr = np.full((p + 1, lmax + 1), np.nan)
    cdef double[:, ::1] I = I_arr
    cdef double ct, cs, f, fmax, hp3, hp3q
    for t in range(2, p + 1):
        ct = c[t]
        fmax = -INFINITY
        for s in range(1, t + 1):
            cs = c[s]
            hp3 = -_xlogx(cs, ct) - _xlogx(ct - cs, ct)
            hp3q = 0.0
            for j in range(q):
                hp3q -= _xlogx(cum[s, j], ct) + _xlogx(cum[t, j] - cum[s, j], ct)
            f = hp3 - hp3q
            if f > fmax:
                fmax = f
        I[t, 2] = hq + fmax
    for l in range(3, max_cols + 1):
        for t in range(l, p + 1):
            ct = c[t]
            fmax = -INFINITY
            for s in range(l - 1, t + 1):
                cs = c[s]
                f = (cs / ct) * (I[s, l - 1] - hq) - ((ct - cs) / ct) * hp2q[s, t]
                if f > fmax:
                    fmax = f
            I[t, l] = hq + fmax
    for l in range(p + 1, max_cols + 1):
        I[p, l] = I[p, p]
    out = np.empty(max_cols - 1)
    cdef double lq = log(<double>q), lk
    for l in range(2, max_cols + 1):
        lk = log(<double>l)
        out[l - 2] = I[p, l] / (lk if lk < lq else lq)
    return out


def prim_mst(points):
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 2)
    cdef Py_ssize_t m = pts.shape[0]
    parent_arr = np.full(m, -1, dtype=np.int64)
    length_arr = np.zeros(m)
    if m == 0:
        return parent_arr, length_arr
    cdef cnp.int64_t[::1] parent = parent_arr
    cdef double[::1] length = length_arr
    cdef double[::1] best = np.full(m, np.inf)
    cdef cnp.int64_t[::1] best_from = np.full(m, -1, dtype=np.int64)
    cdef cnp.uint8_t[::1] in_tree = np.zeros(m, dtype=np.uint8)
    cdef Py_ssize_t it, u = 0, v, w
    cdef double dx, dy, d, bv
    for it in range(m):
        in_tree[u] = 1
        for w in range(m):
            if in_tree[w]:
                continue
            dx = pts[w, 0] - pts[u, 0]
            dy = pts[w, 1] - pts[u, 1]
            d = sqrt(dx * dx + dy * dy)
            if d < best[w]:
                best[w] = d
                best_from[w] = u
        v = -1
        bv = INFINITY
        for w in range(m):
            if not in_tree[w] and best[w] < bv:
                bv = best[w]
                v = w
        if v < 0:
            break
        parent[v] = best_from[v]
        length[v] = best[v]
        u = v
    return parent_arr, length_arr
