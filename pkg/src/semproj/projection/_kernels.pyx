# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot numerical kernels.

Same four entry points and semantics as kernels_py; see that module for the
contract. Loops accumulate in C doubles, so distances avoid the dot-product
cancellation the vectorized fallback accepts.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp, fabs, log

cnp.import_array()

BACKEND_NAME = "compiled"


def pairwise_sq_dists(X):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1]
    out = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double s, diff
    for i in range(n):
        for j in range(i + 1, n):
            s = 0.0
            for k in range(d):
                diff = Xv[i, k] - Xv[j, k]
                s += diff * diff
            o[i, j] = s
            o[j, i] = s
    return out


def calibrate_bandwidths(d2, double perplexity, double tol=1e-4, int max_iter=50):
    cdef double[:, ::1] dv = np.ascontiguousarray(d2, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0]
    P = np.zeros((n, n), dtype=np.float64)
    beta_out = np.ones(n, dtype=np.float64)
    cdef double[:, ::1] Pv = P
    cdef double[::1] betav = beta_out
    buf = np.zeros(max(n - 1, 1), dtype=np.float64)
    pbuf = np.zeros(max(n - 1, 1), dtype=np.float64)
    bestbuf = np.zeros(max(n - 1, 1), dtype=np.float64)
    cdef double[::1] di = buf
    cdef double[::1] p = pbuf
    cdef double[::1] best_p = bestbuf
    failed = []
    cdef Py_ssize_t i, j, k, idx, it
    cdef double shift, b, b_lo, b_hi, best_err, best_b
    cdef double sum_p, dot, h, perp_est, err, pk, norm
    for i in range(n):
        idx = 0
        shift = INFINITY
        for j in range(n):
            if j != i:
                di[idx] = dv[i, j]
                if di[idx] < shift:
                    shift = di[idx]
                idx += 1
        b = 1.0
        b_lo = 0.0
        b_hi = INFINITY
        best_err = INFINITY
        best_b = b
        for it in range(max_iter):
            sum_p = 0.0
            dot = 0.0
            for k in range(n - 1):
                pk = exp(-b * (di[k] - shift))
                p[k] = pk
                sum_p += pk
                dot += (di[k] - shift) * pk
            h = log(sum_p) + b * dot / sum_p
            perp_est = exp(h)
            err = fabs(perp_est - perplexity)
            if err < best_err:
                best_err = err
                best_b = b
                for k in range(n - 1):
                    best_p[k] = p[k]
            if err == 0.0:
                break
            if perp_est > perplexity:
                b_lo = b
                if b_hi == INFINITY:
                    b = b * 2.0
                else:
                    b = 0.5 * (b + b_hi)
            else:
                b_hi = b
                b = 0.5 * (b + b_lo)
        if best_err > tol:
            failed.append(i)
        norm = 0.0
        for k in range(n - 1):
            norm += best_p[k]
        idx = 0
        for j in range(n):
            if j != i:
                Pv[i, j] = best_p[idx] / norm
                idx += 1
        betav[i] = best_b
    return P, beta_out, np.asarray(failed, dtype=np.int64)


def tsne_grad_kl(P_grad, P_kl, Y, bint want_kl):
    cdef double[:, ::1] Pg = np.ascontiguousarray(P_grad, dtype=np.float64)
    cdef double[:, ::1] Pk = np.ascontiguousarray(P_kl, dtype=np.float64)
    cdef double[:, ::1] Yv = np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = Yv.shape[0]
    num = np.zeros((n, n), dtype=np.float64)
    grad = np.zeros((n, 2), dtype=np.float64)
    cdef double[:, ::1] numv = num
    cdef double[:, ::1] gradv = grad
    cdef Py_ssize_t i, j
    cdef double dx, dy, v, z = 0.0, mult, gx, gy, kl, pij, q
    for i in range(n):
        for j in range(i + 1, n):
            dx = Yv[i, 0] - Yv[j, 0]
            dy = Yv[i, 1] - Yv[j, 1]
            v = 1.0 / (1.0 + dx * dx + dy * dy)
            numv[i, j] = v
            numv[j, i] = v
            z += 2.0 * v
    for i in range(n):
        gx = 0.0
        gy = 0.0
        for j in range(n):
            if j == i:
                continue
            mult = (Pg[i, j] - numv[i, j] / z) * numv[i, j]
            gx += mult * (Yv[i, 0] - Yv[j, 0])
            gy += mult * (Yv[i, 1] - Yv[j, 1])
        gradv[i, 0] = 4.0 * gx
        gradv[i, 1] = 4.0 * gy
    kl = float("nan")
    if want_kl:
        kl = 0.0
        for i in range(n):
            for j in range(n):
                if j == i:
                    continue
                pij = Pk[i, j]
                if pij > 0.0:
                    q = numv[i, j] / z
                    if q < 1e-300:
                        q = 1e-300
                    kl += pij * log(pij / q)
    return grad, kl


def shortest_paths(indptr, indices, weights, int n):
    cdef cnp.int64_t[::1] iptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef cnp.int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    out = np.full((n, n), np.inf, dtype=np.float64)
    cdef double[:, ::1] dist = out
    cdef Py_ssize_t cap = idx.shape[0] + n + 1
    heap_d = np.zeros(cap, dtype=np.float64)
    heap_n = np.zeros(cap, dtype=np.int64)
    cdef double[::1] hd = heap_d
    cdef cnp.int64_t[::1] hn = heap_n
    cdef Py_ssize_t src, size, pos, parent, child, e
    cdef cnp.int64_t u, v
    cdef double d, nd, td
    cdef cnp.int64_t tn
    for src in range(n):
        dist[src, src] = 0.0
        hd[0] = 0.0
        hn[0] = src
        size = 1
        while size > 0:
            # pop min
            d = hd[0]
            u = hn[0]
            size -= 1
            hd[0] = hd[size]
            hn[0] = hn[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and hd[child + 1] < hd[child]:
                    child += 1
                if hd[child] < hd[pos]:
                    td = hd[pos]; hd[pos] = hd[child]; hd[child] = td
                    tn = hn[pos]; hn[pos] = hn[child]; hn[child] = tn
                    pos = child
                else:
                    break
            if d > dist[src, u]:
                continue
            for e in range(iptr[u], iptr[u + 1]):
                v = idx[e]
                nd = d + w[e]
                if nd < dist[src, v]:
                    dist[src, v] = nd
                    # push
                    hd[size] = nd
                    hn[size] = v
                    pos = size
                    size += 1
                    while pos > 0:
                        parent = (pos - 1) // 2
                        if hd[pos] < hd[parent]:
                            td = hd[pos]; hd[pos] = hd[parent]; hd[parent] = td
                            tn = hn[pos]; hn[pos] = hn[parent]; hn[parent] = tn
                            pos = parent
                        else:
                            break
    return out
