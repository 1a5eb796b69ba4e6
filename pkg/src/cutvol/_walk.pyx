# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled sampling kernels; the hot twin of `cutvol._walk_py`.

Keep every floating-point operation and every RNG draw in the same order as
the pure backend: the two must agree bit for bit (the build turns FP
contraction off for that reason).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, log, sqrt
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

BACKEND = "compiled"

COORDINATE = 0
RANDOM = 1

cdef int _COORD = 0

cdef double _EPS = 1e-12
cdef double _TWO_PI = 6.283185307179586
cdef double _INV53 = 1.1102230246251565e-16  # 2^-53
cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15u
cdef uint64_t _MIX1 = 0xBF58476D1CE4E5B9u
cdef uint64_t _MIX2 = 0x94D049BB133111EBu
cdef double _INF = float("inf")


cdef struct Stream:
    uint64_t base
    uint64_t counter


cdef inline uint64_t _next_u64(Stream* st) nogil:
    st.counter += 1
    cdef uint64_t z = st.base + GOLDEN * st.counter
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline double _unit(Stream* st) nogil:
    return (<double>(_next_u64(st) >> 11) + 0.5) * _INV53


cdef inline double _gaussian(Stream* st) nogil:
    cdef double u1 = _unit(st)
    cdef double u2 = _unit(st)
    return sqrt(-2.0 * log(u1)) * cos(_TWO_PI * u2)


cdef double _chord_step_h(double[:, ::1] A, double[::1] s, double[::1] x,
                          double[::1] dirbuf, double[::1] colbuf,
                          double nrm2, double r2, int mode, Stream* st) nogil:
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t d = A.shape[1]
    cdef Py_ssize_t i, k, j = 0
    cdef double q, t_hi, t_lo, r, unrm, disc, sq, t01, t, ci
    if mode == _COORD:
        j = <Py_ssize_t>(_next_u64(st) % <uint64_t>d)
        q = x[j]
        for i in range(m):
            colbuf[i] = A[i, j]
    else:
        unrm = 0.0
        for k in range(d):
            dirbuf[k] = _gaussian(st)
        for k in range(d):
            unrm += dirbuf[k] * dirbuf[k]
        unrm = sqrt(unrm)
        if unrm == 0.0:
            _unit(st)
            return nrm2
        for k in range(d):
            dirbuf[k] /= unrm
        for i in range(m):
            ci = 0.0
            for k in range(d):
                ci += A[i, k] * dirbuf[k]
            colbuf[i] = ci
        q = 0.0
        for k in range(d):
            q += x[k] * dirbuf[k]
    t_hi = _INF
    t_lo = -_INF
    for i in range(m):
        ci = colbuf[i]
        if ci > 0.0:
            r = s[i] / ci
            if r < t_hi:
                t_hi = r
        elif ci < 0.0:
            r = s[i] / ci
            if r > t_lo:
                t_lo = r
    if r2 > 0.0:
        disc = r2 - (nrm2 - q * q)
        if disc < 0.0:
            disc = 0.0
        sq = sqrt(disc)
        if -q + sq < t_hi:
            t_hi = -q + sq
        if -q - sq > t_lo:
            t_lo = -q - sq
    t01 = _unit(st)
    if t_hi == _INF or t_lo == -_INF:
        return nrm2
    if not (t_hi - t_lo > _EPS):
        return nrm2
    t = t_lo + t01 * (t_hi - t_lo)
    nrm2 = nrm2 + t * t + 2.0 * t * q
    if mode == _COORD:
        x[j] += t
    else:
        for k in range(d):
            x[k] += t * dirbuf[k]
    for i in range(m):
        s[i] -= t * colbuf[i]
        if s[i] < 0.0:
            s[i] = 0.0
    return nrm2


def walk_h(A, b, x0, steps, radius, mode, base, counter):
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[::1] bv = np.asarray(b, dtype=np.float64)
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] xv = x_arr
    cdef Py_ssize_t m = Av.shape[0], d = Av.shape[1]
    s_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] sv = s_arr
    cdef Py_ssize_t i, k
    cdef double acc
    for i in range(m):
        acc = 0.0
        for k in range(d):
            acc += Av[i, k] * xv[k]
        sv[i] = bv[i] - acc
    cdef double nrm2 = 0.0
    for k in range(d):
        nrm2 += xv[k] * xv[k]
    cdef double r2 = radius * radius if radius > 0.0 else 0.0
    cdef Stream st
    st.base = <uint64_t>(base & 0xFFFFFFFFFFFFFFFF)
    st.counter = <uint64_t>counter
    dir_arr = np.empty(d, dtype=np.float64)
    col_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] dirv = dir_arr
    cdef double[::1] colv = col_arr
    cdef int cmode = mode
    cdef Py_ssize_t nsteps = steps, step
    for step in range(nsteps):
        nrm2 = _chord_step_h(Av, sv, xv, dirv, colv, nrm2, r2, cmode, &st)
    return x_arr, int(st.counter)


def sob_h_run(A, b, radii, walk_len, samples, mode, base):
    cdef double[:, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[::1] bv = np.asarray(b, dtype=np.float64)
    cdef double[::1] rv = np.asarray(radii, dtype=np.float64)
    cdef Py_ssize_t m = Av.shape[0], d = Av.shape[1]
    cdef Py_ssize_t phases = rv.shape[0] - 1
    counts_arr = np.zeros(phases, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    x_arr = np.zeros(d, dtype=np.float64)
    s_arr = np.asarray(b, dtype=np.float64).copy()
    dir_arr = np.empty(d, dtype=np.float64)
    col_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] xv = x_arr, sv = s_arr, dirv = dir_arr, colv = col_arr
    cdef Stream st
    st.base = <uint64_t>(base & 0xFFFFFFFFFFFFFFFF)
    st.counter = 0
    cdef Py_ssize_t k, sample, w
    cdef Py_ssize_t wl = walk_len, ns = samples
    cdef int cmode = mode
    cdef double r_out2, r_in2, nrm2
    cdef int64_t hits
    with nogil:
        for k in range(phases):
            r_out2 = rv[k + 1] * rv[k + 1]
            r_in2 = rv[k] * rv[k]
            nrm2 = 0.0
            for w in range(d):
                nrm2 += xv[w] * xv[w]
            hits = 0
            for sample in range(ns):
                for w in range(wl):
                    nrm2 = _chord_step_h(Av, sv, xv, dirv, colv, nrm2, r_out2,
                                         cmode, &st)
                if nrm2 <= r_in2:
                    hits += 1
            counts[k] = hits
    return counts_arr


# -- V-polytopes ------------------------------------------------------------

cdef int _vray(double[:, ::1] V, double[::1] p, double[::1] u, int use_u,
               double[:, ::1] T, int64_t[::1] basis, double[::1] zbuf,
               double* tmax) nogil:
    """(feasible, t_max) for max t s.t. p + t u in conv(V); mirrors the
    pure backend's tableau simplex exactly.  Returns 1 if feasible."""
    cdef Py_ssize_t N = V.shape[0], d = V.shape[1]
    cdef Py_ssize_t rows = d + 1
    cdef Py_ssize_t ncols = N + 1 + rows + 1
    cdef Py_ssize_t r, c, i, jj
    cdef double piv, f, art, ratio, best_ratio
    cdef int64_t best_bv
    cdef Py_ssize_t enter, best_r, phase
    for r in range(d):
        for c in range(N):
            T[r, c] = V[c, r]
        T[r, N] = -u[r] if use_u else 0.0
        for c in range(N + 1, ncols - 1):
            T[r, c] = 0.0
        T[r, ncols - 1] = p[r]
    for c in range(N):
        T[d, c] = 1.0
    T[d, N] = 0.0
    for c in range(N + 1, ncols - 1):
        T[d, c] = 0.0
    T[d, ncols - 1] = 1.0
    for r in range(rows):
        if T[r, ncols - 1] < 0.0:
            for c in range(N + 1):
                T[r, c] = -T[r, c]
            T[r, ncols - 1] = -T[r, ncols - 1]
        T[r, N + 1 + r] = 1.0
        basis[r] = N + 1 + r

    for phase in range(2):
        if phase == 1 and not use_u:
            break
        while True:
            # reduced costs over the phase's columns: phase 0 prices the
            # artificials at -1, phase 1 prices t at +1
            if phase == 0:
                for c in range(N + 1 + rows):
                    zbuf[c] = 0.0
                for r in range(rows):
                    if basis[r] > N:
                        for c in range(N + 1 + rows):
                            zbuf[c] -= T[r, c]
            else:
                for c in range(N + 1):
                    zbuf[c] = 0.0
                for r in range(rows):
                    if basis[r] == N:
                        for c in range(N + 1):
                            zbuf[c] += T[r, c]
            enter = -1
            if phase == 0:
                for c in range(N + 1 + rows):
                    f = (-1.0 if c > N else 0.0) - zbuf[c]
                    if f > 1e-9:
                        jj = 0
                        for r in range(rows):
                            if basis[r] == c:
                                jj = 1
                                break
                        if not jj:
                            enter = c
                            break
            else:
                for c in range(N + 1):
                    f = (1.0 if c == N else 0.0) - zbuf[c]
                    if f > 1e-9:
                        jj = 0
                        for r in range(rows):
                            if basis[r] == c:
                                jj = 1
                                break
                        if not jj:
                            enter = c
                            break
            if enter < 0:
                break
            best_r = -1
            best_ratio = _INF
            best_bv = 0
            for r in range(rows):
                if T[r, enter] > 1e-9:
                    ratio = T[r, ncols - 1] / T[r, enter]
                    if ratio < best_ratio or (ratio == best_ratio and
                                              basis[r] < best_bv):
                        best_ratio = ratio
                        best_bv = basis[r]
                        best_r = r
            if best_r < 0:
                if phase == 1:
                    tmax[0] = _INF
                    return 1
                break
            piv = T[best_r, enter]
            for c in range(ncols):
                T[best_r, c] /= piv
            for i in range(rows):
                if i != best_r and T[i, enter] != 0.0:
                    f = T[i, enter]
                    for c in range(ncols):
                        T[i, c] -= f * T[best_r, c]
            basis[best_r] = enter
        if phase == 0:
            art = 0.0
            for r in range(rows):
                if basis[r] > N:
                    art += T[r, ncols - 1]
            if art > 1e-7:
                tmax[0] = 0.0
                return 0
            for r in range(rows):
                if basis[r] > N:
                    for c in range(N + 1):
                        if fabs(T[r, c]) > 1e-9:
                            piv = T[r, c]
                            for jj in range(ncols):
                                T[r, jj] /= piv
                            for i in range(rows):
                                if i != r and T[i, c] != 0.0:
                                    f = T[i, c]
                                    for jj in range(ncols):
                                        T[i, jj] -= f * T[r, jj]
                            basis[r] = c
                            break
            for r in range(rows):
                for c in range(N + 1, N + 1 + rows):
                    T[r, c] = 0.0
    tmax[0] = 0.0
    for r in range(rows):
        if basis[r] == N:
            tmax[0] = T[r, ncols - 1]
    return 1


cdef double _chord_step_v(double[:, ::1] V, double[::1] x, double[::1] u,
                          double[::1] negu, double[:, ::1] T,
                          int64_t[::1] basis, double[::1] zbuf,
                          double nrm2, double r2, int mode, Stream* st) nogil:
    cdef Py_ssize_t N = V.shape[0], d = V.shape[1]
    cdef Py_ssize_t j = 0, k
    cdef double q, unrm, t_hi, t_lo, t_back, disc, sq, t01, t, tres
    cdef int ok1, ok2
    if mode == _COORD:
        j = <Py_ssize_t>(_next_u64(st) % <uint64_t>d)
        for k in range(d):
            u[k] = 0.0
        u[j] = 1.0
        q = x[j]
    else:
        unrm = 0.0
        for k in range(d):
            u[k] = _gaussian(st)
        for k in range(d):
            unrm += u[k] * u[k]
        unrm = sqrt(unrm)
        if unrm == 0.0:
            _unit(st)
            return nrm2
        for k in range(d):
            u[k] /= unrm
        q = 0.0
        for k in range(d):
            q += x[k] * u[k]
    ok1 = _vray(V, x, u, 1, T, basis, zbuf, &t_hi)
    for k in range(d):
        negu[k] = -u[k]
    ok2 = _vray(V, x, negu, 1, T, basis, zbuf, &t_back)
    t_lo = -t_back
    if not (ok1 and ok2):
        _unit(st)
        return nrm2
    if r2 > 0.0:
        disc = r2 - (nrm2 - q * q)
        if disc < 0.0:
            disc = 0.0
        sq = sqrt(disc)
        if -q + sq < t_hi:
            t_hi = -q + sq
        if -q - sq > t_lo:
            t_lo = -q - sq
    t01 = _unit(st)
    if t_hi == _INF or t_lo == -_INF:
        return nrm2
    if not (t_hi - t_lo > _EPS):
        return nrm2
    t = t_lo + t01 * (t_hi - t_lo)
    nrm2 = nrm2 + t * t + 2.0 * t * q
    if mode == _COORD:
        x[j] += t
    else:
        for k in range(d):
            x[k] += t * u[k]
    return nrm2


def sob_v_run(V, radii, walk_len, samples, nball, mode, base):
    cdef double[:, ::1] Vv = np.ascontiguousarray(V, dtype=np.float64)
    cdef double[::1] rv = np.asarray(radii, dtype=np.float64)
    cdef Py_ssize_t N = Vv.shape[0], d = Vv.shape[1]
    cdef Py_ssize_t rows = d + 1, ncols = N + 1 + d + 2
    T_arr = np.zeros((rows, ncols), dtype=np.float64)
    basis_arr = np.zeros(rows, dtype=np.int64)
    z_arr = np.zeros(N + 1 + rows, dtype=np.float64)
    g_arr = np.empty(d, dtype=np.float64)
    u_arr = np.empty(d, dtype=np.float64)
    nu_arr = np.empty(d, dtype=np.float64)
    x_arr = np.zeros(d, dtype=np.float64)
    p_arr = np.empty(d, dtype=np.float64)
    zero_arr = np.zeros(d, dtype=np.float64)
    cdef double[:, ::1] Tv = T_arr
    cdef int64_t[::1] basisv = basis_arr
    cdef double[::1] zv = z_arr, gv = g_arr, uv = u_arr, nuv = nu_arr
    cdef double[::1] xv = x_arr, pv = p_arr, zerov = zero_arr
    cdef Stream st
    st.base = <uint64_t>(base & 0xFFFFFFFFFFFFFFFF)
    st.counter = 0
    cdef Py_ssize_t phases = rv.shape[0] - 1
    counts_arr = np.zeros(phases, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    cdef int64_t ball_hits = 0, hits
    cdef Py_ssize_t it, k, sample, w
    cdef Py_ssize_t nb = nball, wl = walk_len, ns = samples
    cdef int cmode = mode
    cdef double r0 = rv[0], nrm, srad, scale, r_out2, r_in2, nrm2, tres
    with nogil:
        for it in range(nb):
            nrm = 0.0
            for k in range(d):
                gv[k] = _gaussian(&st)
            for k in range(d):
                nrm += gv[k] * gv[k]
            nrm = sqrt(nrm)
            srad = _unit(&st)
            if nrm == 0.0:
                continue
            scale = r0 * srad ** (1.0 / d) / nrm
            for k in range(d):
                pv[k] = scale * gv[k]
            if _vray(Vv, pv, zerov, 0, Tv, basisv, zv, &tres):
                ball_hits += 1
        for it in range(phases):
            r_out2 = rv[it + 1] * rv[it + 1]
            r_in2 = rv[it] * rv[it]
            nrm2 = 0.0
            for k in range(d):
                nrm2 += xv[k] * xv[k]
            hits = 0
            for sample in range(ns):
                for w in range(wl):
                    nrm2 = _chord_step_v(Vv, xv, uv, nuv, Tv, basisv, zv,
                                         nrm2, r_out2, cmode, &st)
                if nrm2 <= r_in2:
                    hits += 1
            counts[it] = hits
    return int(ball_hits), counts_arr


def rejection_run(n, samples, base):
    cdef Py_ssize_t cn = n
    m_arr = np.empty((cn, cn), dtype=np.float64)
    cdef double[:, ::1] m = m_arr
    cdef Stream st
    st.base = <uint64_t>(base & 0xFFFFFFFFFFFFFFFF)
    st.counter = 0
    cdef int64_t accepted = 0
    cdef Py_ssize_t it, i, jj, k
    cdef Py_ssize_t ns = samples
    cdef double y, dkk, lkk, v
    cdef int ok
    with nogil:
        for it in range(ns):
            for i in range(cn):
                m[i, i] = 1.0
            ok = 1
            for i in range(cn):
                for jj in range(i + 1, cn):
                    y = 1.0 - 2.0 * _unit(&st)
                    m[i, jj] = y
                    m[jj, i] = y
            for k in range(cn):
                dkk = m[k, k]
                for jj in range(k):
                    dkk -= m[k, jj] * m[k, jj]
                if dkk <= 0.0:
                    ok = 0
                    break
                lkk = sqrt(dkk)
                m[k, k] = lkk
                for i in range(k + 1, cn):
                    v = m[i, k]
                    for jj in range(k):
                        v -= m[i, jj] * m[k, jj]
                    m[i, k] = v / lkk
            if ok:
                accepted += 1
    return int(accepted)
