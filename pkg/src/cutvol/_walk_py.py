"""Pure-Python sampling kernels (fallback for the compiled extension).

The compiled module `cutvol._walk` implements exactly these functions; which
one is loaded is decided in `cutvol._backend`.  Both backends perform the
same floating-point operations in the same order on the same SplitMix64
stream, so coordinate-direction walks, V-polytope walks and rejection
sampling agree bit for bit (the extension is compiled with FP contraction
off; random-direction walks involve BLAS reductions here and agree only to
rounding).  Keep the two in lockstep when editing.

Conventions shared by both backends:
  * one uniform draw is ((word >> 11) + 0.5) * 2^-53, never exactly 0 or 1;
  * a gaussian consumes two uniforms (Box-Muller, cosine branch);
  * a coordinate-direction step consumes 2 draws, a random-direction step
    2d + 1 draws, a ball point 2d + 1 draws, so stream positions are
    reproducible by counting;
  * chords narrower than the interiority epsilon leave the point in place.
"""

from __future__ import annotations

import math

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_EPS = 1e-12
_INF = math.inf

BACKEND = "python"

COORDINATE = 0
RANDOM = 1


class _Stream:
    __slots__ = ("base", "counter")

    def __init__(self, base: int, counter: int = 0):
        self.base = base & MASK64
        self.counter = counter

    def next_u64(self) -> int:
        self.counter += 1
        z = (self.base + GOLDEN * self.counter) & MASK64
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def unit(self) -> float:
        return ((self.next_u64() >> 11) + 0.5) * (2.0**-53)

    def gaussian(self) -> float:
        u1 = self.unit()
        u2 = self.unit()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _sq_norm(x) -> float:
    acc = 0.0
    for v in x:
        acc += v * v
    return acc


def _chord_step_h(A, s, x, nrm2, r2, mode, stream):
    """One hit-and-run step inside {A x <= b} (slacks s) intersected with the
    ball of squared radius r2 (skipped when r2 <= 0).  Returns updated nrm2.
    """
    d = A.shape[1]
    if mode == COORDINATE:
        j = stream.next_u64() % d
        col = A[:, j]
        q = x[j]
    else:
        u = np.empty(d)
        for k in range(d):
            u[k] = stream.gaussian()
        unrm = math.sqrt(float(np.dot(u, u)))
        if unrm == 0.0:
            stream.unit()
            return nrm2
        u /= unrm
        col = A @ u
        q = float(np.dot(x, u))
    t_hi = _INF
    t_lo = -_INF
    pos = col > 0.0
    neg = col < 0.0
    if pos.any():
        t_hi = float(np.min(s[pos] / col[pos]))
    if neg.any():
        t_lo = float(np.max(s[neg] / col[neg]))
    if r2 > 0.0:
        disc = r2 - (nrm2 - q * q)
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        if -q + sq < t_hi:
            t_hi = -q + sq
        if -q - sq > t_lo:
            t_lo = -q - sq
    t01 = stream.unit()
    if t_hi == _INF or t_lo == -_INF:
        return nrm2
    if not (t_hi - t_lo > _EPS):
        return nrm2
    t = t_lo + t01 * (t_hi - t_lo)
    nrm2 = nrm2 + t * t + 2.0 * t * q
    if mode == COORDINATE:
        x[j] += t
    else:
        x += t * u
    s -= t * col
    np.maximum(s, 0.0, out=s)
    return nrm2


def walk_h(A, b, x0, steps, radius, mode, base, counter):
    """Public hit-and-run walk; returns the end point and the stream counter."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    m, d = A.shape
    stream = _Stream(base, counter)
    s = np.empty(m)
    for i in range(m):
        acc = 0.0
        for k in range(d):
            acc += A[i, k] * x[k]
        s[i] = b[i] - acc
    nrm2 = _sq_norm(x)
    r2 = radius * radius if radius > 0.0 else 0.0
    for _ in range(steps):
        nrm2 = _chord_step_h(A, s, x, nrm2, r2, mode, stream)
    return x, stream.counter


def sob_h_run(A, b, radii, walk_len, samples, mode, base):
    """One sequence-of-balls run over an H-polytope centred at the origin.

    Phase k walks in the body intersected with the ball of radius
    radii[k+1] and counts how many of `samples` points land inside radius
    radii[k].  Returns the per-phase counts.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    stream = _Stream(base)
    phases = len(radii) - 1
    counts = np.zeros(phases, dtype=np.int64)
    x = np.zeros(A.shape[1])
    s = b.copy()
    for k in range(phases):
        r_out2 = radii[k + 1] * radii[k + 1]
        r_in2 = radii[k] * radii[k]
        nrm2 = _sq_norm(x)
        hits = 0
        for _ in range(samples):
            for _ in range(walk_len):
                nrm2 = _chord_step_h(A, s, x, nrm2, r_out2, mode, stream)
            if nrm2 <= r_in2:
                hits += 1
        counts[k] = hits
    return counts


# -- V-polytopes ------------------------------------------------------------
#
# Membership and ray shooting in conv(V) are one phase-1/phase-2 simplex on
#     [ V^T  -u | I ] [lam, t | art] = [x | 1],   lam, t, art >= 0
# with Bland's rule; u = 0 turns it into plain membership.


def _vray(V, p, u, use_u):
    """(feasible, t_max) for max t s.t. p + t u in conv(V)."""
    N, d = V.shape
    rows = d + 1
    ncols = N + 1 + rows + 1
    T = np.zeros((rows, ncols))
    for r in range(d):
        T[r, :N] = V[:, r]
        T[r, N] = -u[r] if use_u else 0.0
        T[r, -1] = p[r]
    T[d, :N] = 1.0
    T[d, -1] = 1.0
    for r in range(rows):
        if T[r, -1] < 0.0:
            T[r, : N + 1] = -T[r, : N + 1]
            T[r, -1] = -T[r, -1]
        T[r, N + 1 + r] = 1.0
    basis = [N + 1 + r for r in range(rows)]

    def pivot(r, c):
        T[r] /= T[r, c]
        for i in range(rows):
            if i != r and T[i, c] != 0.0:
                T[i] -= T[i, c] * T[r]
        basis[r] = c

    def run(count, cost):
        """Bland-rule simplex over the first `count` columns; False if the
        objective is unbounded."""
        while True:
            z = np.zeros(count)
            for r in range(rows):
                cb = cost(basis[r])
                if cb != 0.0:
                    z += cb * T[r, :count]
            enter = -1
            for j in range(count):
                if j in basis:
                    continue
                if cost(j) - z[j] > 1e-9:
                    enter = j
                    break
            if enter < 0:
                return True
            best_r = -1
            best_ratio = _INF
            best_bv = 0
            for r in range(rows):
                if T[r, enter] > 1e-9:
                    ratio = T[r, -1] / T[r, enter]
                    if ratio < best_ratio or (
                        ratio == best_ratio and basis[r] < best_bv
                    ):
                        best_ratio = ratio
                        best_bv = basis[r]
                        best_r = r
            if best_r < 0:
                return False
            pivot(best_r, enter)

    run(N + 1 + rows, lambda j: -1.0 if j > N else 0.0)
    art = 0.0
    for r in range(rows):
        if basis[r] > N:
            art += T[r, -1]
    if art > 1e-7:
        return False, 0.0
    for r in range(rows):
        if basis[r] > N:
            for j in range(N + 1):
                if abs(T[r, j]) > 1e-9:
                    pivot(r, j)
                    break
    T[:, N + 1 : N + 1 + rows] = 0.0
    if use_u:
        if not run(N + 1, lambda j: 1.0 if j == N else 0.0):
            return True, _INF
    tmax = 0.0
    for r in range(rows):
        if basis[r] == N:
            tmax = T[r, -1]
    return True, tmax


def _chord_step_v(V, x, nrm2, r2, mode, stream, u, negu):
    N, d = V.shape
    j = 0
    if mode == COORDINATE:
        j = stream.next_u64() % d
        u[:] = 0.0
        u[j] = 1.0
        q = x[j]
    else:
        for k in range(d):
            u[k] = stream.gaussian()
        unrm = math.sqrt(float(np.dot(u, u)))
        if unrm == 0.0:
            stream.unit()
            return nrm2
        u /= unrm
        q = float(np.dot(x, u))
    ok1, t_hi = _vray(V, x, u, True)
    np.negative(u, out=negu)
    ok2, t_back = _vray(V, x, negu, True)
    t_lo = -t_back
    if not (ok1 and ok2):
        stream.unit()
        return nrm2
    if r2 > 0.0:
        disc = r2 - (nrm2 - q * q)
        if disc < 0.0:
            disc = 0.0
        sq = math.sqrt(disc)
        if -q + sq < t_hi:
            t_hi = -q + sq
        if -q - sq > t_lo:
            t_lo = -q - sq
    t01 = stream.unit()
    if t_hi == _INF or t_lo == -_INF:
        return nrm2
    if not (t_hi - t_lo > _EPS):
        return nrm2
    t = t_lo + t01 * (t_hi - t_lo)
    nrm2 = nrm2 + t * t + 2.0 * t * q
    if mode == COORDINATE:
        x[j] += t
    else:
        x += t * u
    return nrm2


def sob_v_run(V, radii, walk_len, samples, nball, mode, base):
    """One sequence-of-balls run over conv(V) with the origin interior.

    Returns (hits in conv(V) among nball uniform points of the innermost
    ball, per-phase counts as in sob_h_run).
    """
    V = np.ascontiguousarray(V, dtype=np.float64)
    N, d = V.shape
    stream = _Stream(base)
    g = np.empty(d)
    zero = np.zeros(d)
    ball_hits = 0
    r0 = radii[0]
    for _ in range(nball):
        for k in range(d):
            g[k] = stream.gaussian()
        nrm = math.sqrt(_sq_norm(g))
        srad = stream.unit()
        if nrm == 0.0:
            continue
        scale = r0 * srad ** (1.0 / d) / nrm
        p = scale * g
        ok, _t = _vray(V, p, zero, False)
        if ok:
            ball_hits += 1
    phases = len(radii) - 1
    counts = np.zeros(phases, dtype=np.int64)
    x = np.zeros(d)
    u = np.empty(d)
    negu = np.empty(d)
    for k in range(phases):
        r_out2 = radii[k + 1] * radii[k + 1]
        r_in2 = radii[k] * radii[k]
        nrm2 = _sq_norm(x)
        hits = 0
        for _ in range(samples):
            for _ in range(walk_len):
                nrm2 = _chord_step_v(V, x, nrm2, r_out2, mode, stream, u, negu)
            if nrm2 <= r_in2:
                hits += 1
        counts[k] = hits
    return ball_hits, counts


def rejection_run(n, samples, base):
    """Accepted count among `samples` uniform points of the unit cube mapped
    to candidate correlation matrices (strict Cholesky test)."""
    stream = _Stream(base)
    m = np.empty((n, n))
    accepted = 0
    for _ in range(samples):
        for i in range(n):
            m[i, i] = 1.0
        for i in range(n):
            for j in range(i + 1, n):
                y = 1.0 - 2.0 * stream.unit()
                m[i, j] = y
                m[j, i] = y
        ok = True
        for k in range(n):
            dkk = m[k, k]
            for j in range(k):
                dkk -= m[k, j] * m[k, j]
            if dkk <= 0.0:
                ok = False
                break
            lkk = math.sqrt(dkk)
            m[k, k] = lkk
            for i in range(k + 1, n):
                v = m[i, k]
                for j in range(k):
                    v -= m[i, j] * m[k, j]
                m[i, k] = v / lkk
        if ok:
            accepted += 1
    return accepted
