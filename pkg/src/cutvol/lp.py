"""Dense two-phase simplex with Bland's rule, and the Chebyshev center.

Small and deterministic by design: the tableaus here have at most a few
hundred entries per side, and Bland's rule rules out cycling.  Everything
the package needs from linear programming (center finding, per-coordinate
bounds, convex-hull membership) goes through this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPolytopeError, UnboundedPolytopeError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_TOL = 1e-9


@dataclass(frozen=True)
class LPResult:
    point: np.ndarray | None
    value: float
    status: str


def simplex_eq(A, b, c, tol: float = _TOL) -> LPResult:
    """Maximize c.x subject to A x = b, x >= 0 (dense two-phase simplex)."""
    A = np.asarray(A, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # tableau over the original plus m artificial columns
    T = np.zeros((m, n + m + 1))
    T[:, :n] = A
    T[:, n : n + m] = np.eye(m)
    T[:, -1] = b
    basis = list(range(n, n + m))

    def pivot(T, basis, r, col):
        T[r] /= T[r, col]
        for i in range(T.shape[0]):
            if i != r and T[i, col] != 0.0:
                T[i] -= T[i, col] * T[r]
        basis[r] = col

    def run_phase(T, basis, obj, ncols):
        while True:
            z = np.zeros(ncols)
            for r, bv in enumerate(basis):
                if obj[bv] != 0.0:
                    z += obj[bv] * T[r, :ncols]
            reduced = obj[:ncols] - z
            enter = -1
            for j in range(ncols):  # Bland: lowest improving index
                if j not in basis and reduced[j] > tol:
                    enter = j
                    break
            if enter < 0:
                return OPTIMAL
            ratios = [
                (T[r, -1] / T[r, enter], basis[r], r)
                for r in range(T.shape[0])
                if T[r, enter] > tol
            ]
            if not ratios:
                return UNBOUNDED
            _, _, r = min(ratios)  # ties break on the lowest basic variable
            pivot(T, basis, r, enter)

    # phase 1: drive the artificials to zero
    obj1 = np.zeros(n + m)
    obj1[n:] = -1.0
    run_phase(T, basis, obj1, n + m)
    art_value = sum(T[r, -1] for r, bv in enumerate(basis) if bv >= n)
    if art_value > 1e-7:
        return LPResult(None, 0.0, INFEASIBLE)
    for r, bv in enumerate(basis):  # pivot lingering artificials out
        if bv >= n:
            for j in range(n):
                if abs(T[r, j]) > tol:
                    pivot(T, basis, r, j)
                    break

    # phase 2 on the original columns only
    obj2 = np.zeros(n + m)
    obj2[:n] = c
    keep = [r for r, bv in enumerate(basis) if bv < n or T[r, -1] > tol]
    if len(keep) < m:
        T = T[keep]
        basis = [basis[r] for r in keep]
    T[:, n : n + m] = 0.0
    status = run_phase(T, basis, obj2, n)
    if status == UNBOUNDED:
        return LPResult(None, 0.0, UNBOUNDED)
    x = np.zeros(n)
    for r, bv in enumerate(basis):
        if bv < n:
            x[bv] = T[r, -1]
    return LPResult(x, float(c @ x), OPTIMAL)


def solve_ineq_lp(A, b, c) -> LPResult:
    """Maximize c.x subject to A x <= b with x free (split + slacks)."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    Aeq = np.hstack([A, -A, np.eye(m)])
    ceq = np.concatenate([c, -c, np.zeros(m)])
    res = simplex_eq(Aeq, b, ceq)
    if res.status != OPTIMAL:
        return res
    x = res.point[:n] - res.point[n : 2 * n]
    return LPResult(x, float(c @ x), OPTIMAL)


def _row_arrays(h):
    A = np.array([[float(v) for v in a] for a, _ in h.rows], dtype=float)
    b = np.array([float(bb) for _, bb in h.rows], dtype=float)
    return A, b


def chebyshev_center(h) -> tuple[np.ndarray, float]:
    """Center and radius of the largest ball inscribed in an H-polytope.

    Maximizes r subject to a_i.x + r*||a_i|| <= b_i.  Raises for empty or
    unbounded inputs.
    """
    A, b = _row_arrays(h)
    norms = np.linalg.norm(A, axis=1)
    Ac = np.hstack([A, norms[:, None]])
    c = np.zeros(h.dim + 1)
    c[-1] = 1.0
    # the radius variable is sign-constrained; solve with x free, r >= 0
    m = A.shape[0]
    Aeq = np.hstack([A, -A, norms[:, None], np.eye(m)])
    ceq = np.zeros(2 * h.dim + 1 + m)
    ceq[2 * h.dim] = 1.0
    res = simplex_eq(Aeq, b, ceq)
    if res.status == INFEASIBLE:
        raise EmptyPolytopeError("no feasible point")
    if res.status == UNBOUNDED:
        raise UnboundedPolytopeError("inscribed ball radius is unbounded")
    x = res.point[: h.dim] - res.point[h.dim : 2 * h.dim]
    r = float(res.point[2 * h.dim])
    return x, r


def coordinate_bounds(h) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate minima and maxima; raises if any direction is unbounded."""
    A, b = _row_arrays(h)
    lo = np.zeros(h.dim)
    hi = np.zeros(h.dim)
    for j in range(h.dim):
        c = np.zeros(h.dim)
        c[j] = 1.0
        res = solve_ineq_lp(A, b, c)
        if res.status == UNBOUNDED:
            raise UnboundedPolytopeError(f"coordinate {j} unbounded above")
        if res.status == INFEASIBLE:
            raise EmptyPolytopeError("no feasible point")
        hi[j] = res.value
        res = solve_ineq_lp(A, b, -c)
        if res.status == UNBOUNDED:
            raise UnboundedPolytopeError(f"coordinate {j} unbounded below")
        lo[j] = -res.value
    return lo, hi


def in_convex_hull(V, p, tol: float = 1e-9) -> bool:
    """Is p a convex combination of the rows of V (LP feasibility)?"""
    V = np.asarray(V, dtype=float)
    p = np.asarray(p, dtype=float)
    N, d = V.shape
    Aeq = np.vstack([V.T, np.ones((1, N))])
    beq = np.concatenate([p, [1.0]])
    res = simplex_eq(Aeq, beq, np.zeros(N), tol=tol)
    return res.status == OPTIMAL
