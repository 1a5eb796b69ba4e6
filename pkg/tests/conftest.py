"""Shared oracles and helpers.

The oracles here stay deliberately independent of the code paths they
check: permutation counting by enumeration, vertex enumeration from row
subsets, and grid bracketing of volumes."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, permutations

import pytest


def round_sig(x: float, digits: int = 3) -> str:
    """Round to significant digits, normalized exponent form."""
    return f"{float(x):.{digits - 1}e}"


def trunc_sig(x: float, digits: int = 3) -> str:
    """Truncate (round toward zero) to significant digits."""
    if x == 0:
        return "0"
    exp = math.floor(math.log10(abs(x)))
    scale = 10.0 ** (exp - digits + 1)
    return f"{math.floor(abs(x) / scale) * scale * (1 if x > 0 else -1):.{digits - 1}e}"


def _printed_digits(text: str) -> int:
    mant = text.lower().split("e")[0]
    return len(mant.replace("-", "").replace(".", "").lstrip("0")) or 1


def sig_repr(text: str) -> str:
    """Normalize a printed decimal like '0.183' or '9.50e-04' to e-notation
    at its own precision."""
    return f"{float(text):.{_printed_digits(text) - 1}e}"


def matches_printed(x: float, text: str) -> bool:
    """Does x round to the printed value at the printed precision?"""
    return f"{float(x):.{_printed_digits(text) - 1}e}" == sig_repr(text)


def alternating_count(n: int) -> int:
    """Number of up-down alternating permutations of [n], by enumeration."""
    if n <= 1:
        return 1
    count = 0
    for p in permutations(range(n)):
        if all((p[i] < p[i + 1]) == (i % 2 == 0) for i in range(n - 1)):
            count += 1
    return count


def solve_exact(rows_a, rhs):
    """Solve a square rational system by Gaussian elimination; None if
    singular."""
    n = len(rhs)
    m = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(rows_a, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                for j in range(c, n + 1):
                    m[r][j] -= f * m[c][j]
    return tuple(m[r][n] / m[r][r] for r in range(n))


def hpoly_vertices_bruteforce(h):
    """All vertices of an H-polytope by solving every d-subset of tight rows
    and keeping the feasible solutions.  Exact; only for tiny systems."""
    verts = set()
    for subset in combinations(range(len(h.rows)), h.dim):
        a = [h.rows[i][0] for i in subset]
        b = [h.rows[i][1] for i in subset]
        x = solve_exact(a, b)
        if x is None:
            continue
        if all(
            sum(c * v for c, v in zip(row, x)) <= bb for row, bb in h.rows
        ):
            verts.add(x)
    return verts


def grid_volume_bracket(h, resolution: int):
    """Exact lower and upper volume bounds by classifying grid cells.

    A cell is certainly inside when every row's maximum over the cell stays
    below b, certainly outside when some row's minimum exceeds b; both
    extremes of a linear form over a box are corner evaluations.
    """
    d = h.dim
    rows = [(tuple(int(c) for c in a), int(b)) for a, b in h.rows]
    inside = 0
    not_outside = 0
    cells = [0] * d
    total = resolution**d

    def cell_extremes(cell, a):
        lo = hi = 0
        for j, c in enumerate(a):
            if c >= 0:
                lo += c * cell[j]
                hi += c * (cell[j] + 1)
            else:
                lo += c * (cell[j] + 1)
                hi += c * cell[j]
        return lo, hi

    for idx in range(total):
        k = idx
        for j in range(d):
            cells[j] = k % resolution
            k //= resolution
        is_inside = True
        is_outside = False
        for a, b in rows:
            lo, hi = cell_extremes(cells, a)
            if hi > b * resolution:
                is_inside = False
            if lo > b * resolution:
                is_outside = True
                break
        if is_inside:
            inside += 1
        if not is_outside:
            not_outside += 1
    scale = Fraction(1, resolution**d)
    return inside * scale, not_outside * scale


@pytest.fixture(scope="session")
def unit_cube():
    from cutvol.polytope import HPolytope

    def box(d):
        rows = []
        for j in range(d):
            a = [0] * d
            a[j] = 1
            rows.append((list(a), 1))
            a[j] = -1
            rows.append((a, 0))
        return HPolytope.from_rows(d, rows)

    return box
