"""Exact rational volumes: closed-form family formulas and a recursive
engine for bounded H-polytopes.

The engine decomposes d*vol(P) as a sum over inequality rows of
(b_i / |a_ij|) * vol_{d-1} of the facet slice with coordinate j eliminated
by exact substitution, apexed at the origin.  For the bodies built here the
origin is a vertex, so every homogeneous row (b_i = 0) contributes nothing
and is pruned, which removes roughly half of each branching level.
Subproblems are renormalized to coprime integer rows and memoized on the
sorted row tuple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from . import graphs as gr
from .errors import SizeLimitError, UnsupportedFamilyError
from .lp import coordinate_bounds
from .polytope import HPolytope, cut_hrep_sparse, met_hrep

DEFAULT_MAX_DIM = 12

FORMULA = "formula"
RECURSION = "recursion"


@dataclass(frozen=True)
class ExactVolume:
    value: Fraction
    method: str
    family: gr.FamilyTag | None = None

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("volumes are nonnegative")


@dataclass(frozen=True)
class AndreTable:
    """Zigzag numbers A_0..A_k (counts of alternating permutations)."""

    values: tuple[int, ...]

    def __post_init__(self):
        head = self.values[:3]
        if any(v != 1 for v in head):
            raise ValueError("A_0 = A_1 = A_2 = 1")
        for i in range(3, len(self.values)):
            if self.values[i] <= self.values[i - 1]:
                raise ValueError("zigzag numbers increase strictly from index 3")

    def __getitem__(self, i: int) -> int:
        return self.values[i]


def andre_numbers(k: int) -> AndreTable:
    """A_0..A_k by the boustrophedon (Entringer) recursion, exact integers."""
    if k < 0:
        raise ValueError("need k >= 0")
    vals = [1]
    row = [1]
    for n in range(1, k + 1):
        new = [0]
        for t in range(n):
            new.append(new[-1] + row[n - 1 - t])
        row = new
        vals.append(row[-1])
    return AndreTable(tuple(vals[: k + 1]))


def _reduce_rows(rows):
    out = set()
    for a, b in rows:
        g = abs(b)
        for v in a:
            g = math.gcd(g, abs(v))
            if g == 1:
                break
        if g > 1:
            a = tuple(v // g for v in a)
            b = b // g
        out.add((a, b))
    return tuple(sorted(out))


def _volume_rec(rows, d, memo):
    """Exact volume of {x : a.x <= b for (a, b) in rows} in dimension d.

    rows hold coprime integer coefficients.  Subproblems are slices of a
    bounded polytope, so a coordinate constrained by no row means the system
    is infeasible and the volume is zero.
    """
    clean = []
    for a, b in rows:
        if any(a):
            clean.append((a, b))
        elif b < 0:
            return mpq(0)
    rows = _reduce_rows(clean)
    used = [False] * d
    for a, _ in rows:
        for j, v in enumerate(a):
            if v:
                used[j] = True
    if not all(used):
        return mpq(0)
    if d == 1:
        ub = lb = None
        for a, b in rows:
            q = mpq(b, a[0])
            if a[0] > 0:
                ub = q if ub is None or q < ub else ub
            else:
                lb = q if lb is None or q > lb else lb
        if ub is None or lb is None:
            raise AssertionError("unbounded 1-d slice of a bounded polytope")
        return ub - lb if ub > lb else mpq(0)
    cached = memo.get(rows)
    if cached is not None:
        return cached
    total = mpq(0)
    for i, (a, b) in enumerate(rows):
        if b == 0:
            continue  # zero distance from the origin apex
        j = 0
        best = 0
        for k, v in enumerate(a):
            if abs(v) > best:
                best = abs(v)
                j = k
        aj = a[j]
        sub = []
        for i2, (a2, b2) in enumerate(rows):
            if i2 == i:
                continue
            c = a2[j]
            if c == 0:
                sub.append((a2[:j] + a2[j + 1 :], b2))
            elif aj > 0:
                sub.append(
                    (
                        tuple(a2[k] * aj - c * a[k] for k in range(d) if k != j),
                        b2 * aj - c * b,
                    )
                )
            else:
                sub.append(
                    (
                        tuple(c * a[k] - a2[k] * aj for k in range(d) if k != j),
                        c * b - b2 * aj,
                    )
                )
        v = _volume_rec(tuple(sub), d - 1, memo)
        if v:
            total += mpq(b, abs(aj)) * v
    total = total / d
    memo[rows] = total
    return total


def lasserre_volume(h: HPolytope, max_dim: int = DEFAULT_MAX_DIM) -> Fraction:
    """Exact volume of a bounded H-polytope by recursive facet decomposition.

    Boundedness is verified up front with per-coordinate LPs.  The default
    dimension cap of 12 reflects where the recursion stops being desk-scale;
    raise `max_dim` deliberately if you mean it.
    """
    if h.dim > max_dim:
        raise SizeLimitError(
            f"dimension {h.dim} above the cap {max_dim}; pass max_dim= to override"
        )
    coordinate_bounds(h)  # raises Unbounded/EmptyPolytopeError
    v = _volume_rec(h.rows, h.dim, {})
    return Fraction(int(v.numerator), int(v.denominator))


def cycle_volume(n: int) -> Fraction:
    """Cut polytope volume of the n-cycle: 1 - 2^(n-1)/n!."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return 1 - Fraction(2 ** (n - 1), math.factorial(n))


def formula_volume(tag: gr.FamilyTag) -> Fraction:
    """Closed-form cut polytope volume for a recognized sparse family.

    Forests fill the cube (volume 1); a cactus is the product of its cycle
    volumes; a necklace multiplies the base cycle by its attached cycles.
    """
    if tag.kind == gr.FOREST:
        return Fraction(1)
    if tag.kind == gr.CYCLE:
        return cycle_volume(tag.cycle_length)
    if tag.kind == gr.CACTUS:
        return math.prod((cycle_volume(k) for k in tag.cycle_lengths), start=Fraction(1))
    if tag.kind == gr.NECKLACE:
        return cycle_volume(tag.base_length) * math.prod(
            (cycle_volume(k) for k in tag.attached_lengths), start=Fraction(1)
        )
    raise UnsupportedFamilyError(f"no volume formula for family {tag.kind!r}")


def rmet_volume(n: int) -> Fraction:
    """Rooted metric polytope volume: 2^(n-1) (n-1)! / (2n-2)! for n >= 3."""
    if n < 2:
        raise ValueError("need n >= 2")
    if n == 2:
        return Fraction(1)
    return Fraction(2 ** (n - 1) * math.factorial(n - 1), math.factorial(2 * n - 2))


STAR = "star"
PATH = "path"
CYCLE = "cycle"

# Index convention for the suspension formulas, fixed by calibrating against
# lasserre_volume on the suspensions of S_2..S_5, P_2..P_5 and C_3..C_5 (see
# tests/test_exactvol.py): n counts the nodes of the base graph, volumes are
# in 0/1 edge coordinates of the suspension, and the zigzag index is 2n-1.
def suspension_volume(kind: str, n: int) -> Fraction:
    """Exact cut polytope volume of the suspension of a star, path or cycle
    on n nodes.

    star:  2^(n-1) ((n-1)!)^2 / (2n-1)!
    path:  A_{2n-1} / (2n-1)!
    cycle: (n A_{2n-1} - 2^(2n-2)) / (2n)!
    """
    if kind == STAR:
        if n < 2:
            raise ValueError("star needs n >= 2")
        return Fraction(
            2 ** (n - 1) * math.factorial(n - 1) ** 2, math.factorial(2 * n - 1)
        )
    if kind == PATH:
        if n < 2:
            raise ValueError("path needs n >= 2")
        a = andre_numbers(2 * n - 1)
        return Fraction(a[2 * n - 1], math.factorial(2 * n - 1))
    if kind == CYCLE:
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        a = andre_numbers(2 * n - 1)
        return Fraction(n * a[2 * n - 1] - 2 ** (2 * n - 2), math.factorial(2 * n))
    raise ValueError(f"unsupported suspension kind {kind!r}")


def cut_volume(g: gr.Graph, method: str = "auto") -> ExactVolume:
    """Exact cut polytope volume of a graph, by formula or by recursion.

    `formula` uses the closed forms for recognized families; `recursion`
    runs the exact engine on the sparse facet description (complete graphs
    up to K_4 go through the metric polytope, which they equal).  `auto`
    prefers the formula and falls back to recursion.
    """
    tag = gr.classify(g)
    formulaic = tag.kind in (gr.FOREST, gr.CYCLE, gr.CACTUS, gr.NECKLACE)
    if method == "auto":
        method = FORMULA if formulaic else RECURSION
    if method == FORMULA:
        return ExactVolume(formula_volume(tag), FORMULA, tag)
    if method == RECURSION:
        if formulaic:
            return ExactVolume(lasserre_volume(cut_hrep_sparse(g)), RECURSION, tag)
        if tag.kind == gr.COMPLETE and g.n <= 4:
            return ExactVolume(lasserre_volume(met_hrep(g.n)), RECURSION, tag)
        raise UnsupportedFamilyError(
            f"no exact route for family {tag.kind!r} on {g.n} vertices"
        )
    raise ValueError(f"unknown method {method!r}")
