import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import alternating_count, grid_volume_bracket
from cutvol import exactvol as ev
from cutvol import graphs as gr
from cutvol import polytope as pt
from cutvol.errors import SizeLimitError, UnboundedPolytopeError, UnsupportedFamilyError


def _box_rows(d):
    rows = []
    for j in range(d):
        a = [0] * d
        a[j] = 1
        rows.append((list(a), 1))
        a[j] = -1
        rows.append((a, 0))
    return rows


def test_unit_cube_volume(unit_cube):
    assert ev.lasserre_volume(unit_cube(3)) == 1
    assert ev.lasserre_volume(unit_cube(6)) == 1


def test_standard_simplex_volume():
    # x >= 0, sum x <= 1 has volume 1/d!
    for d in (2, 3, 4, 5):
        rows = [([1] * d, 1)]
        for j in range(d):
            a = [0] * d
            a[j] = -1
            rows.append((a, 0))
        h = pt.HPolytope.from_rows(d, rows)
        assert ev.lasserre_volume(h) == Fraction(1, math.factorial(d))


def test_shifted_simplex_with_origin_outside():
    # translate the triangle x,y >= 1, x+y <= 3 away from the origin
    h = pt.HPolytope.from_rows(2, [([-1, 0], -1), ([0, -1], -1), ([1, 1], 3)])
    assert ev.lasserre_volume(h) == Fraction(1, 2)


def test_met_small_volumes():
    assert ev.lasserre_volume(pt.met_hrep(3)) == Fraction(1, 3)
    assert ev.lasserre_volume(pt.met_hrep(4)) == Fraction(2, 45)


@pytest.mark.slow
def test_met5_volume():
    assert ev.lasserre_volume(pt.met_hrep(5)) == Fraction(4, 1701)


def test_rmet4_volume():
    assert ev.lasserre_volume(pt.rmet_hrep(4)) == Fraction(1, 15)


def test_cycle_volumes_engine_vs_formula():
    for n in (3, 4, 5, 6):
        engine = ev.lasserre_volume(pt.cut_hrep_sparse(gr.make_cycle(n)))
        assert engine == ev.cycle_volume(n)
        assert engine == 1 - Fraction(2 ** (n - 1), math.factorial(n))


def test_c4_volume_against_grid_bracket():
    h = pt.cut_hrep_sparse(gr.make_cycle(4))
    lo, hi = grid_volume_bracket(h, 8)
    assert lo <= Fraction(2, 3) <= hi
    assert ev.lasserre_volume(h) == Fraction(2, 3)


def test_product_law_cube_times_triangle():
    # block-diagonal rows multiply volumes: [0,1]^2 x simplex(2)
    rows = _box_rows(2)
    rows = [(a + [0, 0], b) for a, b in rows]
    rows.append(([0, 0, 1, 1], 1))
    rows.append(([0, 0, -1, 0], 0))
    rows.append(([0, 0, 0, -1], 0))
    h = pt.HPolytope.from_rows(4, rows)
    assert ev.lasserre_volume(h) == Fraction(1, 2)


def test_two_triangles_sharing_vertex():
    g = gr.make_cactus([3, 3])
    h = pt.cut_hrep_sparse(g)
    assert ev.lasserre_volume(h) == Fraction(1, 9)
    assert ev.formula_volume(gr.classify(g)) == Fraction(1, 9)


@pytest.mark.parametrize(
    "g",
    [gr.make_cactus([4, 3]), gr.make_necklace(3, [3, 3, 3])],
    ids=["cactus43", "neck3"],
)
def test_formula_vs_recursion_small_families(g):
    assert ev.formula_volume(gr.classify(g)) == ev.lasserre_volume(
        pt.cut_hrep_sparse(g)
    )


def test_row_permutation_and_scaling_invariance():
    h = pt.met_hrep(4)
    base = ev.lasserre_volume(h)
    scaled = pt.HPolytope.from_rows(
        h.dim,
        [
            ([Fraction(c * s, 7) for c in a], Fraction(b * s, 7))
            for s, (a, b) in zip((2, 3, 5, 11, 13) * 4, reversed(h.rows))
        ],
    )
    assert ev.lasserre_volume(scaled) == base


def test_volumes_bounded_by_unit_cube():
    for g in (gr.make_cycle(4), gr.make_cactus([3, 3]), gr.make_path(4)):
        v = ev.lasserre_volume(pt.cut_hrep_sparse(g))
        assert 0 <= v <= 1


def test_unbounded_and_size_limit_errors():
    halfspace = pt.HPolytope(2, (((1, 0), 1), ((0, 1), 1)))
    with pytest.raises(UnboundedPolytopeError):
        ev.lasserre_volume(halfspace)
    with pytest.raises(SizeLimitError):
        ev.lasserre_volume(pt.met_hrep(6))  # dim 15 above the default cap


def test_formula_volume_family_values():
    assert ev.formula_volume(gr.classify(gr.make_path(7))) == 1
    assert ev.formula_volume(gr.classify(gr.make_star(5))) == 1
    fig3 = gr.make_cactus([8, 7, 4, 4, 4, 4, 3], tree_edges=6)
    want = (
        Fraction(314, 315)
        * Fraction(311, 315)
        * Fraction(2, 3) ** 4
        * Fraction(1, 3)
    )
    assert ev.formula_volume(gr.classify(fig3)) == want
    neck = gr.make_necklace(8, [3] * 8)
    assert ev.formula_volume(gr.classify(neck)) == Fraction(314, 315) / 3**8
    with pytest.raises(UnsupportedFamilyError):
        ev.formula_volume(gr.classify(gr.make_complete(5)))


def test_rmet_volume_values():
    assert ev.rmet_volume(2) == 1
    assert ev.rmet_volume(3) == Fraction(1, 3)
    assert ev.rmet_volume(4) == Fraction(1, 15)
    assert ev.rmet_volume(5) == Fraction(1, 105)
    assert ev.rmet_volume(6) == Fraction(1, 945)


def test_rmet_consecutive_ratio():
    for n in range(2, 12):
        assert ev.rmet_volume(n + 2) == ev.rmet_volume(n + 1) / (2 * n + 1)


def test_andre_numbers():
    table = ev.andre_numbers(9)
    assert table.values == (1, 1, 1, 2, 5, 16, 61, 272, 1385, 7936)
    assert table[5] == 16 and table[7] == 272


@pytest.mark.parametrize("n", range(0, 9))
def test_andre_against_enumeration(n):
    assert ev.andre_numbers(n)[n] == alternating_count(n)


@settings(max_examples=20, deadline=None)
@given(k=st.integers(3, 60))
def test_andre_strictly_increasing(k):
    vals = ev.andre_numbers(k).values
    assert all(vals[i] > vals[i - 1] for i in range(3, k + 1))


# The index convention of the closed suspension formulas, pinned against the
# recursive engine: n counts base-graph nodes, zigzag index 2n-1, volumes in
# 0/1 coordinates of the suspension's edge space.


def _suspension_hrep(base: gr.Graph, base_cycles):
    susp = gr.suspension(base)
    idx = {e: c for c, e in enumerate(susp.edges)}
    rows = []
    for c in range(susp.m):
        a = [0] * susp.m
        a[c] = 1
        rows.append((list(a), 1))
        a[c] = -1
        rows.append((a, 0))
    cycles = [
        [(i, j), (i, base.n + 1), (j, base.n + 1)] for i, j in base.edges
    ] + base_cycles
    for cyc in cycles:
        edges = [idx[(min(i, j), max(i, j))] for i, j in cyc]
        k = len(edges)
        for fmask in range(1 << k):
            fbits = [t for t in range(k) if (fmask >> t) & 1]
            if len(fbits) % 2 == 0:
                continue
            a = [0] * susp.m
            for t, e in enumerate(edges):
                a[e] = 1 if (fmask >> t) & 1 else -1
            rows.append((a, len(fbits) - 1))
    return pt.HPolytope.from_rows(susp.m, rows)


def _rim(n):
    return [(i, i % n + 1) for i in range(1, n + 1)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_star_suspension_calibration(n):
    h = _suspension_hrep(gr.make_star(n) if n > 2 else gr.make_path(2), [])
    assert ev.lasserre_volume(h) == ev.suspension_volume("star", n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_suspension_calibration(n):
    h = _suspension_hrep(gr.make_path(n), [])
    assert ev.lasserre_volume(h) == ev.suspension_volume("path", n)


def test_cycle_suspension_calibration_k4():
    # the suspension of the triangle is K_4
    assert ev.suspension_volume("cycle", 3) == Fraction(2, 45)
    assert ev.lasserre_volume(pt.met_hrep(4)) == Fraction(2, 45)


@pytest.mark.slow
def test_cycle_suspension_calibration_wheel5():
    h = _suspension_hrep(gr.make_cycle(4), [_rim(4)])
    assert ev.lasserre_volume(h) == ev.suspension_volume("cycle", 4)


@pytest.mark.slow
@pytest.mark.parametrize("kind,n", [("star", 5), ("path", 5)])
def test_suspension_calibration_larger(kind, n):
    base = gr.make_star(n) if kind == "star" else gr.make_path(n)
    h = _suspension_hrep(base, [])
    assert ev.lasserre_volume(h) == ev.suspension_volume(kind, n)


def test_suspension_volume_values():
    assert ev.suspension_volume("star", 2) == Fraction(1, 3)
    assert ev.suspension_volume("path", 2) == Fraction(1, 3)
    assert ev.suspension_volume("star", 3) == Fraction(2, 15)
    assert ev.suspension_volume("path", 3) == Fraction(2, 15)
    with pytest.raises(ValueError):
        ev.suspension_volume("wheel", 4)
    with pytest.raises(ValueError):
        ev.suspension_volume("cycle", 2)


def test_cut_volume_dispatch():
    res = ev.cut_volume(gr.make_cycle(5))
    assert res.value == Fraction(13, 15) and res.method == ev.FORMULA
    res = ev.cut_volume(gr.make_cycle(4), "recursion")
    assert res.value == Fraction(2, 3) and res.method == ev.RECURSION
    res = ev.cut_volume(gr.make_complete(4), "recursion")
    assert res.value == Fraction(2, 45)
    with pytest.raises(UnsupportedFamilyError):
        ev.cut_volume(gr.make_complete(5), "recursion")
