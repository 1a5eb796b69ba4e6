"""Cut, metric and rooted-metric polytopes, the transformed elliptope, and
polyhedron file IO.

Exact rational data is carried by `fractions.Fraction` throughout: always
reduced, positive denominator, canonical zero.  H-polytope rows are
normalized to coprime integer coefficients (scaled by a positive rational
only, so the inequality orientation is preserved) and deduplicated; the
sorted row tuple doubles as a canonical key for the exact volume engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import graphs as gr
from .errors import (
    ParseError,
    SizeLimitError,
    UnsupportedFamilyError,
    UnsupportedGraphError,
)
from .rng import SplitMix64

Label = tuple[int, int]
IntRow = tuple[tuple[int, ...], int]

DEFAULT_PSD_TOL = 1e-10


def normalize_row(a: Sequence, b) -> IntRow | None:
    """Scale a row a.x <= b by a positive rational to coprime integers.

    Returns None for the trivially true row 0.x <= b with b >= 0 and raises
    for the infeasible all-zero row with b < 0, which has no normal form.
    """
    fracs = [Fraction(v) for v in a]
    fb = Fraction(b)
    if all(v == 0 for v in fracs):
        if fb < 0:
            raise ValueError("infeasible all-zero row has no normal form")
        return None
    scale = math.lcm(*(v.denominator for v in fracs), fb.denominator)
    ints = [int(v * scale) for v in fracs]
    ib = int(fb * scale)
    g = math.gcd(*(abs(v) for v in ints), abs(ib))
    return tuple(v // g for v in ints), ib // g


@dataclass(frozen=True)
class HPolytope:
    """Inequality form {x : a.x <= b for every row (a, b)}."""

    dim: int
    rows: tuple[IntRow, ...]
    coord_labels: tuple[Label, ...] | None = None

    def __post_init__(self):
        for a, _ in self.rows:
            if len(a) != self.dim:
                raise ValueError("row length does not match dimension")
            if all(v == 0 for v in a):
                raise ValueError("all-zero coefficient vector in rows")
        if self.coord_labels is not None and len(self.coord_labels) != self.dim:
            raise ValueError("coordinate label count does not match dimension")

    @classmethod
    def from_rows(cls, dim, rows, coord_labels=None) -> "HPolytope":
        normed = set()
        for a, b in rows:
            r = normalize_row(a, b)
            if r is not None:
                normed.add(r)
        labels = tuple(coord_labels) if coord_labels is not None else None
        return cls(dim, tuple(sorted(normed)), labels)


@dataclass(frozen=True)
class VPolytope:
    """Vertex form, the convex hull of exact rational points."""

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    coord_labels: tuple[Label, ...] | None = None

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertices must be distinct")
        for v in self.vertices:
            if len(v) != self.dim:
                raise ValueError("vertex length does not match dimension")


@dataclass(frozen=True)
class SymMatrix:
    """Dense symmetric matrix; unit diagonal when it represents a correlation."""

    n: int
    entries: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.entries) != self.n or any(len(r) != self.n for r in self.entries):
            raise ValueError("entries must be n x n")
        for i in range(self.n):
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise ValueError("entries must be symmetric")


def edge_labels(g: gr.Graph) -> tuple[Label, ...]:
    return g.edges


def cut_vertices(g: gr.Graph) -> VPolytope:
    """All 2^(n-1) cut vectors of g, one per subset S of [n-1]."""
    if g.n < 2:
        raise ValueError("cut polytope needs n >= 2")
    if g.n > 30:
        raise SizeLimitError(f"2^{g.n - 1} cut vertices is beyond the size cap")
    one, zero = Fraction(1), Fraction(0)
    verts = []
    for s in range(1 << (g.n - 1)):
        verts.append(
            tuple(
                one if ((s >> (i - 1)) & 1) != ((s >> (j - 1)) & 1) else zero
                for i, j in g.edges
            )
        )
    # bit i-1 of s encodes membership of vertex i in S; vertex n is never in S
    return VPolytope(len(g.edges), tuple(verts), g.edges)


def _triangle_rows(dim, idx, i, j, k):
    e_ij, e_ik, e_jk = idx[(i, j)], idx[(i, k)], idx[(j, k)]
    rows = []
    for p, q, r in ((e_ij, e_ik, e_jk), (e_ik, e_ij, e_jk), (e_jk, e_ij, e_ik)):
        a = [0] * dim
        a[p], a[q], a[r] = 1, -1, -1
        rows.append((a, 0))
    a = [0] * dim
    a[e_ij] = a[e_ik] = a[e_jk] = 1
    rows.append((a, 2))
    return rows


def met_hrep(n: int) -> HPolytope:
    """Metric polytope: all triangle inequalities on the complete graph."""
    if n < 2:
        raise ValueError("metric polytope needs n >= 2")
    if n == 2:
        return HPolytope.from_rows(1, [((1,), 1), ((-1,), 0)], ((1, 2),))
    labels = tuple(combinations(range(1, n + 1), 2))
    idx = {e: c for c, e in enumerate(labels)}
    dim = len(labels)
    rows = []
    for i, j, k in combinations(range(1, n + 1), 3):
        rows += _triangle_rows(dim, idx, i, j, k)
    return HPolytope.from_rows(dim, rows, labels)


def rmet_hrep(n: int) -> HPolytope:
    """Rooted metric polytope: triangle inequalities through root vertex n."""
    if n < 3:
        raise ValueError("rooted metric polytope needs n >= 3")
    labels = tuple(combinations(range(1, n + 1), 2))
    idx = {e: c for c, e in enumerate(labels)}
    dim = len(labels)
    rows = []
    for i, j in combinations(range(1, n), 2):
        rows += _triangle_rows(dim, idx, i, j, n)
    return HPolytope.from_rows(dim, rows, labels)


def _box_rows(dim):
    rows = []
    for c in range(dim):
        a = [0] * dim
        a[c] = 1
        rows.append((list(a), 1))
        a[c] = -1
        rows.append((a, 0))
    return rows


def _cycle_rows(dim, cycle_edge_idx):
    """Odd-subset cycle inequalities for one cycle given by edge indices."""
    rows = []
    k = len(cycle_edge_idx)
    for fmask in range(1 << k):
        fbits = [t for t in range(k) if (fmask >> t) & 1]
        if len(fbits) % 2 == 0:
            continue
        a = [0] * dim
        for t, e in enumerate(cycle_edge_idx):
            a[e] = 1 if (fmask >> t) & 1 else -1
        rows.append((a, len(fbits) - 1))
    return rows


def cut_hrep_sparse(g: gr.Graph) -> HPolytope:
    """Facet description of the cut polytope of a K5-minor-free sparse family.

    Box bounds on every edge plus, for each induced cycle C and odd F inside
    it, sum(F) - sum(C minus F) <= |F| - 1.  Redundant box rows are retained.
    """
    tag = gr.classify(g)
    if tag.kind not in (gr.FOREST, gr.CYCLE, gr.CACTUS, gr.NECKLACE):
        raise UnsupportedFamilyError(
            f"no sparse facet description for family {tag.kind!r}"
        )
    idx = {e: c for c, e in enumerate(g.edges)}
    dim = len(g.edges)
    rows = _box_rows(dim)
    for cyc in gr.induced_cycles(g):
        eidx = []
        for t in range(len(cyc)):
            i, j = cyc[t], cyc[(t + 1) % len(cyc)]
            eidx.append(idx[(i, j) if i < j else (j, i)])
        rows += _cycle_rows(dim, eidx)
    return HPolytope.from_rows(dim, rows, g.edges)


def cor_labels(g: gr.Graph) -> tuple[Label, ...]:
    return tuple((i, i) for i in range(1, g.n + 1)) + g.edges


def cor_vertices(g: gr.Graph) -> VPolytope:
    """Correlation vectors y^S for all S subsets of [n], in dim |V| + |E|."""
    if g.n < 1:
        raise ValueError("correlation polytope needs n >= 1")
    if g.n > 29:
        raise SizeLimitError(f"2^{g.n} correlation vertices is beyond the size cap")
    labels = cor_labels(g)
    one, zero = Fraction(1), Fraction(0)
    verts = []
    for s in range(1 << g.n):
        diag = [(s >> (i - 1)) & 1 for i in range(1, g.n + 1)]
        v = [one if diag[i - 1] else zero for i in range(1, g.n + 1)]
        v += [
            one if diag[i - 1] and diag[j - 1] else zero for i, j in g.edges
        ]
        verts.append(tuple(v))
    return VPolytope(len(labels), tuple(verts), labels)


def covariance_map(y: Mapping[Label, object], g: gr.Graph) -> dict[Label, Fraction]:
    """Map a correlation point of g to a cut point of suspension(g).

    x_{i,n+1} = y_ii and x_ij = y_ii + y_jj - 2 y_ij; the inverse is
    `covariance_map_inverse`.
    """
    apex = g.n + 1
    x: dict[Label, Fraction] = {}
    for i in range(1, g.n + 1):
        x[(i, apex)] = Fraction(y[(i, i)])
    for i, j in g.edges:
        x[(i, j)] = Fraction(y[(i, i)]) + Fraction(y[(j, j)]) - 2 * Fraction(y[(i, j)])
    return x


def covariance_map_inverse(x: Mapping[Label, object], g: gr.Graph) -> dict[Label, Fraction]:
    apex = g.n + 1
    y: dict[Label, Fraction] = {}
    for i in range(1, g.n + 1):
        y[(i, i)] = Fraction(x[(i, apex)])
    for i, j in g.edges:
        y[(i, j)] = (y[(i, i)] + y[(j, j)] - Fraction(x[(i, j)])) / 2
    return y


def _is_exact_point(x) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in x)


def _psd_by_pivoted_ldl(m: list[list], exact: bool, tol: float) -> bool:
    """Positive semidefiniteness via symmetric elimination with diagonal
    pivoting: always eliminate on the largest remaining diagonal entry.

    In exact arithmetic a symmetric matrix is PSD iff the largest remaining
    diagonal never goes negative and, once it reaches zero, the whole
    remaining block is zero.  The float path relaxes both checks by tol.
    """
    active = list(range(len(m)))
    lo = 0 if exact else -tol
    hi = 0 if exact else tol
    while active:
        p = max(active, key=lambda k: m[k][k])
        d = m[p][p]
        if d < lo:
            return False
        if d <= hi:
            return all(abs(m[i][j]) <= hi for i in active for j in active)
        active.remove(p)
        for i in active:
            f = m[i][p] / d
            for j in active:
                m[i][j] -= f * m[p][j]
    return True


def elliptope_contains(x: Sequence, g: gr.Graph, tol: float = DEFAULT_PSD_TOL) -> bool:
    """Membership of an edge-indexed point in the 0/1-transformed elliptope.

    For complete graphs this builds Y with unit diagonal and y_ij = 1 - 2 x_ij
    and tests positive semidefiniteness (exact rational elimination when the
    input is rational, tolerance `tol` otherwise).  For forests the matrix is
    always completable, so membership reduces to 0 <= x_e <= 1.
    """
    if len(x) != g.m:
        raise ValueError("point length does not match edge count")
    tag = gr.classify(g)
    exact = _is_exact_point(x)
    if tag.kind == gr.FOREST:
        if exact:
            return all(0 <= Fraction(v) <= 1 for v in x)
        return all(-tol <= float(v) <= 1 + tol for v in x)
    if tag.kind == gr.COMPLETE or (tag.kind == gr.CYCLE and g.n == 3):
        idx = {e: c for c, e in enumerate(g.edges)}
        if exact:
            one = Fraction(1)
            m = [[one] * g.n for _ in range(g.n)]
        else:
            m = [[1.0] * g.n for _ in range(g.n)]
        for (i, j), c in idx.items():
            v = (1 - 2 * Fraction(x[c])) if exact else (1.0 - 2.0 * float(x[c]))
            m[i - 1][j - 1] = v
            m[j - 1][i - 1] = v
        return _psd_by_pivoted_ldl(m, exact, tol)
    raise UnsupportedGraphError(
        f"elliptope membership needs a complete graph or a forest, got {tag.kind!r}"
    )


def cos_map_check(g: gr.Graph, samples: int, seed: int) -> bool:
    """Check that the entrywise cosine map sends the cut polytope into the
    elliptope, on random convex combinations of cut vertices.

    Supported on forests and K_3 (the completable, K4-minor-free cases).
    """
    tag = gr.classify(g)
    if not (tag.kind == gr.FOREST or (tag.kind in (gr.CYCLE, gr.COMPLETE) and g.n == 3)):
        raise UnsupportedGraphError(
            "cosine map check needs a forest or K_3, got "
            f"{tag.kind!r} on {g.n} vertices"
        )
    verts = [[float(v) for v in vert] for vert in cut_vertices(g).vertices]
    rng = SplitMix64(seed)
    for _ in range(samples):
        w = [rng.uniform() for _ in verts]
        tot = sum(w)
        a = [sum(wk * vk[c] for wk, vk in zip(w, verts)) / tot for c in range(g.m)]
        x = [(1.0 - math.cos(math.pi * ac)) / 2.0 for ac in a]
        if not elliptope_contains(x, g):
            return False
    return True


# ---------------------------------------------------------------------------
# lrs-compatible file IO.  An .ine row "b -a_1 ... -a_d" encodes b - a.x >= 0,
# an .ext row "1 v_1 ... v_d" one vertex; rationals print as p/q (q=1 omitted).


def _fmt(q: Fraction) -> str:
    return str(q)


def write_ine(h: HPolytope, sink) -> None:
    own = isinstance(sink, (str, bytes))
    f = open(sink, "w") if own else sink
    try:
        f.write("cutvol\nH-representation\nbegin\n")
        f.write(f"{len(h.rows)} {h.dim + 1} rational\n")
        for a, b in h.rows:
            f.write(" ".join([str(b)] + [str(-v) for v in a]) + "\n")
        f.write("end\n")
    finally:
        if own:
            f.close()


def write_ext(v: VPolytope, sink) -> None:
    own = isinstance(sink, (str, bytes))
    f = open(sink, "w") if own else sink
    try:
        f.write("cutvol\nV-representation\nbegin\n")
        f.write(f"{len(v.vertices)} {v.dim + 1} rational\n")
        for vert in v.vertices:
            f.write(" ".join(["1"] + [_fmt(c) for c in vert]) + "\n")
        f.write("end\n")
    finally:
        if own:
            f.close()


def _parse_rational(tok: str, line: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {tok!r}", line) from exc


def _read_body(source, kind: str):
    own = isinstance(source, (str, bytes))
    f = open(source) if own else source
    try:
        lines = f.read().splitlines()
    finally:
        if own:
            f.close()
    rows = [(k + 1, ln.strip()) for k, ln in enumerate(lines) if ln.strip()]
    pos = 0
    if pos >= len(rows):
        raise ParseError("empty file", 1)
    if rows[pos][1] != kind:
        pos += 1  # first line is a free-form name
    if pos >= len(rows) or rows[pos][1] != kind:
        raise ParseError(f"expected {kind!r}", rows[min(pos, len(rows) - 1)][0])
    pos += 1
    if pos >= len(rows) or rows[pos][1] != "begin":
        raise ParseError("expected 'begin'", rows[min(pos, len(rows) - 1)][0])
    pos += 1
    if pos >= len(rows):
        raise ParseError("missing size line", rows[-1][0])
    ln, size = rows[pos]
    toks = size.split()
    if len(toks) != 3 or toks[2] not in ("rational", "integer"):
        raise ParseError("expected 'm d+1 rational'", ln)
    try:
        m, d1 = int(toks[0]), int(toks[1])
    except ValueError as exc:
        raise ParseError("expected 'm d+1 rational'", ln) from exc
    pos += 1
    body = []
    for _ in range(m):
        if pos >= len(rows):
            raise ParseError(f"expected {m} data rows", rows[-1][0])
        ln, text = rows[pos]
        toks = text.split()
        if len(toks) != d1:
            raise ParseError(f"expected {d1} fields, found {len(toks)}", ln)
        body.append((ln, [_parse_rational(t, ln) for t in toks]))
        pos += 1
    if pos >= len(rows) or rows[pos][1] != "end":
        raise ParseError("expected 'end'", rows[min(pos, len(rows) - 1)][0])
    return body, d1 - 1


def read_ine(source) -> HPolytope:
    body, dim = _read_body(source, "H-representation")
    rows = []
    for _, vals in body:
        b, rest = vals[0], vals[1:]
        rows.append(([-v for v in rest], b))
    return HPolytope.from_rows(dim, rows)


def read_ext(source) -> VPolytope:
    body, dim = _read_body(source, "V-representation")
    verts = []
    for ln, vals in body:
        if vals[0] != 1:
            raise ParseError("only vertex rows (leading 1) are supported", ln)
        verts.append(tuple(vals[1:]))
    return VPolytope(dim, tuple(verts))
