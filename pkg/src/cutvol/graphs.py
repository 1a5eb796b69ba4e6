"""Simple undirected graphs: generators, suspension, and family recognition.

Vertices are labelled 1..n.  Edges are stored as a lexicographically sorted
tuple of pairs (i, j) with i < j.  All graph values are immutable.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ParseError, UnsupportedFamilyError

FOREST = "forest"
CYCLE = "cycle"
CACTUS = "cactus"
NECKLACE = "necklace"
COMPLETE = "complete"
OTHER = "other"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"vertex count must be positive, got {self.n}")
        seen = set()
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
        if list(self.edges) != sorted(self.edges):
            raise ValueError("edges must be sorted lexicographically")

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[set[int]]:
        """1-based adjacency sets (index 0 unused)."""
        adj = [set() for _ in range(self.n + 1)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a Graph from unordered edge pairs, sorting and normalizing."""
    norm = sorted({(i, j) if i < j else (j, i) for i, j in edges})
    return Graph(n, tuple(norm))


@dataclass(frozen=True)
class FamilyTag:
    """Structural classification with the data needed by volume formulas."""

    kind: str
    cycle_length: int | None = None
    cycle_lengths: tuple[int, ...] | None = None
    base_length: int | None = None
    attached_lengths: tuple[int, ...] | None = None

    def __post_init__(self):
        for lens in (self.cycle_lengths, self.attached_lengths):
            if lens is not None and any(k < 3 for k in lens):
                raise ValueError("witness cycle lengths must be >= 3")
        if self.cycle_length is not None and self.cycle_length < 3:
            raise ValueError("cycle length must be >= 3")
        if self.kind == NECKLACE:
            if self.base_length is None or self.attached_lengths is None:
                raise ValueError("necklace tag needs base and attached lengths")
            if len(self.attached_lengths) != self.base_length:
                raise ValueError("necklace needs one attached cycle per base vertex")


def make_complete(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Graph(n, tuple(combinations(range(1, n + 1), 2)))


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    return graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def make_path(n: int) -> Graph:
    if n < 2:
        raise ValueError(f"path needs n >= 2, got {n}")
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def make_star(n: int) -> Graph:
    """Star on n vertices with center 1."""
    if n < 2:
        raise ValueError(f"star needs n >= 2, got {n}")
    return Graph(n, tuple((1, i) for i in range(2, n + 1)))


def make_cactus(cycles: Sequence[int], tree_edges: int = 0) -> Graph:
    """Cactus with the given cycle lengths plus pendant tree edges.

    The first cycle occupies vertices 1..cycles[0]; each later cycle and each
    pendant edge attaches at the lowest-index vertex not yet used as an
    attachment point, so construction is deterministic.  The contract is the
    isomorphism class, not the labelling.
    """
    if not cycles:
        raise ValueError("a cactus needs at least one cycle")
    if any(k < 3 for k in cycles):
        raise ValueError("cycle lengths must be >= 3")
    if tree_edges < 0:
        raise ValueError("tree_edges must be >= 0")
    edges: list[tuple[int, int]] = []
    k0 = cycles[0]
    edges += [(i, i % k0 + 1) for i in range(1, k0 + 1)]
    n = k0
    used_anchors: set[int] = set()
    for k in cycles[1:]:
        anchor = min(v for v in range(1, n + 1) if v not in used_anchors)
        used_anchors.add(anchor)
        ring = [anchor] + list(range(n + 1, n + k))
        n += k - 1
        edges += [(ring[t], ring[(t + 1) % k]) for t in range(k)]
    for _ in range(tree_edges):
        free = [v for v in range(1, n + 1) if v not in used_anchors]
        anchor = min(free) if free else 1
        used_anchors.add(anchor)
        n += 1
        edges.append((anchor, n))
    return graph(n, edges)


def make_necklace(base: int, attached: Sequence[int]) -> Graph:
    """Cycle of length `base` with one cycle appended at each of its vertices."""
    if base < 3:
        raise ValueError(f"necklace base needs length >= 3, got {base}")
    if len(attached) != base:
        raise ValueError(f"need exactly {base} attached cycles, got {len(attached)}")
    if any(k < 3 for k in attached):
        raise ValueError("attached cycle lengths must be >= 3")
    edges = [(i, i % base + 1) for i in range(1, base + 1)]
    n = base
    for v, k in enumerate(attached, start=1):
        ring = [v] + list(range(n + 1, n + k))
        n += k - 1
        edges += [(ring[t], ring[(t + 1) % k]) for t in range(k)]
    return graph(n, edges)


def suspension(g: Graph) -> Graph:
    """Add apex vertex n+1 adjacent to every vertex of g."""
    apex = g.n + 1
    return graph(apex, list(g.edges) + [(i, apex) for i in range(1, apex)])


def _connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    adj = g.adjacency()
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def _biconnected_blocks(g: Graph) -> list[list[tuple[int, int]]]:
    """Edge sets of the biconnected components (iterative Hopcroft-Tarjan)."""
    adj = g.adjacency()
    disc = [0] * (g.n + 1)
    low = [0] * (g.n + 1)
    timer = 1
    blocks: list[list[tuple[int, int]]] = []
    estack: list[tuple[int, int]] = []
    for root in range(1, g.n + 1):
        if disc[root]:
            continue
        stack = [(root, 0, iter(adj[root]))]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    parent = 0  # skip the tree edge to the parent exactly once
                    stack[-1] = (v, 0, it)
                    continue
                if not disc[w]:
                    estack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    block = []
                    while estack and disc[estack[-1][0]] >= disc[v]:
                        block.append(estack.pop())
                    if estack:
                        block.append(estack.pop())  # the edge (u, v)
                    if block:
                        blocks.append(block)
    return blocks


def _block_cycle_length(block: list[tuple[int, int]]) -> int | None:
    """Cycle length if a block is a simple cycle, else None (single edges too)."""
    if len(block) == 1:
        return None
    verts: dict[int, int] = {}
    for i, j in block:
        verts[i] = verts.get(i, 0) + 1
        verts[j] = verts.get(j, 0) + 1
    if len(verts) == len(block) and all(d == 2 for d in verts.values()):
        return len(block)
    return None


def classify(g: Graph) -> FamilyTag:
    """Recognize forests, cycles, cacti, necklaces and complete graphs.

    Precedence on overlaps is forest, cycle, complete, necklace, cactus (so
    K_3 reports as a cycle).  Everything else is `other`.
    """
    adj = g.adjacency()
    connected = _connected(g)
    blocks = _biconnected_blocks(g)
    cyc_lens = [_block_cycle_length(b) for b in blocks]
    acyclic = all(len(b) == 1 for b in blocks)
    if acyclic:
        return FamilyTag(FOREST)
    if connected and g.m == g.n and all(len(adj[v]) == 2 for v in range(1, g.n + 1)):
        return FamilyTag(CYCLE, cycle_length=g.n)
    if g.m == g.n * (g.n - 1) // 2:
        return FamilyTag(COMPLETE)
    if not connected or any(c is None and len(b) > 1 for c, b in zip(cyc_lens, blocks)):
        return FamilyTag(OTHER)
    # from here on: a cactus; see if the block incidence pattern is a necklace
    tag = _necklace_tag(g, blocks, cyc_lens)
    if tag is not None:
        return tag
    lens = tuple(sorted((c for c in cyc_lens if c is not None), reverse=True))
    return FamilyTag(CACTUS, cycle_lengths=lens)


def _necklace_tag(g, blocks, cyc_lens) -> FamilyTag | None:
    if any(c is None for c in cyc_lens):
        return None  # bridges disqualify a necklace
    vert_blocks: dict[int, list[int]] = {}
    block_verts: list[set[int]] = []
    for bi, b in enumerate(blocks):
        vs = set()
        for i, j in b:
            vs.update((i, j))
        block_verts.append(vs)
        for v in vs:
            vert_blocks.setdefault(v, []).append(bi)
    for bi, base in enumerate(block_verts):
        if len(blocks) != len(base) + 1:
            continue
        if not all(len(vert_blocks[v]) == 2 for v in base):
            continue
        ok = True
        for bj, other in enumerate(block_verts):
            if bj == bi:
                continue
            if len(other & base) != 1:
                ok = False
                break
            if any(len(vert_blocks[v]) != 1 for v in other - base):
                ok = False
                break
        if not ok:
            continue
        anchor_len = sorted(
            (min(other & base), cyc_lens[bj])
            for bj, other in enumerate(block_verts)
            if bj != bi
        )
        return FamilyTag(
            NECKLACE,
            base_length=cyc_lens[bi],
            attached_lengths=tuple(length for _, length in anchor_len),
        )
    return None


def induced_cycles(g: Graph) -> list[list[int]]:
    """Induced cycles as vertex sequences, one per biconnected cycle block.

    Only defined for forests, cycles, cacti and necklaces, where the induced
    cycles are exactly the cycle blocks.
    """
    kind = classify(g).kind
    if kind not in (FOREST, CYCLE, CACTUS, NECKLACE):
        raise UnsupportedFamilyError(
            f"induced cycles unsupported for family {kind!r}"
        )
    cycles = []
    for block in _biconnected_blocks(g):
        if _block_cycle_length(block) is None:
            continue
        nbr: dict[int, list[int]] = {}
        for i, j in block:
            nbr.setdefault(i, []).append(j)
            nbr.setdefault(j, []).append(i)
        start = min(nbr)
        seq = [start, min(nbr[start])]
        while len(seq) < len(block):
            a, b = seq[-2], seq[-1]
            seq.append(nbr[b][0] if nbr[b][0] != a else nbr[b][1])
        cycles.append(seq)
    cycles.sort(key=lambda c: (len(c), c))
    return cycles


def write_graph(g: Graph, sink) -> None:
    """Write the text format: first line "n m", then one "i j" line per edge."""
    own = isinstance(sink, (str, bytes))
    f = open(sink, "w") if own else sink
    try:
        f.write(f"{g.n} {g.m}\n")
        for i, j in g.edges:
            f.write(f"{i} {j}\n")
    finally:
        if own:
            f.close()


def read_graph(source) -> Graph:
    own = isinstance(source, (str, bytes))
    f = open(source) if own else source
    try:
        lines = f.read().splitlines()
    finally:
        if own:
            f.close()
    rows = [(k + 1, line.split()) for k, line in enumerate(lines) if line.strip()]
    if not rows:
        raise ParseError("empty graph file", 1)
    ln, head = rows[0]
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise ParseError("expected header 'n m'", ln)
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise ParseError(f"expected {m} edge lines, found {len(rows) - 1}", ln)
    edges = []
    for ln, toks in rows[1:]:
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise ParseError("expected edge line 'i j'", ln)
        i, j = int(toks[0]), int(toks[1])
        if i == j:
            raise ParseError("self-loops not allowed", ln)
        edges.append((i, j))
    try:
        return graph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc), rows[0][0]) from exc


def graph_to_text(g: Graph) -> str:
    buf = io.StringIO()
    write_graph(g, buf)
    return buf.getvalue()
