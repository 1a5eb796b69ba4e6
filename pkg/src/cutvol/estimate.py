"""Monte Carlo volume estimation: hit-and-run inside a sequence of balls.

A run translates the body so the Chebyshev center sits at the origin, grows
balls B_0 c B_1 c ... until the body is covered, and telescopes
vol(body) = vol(body n B_0) * prod_k vol(body n B_{k+1}) / vol(body n B_k),
estimating each factor by walking in the larger intersection and counting
hits in the smaller ball.  For H-polytopes B_0 is the inscribed Chebyshev
ball; for V-polytopes the innermost factor is corrected by rejection, so the
probed starting radius does not need to be certified as inscribed.

Runs are aggregated into the six-number summary EstimateStats.  Each run
owns PRNG stream `seed + run index`, so results are identical no matter how
runs are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import _backend
from .errors import EmptyPolytopeError, InvalidStartError, SizeLimitError
from .lp import LPResult, chebyshev_center, coordinate_bounds, in_convex_hull, simplex_eq
from .polytope import HPolytope, VPolytope
from .rng import SplitMix64, stream_base

__all__ = [
    "WalkConfig",
    "EstimateStats",
    "LPResult",
    "chebyshev_center",
    "hit_and_run",
    "sob_volume",
    "vpolytope_estimate",
    "elliptope_rejection",
]

COORDINATE = "coordinate"
RANDOM = "random"
_MODES = {COORDINATE: _backend.COORDINATE, RANDOM: _backend.RANDOM}


@dataclass(frozen=True)
class WalkConfig:
    """Estimator tuning knobs; None fields resolve to dimension defaults
    walk_len = 10 + d, samples_per_phase = 400 d, radius_growth = 4^(1/d)."""

    seed: int = 0
    runs: int = 20
    walk_len: int | None = None
    samples_per_phase: int | None = None
    radius_growth: float | None = None
    direction: str = COORDINATE

    def resolve(self, dim: int) -> "WalkConfig":
        cfg = replace(
            self,
            walk_len=self.walk_len if self.walk_len is not None else 10 + dim,
            samples_per_phase=(
                self.samples_per_phase
                if self.samples_per_phase is not None
                else 400 * dim
            ),
            radius_growth=(
                self.radius_growth
                if self.radius_growth is not None
                else min(4.0 ** (1.0 / dim), 2.0)
            ),
        )
        if cfg.walk_len < 1:
            raise ValueError("walk_len must be >= 1")
        if cfg.samples_per_phase < 100:
            raise ValueError("samples_per_phase must be >= 100")
        if not 1.0 < cfg.radius_growth <= 2.0:
            raise ValueError("radius_growth must lie in (1, 2]")
        if cfg.runs < 1:
            raise ValueError("runs must be >= 1")
        if cfg.direction not in _MODES:
            raise ValueError(f"unknown direction {cfg.direction!r}")
        return cfg


@dataclass(frozen=True)
class EstimateStats:
    """Six-number summary of repeated volume estimates (volume scale)."""

    n_runs: int
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float

    def __post_init__(self):
        if not (self.min <= self.q1 <= self.median <= self.q3 <= self.max):
            raise ValueError("order statistics out of order")
        if not (self.min <= self.mean <= self.max):
            raise ValueError("mean must lie between min and max")

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "EstimateStats":
        vals = sorted(float(v) for v in values)
        if not vals:
            raise ValueError("need at least one estimate")

        def quantile(p: float) -> float:
            h = (len(vals) - 1) * p
            lo = math.floor(h)
            hi = math.ceil(h)
            return vals[lo] + (h - lo) * (vals[hi] - vals[lo])

        return cls(
            n_runs=len(vals),
            min=vals[0],
            q1=quantile(0.25),
            median=quantile(0.5),
            mean=math.fsum(vals) / len(vals),
            q3=quantile(0.75),
            max=vals[-1],
        )


def ball_log_volume(d: int, r: float) -> float:
    """log of the d-ball volume pi^(d/2) r^d / Gamma(d/2 + 1)."""
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0) + d * math.log(r)


def _float_rows(h: HPolytope):
    A = np.array([[float(v) for v in a] for a, _ in h.rows], dtype=np.float64)
    b = np.array([float(bb) for _, bb in h.rows], dtype=np.float64)
    return A, b


def hit_and_run(
    h: HPolytope,
    x0: Sequence[float],
    steps: int,
    rng: SplitMix64 | int,
    direction: str = COORDINATE,
) -> np.ndarray:
    """Walk `steps` hit-and-run steps from the strictly interior point x0.

    `rng` is a SplitMix64 stream (advanced in place) or a bare seed.
    """
    A, b = _float_rows(h)
    x0 = np.asarray(x0, dtype=np.float64)
    if (b - A @ x0).min() <= 0.0:
        raise InvalidStartError("start point is not strictly interior")
    stream = SplitMix64(rng) if isinstance(rng, int) else rng
    x, counter = _backend.walk_h(
        A, b, x0, steps, 0.0, _MODES[direction], stream.base, stream.counter
    )
    stream.counter = counter
    return x


def _radii_schedule(r0: float, r_max: float, growth: float) -> np.ndarray:
    radii = [r0]
    while radii[-1] < r_max:
        radii.append(radii[-1] * growth)
    return np.array(radii)


def _run_estimates(runner, cfg: WalkConfig, workers: int) -> list[float]:
    if workers <= 1:
        return [runner(i) for i in range(cfg.runs)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(runner, range(cfg.runs)))


def sob_volume(h: HPolytope, cfg: WalkConfig = WalkConfig(), workers: int = 1) -> EstimateStats:
    """Sequence-of-balls volume estimate of a bounded full-dimensional
    H-polytope, aggregated over cfg.runs independent runs."""
    cfg = cfg.resolve(h.dim)
    A, b = _float_rows(h)
    center, r0 = chebyshev_center(h)
    if r0 <= 1e-12:
        raise EmptyPolytopeError("polytope is not full-dimensional")
    lo, hi = coordinate_bounds(h)
    r_max = math.sqrt(float(np.sum(np.maximum(hi - center, center - lo) ** 2)))
    b_shift = b - A @ center
    radii = _radii_schedule(r0, r_max, cfg.radius_growth)
    log_b0 = ball_log_volume(h.dim, r0)
    mode = _MODES[cfg.direction]

    def one_run(i: int) -> float:
        counts = _backend.sob_h_run(
            A, b_shift, radii, cfg.walk_len, cfg.samples_per_phase,
            mode, stream_base(cfg.seed, i),
        )
        log_est = log_b0
        for c in counts:
            log_est += math.log(cfg.samples_per_phase) - math.log(max(int(c), 1))
        return math.exp(log_est)

    return EstimateStats.from_values(_run_estimates(one_run, cfg, workers))


def _ray_extent(V: np.ndarray, direction: np.ndarray) -> float:
    """max t with t*direction in conv(rows of V), via one LP."""
    N, d = V.shape
    Aeq = np.zeros((d + 1, N + 1))
    Aeq[:d, :N] = V.T
    Aeq[:d, N] = -direction
    Aeq[d, :N] = 1.0
    beq = np.zeros(d + 1)
    beq[d] = 1.0
    c = np.zeros(N + 1)
    c[N] = 1.0
    res = simplex_eq(Aeq, beq, c)
    if res.status != "optimal":
        raise EmptyPolytopeError("ray shooting failed; is the center interior?")
    return res.value


def vpolytope_estimate(
    v: VPolytope, cfg: WalkConfig = WalkConfig(), workers: int = 1
) -> EstimateStats:
    """Sequence-of-balls estimate for a V-polytope through its LP membership
    oracle; chords come from exact ray-shooting LPs."""
    if len(v.vertices) > 1 << 16:
        raise SizeLimitError("more than 2^16 vertices")
    cfg = cfg.resolve(v.dim)
    V = np.array([[float(c) for c in vert] for vert in v.vertices])
    center = V.mean(axis=0)
    Vc = V - center
    r_max = float(np.max(np.linalg.norm(Vc, axis=1)))
    if v.dim == 1:
        lo, hi = float(Vc.min()), float(Vc.max())
        return EstimateStats.from_values([hi - lo] * cfg.runs)
    # probed starting radius; it need not be inscribed, the rejection phase
    # over B_0 corrects for any overhang
    ext = []
    for j in range(v.dim):
        e = np.zeros(v.dim)
        e[j] = 1.0
        ext.append(_ray_extent(Vc, e))
        ext.append(_ray_extent(Vc, -e))
    r0 = 0.5 * min(ext)
    if r0 <= 1e-12:
        raise EmptyPolytopeError("vertex centroid is not interior")
    radii = _radii_schedule(r0, r_max, cfg.radius_growth)
    log_b0 = ball_log_volume(v.dim, r0)
    nball = cfg.samples_per_phase
    mode = _MODES[cfg.direction]

    def one_run(i: int) -> float:
        ball_hits, counts = _backend.sob_v_run(
            Vc, radii, cfg.walk_len, cfg.samples_per_phase, nball,
            mode, stream_base(cfg.seed, i),
        )
        log_est = log_b0 + math.log(max(ball_hits, 1)) - math.log(nball)
        for c in counts:
            log_est += math.log(cfg.samples_per_phase) - math.log(max(int(c), 1))
        return math.exp(log_est)

    return EstimateStats.from_values(_run_estimates(one_run, cfg, workers))


def elliptope_rejection(
    n: int, samples: int, seed: int, runs: int = 20
) -> EstimateStats:
    """Acceptance-rate estimate of the transformed elliptope volume.

    Draws uniform points of the unit cube in dimension C(n,2) and counts the
    fraction giving a positive semidefinite candidate correlation matrix.
    Restricted to n <= 5: acceptance collapses beyond that.  `samples` is
    split evenly over `runs` batches (the remainder is dropped).
    """
    if not 2 <= n <= 5:
        raise SizeLimitError("rejection sampling supports 2 <= n <= 5")
    batch = samples // runs
    if batch < 1:
        raise ValueError("need at least one sample per run")
    fractions = [
        _backend.rejection_run(n, batch, stream_base(seed, i)) / batch
        for i in range(runs)
    ]
    return EstimateStats.from_values(fractions)


def vpolytope_contains(v: VPolytope, point, tol: float = 1e-9) -> bool:
    """LP membership oracle for a V-polytope (convex-combination test)."""
    V = [[float(c) for c in vert] for vert in v.vertices]
    return in_convex_hull(V, [float(c) for c in point], tol)
