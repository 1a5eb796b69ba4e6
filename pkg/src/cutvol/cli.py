"""Command-line surface: construct bodies, compute or estimate volumes,
reproduce the reference tables, fit the log-volume parabola.

Subcommands: construct, volume, estimate, report, fit, crossover.
Exit codes: 0 success, 2 usage error, 3 computation error.  Reference
values that are too expensive to recompute ship in data/table*.csv; every
emitted table cell carries a provenance tag (`computed` or `paper`).
"""

from __future__ import annotations

import argparse
import csv
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Iterable, Sequence

from . import elliptope, estimate, exactvol, graphs, polytope
from .errors import CutvolError, DegenerateFitError

COMPUTED = "computed"
PAPER = "paper"

_TABLE_SCHEMAS = {
    "table1": (
        "n", "i_vol", "cut_vol", "met_vol", "rmet_vol",
        "ratio_i_cut", "ratio_met_cut", "ratio_rmet_cut",
    ),
    "table3": (
        "n", "cut_exact", "cut_est", "met_exact", "met_est",
        "ratio_met_cut", "ratio_met_cut_est", "ratio_i_met_est",
    ),
    "table4": (
        "n", "min", "q1", "median", "mean", "q3", "max", "i_vol", "ratio_i_met",
    ),
}


@dataclass(frozen=True)
class PaperTable:
    """One bundled reference table, rows keyed by n."""

    id: str
    columns: tuple[str, ...]
    rows: tuple[dict, ...]

    def __post_init__(self):
        if self.columns != _TABLE_SCHEMAS[self.id]:
            raise ValueError(f"unexpected columns for {self.id}")
        ns = [r["n"] for r in self.rows]
        if ns != sorted(set(ns)):
            raise ValueError("row n values must be strictly increasing")

    def row(self, n: int) -> dict:
        for r in self.rows:
            if r["n"] == n:
                return r
        raise KeyError(n)


def load_table(table_id: str) -> PaperTable:
    path = resources.files("cutvol").joinpath(f"data/{table_id}.csv")
    with path.open() as f:
        reader = csv.DictReader(f)
        columns = tuple(reader.fieldnames)
        rows = []
        for raw in reader:
            row = dict(raw)
            row["n"] = int(row["n"])
            rows.append(row)
    return PaperTable(table_id, columns, tuple(rows))


@dataclass(frozen=True)
class QuadraticFit:
    a2: float
    a1: float
    a0: float
    residual_rms: float

    def __post_init__(self):
        if self.residual_rms < 0:
            raise ValueError("residual rms is nonnegative")


def quadratic_fit(points: Sequence[tuple[float, float]]) -> QuadraticFit:
    """Least-squares parabola y = a2 n^2 + a1 n + a0 through (n, y) points,
    solved from the normal equations with partial pivoting."""
    if len({n for n, _ in points}) < 3:
        raise DegenerateFitError("need at least three distinct n values")
    # normal equations M c = r for c = (a2, a1, a0)
    m = [[0.0] * 4 for _ in range(3)]
    for n, y in points:
        basis = (n * n, n, 1.0)
        for i in range(3):
            for j in range(3):
                m[i][j] += basis[i] * basis[j]
            m[i][3] += basis[i] * y
    for col in range(3):
        piv = max(range(col, 3), key=lambda r: abs(m[r][col]))
        if abs(m[piv][col]) < 1e-12:
            raise DegenerateFitError("normal equations are rank deficient")
        m[col], m[piv] = m[piv], m[col]
        for r in range(3):
            if r != col:
                f = m[r][col] / m[col][col]
                for j in range(col, 4):
                    m[r][j] -= f * m[col][j]
    a2, a1, a0 = (m[i][3] / m[i][i] for i in range(3))
    sq = 0.0
    for n, y in points:
        resid = y - (a2 * n * n + a1 * n + a0)
        sq += resid * resid
    return QuadraticFit(a2, a1, a0, math.sqrt(sq / len(points)))


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def met_log_points() -> list[tuple[int, float, str]]:
    """(n, log vol(Met_n), source) joining exact values (n=3..7) with the
    bundled estimate means (n=8..25)."""
    t1 = load_table("table1")
    pts = [
        (n, _log_fraction(Fraction(t1.row(n)["met_vol"])), PAPER) for n in range(3, 8)
    ]
    t4 = load_table("table4")
    for row in t4.rows:
        pts.append((row["n"], math.log(float(row["mean"])), PAPER))
    return pts


def fit_met_parabola() -> QuadraticFit:
    return quadratic_fit([(n, y) for n, y, _ in met_log_points()])


def crossover_report() -> int:
    """Smallest n where the transformed elliptope drops below the bundled
    metric-polytope mean estimate."""
    t4 = load_table("table4")
    for row in t4.rows:
        ratio = math.exp(elliptope.i_log_volume(row["n"]).log_value) / float(
            row["mean"]
        )
        if ratio < 1.0:
            return row["n"]
    raise CutvolError("no crossover within the bundled data range")


# -- report assembly ---------------------------------------------------------


def _sig3(x: float) -> str:
    return f"{x:.3g}"


def _cell(value, source: str, exact: bool = False):
    return {"value": value, "source": source, "exact": exact}


def _ratio_cell(num, den):
    value = (
        float(num["value"]) / float(den["value"])
        if not (num["exact"] and den["exact"])
        else Fraction(num["value"]) / Fraction(den["value"])
    )
    src = COMPUTED if num["source"] == den["source"] == COMPUTED else PAPER
    return _cell(value, src, exact=num["exact"] and den["exact"])


def _build_table1():
    t1 = load_table("table1")
    header = _TABLE_SCHEMAS["table1"]
    rows = []
    for n in range(2, 8):
        paper = t1.row(n)
        i = _cell(math.exp(elliptope.i_log_volume(n).log_value), COMPUTED)
        if n == 2:
            cut = met = _cell(Fraction(1), COMPUTED, exact=True)
        elif n <= 4:
            met_val = exactvol.lasserre_volume(polytope.met_hrep(n))
            met = _cell(met_val, COMPUTED, exact=True)
            cut = _cell(met_val, COMPUTED, exact=True)  # Cut_n = Met_n for n <= 4
        else:
            cut = _cell(Fraction(paper["cut_vol"]), PAPER, exact=True)
            met = _cell(Fraction(paper["met_vol"]), PAPER, exact=True)
        rmet = _cell(exactvol.rmet_volume(n), COMPUTED, exact=True)
        rows.append(
            {
                "n": n,
                "i_vol": i,
                "cut_vol": cut,
                "met_vol": met,
                "rmet_vol": rmet,
                "ratio_i_cut": _ratio_cell(i, cut),
                "ratio_met_cut": _ratio_cell(met, cut),
                "ratio_rmet_cut": _ratio_cell(rmet, cut),
            }
        )
    return header, rows


def _build_table2():
    header = ("family", "n", "cut_vol", "suspension_cut_vol")
    rows = []
    for n in range(3, 9):
        for fam in ("star", "path", "cycle"):
            cut = (
                _cell(exactvol.cycle_volume(n), COMPUTED, exact=True)
                if fam == "cycle"
                else _cell(Fraction(1), COMPUTED, exact=True)
            )
            rows.append(
                {
                    "family": fam,
                    "n": n,
                    "cut_vol": cut,
                    "suspension_cut_vol": _cell(
                        exactvol.suspension_volume(fam, n), COMPUTED, exact=True
                    ),
                }
            )
    worked = (
        ("cactus", graphs.make_cactus([8, 6, 4, 4, 4, 4, 3])),
        ("necklace", graphs.make_necklace(8, [3] * 8)),
    )
    for fam, g in worked:
        rows.append(
            {
                "family": fam,
                "n": g.n,
                "cut_vol": _cell(
                    exactvol.formula_volume(graphs.classify(g)), COMPUTED, exact=True
                ),
                "suspension_cut_vol": _cell("", PAPER),  # no closed form known
            }
        )
    return header, rows


def _build_table3():
    t3 = load_table("table3")
    header = _TABLE_SCHEMAS["table3"]
    rows = []
    for n in range(3, 8):
        paper = t3.row(n)
        if n <= 4:
            met_val = float(exactvol.lasserre_volume(polytope.met_hrep(n)))
            cut_exact = _cell(met_val, COMPUTED)
            met_exact = _cell(met_val, COMPUTED)
        else:
            cut_exact = _cell(float(paper["cut_exact"]), PAPER)
            met_exact = _cell(float(paper["met_exact"]), PAPER)
        cut_est = _cell(float(paper["cut_est"]), PAPER)
        met_est = _cell(float(paper["met_est"]), PAPER)
        i = _cell(math.exp(elliptope.i_log_volume(n).log_value), COMPUTED)
        rows.append(
            {
                "n": n,
                "cut_exact": cut_exact,
                "cut_est": cut_est,
                "met_exact": met_exact,
                "met_est": met_est,
                "ratio_met_cut": _ratio_cell(met_exact, cut_exact),
                "ratio_met_cut_est": _ratio_cell(met_est, cut_est),
                "ratio_i_met_est": _ratio_cell(i, met_est),
            }
        )
    return header, rows


def _build_table4():
    t4 = load_table("table4")
    header = _TABLE_SCHEMAS["table4"]
    rows = []
    for paper in t4.rows:
        row = {"n": paper["n"]}
        for col in ("min", "q1", "median", "mean", "q3", "max"):
            row[col] = _cell(float(paper[col]), PAPER)
        row["i_vol"] = _cell(
            math.exp(elliptope.i_log_volume(paper["n"]).log_value), COMPUTED
        )
        # the bundled ratio uses the unrounded estimate mean; keep it as is
        row["ratio_i_met"] = _cell(float(paper["ratio_i_met"]), PAPER)
        rows.append(row)
    return header, rows


def _build_figure5():
    header = ("n", "series", "log_vol")
    t1 = load_table("table1")
    t4 = load_table("table4")
    rows = []
    for n in range(3, 26):
        rows.append(
            {
                "n": n,
                "series": "rmet",
                "log_vol": _cell(_log_fraction(exactvol.rmet_volume(n)), COMPUTED),
            }
        )
    for n in range(3, 26):
        if n <= 7:
            met = _cell(_log_fraction(Fraction(t1.row(n)["met_vol"])), PAPER)
        else:
            met = _cell(math.log(float(t4.row(n)["mean"])), PAPER)
        rows.append({"n": n, "series": "met", "log_vol": met})
    for n in range(3, 26):
        rows.append(
            {
                "n": n,
                "series": "i",
                "log_vol": _cell(elliptope.i_log_volume(n).log_value, COMPUTED),
            }
        )
    return header, rows


_BUILDERS = {
    "1": _build_table1,
    "2": _build_table2,
    "3": _build_table3,
    "4": _build_table4,
    "figure5": _build_figure5,
}


def _machine_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _human_value(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return _sig3(v)
    return str(v)


def write_report(table: str, out_path: str | None, stream) -> None:
    header, rows = _BUILDERS[table]()
    if out_path:
        with open(out_path, "w", newline="") as f:
            writer = csv.writer(f)
            cols = []
            for col in header:
                cols.append(col)
                if rows and isinstance(rows[0][col], dict):
                    cols.append(f"{col}_src")
            writer.writerow(cols)
            for row in rows:
                rec = []
                for col in header:
                    cell = row[col]
                    if isinstance(cell, dict):
                        rec.append(_machine_value(cell["value"]))
                        rec.append(cell["source"])
                    else:
                        rec.append(_machine_value(cell))
                writer.writerow(rec)
    widths = {col: max(len(col), 12) for col in header}
    stream.write("  ".join(col.ljust(widths[col]) for col in header) + "\n")
    for row in rows:
        cells = []
        for col in header:
            cell = row[col]
            text = _human_value(cell["value"]) if isinstance(cell, dict) else str(cell)
            cells.append(text.ljust(widths[col]))
        stream.write("  ".join(cells) + "\n")


# -- argument handling --------------------------------------------------------

_GRAPH_RE = re.compile(r"^([KCPS])(\d+)$")
_MAKERS = {
    "K": graphs.make_complete,
    "C": graphs.make_cycle,
    "P": graphs.make_path,
    "S": graphs.make_star,
}


def parse_graph(spec: str) -> graphs.Graph:
    m = _GRAPH_RE.match(spec)
    if m:
        return _MAKERS[m.group(1)](int(m.group(2)))
    return graphs.read_graph(spec)


def _require_complete(g: graphs.Graph, body: str) -> int:
    if g.m != g.n * (g.n - 1) // 2:
        raise CutvolError(
            f"the {body} polytope is only constructed over complete graphs K_n"
        )
    return g.n


def _build_body_hrep(body: str, g: graphs.Graph) -> polytope.HPolytope:
    if body == "met":
        return polytope.met_hrep(_require_complete(g, body))
    if body == "rmet":
        return polytope.rmet_hrep(_require_complete(g, body))
    return polytope.cut_hrep_sparse(g)


def _walk_config(args) -> estimate.WalkConfig:
    return estimate.WalkConfig(
        seed=args.seed,
        runs=args.runs,
        walk_len=getattr(args, "walk_len", None),
        samples_per_phase=getattr(args, "samples_per_phase", None),
        radius_growth=getattr(args, "radius_growth", None),
        direction=getattr(args, "direction", estimate.COORDINATE),
    )


def _stats_line(stats: estimate.EstimateStats) -> str:
    return (
        f"runs={stats.n_runs} min={stats.min:.3e} q1={stats.q1:.3e} "
        f"median={stats.median:.3e} mean={stats.mean:.3e} "
        f"q3={stats.q3:.3e} max={stats.max:.3e}"
    )


def cmd_construct(args) -> None:
    g = parse_graph(args.graph)
    if args.format == "ine":
        h = _build_body_hrep(args.body, g)
        polytope.write_ine(h, args.out)
    else:
        if args.body != "cut":
            raise CutvolError(f"no vertex description for the {args.body} polytope")
        polytope.write_ext(polytope.cut_vertices(g), args.out)
    print(f"wrote {args.out}")


def cmd_volume(args) -> None:
    method = args.method
    if method in ("elliptope", "asymptotic"):
        if args.n is None:
            raise CutvolError(f"--n is required for method {method}")
        if method == "elliptope":
            lv = elliptope.i_log_volume(args.n)
            print(f"{math.exp(lv.log_value):.3g} (log {lv.log_value:.6f})")
        else:
            lv = elliptope.asymptotic_log_volume(args.n)
            print(f"log {lv.log_value:.6f} (asymptotic expansion)")
        return
    g = parse_graph(args.graph)
    if method == "formula":
        if args.body != "cut":
            raise CutvolError("closed formulas cover the cut polytope only")
        print(exactvol.cut_volume(g, "formula").value)
    elif method == "exact":
        if args.body == "cut":
            print(exactvol.cut_volume(g, "recursion").value)
        else:
            print(exactvol.lasserre_volume(_build_body_hrep(args.body, g)))
    elif method == "estimate":
        cfg = _walk_config(args)
        if args.body == "cut":
            stats = estimate.vpolytope_estimate(polytope.cut_vertices(g), cfg)
        else:
            stats = estimate.sob_volume(_build_body_hrep(args.body, g), cfg)
        print(f"{stats.mean:.3e} ({_stats_line(stats)})")
    else:
        raise CutvolError(f"unknown method {method!r}")


def cmd_estimate(args) -> None:
    cfg = _walk_config(args)
    g = parse_graph(args.graph)
    if args.body == "cut":
        stats = estimate.vpolytope_estimate(polytope.cut_vertices(g), cfg)
    else:
        stats = estimate.sob_volume(_build_body_hrep(args.body, g), cfg)
    print(_stats_line(stats))


def cmd_report(args) -> None:
    write_report(args.table, args.out, sys.stdout)
    if args.out:
        print(f"wrote {args.out}")


def cmd_fit(args) -> None:
    fit = fit_met_parabola()
    print(
        f"a2={fit.a2:.4f} a1={fit.a1:.4f} a0={fit.a0:.4f} "
        f"residual_rms={fit.residual_rms:.4f}"
    )


def cmd_crossover(args) -> None:
    print(crossover_report())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit PRNG seed")
    common.add_argument("--runs", type=int, default=20)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("ine", "ext"), default="ine")

    parser = argparse.ArgumentParser(
        prog="cutvol",
        description="volumes of cut, metric and rooted-metric polytopes "
        "and the elliptope",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common],
                       help="write a polytope file (.ine or .ext)")
    p.add_argument("--body", choices=("cut", "met", "rmet"), required=True)
    p.add_argument("--graph", required=True, help="Kn|Cn|Pn|Sn or a graph file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("volume", parents=[common], help="compute one volume")
    p.add_argument(
        "--method",
        choices=("formula", "exact", "estimate", "elliptope", "asymptotic"),
        required=True,
    )
    p.add_argument("--body", choices=("cut", "met", "rmet"), default="cut")
    p.add_argument("--graph", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--walk-len", dest="walk_len", type=int, default=None)
    p.add_argument("--samples-per-phase", dest="samples_per_phase", type=int,
                   default=None)
    p.add_argument("--radius-growth", dest="radius_growth", type=float,
                   default=None)
    p.add_argument("--direction", choices=("coordinate", "random"),
                   default="coordinate")
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("estimate", parents=[common],
                       help="Monte Carlo estimate with run statistics")
    p.add_argument("--body", choices=("cut", "met", "rmet"), default="met")
    p.add_argument("--graph", required=True)
    p.add_argument("--walk-len", dest="walk_len", type=int, default=None)
    p.add_argument("--samples-per-phase", dest="samples_per_phase", type=int,
                   default=None)
    p.add_argument("--radius-growth", dest="radius_growth", type=float,
                   default=None)
    p.add_argument("--direction", choices=("coordinate", "random"),
                   default="coordinate")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("report", parents=[common],
                       help="emit a reference table or plot data")
    p.add_argument("--table", choices=("1", "2", "3", "4", "figure5"),
                   required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("fit", parents=[common],
                       help="quadratic fit of the metric polytope log-volume")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("crossover", parents=[common],
                       help="first n where the elliptope undercuts the "
                       "metric polytope estimate")
    p.set_defaults(func=cmd_crossover)
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (CutvolError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
