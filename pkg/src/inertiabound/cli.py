"""Command-line front end.

Seeds: sub-tasks derive their seeds from the master ``--seed`` by fixed
offsets.  In ``experiment-gap`` the random certificate weighting for prime
``q`` uses ``seed + q`` and the weighting search uses ``seed + 10000 + q``.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import graphs
from .bounds import (BETA, REPORT_FIELDS, bound_report, certify_inertia, inertia_upper_bound,
                     ratio_bound, weight_search)
from .graphs import Graph, GraphError
from .scaling import DEFAULT_TOL
from .spectral import (LAWS, HermitianWeighting, eigen, format_spectrum, random_weighting,
                       read_weighting)

SEARCH_SEED_OFFSET = 10_000


def _read_graph(path: str) -> Graph:
    return graphs.read_edgelist(path)


def _header_fields(path: str) -> int:
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                return len(line.split())
    return 0


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def make_graph(family: str, params: list[str]) -> Graph:
    try:
        if family == "paley":
            return graphs.paley(int(params[0]))
        if family == "polarity":
            return graphs.polarity(int(params[0]))
        if family == "girth5":
            return graphs.extract_girth5(graphs.polarity(int(params[0]))).graph
        if family == "gnp":
            return graphs.gnp(int(params[0]), float(params[1]), int(params[2]))
        if family == "tree":
            return graphs.random_tree(int(params[0]), int(params[1]))
        return graphs.structured(family, *(int(p) for p in params))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad parameters for {family}: {params}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args) -> int:
    g = make_graph(args.family, args.params)
    _emit(graphs.format_edgelist(g), args.out)
    gi = graphs.girth(g)
    print(f"n={g.n} m={g.m} girth={'inf' if math.isinf(gi) else int(gi)} "
          f"c4_free={graphs.is_c4_free(g)}", file=sys.stderr if not args.out else sys.stdout)
    return 0


def cmd_bounds(args) -> int:
    g = _read_graph(args.graph)
    w = read_weighting(args.weights, g) if args.weights else None
    rep = bound_report(g, w, tau=args.tau, exact_limit=args.exact_limit,
                       force_ratio=args.force_ratio, certify=args.certify)
    row = rep.row()
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerow(row)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    alpha = "n/a (above exact limit)" if rep.alpha_exact is None else rep.alpha_exact
    ratio = "n/a" if rep.ratio is None else f"{rep.ratio:.6f}" + (" (heuristic)" if rep.ratio_heuristic else "")
    print(f"# alpha={alpha} ratio={ratio} inertia_unweighted={rep.inertia_unweighted} "
          f"clique_cover={rep.clique_cover_bound}", file=sys.stderr)
    return 0


def cmd_certify(args) -> int:
    g = _read_graph(args.graph)
    c4 = graphs.find_c4(g)
    if c4 is not None:
        print(f"refusing to certify: host contains the 4-cycle {'-'.join(map(str, c4))}",
              file=sys.stderr)
        return 2
    if args.weights:
        w = read_weighting(args.weights, g)
    elif args.random is not None:
        w = random_weighting(g, args.random, args.law)
    else:
        w = HermitianWeighting.unweighted(g)
    cert = certify_inertia(w, tol=args.tol_scaling)
    actual = inertia_upper_bound(w, args.tau)
    cert.meta = {"actual_n_nonneg": actual, "beta_n": BETA * g.n, "n_over_4": g.n / 4}
    _emit(cert.to_json(indent=2 if not args.out else None) + "\n", args.out)
    floor = math.ceil(g.n / 4 if cert.girth5 else BETA * g.n) - 1
    ok = cert.bound <= actual and cert.bound >= floor
    print(f"certified n>=0 >= {cert.bound}; eigendecomposition n>=0 = {actual}; "
          f"beta*n = {BETA * g.n:.4f}; n/4 = {g.n / 4:.4f}; "
          f"{'OK' if ok else 'FAILED'}", file=sys.stderr)
    if cert.bound > actual:
        print(f"violated: certificate {cert.bound} > n>=0 {actual}", file=sys.stderr)
    if cert.bound < floor:
        print(f"violated: certificate {cert.bound} < floor {floor}", file=sys.stderr)
    return 0 if ok else 1


def cmd_spectrum(args) -> int:
    if _header_fields(args.input) == 1:
        src = read_weighting(args.input)
    else:
        g = _read_graph(args.input)
        src = read_weighting(args.weights, g) if args.weights else HermitianWeighting.unweighted(g)
    _emit(format_spectrum(eigen(src)), args.out)
    return 0


EXPERIMENT_FIELDS = ("graph", "q", "seed", "n", "retained_fraction", "alpha", "ratio",
                     "ratio_heuristic", "four_n34", "inertia_unweighted", "inertia_searched",
                     "certificate", "inertia_random", "beta_n", "n_over_4")


@dataclass
class ExperimentRow:
    graph: str
    q: int
    seed: int
    n: int
    retained_fraction: float
    alpha: int | None
    ratio: float
    ratio_heuristic: bool
    four_n34: float
    inertia_unweighted: int
    inertia_searched: int
    certificate: int
    inertia_random: int
    beta_n: float
    n_over_4: float

    def violations(self) -> list[str]:
        out = []
        if not self.ratio <= self.four_n34:
            out.append(f"ratio {self.ratio:.6g} > 4 n^(3/4) = {self.four_n34:.6g}")
        floor = self.n / 4 - 1
        for name in ("inertia_searched", "certificate", "inertia_unweighted"):
            if getattr(self, name) < floor:
                out.append(f"{name} = {getattr(self, name)} < n/4 - 1 = {floor:.6g}")
        if self.certificate < math.ceil(self.n / 4) - 1:
            out.append(f"certificate {self.certificate} < ceil(n/4) - 1")
        for name in ("inertia_random", "inertia_searched", "inertia_unweighted"):
            if self.certificate > getattr(self, name):
                out.append(f"certificate {self.certificate} > {name} = {getattr(self, name)}")
        if self.alpha is not None and self.alpha > self.inertia_searched:
            out.append(f"alpha {self.alpha} > inertia_searched {self.inertia_searched}")
        return out

    def csv_row(self) -> dict:
        row = asdict(self)
        row["alpha"] = "" if self.alpha is None else self.alpha
        row["ratio_heuristic"] = int(self.ratio_heuristic)
        for key in ("retained_fraction", "ratio", "four_n34", "beta_n", "n_over_4"):
            row[key] = f"{row[key]:.10g}"
        return row


def gap_row(q: int, seed: int, restarts: int, steps: int, tau: float | None,
            exact_limit: int, law: str = "gaussian-complex") -> ExperimentRow:
    """One row of the ratio-versus-inertia comparison on the girth-5 part of
    the polarity graph of PG(2, q)."""
    ext = graphs.extract_girth5(graphs.polarity(q))
    h = ext.graph
    n = h.n
    regular = h.is_regular()
    ratio = ratio_bound(h, force=True)
    alpha = graphs.independence_number(h, exact_limit) if n <= exact_limit else None
    unweighted = inertia_upper_bound(HermitianWeighting.unweighted(h), tau)
    _, searched = weight_search(h, seed + SEARCH_SEED_OFFSET + q, restarts=restarts, steps=steps,
                                tau=tau, alpha=alpha)
    rand = random_weighting(h, seed + q, law)
    cert = certify_inertia(rand)
    return ExperimentRow(f"polarity{q}-girth5", q, seed, n, ext.retained_fraction, alpha, ratio,
                         not regular, 4 * n ** 0.75, unweighted, searched, cert.bound,
                         inertia_upper_bound(rand, tau), BETA * n, n / 4)


def _gap_task(task):
    return gap_row(*task)


def run_experiment_gap(qs: list[int], seeds: list[int], restarts: int, steps: int,
                       tau: float | None = None, exact_limit: int = graphs.DEFAULT_EXACT_LIMIT,
                       jobs: int = 1) -> list[ExperimentRow]:
    for q in qs:
        if not graphs.is_prime(q):
            raise GraphError(f"experiment needs prime q, got {q}")
    tasks = [(q, s, restarts, steps, tau, exact_limit) for q in qs for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_gap_task, tasks))
    return [_gap_task(t) for t in tasks]


def format_experiment(rows: list[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=EXPERIMENT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.csv_row())
    return buf.getvalue()


GNUPLOT = """\
set datafile separator ','
set key autotitle columnhead left top
set xlabel 'n'
set ylabel 'bound'
plot '{csv}' using 4:7 with linespoints title 'ratio (heuristic)', \\
     '' using 4:9 with lines title '4 n^(3/4)', \\
     '' using 4:11 with linespoints title 'searched n>=0', \\
     '' using 4:12 with linespoints title 'certificate', \\
     '' using 4:15 with lines title 'n/4'
"""


def cmd_experiment_gap(args) -> int:
    rows = run_experiment_gap(args.q, args.seeds, args.restarts, args.steps, args.tau,
                              args.exact_limit, args.jobs)
    _emit(format_experiment(rows), args.out)
    if args.gnuplot:
        Path(args.gnuplot).write_text(GNUPLOT.format(csv=args.out or "gap.csv"))
    failed = False
    for r in rows:
        for msg in r.violations():
            failed = True
            print(f"violated (q={r.q}, seed={r.seed}): {msg}", file=sys.stderr)
    return 1 if failed else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", type=float, default=None,
                        help="zero band for eigenvalues (default 1e-8*max(1, |A|_F/sqrt n))")
    common.add_argument("--tol-scaling", type=float, default=DEFAULT_TOL,
                        help="row-sum tolerance for Sinkhorn scaling (default %(default)g)")
    common.add_argument("--exact-limit", type=int, default=graphs.DEFAULT_EXACT_LIMIT,
                        help="largest n for the exact independence solver (default %(default)s)")
    common.add_argument("--force-ratio", action="store_true",
                        help="report the ratio quantity on irregular graphs (heuristic)")

    p = argparse.ArgumentParser(prog="inertiabound", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a graph as an edge list")
    g.add_argument("family", help="paley, polarity, girth5, gnp, tree, " + ", ".join(graphs.STRUCTURED))
    g.add_argument("params", nargs="*")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bounds", parents=[common], help="alpha, ratio and inertia bounds")
    b.add_argument("graph")
    b.add_argument("--weights")
    b.add_argument("--certify", action="store_true", help="also certify (C4-free hosts)")
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("certify", parents=[common], help="certified lower bound on n>=0(A)")
    c.add_argument("graph")
    src = c.add_mutually_exclusive_group()
    src.add_argument("--weights")
    src.add_argument("--random", type=int, metavar="SEED", help="random weighting from SEED")
    c.add_argument("--law", choices=LAWS, default="gaussian-complex")
    c.add_argument("-o", "--out")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues, descending, one per line")
    s.add_argument("input", help="edge-list or weighting file")
    s.add_argument("--weights")
    s.add_argument("-o", "--out")
    s.set_defaults(func=cmd_spectrum)

    e = sub.add_parser("experiment-gap", parents=[common],
                       help="ratio value vs inertia on girth-5 polarity subgraphs")
    e.add_argument("--q", type=int, nargs="+", default=[3, 5, 7, 11, 13])
    e.add_argument("--seeds", "--seed", type=int, nargs="+", default=[0])
    e.add_argument("--restarts", type=int, default=4)
    e.add_argument("--steps", type=int, default=150)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("-o", "--out")
    e.add_argument("--gnuplot", help="also write a gnuplot script for the CSV")
    e.set_defaults(func=cmd_experiment_gap)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
