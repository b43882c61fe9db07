#!/usr/bin/env python3
"""
Regenerate the data behind every figure and the first-passage table as CSV
files: fig1.csv ... fig7.csv and table1.csv.

Equilibrium runs count order arrivals. At rho = 1e-4 only about one arrival
in 10^4 is a limit order, so that panel runs 10^4 times longer to see about
as many trades as the others; the empty-book jump keeps it cheap. Use
--quick for a smoke run.
"""
import argparse
import logging
import sys
from pathlib import Path

import numpy as np

# Add the project root to Python path
project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from pycda.approx.mixture import MixtureApprox, mixture_samples  # noqa: E402
from pycda.chain.kernels import transition_matrix  # noqa: E402
from pycda.chain.solvers import invariant_distribution  # noqa: E402
from pycda.commands import ecdf_pair_table, histogram_table, sweep_table  # noqa: E402
from pycda.core.base import ModelParams  # noqa: E402
from pycda.core.config import ExperimentConfig  # noqa: E402
from pycda.core.rng import RngSpec, Stream  # noqa: E402
from pycda.renderers import CsvRenderer  # noqa: E402
from pycda.simulation.simulator import (  # noqa: E402
    StepUnit,
    equilibrium_histogram,
    first_passage_batch,
    passage_times,
)
from pycda.stats.empirical import mean_and_stderr  # noqa: E402
from pycda.stats.ks import ks_two_sample  # noqa: E402

# rho and multiple of --events
EQUILIBRIUM_RUNS = {"fig1": (1e-4, 10_000), "fig2": (0.3, 1), "fig3": (0.9, 1)}
LOG_HISTOGRAM_RHOS = {"fig4": 0.02, "fig5": 0.5}
LOG_HISTOGRAM_SIZES = (10, 40, 70, 100)
CURVE_SIZES = (40, 70, 100)
CURVE_RHOS = (0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.7, 0.8, 0.9, 1.0)
ECDF_RHOS = (0.01, 0.05, 0.1, 0.5)


def equilibrium_figure(rho, scale, args):
    params = ModelParams.from_rho(50, 5, rho)
    pi = invariant_distribution(transition_matrix(params))
    events = args.events * scale
    empirical = equilibrium_histogram(params, None, events, None, RngSpec(args.seed), unit=StepUnit.EVENTS)
    print(f"  rho={rho:g}: TV={empirical.total_variation(pi):.4f}")
    return {
        "comments": [f"N=50 n=5 rho={rho:g} events={events}"],
        "columns": ["price", "empirical", "low_traffic"],
        "rows": [[p, empirical[p], pi[p]] for p in range(1, 51)],
    }


def log_histogram_figure(rho, args):
    rows = []
    for N in LOG_HISTOGRAM_SIZES:
        params = ModelParams.from_rho(N, 5, rho)
        times = passage_times(first_passage_batch(params, args.replicates, args.seed, args.workers))
        table = histogram_table(np.log(times), None)
        rows.extend([N] + row for row in table["rows"])
    return {"columns": ["N"] + table["columns"], "rows": rows}


def curve_figure(args):
    rows = []
    for N in CURVE_SIZES:
        for rho in CURVE_RHOS:
            params = ModelParams.from_rho(N, 5, rho)
            times = passage_times(first_passage_batch(params, args.replicates, args.seed, args.workers))
            mean, stderr = mean_and_stderr(np.log(times))
            rows.append([N, rho, mean, stderr])
        best = min((row for row in rows if row[0] == N), key=lambda row: row[2])
        print(f"  N={N}: minimum mean log T at rho={best[1]:g}")
    return {"columns": ["N", "rho", "mean_log_t", "stderr"], "rows": rows}


def ecdf_figure(args):
    rows, comments = [], []
    for rho in ECDF_RHOS:
        params = ModelParams.from_rho(11, 1, rho)
        times = passage_times(first_passage_batch(params, args.replicates, args.seed, args.workers))
        mixture = mixture_samples(MixtureApprox(params), 11, times.size, RngSpec(args.seed, 0, Stream.MIXTURE))
        ks = ks_two_sample(mixture, times, args.ks_replicates, RngSpec(args.seed, 0, Stream.PERMUTATION))
        comments.append(f"rho={rho:g} D={ks.statistic:.6g} p={ks.p_value:.6g}")
        rows.extend([rho] + row for row in ecdf_pair_table(times, mixture)["rows"])
    return {"comments": comments, "columns": ["rho", "t", "ecdf_simulated", "ecdf_mixture"], "rows": rows}


def table_one(args):
    config = ExperimentConfig(replicates=args.replicates, seed=args.seed, workers=args.workers)
    return sweep_table(config)


def main():
    parser = argparse.ArgumentParser(description="Regenerate figure and table data")
    parser.add_argument("-o", "--output", default="figures", help="output directory (default: figures)")
    parser.add_argument("--events", type=int, default=1_000_000, help="order arrivals per equilibrium histogram")
    parser.add_argument("--replicates", type=int, default=10_000, help="first-passage replicates")
    parser.add_argument("--ks-replicates", type=int, default=10_000, help="KS permutations")
    parser.add_argument("--seed", type=int, default=20150601)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--quick", action="store_true", help="small runs for a smoke test")
    parser.add_argument("--only", nargs="*", help="artifact names to build, e.g. fig1 table1")
    args = parser.parse_args()
    if args.quick:
        args.events, args.replicates, args.ks_replicates = 20_000, 200, 200
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s")

    jobs = {
        name: (lambda rho=rho, scale=scale: equilibrium_figure(rho, scale, args))
        for name, (rho, scale) in EQUILIBRIUM_RUNS.items()
    }
    jobs.update({name: (lambda rho=rho: log_histogram_figure(rho, args)) for name, rho in LOG_HISTOGRAM_RHOS.items()})
    jobs["fig6"] = lambda: curve_figure(args)
    jobs["fig7"] = lambda: ecdf_figure(args)
    jobs["table1"] = lambda: table_one(args)

    output_dir = Path(args.output)
    renderer = CsvRenderer()
    for name, job in jobs.items():
        if args.only and name not in args.only:
            continue
        print(f"Building {name}...")
        path = renderer.render(job(), str(output_dir / f"{name}.csv"))
        print(f"  wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
