"""
Experiment commands.

Each command takes a validated ExperimentConfig, writes its artifacts under
``config.output_path`` and returns a RunRecord, which is also written next
to them as ``<command>_run.json``.
"""

import logging
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from pycda.approx.mixture import MixtureApprox, mixture_log_mean, mixture_mean, mixture_samples
from pycda.chain.kernels import transition_matrix
from pycda.chain.solvers import invariant_distribution, mean_fpt_continuous, stationary_residual
from pycda.core.base import ModelParams
from pycda.core.config import ExperimentConfig
from pycda.core.exceptions import CdaError, EmptySampleError
from pycda.core.rng import RngSpec, Stream
from pycda.renderers import JsonRenderer, get_renderer, version_tag
from pycda.simulation.simulator import (
    FptSample,
    StepUnit,
    equilibrium_histogram,
    first_passage_batch,
    passage_times,
)
from pycda.stats.empirical import ecdf, histogram, mean_and_stderr, skewness
from pycda.stats.ks import ks_two_sample

logger = logging.getLogger(__name__)

Table = Dict[str, Any]


@dataclass
class RunRecord:
    """
    Metadata and results of one command run.

    Attributes:
        command: Command name
        config: Echo of the configuration
        version: Artifact version tag
        duration: Wall-clock seconds
        payload: Summary results
        seeds: How every replicate stream was derived
        files: Artifacts written
    """

    command: str
    config: Dict[str, Any]
    version: str
    duration: float = 0.0
    payload: Dict[str, Any] = field(default_factory=dict)
    seeds: Dict[str, Any] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'config': self.config,
            'version': self.version,
            'duration': self.duration,
            'payload': self.payload,
            'seeds': self.seeds,
            'files': self.files,
        }


class _Run:
    """Collects the artifacts of one command."""

    def __init__(self, command: str, config: ExperimentConfig):
        self.config = config
        self.renderer = get_renderer(config.format)
        self.record = RunRecord(command=command, config=config.to_dict(), version=version_tag())
        self._started = time.perf_counter()

    def write(self, name: str, table: Table) -> str:
        path = os.path.join(self.config.output_path, f"{name}.{self.renderer.extension}")
        self.renderer.render(table, path)
        self.record.files.append(path)
        return path

    def finish(self) -> RunRecord:
        self.record.duration = time.perf_counter() - self._started
        path = os.path.join(self.config.output_path, f"{self.record.command}_run.json")
        self.record.files.append(path)
        JsonRenderer().render(self.record.to_dict(), path)
        logger.info("%s finished in %.2fs, %d files", self.record.command, self.record.duration,
                    len(self.record.files))
        return self.record


def _replicate_seeds(seed: int, replicates: int, role: Stream = Stream.REPLICATE) -> Dict[str, Any]:
    return {
        'master_seed': seed,
        'role': role.name.lower(),
        'stream_indices': [0, replicates - 1],
        'derivation': 'SeedSequence(entropy=master_seed, spawn_key=(role, index)) -> PCG64',
    }


def matrix_table(P) -> Table:
    """Transition matrix as a price-by-price table."""
    prices = range(1, P.N + 1)
    return {
        'comments': [f"N={P.N} n={P.n}"],
        'columns': ['price'] + [str(q) for q in prices],
        'rows': [[p] + list(P.entries[p - 1]) for p in prices],
    }


def cmd_chain(config: ExperimentConfig) -> RunRecord:
    """
    Write the low-traffic transition matrix and its invariant distribution.

    Files: transition_matrix, invariant_distribution.
    """
    config.validate()
    run = _Run('chain', config)
    params = config.params
    P = transition_matrix(params, exact=config.exact)
    pi = invariant_distribution(P)

    run.write('transition_matrix', matrix_table(P))
    run.write('invariant_distribution', {
        'columns': ['price', 'probability'],
        'rows': [[p, pi[p]] for p in range(1, params.N + 1)],
    })
    run.record.payload = {
        'residual': stationary_residual(P, pi),
        'reversal_symmetric': pi.is_reversal_symmetric(1e-10),
        'exact': P.is_exact,
    }
    print(f"Wrote chain outputs: {', '.join(run.record.files)}")
    return run.finish()


def cmd_simulate(config: ExperimentConfig) -> RunRecord:
    """
    Simulate the auction and compare trade-price frequencies with the
    low-traffic invariant distribution.

    Files: price_frequencies (price, empirical, low_traffic).
    """
    config.validate()
    run = _Run('simulate', config)
    params = config.params
    pi = invariant_distribution(transition_matrix(params))
    spec = RngSpec(config.seed, 0, Stream.REPLICATE)
    unit = StepUnit(config.step_unit)
    logger.info("simulating %d %s at N=%d n=%d rho=%g", config.events, unit.value, params.N, params.n, params.rho)
    empirical = equilibrium_histogram(
        params, config.opening, config.events, config.effective_burn_in, spec, unit=unit,
    )
    tv = empirical.total_variation(pi)

    run.write('price_frequencies', {
        'columns': ['price', 'empirical', 'low_traffic'],
        'rows': [[p, empirical[p], pi[p]] for p in range(1, params.N + 1)],
    })
    run.record.payload = {
        'total_variation': tv,
        'steps': config.events,
        'step_unit': unit.value,
        'burn_in': config.effective_burn_in,
    }
    run.record.seeds = _replicate_seeds(config.seed, 1)
    print(f"Total variation distance: {tv:.6f}")
    return run.finish()


def _fpt_rows(samples: List[FptSample]) -> List[List[Any]]:
    rows = []
    for index, sample in enumerate(samples):
        log_time = math.log(sample.hit_time) if sample.hit_time > 0 else None
        rows.append([index, sample.hit_time, log_time, sample.events, sample.hit_price, sample.censored])
    return rows


def histogram_table(values: np.ndarray, bins: Optional[int]) -> Table:
    hist = histogram(values, bins)
    density = hist.density()
    normal = hist.normal_density()
    rows = [
        [hist.edges[i], hist.edges[i + 1], int(hist.counts[i]), density[i], normal[i]]
        for i in range(hist.counts.size)
    ]
    return {
        'comments': [f"mean={hist.mean:.12g} std={hist.std:.12g} skewness={hist.skewness:.12g}"],
        'columns': ['bin_lo', 'bin_hi', 'count', 'density', 'normal_density'],
        'rows': rows,
    }


def ecdf_pair_table(simulated: np.ndarray, mixture: np.ndarray) -> Table:
    sim_cdf, mix_cdf = ecdf(simulated), ecdf(mixture)
    grid = np.unique(np.concatenate([simulated, mixture]))
    return {
        'columns': ['t', 'ecdf_simulated', 'ecdf_mixture'],
        'rows': [[t, s, m] for t, s, m in zip(grid, sim_cdf(grid), mix_cdf(grid))],
    }


def mixture_applies(params: ModelParams) -> bool:
    """The mixture approximation covers odd grids with unit jumps."""
    return params.N % 2 == 1 and params.N >= 3 and params.n == 1


def _mean_log_curve(config: ExperimentConfig) -> Table:
    rows = []
    for rho in config.curve_rhos:
        params = ModelParams.from_rho(config.N, config.n, rho, config.mu)
        samples = first_passage_batch(params, config.replicates, config.seed, config.workers, config.max_events)
        times = passage_times(samples)
        if times.size == 0:
            raise EmptySampleError(f"all first-passage replicates censored at rho={rho}")
        mean, stderr = mean_and_stderr(np.log(times))
        mixture = None
        if mixture_applies(params):
            mixture = mixture_log_mean(
                MixtureApprox(params), params.N, config.replicates, RngSpec(config.seed, 0, Stream.MIXTURE),
            ).mean
        rows.append([rho, mean, stderr, mixture])
        logger.info("mean log T at rho=%g: %.4f", rho, mean)
    return {'columns': ['rho', 'mean_log_t', 'stderr', 'mixture_mean_log_t'], 'rows': rows}


def cmd_fpt(config: ExperimentConfig) -> RunRecord:
    """
    First-passage study at one parameter point.

    Files: fpt_samples, log_fpt_histogram, fpt_summary, plus ecdf_pair and
    ks_test when the mixture applies, and mean_log_curve when curve_rhos
    is set.
    """
    config.validate()
    run = _Run('fpt', config)
    params = config.params
    logger.info("running %d first-passage replicates at N=%d n=%d rho=%g",
                config.replicates, params.N, params.n, params.rho)
    samples = first_passage_batch(params, config.replicates, config.seed, config.workers, config.max_events)
    run.write('fpt_samples', {
        'columns': ['replicate', 'hit_time', 'log_hit_time', 'events', 'hit_price', 'censored'],
        'rows': _fpt_rows(samples),
    })

    times = passage_times(samples)
    if times.size == 0:
        raise EmptySampleError("every first-passage replicate was censored")
    logs = np.log(times)
    run.write('log_fpt_histogram', histogram_table(logs, config.bins))

    mean_t, stderr_t = mean_and_stderr(times)
    mean_log, stderr_log = mean_and_stderr(logs)
    summary: Dict[str, Any] = {
        'samples': int(times.size),
        'censored': len(samples) - int(times.size),
        'mean_t': mean_t,
        'stderr_t': stderr_t,
        'mean_log_t': mean_log,
        'stderr_log_t': stderr_log,
        'skewness_log_t': skewness(logs),
        'low_traffic_mean_t': None,
        'mixture_mean_t': None,
    }
    if params.n <= params.N - 1:
        summary['low_traffic_mean_t'] = mean_fpt_continuous(params)

    seeds = {'replicate': _replicate_seeds(config.seed, config.replicates)}
    if mixture_applies(params):
        approx = MixtureApprox(params)
        mixture = mixture_samples(approx, params.N, times.size, RngSpec(config.seed, 0, Stream.MIXTURE))
        summary['mixture_mean_t'] = mixture_mean(approx, params.N)
        run.write('ecdf_pair', ecdf_pair_table(times, mixture))
        ks_rows = []
        for alternative in ('two-sided', 'greater'):
            result = ks_two_sample(
                mixture, times, config.ks_replicates, RngSpec(config.seed, 0, Stream.PERMUTATION), alternative,
            )
            ks_rows.append([result.alternative, result.statistic, result.p_value, result.replicates])
            summary[f"ks_{alternative.replace('-', '_')}_p"] = result.p_value
        run.write('ks_test', {'columns': ['alternative', 'statistic', 'p_value', 'replicates'], 'rows': ks_rows})
        seeds['mixture'] = _replicate_seeds(config.seed, 1, Stream.MIXTURE)
        seeds['permutation'] = _replicate_seeds(config.seed, 1, Stream.PERMUTATION)
    else:
        logger.info("mixture comparison skipped: needs odd N and n = 1")

    if config.curve_rhos:
        run.write('mean_log_curve', _mean_log_curve(config))

    run.write('fpt_summary', {
        'columns': ['quantity', 'value'],
        'rows': [[key, value] for key, value in summary.items()],
    })
    run.record.payload = summary
    run.record.seeds = seeds
    print(f"Mean first-passage time: {mean_t:.4f} (stderr {stderr_t:.4f}, {summary['censored']} censored)")
    return run.finish()


def delta_percent(analytic: float, simulated: float) -> float:
    """Relative error of the low-traffic mean against simulation, in percent."""
    return (analytic - simulated) / simulated * 100.0


def sweep_cell(config: ExperimentConfig, N: int, n: int, rho: float) -> List[Any]:
    """One table row: N, n, rho, simulated mean, stderr, low-traffic mean, delta %, censored."""
    params = ModelParams.from_rho(N, n, rho, config.mu)
    analytic = mean_fpt_continuous(params)
    samples = first_passage_batch(params, config.replicates, config.seed, config.workers, config.max_events)
    times = passage_times(samples)
    if times.size == 0:
        raise EmptySampleError("every first-passage replicate was censored")
    mean, stderr = mean_and_stderr(times)
    return [N, n, rho, mean, stderr, analytic, delta_percent(analytic, mean), len(samples) - times.size]


SWEEP_COLUMNS = ['N', 'n', 'rho', 'mc_mean_t', 'mc_stderr', 'low_traffic_mean_t', 'delta_pct', 'censored', 'error']


def sweep_table(config: ExperimentConfig, cell: Callable[..., List[Any]] = sweep_cell) -> Table:
    """
    Run every (N, n, rho) cell of the grid.

    A failing cell is logged and recorded in the ``error`` column; the sweep
    carries on with the next one.
    """
    rows = []
    for N, n in config.grid:
        for rho in config.rho_grid:
            logger.info("sweep cell N=%d n=%d rho=%g", N, n, rho)
            try:
                rows.append(cell(config, N, n, rho) + [''])
            except CdaError as exc:
                logger.warning("sweep cell N=%d n=%d rho=%g failed: %s", N, n, rho, exc)
                rows.append([N, n, rho, None, None, None, None, None, str(exc)])
    return {'columns': SWEEP_COLUMNS, 'rows': rows}


def cmd_sweep(config: ExperimentConfig, cell: Callable[..., List[Any]] = sweep_cell) -> RunRecord:
    """
    Mean first-passage times over the (N, n) x rho grid.

    Files: sweep.
    """
    config.validate()
    run = _Run('sweep', config)
    table = sweep_table(config, cell)
    failures = sum(1 for row in table['rows'] if row[-1])
    run.write('sweep', table)
    run.record.payload = {'cells': len(table['rows']), 'failures': failures}
    run.record.seeds = _replicate_seeds(config.seed, config.replicates)
    print(f"Wrote sweep of {len(table['rows'])} cells ({failures} failed)")
    return run.finish()


COMMANDS: Dict[str, Callable[[ExperimentConfig], RunRecord]] = {
    'chain': cmd_chain,
    'simulate': cmd_simulate,
    'fpt': cmd_fpt,
    'sweep': cmd_sweep,
}
