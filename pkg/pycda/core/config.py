"""
Experiment configuration.

An ExperimentConfig is built from dataclass defaults, then a ``key = value``
config file, then command-line flags, each layer overriding the previous.
"""

import logging
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional, Tuple

from pycda.core.base import ModelParams
from pycda.core.exceptions import ParameterError

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")
STEP_UNITS = ("events", "trades")

DEFAULT_RHO_GRID = (0.01, 0.02, 0.05, 0.10, 0.50)
DEFAULT_GRID = ((10, 5), (40, 5), (40, 10), (80, 5), (80, 20), (100, 5), (100, 25))


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters shared by every command.

    Attributes:
        N: Grid size
        n: Jump cut-off
        rho: Limit to market rate ratio
        mu: Market order rate
        events: Run length of the equilibrium simulation, in step_unit
        burn_in: Leading steps discarded; events // 10 when None
        step_unit: "events" (order arrivals) or "trades"
        replicates: First-passage replicates per cell
        ks_replicates: Label permutations for the KS p-value
        seed: Master seed
        output_path: Directory receiving all artifacts
        format: "csv" or "json" for tabular output
        workers: Processes for replicate fan-out
        bins: Histogram bins; Freedman-Diaconis when None
        max_events: Arrival cap for one first-passage run
        opening: Opening price; floor((N+1)/2) when None
        exact: Rational arithmetic for the chain matrix
        rho_grid: Columns of the sweep table
        grid: (N, n) rows of the sweep table
        curve_rhos: rho values of the optional mean-log-T curve
    """

    N: int = 50
    n: int = 5
    rho: float = 0.01
    mu: float = 1.0
    events: int = 1_000_000
    burn_in: Optional[int] = None
    step_unit: str = "events"
    replicates: int = 10_000
    ks_replicates: int = 10_000
    seed: int = 20150601
    output_path: str = "results"
    format: str = "csv"
    workers: int = 1
    bins: Optional[int] = None
    max_events: int = 10**9
    opening: Optional[int] = None
    exact: bool = False
    rho_grid: Tuple[float, ...] = DEFAULT_RHO_GRID
    grid: Tuple[Tuple[int, int], ...] = DEFAULT_GRID
    curve_rhos: Tuple[float, ...] = ()

    @property
    def effective_burn_in(self) -> int:
        return self.events // 10 if self.burn_in is None else self.burn_in

    @property
    def params(self) -> ModelParams:
        return ModelParams.from_rho(self.N, self.n, self.rho, self.mu)

    def validate(self) -> "ExperimentConfig":
        """
        Check every field before a run starts.

        Returns:
            self, so calls can be chained

        Raises:
            ParameterError: On the first violated constraint
        """
        params = self.params
        if self.opening is not None:
            params.check_price(self.opening)
        _positive("events", self.events)
        if not self.events > self.effective_burn_in >= 0:
            raise ParameterError(
                f"need events > burn_in >= 0, got events={self.events}, burn_in={self.effective_burn_in}"
            )
        _positive("replicates", self.replicates)
        _positive("ks_replicates", self.ks_replicates)
        _positive("workers", self.workers)
        _positive("max_events", self.max_events)
        if self.bins is not None:
            _positive("bins", self.bins)
        if self.seed < 0:
            raise ParameterError(f"seed must be non-negative, got {self.seed}")
        if self.format not in FORMATS:
            raise ParameterError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.step_unit not in STEP_UNITS:
            raise ParameterError(f"step_unit must be one of {STEP_UNITS}, got {self.step_unit!r}")
        for rho in self.rho_grid + self.curve_rhos:
            if not rho > 0:
                raise ParameterError(f"rho values must be positive, got {rho}")
        for N, n in self.grid:
            ModelParams.from_rho(N, n, self.rho, self.mu)
        return self

    def merged(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        """Copy with every non-None override applied."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ParameterError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes)

    @classmethod
    def from_sources(
        cls,
        file_values: Optional[Mapping[str, Any]] = None,
        flag_values: Optional[Mapping[str, Any]] = None,
    ) -> "ExperimentConfig":
        """
        Layer defaults, config-file values and flags.

        Args:
            file_values: Typed values read from a config file
            flag_values: Values given on the command line (None means unset)
        """
        config = cls()
        if file_values:
            config = config.merged(file_values)
        if flag_values:
            config = config.merged(flag_values)
        logger.debug("configuration: %s", config.to_dict())
        return config

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["rho_grid"] = list(self.rho_grid)
        data["grid"] = [list(cell) for cell in self.grid]
        data["curve_rhos"] = list(self.curve_rhos)
        return data


def _positive(name: str, value: int) -> None:
    if value < 1:
        raise ParameterError(f"{name} must be >= 1, got {value}")
