"""
Parser for ``key = value`` experiment files.

    # mean passage time sweep
    rho_grid = 0.01, 0.02, 0.05
    grid = 10:5, 40:10
    replicates = 2000
"""

import logging
from typing import Any, Callable, Dict, Tuple

from pycda.core.exceptions import ParameterError
from pycda.parsers.base_parser import COMMENT, BaseParser

logger = logging.getLogger(__name__)


def _optional(convert: Callable[[str], Any]) -> Callable[[str], Any]:
    def wrapped(text: str) -> Any:
        return None if text.lower() in ('', 'none') else convert(text)
    return wrapped


def _boolean(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _integer(text: str) -> int:
    # accept 1e6 style counts
    value = float(text) if any(c in text for c in '.eE') else int(text)
    if int(value) != value:
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _floats(text: str) -> Tuple[float, ...]:
    return tuple(float(item) for item in text.split(',') if item.strip())


def _grid(text: str) -> Tuple[Tuple[int, int], ...]:
    cells = []
    for item in text.split(','):
        if not item.strip():
            continue
        size, cutoff = item.split(':')
        cells.append((_integer(size.strip()), _integer(cutoff.strip())))
    return tuple(cells)


CONVERTERS: Dict[str, Callable[[str], Any]] = {
    'N': _integer,
    'n': _integer,
    'rho': float,
    'mu': float,
    'events': _integer,
    'burn_in': _optional(_integer),
    'step_unit': str.lower,
    'replicates': _integer,
    'ks_replicates': _integer,
    'seed': _integer,
    'output_path': str,
    'format': str.lower,
    'workers': _integer,
    'bins': _optional(_integer),
    'max_events': _integer,
    'opening': _optional(_integer),
    'exact': _boolean,
    'rho_grid': _floats,
    'grid': _grid,
    'curve_rhos': _floats,
}


class ConfigParser(BaseParser):
    """Parser for experiment configuration files."""

    def parse(self, content: str) -> Dict[str, Any]:
        """
        Parse ``key = value`` lines into typed ExperimentConfig overrides.

        Args:
            content: File text

        Returns:
            Mapping of field name to typed value

        Raises:
            ParameterError: On unknown keys or unparsable values
        """
        values: Dict[str, Any] = {}
        for number, line in self.numbered_lines(content):
            line = line.split(COMMENT, 1)[0].strip()
            if '=' not in line:
                raise ParameterError(f"{self.source}:{number}: expected 'key = value', got {line!r}")
            key, text = (part.strip() for part in line.split('=', 1))
            if key not in CONVERTERS:
                raise ParameterError(f"{self.source}:{number}: unknown key {key!r}")
            try:
                values[key] = CONVERTERS[key](text)
            except ValueError as exc:
                raise ParameterError(f"{self.source}:{number}: bad value for {key}: {exc}") from exc
        logger.debug("read %d settings from %s", len(values), self.source)
        return values
