"""
Readers for the matrix and distribution CSV files written by the chain and
simulate commands.
"""

import csv
import re
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from pycda.chain.distribution import PriceDistribution
from pycda.chain.kernels import TransitionMatrix
from pycda.core.exceptions import ParameterError
from pycda.parsers.base_parser import COMMENT, BaseParser

_META = re.compile(r'(\w+)\s*=\s*(\S+)')


def _rows(parser: BaseParser, content: str) -> Tuple[List[str], List[List[str]]]:
    lines = [line for _, line in parser.numbered_lines(content)]
    if not lines:
        raise ParameterError(f"{parser.source}: no data")
    reader = csv.reader(lines)
    header = next(reader)
    return header, list(reader)


class MatrixCsvParser(BaseParser):
    """Reads transition_matrix.csv back into a TransitionMatrix."""

    def parse(self, content: str) -> TransitionMatrix:
        meta = {}
        for raw in content.splitlines():
            if raw.startswith(COMMENT):
                meta.update(_META.findall(raw))
        header, rows = _rows(self, content)
        N = len(header) - 1
        if len(rows) != N:
            raise ParameterError(f"{self.source}: expected {N} rows, found {len(rows)}")
        cells = [row[1:] for row in rows]
        exact = any('/' in cell for row in cells for cell in row)
        convert = Fraction if exact else float
        entries = np.array([[convert(cell) for cell in row] for row in cells], dtype=object if exact else float)
        if 'n' not in meta:
            raise ParameterError(f"{self.source}: missing '# N=.. n=..' line")
        return TransitionMatrix(N=N, n=int(meta['n']), entries=entries)


class DistributionCsvParser(BaseParser):
    """Reads one probability column of a price-indexed CSV."""

    def __init__(self, column: Optional[str] = None):
        """
        Initialize the parser.

        Args:
            column: Column to read; the second column when None
        """
        super().__init__()
        self.column = column

    def parse(self, content: str) -> PriceDistribution:
        header, rows = _rows(self, content)
        if self.column is None:
            index = 1
        elif self.column in header:
            index = header.index(self.column)
        else:
            raise ParameterError(f"{self.source}: no column {self.column!r} in {header}")
        probs = np.array([float(row[index]) for row in rows])
        # 12 significant digits leave a small normalisation error
        return PriceDistribution(probs / probs.sum())
