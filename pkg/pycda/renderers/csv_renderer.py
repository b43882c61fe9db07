"""
CSV renderer for tabular results.

Tables are dictionaries with a ``columns`` list, a ``rows`` list and an
optional ``comments`` list written as leading ``#`` lines. Floats carry 12
significant digits and lines end with LF, so equal results give equal bytes.
"""

import csv
import logging
import math
import os
from fractions import Fraction
from numbers import Integral, Real
from typing import Any, Dict

logger = logging.getLogger(__name__)


def format_cell(value: Any) -> str:
    """Text for one CSV cell."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, Real):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        return '%.12g' % value
    return str(value)


class CsvRenderer:
    """Renderer for tables in CSV format."""

    extension = 'csv'

    def render(self, table_data: Dict[str, Any], output_path: str) -> str:
        """
        Write a table to CSV.

        Args:
            table_data: Dictionary with ``columns``, ``rows`` and optional ``comments``
            output_path: Path to save the CSV

        Returns:
            str: Path to the written file
        """
        columns = table_data['columns']
        output_dir = os.path.dirname(output_path)
        if output_dir and not os.path.exists(output_dir):
            os.makedirs(output_dir)

        with open(output_path, 'w', encoding='utf-8', newline='') as f:
            for comment in table_data.get('comments', ()):
                f.write(f"# {comment}\n")
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(columns)
            for row in table_data['rows']:
                if len(row) != len(columns):
                    raise ValueError(f"row has {len(row)} cells, header has {len(columns)}")
                writer.writerow([format_cell(cell) for cell in row])

        logger.debug("wrote %d rows to %s", len(table_data['rows']), output_path)
        return output_path
