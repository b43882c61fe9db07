"""
Output renderers.
"""

from typing import Union

from pycda.core.exceptions import ParameterError
from pycda.renderers.csv_renderer import CsvRenderer, format_cell
from pycda.renderers.json_renderer import JsonRenderer, dumps, error_payload, version_tag

Renderer = Union[CsvRenderer, JsonRenderer]


def get_renderer(output_format: str) -> Renderer:
    """Renderer for 'csv' or 'json'."""
    if output_format == 'csv':
        return CsvRenderer()
    if output_format == 'json':
        return JsonRenderer()
    raise ParameterError(f"unknown output format: {output_format!r}")


__all__ = [
    'CsvRenderer', 'JsonRenderer', 'Renderer', 'dumps', 'error_payload',
    'format_cell', 'get_renderer', 'version_tag',
]
