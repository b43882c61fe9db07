"""
JSON renderer for run records, error reports and tables.
"""

import json
import logging
import math
import os
import subprocess
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

logger = logging.getLogger(__name__)


def _plain(value: Any) -> Any:
    """Convert numpy and rational values into JSON-native ones."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def version_tag(fallback: Optional[str] = None) -> str:
    """
    Artifact version from ``git describe --always --dirty``.

    Args:
        fallback: Tag used outside a git checkout; the package version if None

    Returns:
        str: Version tag
    """
    if fallback is None:
        from pycda import __version__
        fallback = __version__
    try:
        result = subprocess.run(
            ['git', 'describe', '--always', '--dirty'],
            cwd=Path(__file__).resolve().parent,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            check=False,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return fallback
    tag = result.stdout.decode('utf-8', 'replace').strip()
    return tag if result.returncode == 0 and tag else fallback


def error_payload(error: BaseException, command: Optional[str] = None) -> Dict[str, Any]:
    """Machine-readable description of a failed command."""
    return {'error': type(error).__name__, 'message': str(error), 'command': command}


def dumps(data: Any) -> str:
    return json.dumps(_plain(data), indent=2, sort_keys=True)


class JsonRenderer:
    """Renderer for JSON output."""

    extension = 'json'

    def render(self, data: Dict[str, Any], output_path: str) -> str:
        """
        Write data as JSON.

        A table dictionary (``columns`` and ``rows``) becomes a list of
        records; anything else is written as is.

        Args:
            data: Run record, table or other JSON-able mapping
            output_path: Path to save the JSON

        Returns:
            str: Path to the written file
        """
        if 'columns' in data and 'rows' in data:
            payload: Any = {
                'comments': list(data.get('comments', ())),
                'records': [dict(zip(data['columns'], row)) for row in data['rows']],
            }
        else:
            payload = data

        output_dir = os.path.dirname(output_path)
        if output_dir and not os.path.exists(output_dir):
            os.makedirs(output_dir)

        with open(output_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(dumps(payload))
            f.write('\n')

        logger.debug("wrote %s", output_path)
        return output_path
