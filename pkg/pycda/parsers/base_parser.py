"""
Base parser for pycda input files.

Parsers turn the text of a config file or of a previously written CSV
artifact back into pycda objects.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Iterator, Tuple, Union

COMMENT = '#'


class BaseParser(ABC):
    """Base class for all pycda text parsers."""

    def __init__(self):
        """Start with empty content from an anonymous source."""
        self.content = ""
        self.source = "<string>"

    @abstractmethod
    def parse(self, content: str) -> Any:
        """
        Parse text and return the object it describes.

        Args:
            content: Text to parse

        Returns:
            The parsed object
        """
        pass

    def load(self) -> Any:
        """Parse the content this parser was created with."""
        return self.parse(self.content)

    @classmethod
    def from_file(cls, file_path: Union[str, Path]) -> 'BaseParser':
        """
        Read a config or CSV artifact from disk.

        Args:
            file_path: Path to the file

        Returns:
            A parser holding the file text, with ``source`` set to its path

        Raises:
            FileNotFoundError: If the file does not exist
        """
        parser = cls()
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileNotFoundError(f"File not found: {file_path}")

        parser.content = file_path.read_text(encoding='utf-8')
        parser.source = str(file_path)
        return parser

    @classmethod
    def from_string(cls, content: str) -> 'BaseParser':
        """
        Wrap in-memory text, mainly for tests and piped input.

        Args:
            content: Text to parse later

        Returns:
            A parser whose ``load()`` parses ``content``
        """
        parser = cls()
        parser.content = content
        return parser

    @staticmethod
    def numbered_lines(content: str) -> Iterator[Tuple[int, str]]:
        """Yield (line number, stripped text) for every non-blank, non-comment line."""
        for number, raw in enumerate(content.splitlines(), start=1):
            line = raw.strip()
            if line and not line.startswith(COMMENT):
                yield number, line
