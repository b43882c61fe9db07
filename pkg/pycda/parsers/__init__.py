"""
Parsers for configuration files and previously written CSV artifacts.
"""

from pycda.parsers.base_parser import BaseParser
from pycda.parsers.config_parser import ConfigParser
from pycda.parsers.csv_parser import DistributionCsvParser, MatrixCsvParser

__all__ = ['BaseParser', 'ConfigParser', 'DistributionCsvParser', 'MatrixCsvParser']
