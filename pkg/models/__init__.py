"""
Models Package
Pydantic domain types shared by the matcher, the CLI and the API
"""

from models.distribution import (
    CodeParams,
    Composition,
    Distribution,
    load_distribution,
    parse_distribution,
)
from models.records import REPORT_COLUMNS, SweepRecord

__all__ = [
    'CodeParams',
    'Composition',
    'Distribution',
    'load_distribution',
    'parse_distribution',
    'REPORT_COLUMNS',
    'SweepRecord',
]
