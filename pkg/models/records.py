"""
Sweep Records
One row of the blocklength sweep: composition, rate, divergence and bounds
"""
from fractions import Fraction
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict

# Column order of CSV and JSON reports
REPORT_COLUMNS = (
    "n", "m", "rate", "h_bar", "ndiv", "kl_gap",
    "gap_bound", "rate_bound", "counts", "rate_bound_hbar",
)


class SweepRecord(BaseModel):
    """Performance of the matcher at one output blocklength n"""

    model_config = ConfigDict(frozen=True)

    n: int
    counts: Tuple[int, ...]
    m: int
    rate: float
    h_bar: float
    ndiv: float
    kl_gap: float
    gap_bound: Optional[float] = None
    rate_bound: float
    rate_bound_hbar: float

    @property
    def exact_rate(self) -> Fraction:
        return Fraction(self.m, self.n)
