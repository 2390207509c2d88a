"""
Command Result
Outcome of one command: process exit code plus the --json envelope
"""
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, TypedDict, Union

from matcher.errors import CCDMError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_IO = 1
EXIT_USAGE = 2


class QuantizeData(TypedDict):
    counts: List[int]
    n: int
    k: int
    m: int
    type_class_size: int
    log2_type_class_size: float
    type_probs: List[float]
    rate: float
    rate_exact: str
    h_bar: float
    kl_gap: float
    ndiv: float


class BlocksData(TypedDict, total=False):
    blocks: int
    m: int
    n: int
    k: int
    output: str
    warnings: int


class SweepData(TypedDict):
    records: int
    format: str
    output: str


class SelftestData(TypedDict):
    suites: List[Dict[str, Any]]
    compositions: List[List[int]]


CommandData = Union[QuantizeData, BlocksData, SweepData, SelftestData]


@dataclass
class CommandResult:
    """Exit code and payload of a command; success means exit code 0"""

    command: str
    exit_code: int = EXIT_OK
    data: Optional[CommandData] = None
    error: Optional[str] = None
    error_type: Optional[str] = None

    @property
    def success(self) -> bool:
        return self.exit_code == EXIT_OK

    @classmethod
    def from_error(cls, command: str, error: Exception, exit_code: int = None) -> "CommandResult":
        """Failed result; CCDMError carries its own exit code"""
        if exit_code is None:
            exit_code = error.exit_code if isinstance(error, CCDMError) else EXIT_FAILED
        return cls(command, exit_code=exit_code, error=str(error), error_type=type(error).__name__)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "success": self.success,
            "exit_code": self.exit_code,
            "data": self.data,
            "error": self.error,
            "error_type": self.error_type,
        }
