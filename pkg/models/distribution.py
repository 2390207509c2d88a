"""
Distribution Models
Target distributions, n-type compositions and derived code parameters
"""
import json
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

import config
from matcher.errors import DistributionFormatError, IoFailure

logger = logging.getLogger(__name__)


class Distribution(BaseModel):
    """Target probability vector P_A over the alphabet 0..k-1"""

    model_config = ConfigDict(frozen=True)

    probs: Tuple[float, ...]

    @field_validator("probs")
    @classmethod
    def _check_probs(cls, probs: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(probs) < 1:
            raise ValueError("distribution needs at least one symbol")
        for p in probs:
            if not math.isfinite(p) or p < 0:
                raise ValueError(f"invalid probability {p!r}")
        if abs(math.fsum(probs) - 1.0) > config.DISTRIBUTION_VALID_TOLERANCE:
            raise ValueError(f"probabilities sum to {math.fsum(probs)!r}, not 1")
        return probs

    @property
    def k(self) -> int:
        return len(self.probs)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(a for a, p in enumerate(self.probs) if p > 0)

    def __getitem__(self, a: int) -> float:
        return self.probs[a]


class Composition(BaseModel):
    """An n-type: per-symbol counts n_a summing to the output length n"""

    model_config = ConfigDict(frozen=True)

    counts: Tuple[int, ...]

    @field_validator("counts")
    @classmethod
    def _check_counts(cls, counts: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(counts) < 1:
            raise ValueError("composition needs at least one symbol")
        if any(c < 0 for c in counts):
            raise ValueError(f"negative count in {counts}")
        if sum(counts) < 1:
            raise ValueError("composition must have n >= 1")
        return counts

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def k(self) -> int:
        return len(self.counts)

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(a for a, c in enumerate(self.counts) if c > 0)

    def type_probs(self) -> Tuple[Fraction, ...]:
        """Induced type n_a / n as exact rationals"""
        n = self.n
        return tuple(Fraction(c, n) for c in self.counts)

    def as_distribution(self) -> Distribution:
        n = self.n
        return Distribution(probs=tuple(c / n for c in self.counts))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.counts) + ")"


class CodeParams(BaseModel):
    """A composition with its exact type-class size |T| and input length m"""

    model_config = ConfigDict(frozen=True)

    composition: Composition
    type_class_size: int
    m: int

    @model_validator(mode="after")
    def _check_sizes(self) -> "CodeParams":
        from matcher.typemath import type_class_size

        if self.type_class_size != type_class_size(self.composition):
            raise ValueError("type_class_size is not the multinomial of the composition")
        if self.m != self.type_class_size.bit_length() - 1:
            raise ValueError("m must equal floor(log2 |T|)")
        return self

    @classmethod
    def from_composition(cls, composition: Composition) -> "CodeParams":
        from matcher.typemath import type_class_size

        size = type_class_size(composition)
        return cls(composition=composition, type_class_size=size, m=size.bit_length() - 1)

    @classmethod
    def for_distribution(cls, dist: Distribution, n: int) -> "CodeParams":
        """Quantize dist to an n-type and derive the code parameters"""
        from matcher.typemath import quantize_to_ntype

        return cls.from_composition(quantize_to_ntype(dist, n))

    @property
    def n(self) -> int:
        return self.composition.n

    @property
    def k(self) -> int:
        return self.composition.k

    @property
    def rate(self) -> Fraction:
        return Fraction(self.m, self.n)

    @property
    def codebook_size(self) -> int:
        return 1 << self.m


def _split_values(text: str) -> List[str]:
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            values = json.loads(stripped, parse_float=str, parse_int=str)
        except json.JSONDecodeError as e:
            raise DistributionFormatError(f"invalid JSON distribution: {e}") from e
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            raise DistributionFormatError("JSON distribution must be a flat array of numbers")
        return values

    values = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            values.append(line)
    return values


def distribution_from_values(values: Sequence[Union[int, float, str, Fraction]]) -> Distribution:
    """
    Build a distribution from numbers or decimal strings

    Values are read as exact decimals, checked, and renormalized exactly to
    sum 1 before conversion to float.

    Raises:
        DistributionFormatError: on non-numeric or negative entries, or a
            sum outside [1 - 1e-9, 1 + 1e-9]
    """
    if not values:
        raise DistributionFormatError("distribution is empty")

    try:
        exact = [v if isinstance(v, Fraction) else Fraction(str(v)) for v in values]
    except (ValueError, ZeroDivisionError) as e:
        raise DistributionFormatError(f"not a number: {e}") from e

    if any(v < 0 for v in exact):
        raise DistributionFormatError("distribution has a negative entry")

    total = sum(exact)
    if abs(total - 1) > Fraction(config.DISTRIBUTION_SUM_TOLERANCE):
        raise DistributionFormatError(f"probabilities sum to {float(total)!r}, expected 1")

    try:
        return Distribution(probs=tuple(float(v / total) for v in exact))
    except ValidationError as e:
        raise DistributionFormatError(str(e)) from e


def parse_distribution(text: str) -> Distribution:
    """
    Parse a distribution from text

    Accepts a JSON array of numbers or one probability per line.

    Raises:
        DistributionFormatError: on syntax errors or invalid values
    """
    return distribution_from_values(_split_values(text))


def load_distribution(path: str) -> Distribution:
    """Read and parse a UTF-8 distribution file"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise DistributionFormatError(f"distribution {path} is not UTF-8 text: {e}") from e
    except OSError as e:
        raise IoFailure(f"cannot read distribution {path}: {e}") from e

    dist = parse_distribution(text)
    logger.debug(f"Loaded distribution with k={dist.k} from {path}")
    return dist
