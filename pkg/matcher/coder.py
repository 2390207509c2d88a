"""
Streaming Coder
Arithmetic-coding matcher and dematcher with interval rescaling

The output model draws symbols without replacement from a bag holding the
composition, which makes every type-class sequence equally probable. The
input model is iid uniform bits.

Both coders keep exact integer state relative to |T|:

  Matcher:   E = j_t |T| - B 2^t
  Dematcher: E = B 2^s - J_s |T|

where j_t / J_s are the input bits consumed / emitted so far, B is the rank
of the first codeword of the current output prefix, and N (the number of
completions of that prefix) scales the rescaled output interval to [0, 1).

Every step costs a handful of operations on integers the size of |T|: a
symbol is located by walking cumulative counts until the first block whose
upper border lies past the input border, and the matcher folds pushed bits
into E only when some next-symbol block is wide enough to hold the input
interval.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from matcher.errors import CompositionMismatch, Exhausted, IndexOutOfRange, LengthMismatch, NotACodeword
from matcher.ranker import Bits, Symbols, check_composition, format_symbols, int_to_bits, successor
from matcher.typemath import type_class_size
from models.distribution import CodeParams, Composition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntervalState:
    """Exact lower border and width of an interval, rescaled coordinates"""

    low: Fraction
    width: Fraction

    @property
    def high(self) -> Fraction:
        return self.low + self.width


class SourceModel:
    """Draw-without-replacement output model"""

    def __init__(self, composition: Composition):
        self.initial_counts = composition
        self.remaining_counts = list(composition.counts)
        self.remaining_total = composition.n
        self.size = type_class_size(composition)
        # Arrangements of what is left in the bag
        self.completions = self.size
        # n'_a and n' of every draw, multiplied out on demand
        self._drawn_counts: List[int] = []
        self._drawn_totals: List[int] = []

    def next_symbol_distribution(self) -> Tuple[Fraction, ...]:
        """
        Probability n'_a / n' of each symbol being drawn next

        Raises:
            Exhausted: if the bag is empty
        """
        if self.remaining_total == 0:
            raise Exhausted("all symbols have been drawn")
        total = self.remaining_total
        return tuple(Fraction(c, total) for c in self.remaining_counts)

    def block(self, a: int) -> Tuple[int, int]:
        """
        Borders [low, high) of symbol a inside [0, completions)

        Raises:
            CompositionMismatch: if no symbol a is left in the bag
        """
        counts = self.remaining_counts
        if not 0 <= a < len(counts) or counts[a] == 0:
            raise CompositionMismatch(f"symbol {a} is not left in the bag")
        total = self.remaining_total
        below = sum(counts[:a])
        low = self.completions * below // total if below else 0
        above = below + counts[a]
        high = self.completions if above == total else self.completions * above // total
        return low, high

    def locate(self, position: int) -> Tuple[int, int, int]:
        """
        Symbol whose block holds a completion position: (symbol, low, high)

        Raises:
            Exhausted: if the bag is empty
            IndexOutOfRange: unless 0 <= position < completions
        """
        total = self.remaining_total
        if total == 0:
            raise Exhausted("all symbols have been drawn")
        if position < 0:
            raise IndexOutOfRange(f"position {position} is negative")

        low = 0
        cumulative = 0
        for a, c in enumerate(self.remaining_counts):
            if not c:
                continue
            cumulative += c
            high = self.completions if cumulative == total else self.completions * cumulative // total
            if position < high:
                return a, low, high
            low = high
        raise IndexOutOfRange(f"position {position} outside [0, {self.completions})")

    def draw(self, a: int) -> None:
        if self.remaining_total == 0:
            raise Exhausted("all symbols have been drawn")
        low, high = self.block(a)
        self.take(a, high - low)

    def take(self, a: int, completions: int) -> None:
        """Draw symbol a whose block size is already known"""
        self._drawn_counts.append(self.remaining_counts[a])
        self._drawn_totals.append(self.remaining_total)
        self.completions = completions
        self.remaining_counts[a] -= 1
        self.remaining_total -= 1

    @property
    def prefix_probability(self) -> Fraction:
        """Product of the conditional probabilities of all drawn symbols"""
        return Fraction(math.prod(self._drawn_counts), math.prod(self._drawn_totals))

    @property
    def exhausted(self) -> bool:
        return self.remaining_total == 0


def path_probability(seq: Sequence[int], comp: Composition) -> Fraction:
    """Probability of seq under the draw-without-replacement model"""
    check_composition(seq, comp)
    model = SourceModel(comp)
    for s in seq:
        model.draw(s)
    return model.prefix_probability


class Matcher:
    """
    Incremental matcher: push m bits, collect n symbols

    Symbols are emitted as soon as the input interval lies inside one
    next-symbol subinterval; both intervals are then rescaled so that
    subinterval becomes [0, 1).
    """

    def __init__(self, params: CodeParams):
        self.params = params
        self.model = SourceModel(params.composition)
        self.emitted: List[int] = []
        self._size = params.type_class_size
        self._bits = 0
        self._offset = 0
        # Bits pushed since _offset was last brought up to date
        self._folded = 0
        self._pending = 0
        self._horizon = self._next_horizon()
        self._finished = False

    @property
    def bits_consumed(self) -> int:
        return self._bits

    def interval_state(self) -> IntervalState:
        """Input interval relative to the sure-prefix output interval [0, 1)"""
        self._fold()
        scale = self.model.completions << self._bits
        return IntervalState(low=Fraction(self._offset, scale), width=Fraction(self._size, scale))

    def push_bit(self, bit: int) -> List[int]:
        """Consume one input bit; returns the symbols it made sure"""
        if self._finished or self._bits >= self.params.m:
            raise LengthMismatch(f"more than m={self.params.m} input bits")
        if bit not in (0, 1):
            raise ValueError(f"not a bit: {bit!r}")

        self._pending = (self._pending << 1) | bit
        self._bits += 1
        if self._bits < self._horizon:
            return []
        return self._emit_sure_prefix()

    def _next_horizon(self) -> int:
        """
        Fewest consumed bits at which the widest next-symbol block can hold
        the input interval of width |T| / 2^t
        """
        model = self.model
        if model.exhausted:
            return self.params.m + 1
        widest = model.completions * max(model.remaining_counts) // model.remaining_total
        return self._size.bit_length() - widest.bit_length()

    def _fold(self) -> None:
        shift = self._bits - self._folded
        if shift:
            self._offset = (self._offset << shift) + self._pending * self._size
            self._pending = 0
            self._folded = self._bits

    def _emit_sure_prefix(self) -> List[int]:
        self._fold()
        t = self._bits
        # Floors of the first and last point of the input interval
        low = self._offset >> t
        top = (self._offset + self._size - 1) >> t

        out = []
        passed = 0
        model = self.model
        while not model.exhausted:
            a, sub_low, sub_high = model.locate(low)
            if top >= sub_high:
                break
            low -= sub_low
            top -= sub_low
            passed += sub_low
            model.take(a, sub_high - sub_low)
            out.append(a)

        if out:
            self._offset -= passed << t
            self.emitted.extend(out)
            self._horizon = self._next_horizon()
        return out

    def finish(self) -> Symbols:
        """
        Complete the codeword after all m bits

        Descends through the subintervals containing the input border; if the
        codeword reached starts strictly below it, its successor is the one
        whose border is the smallest inside the input interval.
        """
        if self._finished:
            return tuple(self.emitted)
        if self._bits != self.params.m:
            raise LengthMismatch(f"got {self._bits} input bits, expected m={self.params.m}")

        self._fold()
        t = self._bits
        low = self._offset >> t
        passed = 0
        pending = []
        while not self.model.exhausted:
            a, sub_low, sub_high = self.model.locate(low)
            low -= sub_low
            passed += sub_low
            self.model.take(a, sub_high - sub_low)
            pending.append(a)
        self._offset -= passed << t

        if self._offset > 0:
            nxt = successor(pending)
            if nxt is None:
                raise AssertionError("codeword successor left the sure prefix")
            pending = list(nxt)

        self.emitted.extend(pending)
        self._finished = True
        return tuple(self.emitted)


class Dematcher:
    """
    Incremental dematcher: push n symbols, collect m bits

    Bits are emitted as soon as the output interval lies inside one half of
    the current input interval, which is then rescaled to [0, 1).
    """

    def __init__(self, params: CodeParams, strict: bool = True):
        self.params = params
        self.strict = strict
        self.model = SourceModel(params.composition)
        self.emitted: List[int] = []
        self.symbols: List[int] = []
        self._size = params.type_class_size
        self._half = self._size >> 1
        self._offset = 0
        self._finished = False

    @property
    def bits_emitted(self) -> int:
        return len(self.emitted)

    def interval_state(self) -> IntervalState:
        """Output interval relative to the current input interval [0, 1)"""
        s = len(self.emitted)
        return IntervalState(
            low=Fraction(self._offset, self._size),
            width=Fraction(self.model.completions << s, self._size),
        )

    def push_symbol(self, a: int) -> List[int]:
        """Consume one output symbol; returns the input bits it made sure"""
        if self._finished or self.model.exhausted:
            raise CompositionMismatch(f"more than n={self.params.n} symbols")
        try:
            low, high = self.model.block(a)
        except CompositionMismatch:
            raise CompositionMismatch(f"symbol {a} does not fit composition {self.params.composition}") from None

        if low:
            self._offset += low << len(self.emitted)
        self.model.take(a, high - low)
        self.symbols.append(a)
        return self._emit_sure_bits()

    def _emit_sure_bits(self) -> List[int]:
        out = []
        s = len(self.emitted)
        limit = self._size.bit_length()
        span = None
        # Halving needs N 2^(s+1) <= |T|, ruled out by bit lengths first
        while s < self.params.m and self.model.completions.bit_length() + s < limit:
            if span is None:
                span = self.model.completions << s
            if self._offset + span <= self._half:
                self._offset <<= 1
                out.append(0)
            elif self._offset >= self._size - self._half:
                self._offset = (self._offset << 1) - self._size
                out.append(1)
            else:
                break
            span <<= 1
            s += 1
        self.emitted.extend(out)
        return out

    def finish(self) -> Bits:
        """
        Remaining bits from j = floor(border 2^m)

        Raises:
            CompositionMismatch: if fewer than n symbols were pushed
            NotACodeword: strict mode, the sequence is outside the codebook
        """
        if self._finished:
            return tuple(self.emitted)
        if not self.model.exhausted:
            raise CompositionMismatch(
                f"got {len(self.symbols)} symbols, expected n={self.params.n}"
            )

        rest = self.params.m - len(self.emitted)
        scaled = self._offset << rest
        tail = scaled // self._size
        # i 2^m - j |T|; the encoder picks this codeword iff it is below 2^m
        excess = scaled - tail * self._size
        if self.strict and excess >= 1 << self.params.m:
            raise NotACodeword(f"{format_symbols(self.symbols)} is not a codeword")

        self.emitted.extend(int_to_bits(tail, rest))
        self._finished = True
        return tuple(self.emitted)


def encode_stream(bits: Sequence[int], params: CodeParams) -> Symbols:
    """
    Map an m-bit block to its length-n codeword

    Raises:
        LengthMismatch: if len(bits) != m
    """
    if len(bits) != params.m:
        raise LengthMismatch(f"input block has {len(bits)} bits, expected m={params.m}")
    matcher = Matcher(params)
    for bit in bits:
        matcher.push_bit(bit)
    return matcher.finish()


def decode_stream(seq: Sequence[int], params: CodeParams, strict: bool = True) -> Bits:
    """
    Recover the m-bit block from a codeword

    Raises:
        CompositionMismatch: if seq is not in the type class
        NotACodeword: strict mode, seq is in the type class but not a codeword
    """
    check_composition(seq, params.composition)
    dematcher = Dematcher(params, strict=strict)
    for a in seq:
        dematcher.push_symbol(a)
    return dematcher.finish()
