"""
Ranker
Exact lexicographic rank/unrank inside a type class and the closed-form
index maps that define the matcher and dematcher

Symbols are ordered by alphabet index (0 smallest). Bit blocks are read
big-endian: the first bit is the most significant bit of j.
"""
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import config
from matcher.errors import (
    CompositionMismatch,
    IndexOutOfRange,
    LengthMismatch,
    NotACodeword,
    TooLarge,
)
from matcher.typemath import type_class_size
from models.distribution import CodeParams, Composition

logger = logging.getLogger(__name__)

Symbols = Tuple[int, ...]
Bits = Tuple[int, ...]


def parse_symbols(text: str) -> Symbols:
    """'0110' -> (0, 1, 1, 0); one digit per symbol"""
    return tuple(int(ch) for ch in text)


def format_symbols(seq: Sequence[int]) -> str:
    return "".join(str(s) for s in seq)


def parse_bits(text: str) -> Bits:
    bits = tuple(int(ch) for ch in text)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a bit string: {text!r}")
    return bits


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


def int_to_bits(value: int, m: int) -> Bits:
    return tuple((value >> (m - 1 - i)) & 1 for i in range(m))


def check_composition(seq: Sequence[int], comp: Composition) -> None:
    """
    Raises:
        CompositionMismatch: if seq is not a member of T(comp)
    """
    if len(seq) != comp.n:
        raise CompositionMismatch(f"sequence has length {len(seq)}, expected {comp.n}")
    counts = [0] * comp.k
    for s in seq:
        if not 0 <= s < comp.k:
            raise CompositionMismatch(f"symbol {s} outside alphabet 0..{comp.k - 1}")
        counts[s] += 1
    if tuple(counts) != comp.counts:
        raise CompositionMismatch(f"sequence has counts {tuple(counts)}, expected {comp.counts}")


def rank(seq: Sequence[int], comp: Composition) -> int:
    """Number of sequences in T(comp) lexicographically smaller than seq"""
    check_composition(seq, comp)

    remaining = list(comp.counts)
    total = comp.n
    # Number of arrangements of the remaining multiset
    block = type_class_size(comp)
    index = 0
    for s in seq:
        # Sequences continuing with a smaller symbol fill block * below / total
        below = sum(remaining[:s])
        if below:
            index += block * below // total
        block = block * remaining[s] // total
        remaining[s] -= 1
        total -= 1
    return index


def unrank(index: int, comp: Composition) -> Symbols:
    """
    The sequence of T(comp) at lexicographic position index

    Raises:
        IndexOutOfRange: unless 0 <= index < |T|
    """
    block = type_class_size(comp)
    if not 0 <= index < block:
        raise IndexOutOfRange(f"index {index} outside [0, {block})")

    remaining = list(comp.counts)
    total = comp.n
    seq: List[int] = []
    for _ in range(comp.n):
        # First symbol whose cumulative upper border passes index
        low = 0
        cumulative = 0
        for a, c in enumerate(remaining):
            if not c:
                continue
            cumulative += c
            high = block if cumulative == total else block * cumulative // total
            if index < high:
                break
            low = high
        seq.append(a)
        index -= low
        block = high - low
        remaining[a] -= 1
        total -= 1
    return tuple(seq)


def successor(seq: Sequence[int]) -> Optional[Symbols]:
    """Lexicographic successor within the type class of seq, None for the last"""
    s = list(seq)
    i = len(s) - 2
    while i >= 0 and s[i] >= s[i + 1]:
        i -= 1
    if i < 0:
        return None
    j = len(s) - 1
    while s[j] <= s[i]:
        j -= 1
    s[i], s[j] = s[j], s[i]
    s[i + 1:] = reversed(s[i + 1:])
    return tuple(s)


def codeword_index(j: int, params: CodeParams) -> int:
    """ceil(j |T| / 2^m): the smallest codeword border inside input interval j"""
    return -((-j * params.type_class_size) >> params.m)


def ref_encode(bits: Sequence[int], params: CodeParams) -> Symbols:
    """
    Reference matcher: unrank(ceil(j |T| / 2^m))

    Raises:
        LengthMismatch: if len(bits) != m
    """
    if len(bits) != params.m:
        raise LengthMismatch(f"input block has {len(bits)} bits, expected m={params.m}")
    return unrank(codeword_index(bits_to_int(bits), params), params.composition)


def ref_decode(seq: Sequence[int], params: CodeParams, strict: bool = True) -> Bits:
    """
    Reference dematcher: j = floor(rank(seq) 2^m / |T|)

    Raises:
        CompositionMismatch: if seq is not in T
        NotACodeword: strict mode, seq is in T but never produced by ref_encode
    """
    index = rank(seq, params.composition)
    j = (index << params.m) // params.type_class_size
    if strict and codeword_index(j, params) != index:
        raise NotACodeword(f"{format_symbols(seq)} (rank {index}) is not a codeword")
    return int_to_bits(j, params.m)


def iter_codebook(params: CodeParams) -> Iterator[Symbols]:
    """
    Codewords for j = 0 .. 2^m - 1 in order

    Consecutive codeword indices differ by 1 or 2 because 1 <= |T| / 2^m < 2,
    so the walk advances with successor() instead of unranking every index.
    """
    seq = unrank(0, params.composition)
    position = 0
    for j in range(params.codebook_size):
        target = codeword_index(j, params)
        while position < target:
            seq = successor(seq)
            position += 1
        yield seq


def codebook(params: CodeParams, limit: int = None) -> List[Symbols]:
    """
    All 2^m codewords, ordered by input value

    Raises:
        TooLarge: if m exceeds the enumeration limit
    """
    if limit is None:
        limit = config.CCDM_ENUMERATION_LIMIT
    if params.m > limit:
        raise TooLarge(f"m={params.m} exceeds the enumeration limit {limit}")
    return list(iter_codebook(params))
