"""
Block Files
Packed bit blocks (matcher input) and one-byte-per-symbol blocks (matcher
output), each behind a one-line ASCII header
"""
import logging
import re
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from matcher.errors import BlockFileFormatError, IoFailure

logger = logging.getLogger(__name__)

MAX_ALPHABET = 255

_BIT_HEADER = re.compile(rb"m=(\d+) blocks=(\d+)")
_SYMBOL_HEADER = re.compile(rb"n=(\d+) k=(\d+) blocks=(\d+)")


@dataclass
class BitBlockFile:
    """Blocks of m bits, each packed MSB-first and zero-padded to a byte boundary"""

    m: int
    blocks: List[Tuple[int, ...]] = field(default_factory=list)

    def to_bytes(self) -> bytes:
        for block in self.blocks:
            if len(block) != self.m:
                raise BlockFileFormatError(f"block of {len(block)} bits in a file with m={self.m}")
        header = f"m={self.m} blocks={len(self.blocks)}\n".encode("ascii")
        if self.m == 0:
            return header
        bits = np.array(self.blocks, dtype=np.uint8).reshape(len(self.blocks), self.m)
        return header + np.packbits(bits, axis=1, bitorder="big").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitBlockFile":
        header, payload = _split_header(data)
        match = _BIT_HEADER.fullmatch(header)
        if not match:
            raise BlockFileFormatError(f"bad bit block header {header[:40]!r}")
        m, count = int(match.group(1)), int(match.group(2))

        width = (m + 7) // 8
        if len(payload) != count * width:
            raise BlockFileFormatError(
                f"payload has {len(payload)} bytes, expected {count} x {width}"
            )
        if m == 0:
            return cls(m=0, blocks=[()] * count)

        packed = np.frombuffer(payload, dtype=np.uint8).reshape(count, width)
        bits = np.unpackbits(packed, axis=1, bitorder="big")
        if np.any(bits[:, m:]):
            raise BlockFileFormatError("nonzero padding bits")
        return cls(m=m, blocks=[tuple(row) for row in bits[:, :m].tolist()])


@dataclass
class SymbolBlockFile:
    """Blocks of n symbols in 0..k-1, one byte per symbol"""

    n: int
    k: int
    blocks: List[Tuple[int, ...]] = field(default_factory=list)

    def to_bytes(self) -> bytes:
        if not 1 <= self.k <= MAX_ALPHABET:
            raise BlockFileFormatError(f"alphabet size {self.k} outside 1..{MAX_ALPHABET}")
        for block in self.blocks:
            if len(block) != self.n:
                raise BlockFileFormatError(f"block of {len(block)} symbols in a file with n={self.n}")
        header = f"n={self.n} k={self.k} blocks={len(self.blocks)}\n".encode("ascii")
        symbols = np.array(self.blocks, dtype=np.uint8).reshape(len(self.blocks), self.n)
        return header + symbols.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SymbolBlockFile":
        header, payload = _split_header(data)
        match = _SYMBOL_HEADER.fullmatch(header)
        if not match:
            raise BlockFileFormatError(f"bad symbol block header {header[:40]!r}")
        n, k, count = (int(g) for g in match.groups())

        if not 1 <= k <= MAX_ALPHABET:
            raise BlockFileFormatError(f"alphabet size {k} outside 1..{MAX_ALPHABET}")
        if len(payload) != count * n:
            raise BlockFileFormatError(f"payload has {len(payload)} bytes, expected {count} x {n}")

        symbols = np.frombuffer(payload, dtype=np.uint8).reshape(count, n)
        if np.any(symbols >= k):
            raise BlockFileFormatError(f"symbol outside 0..{k - 1}")
        return cls(n=n, k=k, blocks=[tuple(row) for row in symbols.tolist()])


def _split_header(data: bytes) -> Tuple[bytes, bytes]:
    end = data.find(b"\n")
    if end < 0:
        raise BlockFileFormatError("missing header line")
    return data[:end], data[end + 1:]


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e


def _write(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as f:
            f.write(data)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def read_bit_blocks(path: str) -> BitBlockFile:
    blocks = BitBlockFile.from_bytes(_read(path))
    logger.debug(f"Read {len(blocks.blocks)} bit blocks (m={blocks.m}) from {path}")
    return blocks


def write_bit_blocks(path: str, blocks: BitBlockFile) -> None:
    _write(path, blocks.to_bytes())


def read_symbol_blocks(path: str) -> SymbolBlockFile:
    blocks = SymbolBlockFile.from_bytes(_read(path))
    logger.debug(f"Read {len(blocks.blocks)} symbol blocks (n={blocks.n}, k={blocks.k}) from {path}")
    return blocks


def write_symbol_blocks(path: str, blocks: SymbolBlockFile) -> None:
    _write(path, blocks.to_bytes())
