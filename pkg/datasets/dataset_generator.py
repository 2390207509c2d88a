"""
Random bit-block generator for encode/decode round-trip runs

python datasets/dataset_generator.py --m 13 --blocks 100 --seed 7 --out blocks.bin
"""
import argparse
import os
import sys

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli.blockfiles import BitBlockFile, write_bit_blocks  # noqa: E402

# =========================
# CONFIGURATION
# =========================
DEFAULT_BLOCKS = 100
DEFAULT_SEED = 2016


def generate_bit_blocks(m: int, blocks: int, seed: int = DEFAULT_SEED) -> BitBlockFile:
    """Uniform iid bits, one row per block"""
    if m < 0 or blocks < 0:
        raise ValueError("m and blocks must be non-negative")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(blocks, m), dtype=np.uint8)
    return BitBlockFile(m=m, blocks=[tuple(row) for row in bits.tolist()])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Write a random bit block file")
    parser.add_argument("--m", type=int, required=True, help="bits per block")
    parser.add_argument("--blocks", type=int, default=DEFAULT_BLOCKS)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--out", required=True)
    args = parser.parse_args(argv)

    write_bit_blocks(args.out, generate_bit_blocks(args.m, args.blocks, args.seed))
    print(f"✅ Generated {args.blocks} blocks of {args.m} bits in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
