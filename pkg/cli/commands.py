"""
Command-line front end
quantize, encode, decode, sweep and selftest commands wiring the matcher
to distribution files, block files and reports

Exit codes: 0 success, 1 I/O, 2 usage/format, 3 decode integrity.
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple

import config
from cli.blockfiles import (
    BitBlockFile,
    SymbolBlockFile,
    read_bit_blocks,
    read_symbol_blocks,
    write_bit_blocks,
    write_symbol_blocks,
)
from cli.render import render
from cli.result import (
    EXIT_FAILED,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    BlocksData,
    CommandResult,
    QuantizeData,
    SelftestData,
    SweepData,
)
from matcher import analysis, typemath
from matcher.coder import decode_stream, encode_stream
from matcher.errors import BlockFileFormatError, CCDMError, LengthMismatch, NotACodeword
from matcher.selftest import run_selftest
from models.distribution import CodeParams, Distribution, load_distribution

logger = logging.getLogger(__name__)

def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def non_negative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def grid(text: str) -> Tuple[int, ...]:
    """'preset', a single blocklength, or a comma-separated list"""
    if text == "preset":
        return analysis.PRESET_GRID
    values = tuple(positive_int(part.strip()) for part in text.split(",") if part.strip())
    if not values:
        raise argparse.ArgumentTypeError(f"empty grid: {text!r}")
    return values


def _load_params(args) -> Tuple[Distribution, CodeParams]:
    dist = load_distribution(args.dist)
    params = CodeParams.for_distribution(dist, args.n)
    logger.info(f"✓ Code parameters: composition {params.composition}, m={params.m}, n={params.n}")
    return dist, params


def _map_blocks(fn: Callable, blocks: List, workers: int) -> List:
    """Apply fn to every block, in input order"""
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, blocks, chunksize=max(1, len(blocks) // (4 * workers))))
    return [fn(block) for block in blocks]


def _decode_block(seq: Sequence[int], params: CodeParams, lenient: bool) -> Tuple[Tuple[int, ...], bool]:
    """Decoded bits and whether the block was outside the codebook"""
    try:
        return decode_stream(seq, params, strict=True), False
    except NotACodeword:
        if not lenient:
            raise
        return decode_stream(seq, params, strict=False), True


def cmd_quantize(args) -> CommandResult:
    dist, params = _load_params(args)
    comp = params.composition
    data: QuantizeData = {
        "counts": list(comp.counts),
        "n": comp.n,
        "k": comp.k,
        "m": params.m,
        "type_class_size": params.type_class_size,
        "log2_type_class_size": typemath.log2_type_class_size(comp),
        "type_probs": [c / comp.n for c in comp.counts],
        "rate": params.m / params.n,
        "rate_exact": f"{params.m}/{params.n}",
        "h_bar": typemath.entropy(comp),
        "kl_gap": typemath.kl_divergence(comp, dist),
        "ndiv": typemath.normalized_divergence(dist, comp),
    }
    if not args.json:
        print(render("quantize.jinja2", **data))
    return CommandResult("quantize", data=data)


def cmd_encode(args) -> CommandResult:
    _, params = _load_params(args)
    source = read_bit_blocks(args.input)
    if source.m != params.m:
        raise LengthMismatch(f"input blocks have m={source.m}, code parameters need m={params.m}")

    logger.info(f"→ Encoding {len(source.blocks)} blocks")
    words = _map_blocks(partial(encode_stream, params=params), source.blocks, args.workers)
    write_symbol_blocks(args.output, SymbolBlockFile(n=params.n, k=params.k, blocks=words))
    logger.info(f"✓ Wrote {len(words)} symbol blocks to {args.output}")

    data: BlocksData = {"blocks": len(words), "m": params.m, "n": params.n, "k": params.k, "output": args.output}
    if not args.json:
        print(render("blocks.jinja2", command="encode", warnings=0, **data))
    return CommandResult("encode", data=data)


def cmd_decode(args) -> CommandResult:
    _, params = _load_params(args)
    source = read_symbol_blocks(args.input)
    if source.n != params.n or source.k != params.k:
        raise BlockFileFormatError(
            f"symbol file has n={source.n}, k={source.k}; code parameters need n={params.n}, k={params.k}"
        )

    logger.info(f"→ Decoding {len(source.blocks)} blocks ({'lenient' if args.lenient else 'strict'})")
    decoded = _map_blocks(
        partial(_decode_block, params=params, lenient=args.lenient), source.blocks, args.workers
    )
    blocks = [bits for bits, _ in decoded]
    warnings = sum(1 for _, flagged in decoded if flagged)
    if warnings:
        logger.warning(f"{warnings} block(s) were not codewords and were decoded leniently")

    write_bit_blocks(args.output, BitBlockFile(m=params.m, blocks=blocks))
    logger.info(f"✓ Wrote {len(blocks)} bit blocks to {args.output}")

    data: BlocksData = {
        "blocks": len(blocks), "m": params.m, "n": params.n, "k": params.k,
        "output": args.output, "warnings": warnings,
    }
    if not args.json:
        print(render("blocks.jinja2", command="decode", **data))
    return CommandResult("decode", data=data)


def cmd_sweep(args) -> CommandResult:
    dist = load_distribution(args.dist)
    records = analysis.sweep(dist, list(args.grid), workers=args.workers)
    analysis.emit_report(records, args.format, args.out)
    data: SweepData = {"records": len(records), "format": args.format, "output": args.out}
    return CommandResult("sweep", data=data)


def cmd_selftest(args) -> CommandResult:
    report = run_selftest(
        max_n=args.max_n,
        trials=args.trials,
        seed=args.seed,
        large_trials=args.large_trials,
        workers=args.workers,
    )
    suites = [
        {"name": s.name, "cases": s.cases, "failures": s.failures,
         "first_failure": s.first_failure, "passed": s.passed}
        for s in report.suites
    ]
    if not args.json:
        print(render(
            "selftest.jinja2",
            max_n=report.max_n, trials=report.trials, seed=report.seed,
            large_trials=report.large_trials,
            compositions=[str(c) for c in report.compositions],
            suites=suites, passed=report.passed,
        ))
    data: SelftestData = {"suites": suites, "compositions": [list(c.counts) for c in report.compositions]}
    if report.passed:
        return CommandResult("selftest", data=data)
    return CommandResult("selftest", exit_code=EXIT_FAILED, data=data, error="selftest failed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")

    code = argparse.ArgumentParser(add_help=False)
    code.add_argument("--dist", required=True, help="target distribution file")
    code.add_argument("--n", required=True, type=positive_int, help="output blocklength")

    workers = argparse.ArgumentParser(add_help=False)
    workers.add_argument("--workers", type=positive_int, default=config.CCDM_WORKERS,
                         help="process pool size (1 = sequential)")

    parser = argparse.ArgumentParser(
        prog="ccdm",
        description="Constant composition distribution matcher",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantize", parents=[common, code], help="show code parameters")
    p.set_defaults(handler=cmd_quantize)

    p = sub.add_parser("encode", parents=[common, code, workers], help="bit blocks to symbol blocks")
    p.add_argument("--in", dest="input", required=True, help="bit block file")
    p.add_argument("--out", dest="output", required=True, help="symbol block file")
    p.set_defaults(handler=cmd_encode)

    p = sub.add_parser("decode", parents=[common, code, workers], help="symbol blocks to bit blocks")
    p.add_argument("--in", dest="input", required=True, help="symbol block file")
    p.add_argument("--out", dest="output", required=True, help="bit block file")
    p.add_argument("--lenient", action="store_true",
                   help="decode non-codewords with the floor formula instead of failing")
    p.set_defaults(handler=cmd_decode)

    p = sub.add_parser("sweep", parents=[common, workers], help="rate and divergence over blocklengths")
    p.add_argument("--dist", required=True, help="target distribution file")
    p.add_argument("--grid", type=grid, default=analysis.PRESET_GRID,
                   help="'preset', one blocklength, or a comma-separated list")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="report path, '-' for stdout")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("selftest", parents=[common, workers], help="check the coder against the reference")
    p.add_argument("--max-n", type=positive_int, default=config.CCDM_SELFTEST_MAX_N)
    p.add_argument("--trials", type=positive_int, default=config.CCDM_SELFTEST_TRIALS)
    p.add_argument("--seed", type=int, default=config.CCDM_SELFTEST_SEED)
    p.add_argument("--large-trials", type=non_negative_int, default=config.CCDM_SELFTEST_LARGE_TRIALS,
                   help="random inputs per large reference blocklength (0 = skip)")
    p.set_defaults(handler=cmd_selftest)

    return parser


def _emit(result: CommandResult, as_json: bool) -> None:
    if as_json:
        print(json.dumps(result.to_dict(), indent=2))


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    # The report itself is the stdout output when it goes to '-'
    as_json = args.json and not (args.command == "sweep" and args.out == "-")

    try:
        result = args.handler(args)
    except CCDMError as e:
        logger.error(f"{args.command} failed: {e}")
        result = CommandResult.from_error(args.command, e)
        _emit(result, as_json)
        return result.exit_code
    except OSError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        _emit(CommandResult.from_error(args.command, e, EXIT_IO), as_json)
        return EXIT_IO
    except Exception as e:
        if args.command != "selftest":
            raise
        logger.error(f"selftest crashed: {e}", exc_info=True)
        _emit(CommandResult.from_error(args.command, e), as_json)
        return EXIT_FAILED

    _emit(result, as_json)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
