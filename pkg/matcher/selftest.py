"""
Self Test
Oracle-equivalence, round-trip, composition and uniformity suites that
check the streaming coder against the exact ranker
"""
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

import config
from matcher import ranker
from matcher.analysis import REFERENCE_DISTRIBUTION
from matcher.coder import SourceModel, decode_stream, encode_stream, path_probability
from matcher.errors import CCDMError, NotACodeword
from matcher.typemath import all_compositions, quantize_to_ntype, symbol_counts
from models.distribution import CodeParams, Composition, Distribution

logger = logging.getLogger(__name__)

WORKED_EXAMPLE = Composition(counts=(2, 2))
WORKED_EXAMPLE_CODEBOOK = ("0011", "0110", "1001", "1100")
CORPUS_SIZE = 25
MAX_ALPHABET = 5
UNIFORMITY_MAX_N = 10
UNIFORMITY_MAX_K = 4
# Blocklengths of the randomized reference-distribution sample
LARGE_BLOCKLENGTHS = (1000, 10000)
CODER_SUITES = ("oracle", "round-trip", "composition")


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: int = 0
    first_failure: Optional[str] = None

    def check(self, ok: bool, detail: Callable[[], str]) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if self.first_failure is None:
                self.first_failure = detail()

    def merge(self, other: "SuiteResult") -> None:
        self.cases += other.cases
        self.failures += other.failures
        if self.first_failure is None:
            self.first_failure = other.first_failure

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class SelftestReport:
    max_n: int
    trials: int
    seed: int
    large_trials: int = 0
    compositions: List[Composition] = field(default_factory=list)
    suites: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)


def build_corpus(max_n: int, seed: int) -> List[CodeParams]:
    """(2,2) when max_n allows, plus quantized random distributions"""
    rng = np.random.default_rng(seed)
    corpus = []
    if max_n >= WORKED_EXAMPLE.n:
        corpus.append(CodeParams.from_composition(WORKED_EXAMPLE))
    for _ in range(CORPUS_SIZE):
        k = int(rng.integers(1, MAX_ALPHABET + 1))
        n = int(rng.integers(1, max_n + 1))
        weights = rng.dirichlet(np.ones(k))
        dist = Distribution(probs=tuple(float(w) for w in weights / weights.sum()))
        corpus.append(CodeParams.from_composition(quantize_to_ntype(dist, n)))
    return corpus


def _inputs(params: CodeParams, trials: int, rng: random.Random) -> List[int]:
    if params.codebook_size <= trials:
        return list(range(params.codebook_size))
    return [rng.getrandbits(params.m) for _ in range(trials)]


def _worked_example(suite: SuiteResult) -> None:
    params = CodeParams.from_composition(WORKED_EXAMPLE)
    words = tuple(ranker.format_symbols(w) for w in ranker.codebook(params))
    suite.check(
        params.m == 2 and params.type_class_size == 6,
        lambda: f"(2,2) has m={params.m}, |T|={params.type_class_size}",
    )
    suite.check(words == WORKED_EXAMPLE_CODEBOOK, lambda: f"(2,2) codebook is {words}")
    for j, expected in enumerate(WORKED_EXAMPLE_CODEBOOK):
        bits = ranker.int_to_bits(j, params.m)
        got = ranker.format_symbols(encode_stream(bits, params))
        suite.check(got == expected, lambda: f"(2,2) encodes {ranker.format_bits(bits)} to {got}")
        back = decode_stream(ranker.parse_symbols(expected), params)
        suite.check(back == bits, lambda: f"(2,2) decodes {expected} to {ranker.format_bits(back)}")
    try:
        decode_stream(ranker.parse_symbols("0101"), params, strict=True)
        suite.check(False, lambda: "(2,2) accepted 0101 in strict mode")
    except NotACodeword:
        suite.check(True, lambda: "")


def check_inputs(params: CodeParams, inputs: Sequence[int]) -> List[SuiteResult]:
    """Oracle, round-trip and composition checks of the given input values"""
    oracle, round_trip, composition = (SuiteResult(name) for name in CODER_SUITES)
    comp = params.composition
    for j in inputs:
        bits = ranker.int_to_bits(j, params.m)
        label = f"n={comp.n} {comp.counts} j={j}" if comp.n > 16 else f"{comp} j={j}"
        try:
            word = encode_stream(bits, params)
            expected = ranker.ref_encode(bits, params)
            oracle.check(word == expected, lambda: f"{label}: encode differs from the reference")
            composition.check(
                symbol_counts(word, comp.k) == comp.counts,
                lambda: f"{label}: output has the wrong composition",
            )
            back = decode_stream(word, params)
            round_trip.check(back == bits, lambda: f"{label}: decoded to a different block")
            ref_back = ranker.ref_decode(word, params)
            oracle.check(back == ref_back, lambda: f"{label}: decode differs from the reference")
        except CCDMError as e:
            oracle.check(False, lambda: f"{label}: {type(e).__name__}: {e}")
    logger.debug(f"Checked {len(inputs)} inputs of n={comp.n} (m={params.m})")
    return [oracle, round_trip, composition]


def run_checks(tasks: Sequence[Tuple[CodeParams, Sequence[int]]], workers: int = None) -> List[SuiteResult]:
    """
    check_inputs over (params, inputs) tasks, merged per suite

    Args:
        tasks: Parameters and input values to check together
        workers: Process pool size; 1 checks sequentially
    """
    if workers is None:
        workers = config.CCDM_WORKERS
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(check_inputs, [p for p, _ in tasks], [i for _, i in tasks]))
    else:
        parts = [check_inputs(p, i) for p, i in tasks]

    merged = [SuiteResult(name) for name in CODER_SUITES]
    for part in parts:
        for total, piece in zip(merged, part):
            total.merge(piece)
    return merged


def sample_tasks(params: CodeParams, inputs: Sequence[int], chunks: int) -> List[Tuple[CodeParams, List[int]]]:
    """Split inputs into about `chunks` tasks for run_checks"""
    size = max(1, -(-len(inputs) // max(1, chunks)))
    return [(params, list(inputs[i:i + size])) for i in range(0, len(inputs), size)]


def _uniform_paths(counts: Tuple[int, ...], memo: Dict) -> Tuple[FrozenSet[Fraction], int]:
    """Distinct path probabilities over every completion of counts, and how many paths"""
    if counts in memo:
        return memo[counts]
    if not any(counts):
        result = (frozenset([Fraction(1)]), 1)
    else:
        probs, paths = set(), 0
        model = SourceModel(Composition(counts=counts))
        for a, p in enumerate(model.next_symbol_distribution()):
            if not p:
                continue
            rest = counts[:a] + (counts[a] - 1,) + counts[a + 1:]
            sub, sub_paths = _uniform_paths(rest, memo)
            probs.update(p * q for q in sub)
            paths += sub_paths
        result = (frozenset(probs), paths)
    memo[counts] = result
    return result


def _uniformity(max_n: int) -> SuiteResult:
    """Every sequence of every type class has probability 1/|T|"""
    suite = SuiteResult("uniformity")
    memo: Dict = {}
    for n in range(1, min(max_n, UNIFORMITY_MAX_N) + 1):
        for k in range(1, UNIFORMITY_MAX_K + 1):
            for comp in all_compositions(n, k):
                size = CodeParams.from_composition(comp).type_class_size
                target = Fraction(1, size)
                probs, paths = _uniform_paths(comp.counts, memo)
                suite.check(probs == {target}, lambda: f"{comp}: path probabilities {sorted(probs)} != {target}")
                suite.check(paths == size, lambda: f"{comp}: {paths} paths, |T|={size}")
                for index in {0, size - 1}:
                    seq = ranker.unrank(index, comp)
                    p = path_probability(seq, comp)
                    suite.check(p == target, lambda: f"{comp} {seq}: path probability {p} != {target}")
    return suite


def run_selftest(
    max_n: int = None,
    trials: int = None,
    seed: int = None,
    large_trials: int = None,
    workers: int = None,
) -> SelftestReport:
    """
    Run all suites

    Args:
        max_n: Largest blocklength in the composition corpus
        trials: Inputs per composition when 2^m exceeds it (else exhaustive)
        seed: Seed of the random corpus and inputs
        large_trials: Random inputs per reference-distribution blocklength
            in LARGE_BLOCKLENGTHS; 0 skips them
        workers: Process pool size for the coder suites

    Returns:
        SelftestReport; passed is True iff no suite failed
    """
    max_n = config.CCDM_SELFTEST_MAX_N if max_n is None else max_n
    trials = config.CCDM_SELFTEST_TRIALS if trials is None else trials
    seed = config.CCDM_SELFTEST_SEED if seed is None else seed
    large_trials = config.CCDM_SELFTEST_LARGE_TRIALS if large_trials is None else large_trials
    workers = config.CCDM_WORKERS if workers is None else workers
    if max_n < 1 or trials < 1 or large_trials < 0 or workers < 1:
        raise ValueError("max_n, trials and workers must be positive, large_trials non-negative")

    corpus = build_corpus(max_n, seed)
    report = SelftestReport(
        max_n=max_n,
        trials=trials,
        seed=seed,
        large_trials=large_trials,
        compositions=[p.composition for p in corpus],
    )

    if max_n >= WORKED_EXAMPLE.n:
        suite = SuiteResult("worked-example")
        _worked_example(suite)
        report.suites.append(suite)

    rng = random.Random(seed)
    tasks = [(params, _inputs(params, trials, rng)) for params in corpus]
    if large_trials:
        for n in LARGE_BLOCKLENGTHS:
            params = CodeParams.for_distribution(REFERENCE_DISTRIBUTION, n)
            inputs = [rng.getrandbits(params.m) for _ in range(large_trials)]
            tasks.extend(sample_tasks(params, inputs, 4 * workers))

    logger.info(f"→ Checking coder on {len(corpus)} compositions (trials={trials}, "
                f"large_trials={large_trials}, workers={workers})")
    report.suites.extend(run_checks(tasks, workers))
    logger.info("→ Checking draw-without-replacement uniformity")
    report.suites.append(_uniformity(max_n))

    for suite in report.suites:
        if suite.passed:
            logger.info(f"✓ {suite.name}: {suite.cases} cases")
        else:
            logger.error(f"✗ {suite.name}: {suite.failures}/{suite.cases} failed; first: {suite.first_failure}")
    return report
