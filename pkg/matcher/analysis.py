"""
Analysis
Blocklength sweeps of rate, normalized divergence and bounds, the
enumeration cross-check of the divergence formula, and CSV/JSON reports
"""
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Sequence, TextIO, Union

import numpy as np
import pandas as pd

import config
from matcher import typemath
from matcher.errors import IoFailure, TooLarge, ZeroProbability
from matcher.ranker import codebook
from models.distribution import CodeParams, Distribution
from models.records import REPORT_COLUMNS, SweepRecord

logger = logging.getLogger(__name__)

REFERENCE_DISTRIBUTION = Distribution(probs=(0.0722, 0.1654, 0.3209, 0.4415))

PRESET_GRID = (
    10, 12, 13, 15, 18, 20, 23, 27, 31, 36, 41, 47, 54, 63, 72, 83, 95, 110,
    126, 146, 168, 193, 222, 256, 295, 339, 391, 450, 518, 596, 687, 791, 910,
    1048, 1207, 1389, 1600, 1842, 2121, 2442, 2812, 3237, 3728, 4292, 4942,
    5690, 6551, 7543, 8685, 10000,
)

# Reference series over PRESET_GRID
REFERENCE_NDIV = (
    0.562126661727604, 0.453382131629775, 0.432315402813148, 0.362627946590146,
    0.32526150119509, 0.333701299189644, 0.314842037123781, 0.254814991792944,
    0.241122814776856, 0.218374085844941, 0.197465216472161, 0.181067985474743,
    0.161410631702398, 0.138753521727418, 0.132928904631127, 0.118457253686564,
    0.103286820918822, 0.0931969744194568, 0.0816432955981793, 0.0724207118137824,
    0.0656126989642668, 0.0574280789747415, 0.0528788627834519, 0.0461917621521581,
    0.0405077728021532, 0.0355300898858071, 0.0330986077261811, 0.0290849444668692,
    0.0267730022617277, 0.0225935577896297, 0.0199173303496859, 0.0181652321707025,
    0.0160941358132567, 0.0146691836020913, 0.0127348302270843, 0.0112698186118978,
    0.00984009835184821, 0.00877160200036727, 0.00757741433384309, 0.00665916840780431,
    0.00602178166025024, 0.00538185939785032, 0.00466992737768425, 0.00414829300749415,
    0.00364836980728526, 0.00324842695904912, 0.00283984280494188, 0.00257743889115127,
    0.00222171632168395, 0.00201427300066644,
)

REFERENCE_RATE = (
    1.3, 1.33333333333333, 1.30769230769231, 1.33333333333333, 1.38888888888889,
    1.35, 1.47826086956522, 1.48148148148148, 1.48387096774194, 1.55555555555556,
    1.5609756097561, 1.5531914893617, 1.59259259259259, 1.61904761904762,
    1.61111111111111, 1.63855421686747, 1.65263157894737, 1.65454545454545,
    1.66666666666667, 1.68493150684932, 1.68452380952381, 1.69430051813472,
    1.6981981981982, 1.70703125, 1.70847457627119, 1.71091445427729,
    1.71611253196931, 1.72222222222222, 1.72200772200772, 1.72818791946309,
    1.73216885007278, 1.73198482932996, 1.73406593406593, 1.73568702290076,
    1.73736536868268, 1.73866090712743, 1.74125, 1.74158523344191,
    1.74257425742574, 1.74324324324324, 1.74395448079659, 1.74482545566883,
    1.74543991416309, 1.74603914259087, 1.74645892351275, 1.7469244288225,
    1.74736681422684, 1.7477131114941, 1.74795624640184, 1.7481,
)

REFERENCE_RATE_BOUND = (
    0.127172304177625, 0.333447606334, 0.415510321846716, 0.550666936082377,
    0.70357391330349, 0.783121772856436, 0.879699055233107, 0.979122227017426,
    1.05601323855616, 1.13101115134652, 1.18993348311484, 1.24607807368394,
    1.29767123632455, 1.34909273709859, 1.38911830003158, 1.42756277922482,
    1.46045715215521, 1.49255463612195, 1.51924545353945, 1.5452151307953,
    1.56734606455538, 1.58696293995494, 1.60470564304724, 1.6208585259221,
    1.63521255538442, 1.64778902502223, 1.65931418253453, 1.66943384200253,
    1.67847021125109, 1.68649804017855, 1.69373848318763, 1.7001278707242,
    1.70577998572569, 1.71084358983543, 1.71534382345736, 1.71931807561377,
    1.72287062693453, 1.72600963274519, 1.72879744673775, 1.73126708432167,
    1.73345789800972, 1.73539419477352, 1.73711455919074, 1.73863358495035,
    1.73997906739614, 1.74116859512528, 1.7422202842569, 1.74315063118236,
    1.74397266128654, 1.74469895726379,
)


def sweep_point(dist: Distribution, n: int) -> SweepRecord:
    """Composition, rate, divergence and bounds at blocklength n"""
    comp = typemath.quantize_to_ntype(dist, n)
    m = typemath.input_length(comp)
    h_bar = typemath.entropy(comp)
    try:
        gap_bound = typemath.quantization_gap_bound(dist, n)
    except ZeroProbability:
        gap_bound = None

    return SweepRecord(
        n=n,
        counts=comp.counts,
        m=m,
        rate=m / n,
        h_bar=h_bar,
        ndiv=typemath.normalized_divergence(dist, comp),
        kl_gap=typemath.kl_divergence(comp, dist),
        gap_bound=gap_bound,
        rate_bound=typemath.rate_lower_bound(typemath.entropy(dist), n, dist.k),
        rate_bound_hbar=typemath.rate_lower_bound(h_bar, n, dist.k),
    )


def sweep(dist: Distribution, n_values: Sequence[int], workers: int = None) -> List[SweepRecord]:
    """
    One SweepRecord per blocklength, in the order given

    Args:
        dist: Target distribution
        n_values: Output blocklengths (positive)
        workers: Process pool size; 1 evaluates sequentially

    Returns:
        List of SweepRecord
    """
    if not n_values:
        raise ValueError("n_values must not be empty")
    if any(n < 1 for n in n_values):
        raise ValueError(f"blocklengths must be positive: {list(n_values)}")
    if workers is None:
        workers = config.CCDM_WORKERS

    logger.info(f"→ Sweeping {len(n_values)} blocklengths (workers={workers})")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(sweep_point, [dist] * len(n_values), n_values))
    else:
        records = [sweep_point(dist, n) for n in n_values]
    logger.info(f"✓ Sweep complete: n={n_values[0]}..{n_values[-1]}")
    return records


def empirical_divergence(dist: Distribution, params: CodeParams, limit: int = None) -> float:
    """
    Normalized divergence by enumerating the codebook

    (1/n) sum_c 2^-m log2(2^-m / P_A^n(c)) over all 2^m codewords.

    Raises:
        TooLarge: if m exceeds the enumeration limit
        SupportViolation: if the composition uses a symbol outside supp(P_A)
    """
    if limit is None:
        limit = config.CCDM_ENUMERATION_LIMIT
    if params.m > limit:
        raise TooLarge(f"m={params.m} exceeds the enumeration limit {limit}")
    # support check
    typemath.kl_divergence(params.composition, dist)

    words = np.asarray(codebook(params, limit), dtype=np.intp).reshape(params.codebook_size, params.n)
    with np.errstate(divide="ignore"):
        log_p = np.log(np.asarray(dist.probs, dtype=np.float64)) / typemath.LN2
    log_word = log_p[words].sum(axis=1)
    return float(np.mean(-params.m - log_word)) / params.n


def records_to_frame(records: Iterable[SweepRecord]) -> pd.DataFrame:
    """Report rows in column order; counts joined by spaces"""
    rows = []
    for record in records:
        row = record.model_dump()
        row["counts"] = " ".join(str(c) for c in record.counts)
        rows.append(row)
    return pd.DataFrame(rows, columns=list(REPORT_COLUMNS))


def _significant(value):
    if value is None:
        return None
    return float(f"{value:.{config.REPORT_SIGNIFICANT_DIGITS}g}")


def _record_to_json(record: SweepRecord) -> dict:
    data = record.model_dump()
    out = {}
    for column in REPORT_COLUMNS:
        value = data[column]
        if isinstance(value, float):
            value = _significant(value)
        elif column == "counts":
            value = list(value)
        out[column] = value
    return out


def _write(text: str, destination: Union[str, TextIO]) -> None:
    if destination == "-":
        sys.stdout.write(text)
        return
    if hasattr(destination, "write"):
        destination.write(text)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write report {destination}: {e}") from e


def emit_report(records: Sequence[SweepRecord], fmt: str, destination: Union[str, TextIO]) -> None:
    """
    Write sweep records as CSV or JSON with 15 significant digits

    Args:
        records: Non-empty list of records
        fmt: 'csv' or 'json'
        destination: Path, '-' for stdout, or an open text stream

    Raises:
        IoFailure: if the destination cannot be written
    """
    if not records:
        raise ValueError("no records to report")

    if fmt == "csv":
        text = records_to_frame(records).to_csv(
            index=False,
            float_format=f"%.{config.REPORT_SIGNIFICANT_DIGITS}g",
            na_rep="",
            lineterminator="\n",
        )
    elif fmt == "json":
        text = json.dumps([_record_to_json(r) for r in records], indent=2) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")

    _write(text, destination)
    logger.info(f"✓ Wrote {len(records)} {fmt} records")


def load_report(path: str, fmt: str) -> List[SweepRecord]:
    """Parse a report written by emit_report"""
    try:
        if fmt == "csv":
            frame = pd.read_csv(path, dtype={"counts": str}, keep_default_na=False)
            records = []
            for row in frame.to_dict(orient="records"):
                row["n"], row["m"] = int(row["n"]), int(row["m"])
                row["counts"] = tuple(int(c) for c in row["counts"].split())
                row["gap_bound"] = None if row["gap_bound"] == "" else float(row["gap_bound"])
                records.append(SweepRecord(**row))
            return records
        if fmt == "json":
            with open(path, "r", encoding="utf-8") as f:
                return [SweepRecord(**obj) for obj in json.load(f)]
    except OSError as e:
        raise IoFailure(f"cannot read report {path}: {e}") from e
    raise ValueError(f"unknown report format {fmt!r}")


def reference_series() -> pd.DataFrame:
    """Reference series as a frame indexed by n"""
    return pd.DataFrame(
        {"ndiv": REFERENCE_NDIV, "rate": REFERENCE_RATE, "rate_bound": REFERENCE_RATE_BOUND},
        index=pd.Index(PRESET_GRID, name="n"),
    )


def max_deviation(records: Sequence[SweepRecord], column: str) -> float:
    """Largest absolute difference from the reference series at shared n"""
    reference = reference_series()[column]
    diffs = [abs(getattr(r, column) - reference[r.n]) for r in records if r.n in reference.index]
    return max(diffs) if diffs else math.nan
