"""
Type Math
Entropy, divergence, n-type quantization, exact type-class combinatorics
and the closed-form rate and divergence formulas of constant composition
distribution matching
"""
import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np

from matcher.errors import SupportViolation, ZeroProbability
from models.distribution import Composition, Distribution

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

ProbabilityVector = Union[Distribution, Composition]


def _as_array(p: ProbabilityVector) -> np.ndarray:
    if isinstance(p, Composition):
        return np.asarray(p.counts, dtype=np.float64) / p.n
    return np.asarray(p.probs, dtype=np.float64)


def entropy(dist: ProbabilityVector) -> float:
    """
    Entropy in bits per symbol; zero entries contribute 0

    A Composition is read as its induced type n_a / n.
    """
    p = _as_array(dist)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)) / LN2)


def kl_divergence(phat: ProbabilityVector, p: ProbabilityVector) -> float:
    """
    Informational divergence D(phat || p) in bits

    Raises:
        SupportViolation: if phat(a) > 0 where p(a) = 0
        ValueError: if the alphabets differ in size
    """
    q = _as_array(phat)
    r = _as_array(p)
    if q.shape != r.shape:
        raise ValueError(f"alphabet sizes differ: {q.size} vs {r.size}")

    active = q > 0
    if np.any(r[active] <= 0):
        bad = [int(a) for a in np.flatnonzero(active & (r <= 0))]
        raise SupportViolation(f"symbols {bad} have mass in phat but not in p")

    q = q[active]
    r = r[active]
    return float(np.sum(q * (np.log(q) - np.log(r))) / LN2)


def quantize_to_ntype(dist: Distribution, n: int) -> Composition:
    """
    Closest n-type to dist in informational divergence

    Greedy incremental allocation: n times, increment the count of the
    support symbol whose increment raises n * D(P' || P) the least. The
    objective is separable and convex in the counts, so the result is the
    exact argmin. Equal increments go to the lowest symbol index.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    support = dist.support
    counts = [0] * dist.k
    # Increment cost of c -> c+1, up to the common -ln(n) term:
    # (c+1) ln(c+1) - c ln(c) - ln(p)
    neg_log_p = {a: -math.log(dist[a]) for a in support}
    cost = {a: neg_log_p[a] for a in support}

    for _ in range(n):
        best = min(support, key=lambda a: (cost[a], a))
        c = counts[best] + 1
        counts[best] = c
        cost[best] = (c + 1) * math.log(c + 1) - c * math.log(c) + neg_log_p[best]

    return Composition(counts=tuple(counts))


def type_class_size(comp: Composition) -> int:
    """Exact multinomial n! / (n_0! ... n_{k-1}!)"""
    size = 1
    remaining = 0
    for c in comp.counts:
        remaining += c
        size *= math.comb(remaining, c)
    return size


def input_length(comp: Composition) -> int:
    """m = floor(log2 |T|), exact on the unbounded integer"""
    return type_class_size(comp).bit_length() - 1


def log2_type_class_size(comp: Composition) -> float:
    """log2 |T| computed from the exact integer"""
    return math.log2(type_class_size(comp))


def type_class_lower_bound_log2(comp: Composition, tight: bool = True) -> float:
    """
    Method-of-types lower bound on log2 |T|

    tight:  n H(P) - log2 C(n+k-1, k-1)
    loose:  n H(P) - k log2(n+k)
    """
    n, k = comp.n, comp.k
    nh = n * entropy(comp)
    if tight:
        return nh - math.log2(math.comb(n + k - 1, k - 1))
    return nh - k * math.log2(n + k)


def divergence_terms(dist: Distribution, comp: Composition) -> Tuple[float, float]:
    """
    The two summands of the unnormalized matcher divergence

    Returns:
        (n H(P) - m, n D(P || P_A)) where P is the type of comp
    """
    n = comp.n
    m = input_length(comp)
    return n * entropy(comp) - m, n * kl_divergence(comp, dist)


def normalized_divergence(dist: Distribution, comp: Composition) -> float:
    """H(P) - m/n + D(P || P_A) in bits per symbol, P the type of comp"""
    n = comp.n
    m = input_length(comp)
    return entropy(comp) - m / n + kl_divergence(comp, dist)


def quantization_gap_bound(dist: Distribution, n: int) -> float:
    """
    Upper bound k / (min_a P_A(a) n^2) on D(P || P_A) of the quantized type

    Raises:
        ZeroProbability: if any entry of dist is zero
    """
    smallest = min(dist.probs)
    if smallest <= 0:
        raise ZeroProbability("quantization gap bound needs a strictly positive distribution")
    return dist.k / (smallest * n * n)


def rate_lower_bound(entropy_value: float, n: int, k: int) -> float:
    """-k log2(n+k)/n + H - 1/n"""
    return -k * math.log2(n + k) / n + entropy_value - 1.0 / n


def brute_force_quantize(dist: Distribution, n: int) -> Tuple[Composition, float]:
    """
    Exhaustive argmin of D(P' || P_A) over all n-types inside supp(P_A)

    Reference for the greedy quantizer; exponential in k.
    """
    support = dist.support
    best = None
    best_kl = math.inf
    for counts in _compositions(n, len(support)):
        full = [0] * dist.k
        for a, c in zip(support, counts):
            full[a] = c
        comp = Composition(counts=tuple(full))
        kl = kl_divergence(comp, dist)
        if kl < best_kl:
            best, best_kl = comp, kl
    return best, best_kl


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def all_compositions(n: int, k: int):
    """Every count vector of length k summing to n, zeros allowed"""
    for counts in _compositions(n, k):
        yield Composition(counts=counts)


def symbol_counts(seq: Sequence[int], k: int) -> Tuple[int, ...]:
    counts = [0] * k
    for s in seq:
        counts[s] += 1
    return tuple(counts)
