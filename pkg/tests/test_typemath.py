"""Entropy, divergence, quantization and the closed-form formulas"""
import math

import numpy as np
import pytest

from matcher import typemath
from matcher.errors import SupportViolation, ZeroProbability
from models.distribution import Composition, Distribution

REFERENCE_ENTROPY = 1.750114273000667


def test_entropy_examples(uniform_binary, reference_dist):
    assert typemath.entropy(uniform_binary) == pytest.approx(1.0, abs=1e-15)
    assert typemath.entropy(reference_dist) == pytest.approx(REFERENCE_ENTROPY, abs=1e-12)
    assert typemath.entropy(Distribution(probs=(1.0, 0.0))) == 0.0


def test_entropy_bounded_by_log_alphabet(reference_dist):
    assert 0.0 <= typemath.entropy(reference_dist) <= math.log2(reference_dist.k)


def test_entropy_of_composition_uses_type():
    assert typemath.entropy(Composition(counts=(2, 2))) == pytest.approx(1.0)


def test_kl_divergence(reference_dist):
    assert typemath.kl_divergence(reference_dist, reference_dist) == 0.0
    phat = Distribution(probs=(0.1, 0.2, 0.3, 0.4))
    expected = 0.562126661727604 - typemath.entropy(phat) + 1.3
    assert typemath.kl_divergence(phat, reference_dist) == pytest.approx(expected, abs=1e-9)
    assert typemath.kl_divergence(phat, reference_dist) == pytest.approx(0.015687, abs=1e-6)


def test_kl_support_violation():
    with pytest.raises(SupportViolation):
        typemath.kl_divergence(Distribution(probs=(1.0, 0.0)), Distribution(probs=(0.0, 1.0)))


def test_kl_alphabet_mismatch():
    with pytest.raises(ValueError):
        typemath.kl_divergence(Distribution(probs=(1.0,)), Distribution(probs=(0.5, 0.5)))


@pytest.mark.parametrize("probs,n,counts", [
    ((0.5, 0.5), 4, (2, 2)),
    ((0.0722, 0.1654, 0.3209, 0.4415), 10, (1, 2, 3, 4)),
    ((1.0, 0.0), 7, (7, 0)),
    ((0.5, 0.5), 1, (1, 0)),
])
def test_quantize_examples(probs, n, counts):
    assert typemath.quantize_to_ntype(Distribution(probs=probs), n).counts == counts


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 11, 16])
def test_quantize_matches_brute_force(reference_dist, n):
    comp = typemath.quantize_to_ntype(reference_dist, n)
    _, best_kl = typemath.brute_force_quantize(reference_dist, n)
    assert comp.n == n
    assert typemath.kl_divergence(comp, reference_dist) == pytest.approx(best_kl, abs=1e-12)


def test_quantize_matches_brute_force_random_targets(rng):
    for _ in range(12):
        k = rng.randint(1, 5)
        weights = [rng.random() + 1e-3 for _ in range(k)]
        if k > 2:
            weights[rng.randrange(k - 1)] = 0.0
        total = math.fsum(weights)
        head = [w / total for w in weights[:-1]]
        dist = Distribution(probs=tuple(head) + (1.0 - math.fsum(head),))
        n = rng.randint(1, 12)
        comp = typemath.quantize_to_ntype(dist, n)
        _, best_kl = typemath.brute_force_quantize(dist, n)
        assert typemath.kl_divergence(comp, dist) == pytest.approx(best_kl, abs=1e-12)


def test_quantize_respects_support():
    dist = Distribution(probs=(0.3, 0.0, 0.7))
    for n in range(1, 20):
        assert typemath.quantize_to_ntype(dist, n).counts[1] == 0


def test_quantize_rejects_nonpositive_n(reference_dist):
    with pytest.raises(ValueError):
        typemath.quantize_to_ntype(reference_dist, 0)


@pytest.mark.parametrize("counts,size,m", [
    ((2, 2), 6, 2),
    ((5,), 1, 0),
    ((1, 2, 3, 4), 12600, 13),
    ((1, 1), 2, 1),
    ((0, 3), 1, 0),
])
def test_type_class_size_and_input_length(counts, size, m):
    comp = Composition(counts=counts)
    assert typemath.type_class_size(comp) == size
    assert typemath.input_length(comp) == m


def test_type_class_size_is_exact_at_scale():
    comp = Composition(counts=(5000, 5000))
    assert typemath.type_class_size(comp) == math.comb(10000, 5000)
    assert typemath.input_length(comp) == math.comb(10000, 5000).bit_length() - 1


def test_type_class_lower_bounds():
    for counts in [(2, 2), (1, 2, 3, 4), (10, 0, 7), (30, 1)]:
        comp = Composition(counts=counts)
        exact = typemath.log2_type_class_size(comp)
        tight = typemath.type_class_lower_bound_log2(comp, tight=True)
        loose = typemath.type_class_lower_bound_log2(comp, tight=False)
        assert loose <= tight + 1e-12
        assert tight <= exact + 1e-12


def test_normalized_divergence_examples(reference_dist, uniform_binary):
    for n, expected in [(10, 0.562126661727604), (256, 0.0461917621521581)]:
        comp = typemath.quantize_to_ntype(reference_dist, n)
        assert typemath.normalized_divergence(reference_dist, comp) == pytest.approx(expected, abs=1e-9)
    assert typemath.normalized_divergence(uniform_binary, Composition(counts=(2, 2))) == pytest.approx(0.5)


def test_divergence_terms_sum_to_normalized(reference_dist):
    comp = typemath.quantize_to_ntype(reference_dist, 47)
    codebook_term, quantization_term = typemath.divergence_terms(reference_dist, comp)
    assert codebook_term >= 0
    assert quantization_term >= 0
    total = (codebook_term + quantization_term) / comp.n
    assert total == pytest.approx(typemath.normalized_divergence(reference_dist, comp), abs=1e-12)


def test_rate_never_exceeds_type_entropy(reference_dist):
    for n in (10, 100, 1000):
        comp = typemath.quantize_to_ntype(reference_dist, n)
        assert typemath.input_length(comp) / n <= typemath.entropy(comp) + 1e-12


def test_quantization_gap_bound(uniform_binary, reference_dist):
    assert typemath.quantization_gap_bound(uniform_binary, 10) == pytest.approx(0.04)
    assert typemath.quantization_gap_bound(reference_dist, 100) == pytest.approx(4 / 722, rel=1e-12)
    with pytest.raises(ZeroProbability):
        typemath.quantization_gap_bound(Distribution(probs=(1.0, 0.0)), 10)


def test_quantization_gap_bound_holds(reference_dist):
    for n in (10, 31, 100, 500):
        comp = typemath.quantize_to_ntype(reference_dist, n)
        assert typemath.kl_divergence(comp, reference_dist) <= typemath.quantization_gap_bound(reference_dist, n)


@pytest.mark.parametrize("h,n,k,expected", [
    (REFERENCE_ENTROPY, 10, 4, 0.127172304177625),
    (REFERENCE_ENTROPY, 10000, 4, 1.74469895726379),
    (0.0, 1, 1, -2.0),
])
def test_rate_lower_bound(h, n, k, expected):
    assert typemath.rate_lower_bound(h, n, k) == pytest.approx(expected, abs=1e-9)


def test_all_compositions_counts():
    comps = list(typemath.all_compositions(4, 3))
    assert len(comps) == math.comb(6, 2)
    assert all(c.n == 4 for c in comps)


def test_symbol_counts():
    assert typemath.symbol_counts((0, 2, 2, 1), 4) == (1, 1, 2, 0)


def _random_targets(count, max_alphabet, seed, zeros=True):
    """Dirichlet targets; every fourth one has a zero entry when zeros is set"""
    rng = np.random.default_rng(seed)
    targets = []
    for i in range(count):
        k = int(rng.integers(1, max_alphabet + 1))
        weights = rng.dirichlet(np.ones(k))
        if zeros and k > 2 and i % 4 == 0:
            weights[int(rng.integers(0, k))] = 0.0
        targets.append(Distribution(probs=tuple(float(w) for w in weights / weights.sum())))
    return targets


@pytest.mark.slow
def test_quantizer_optimal_and_gap_bounded_on_random_corpus():
    for dist in _random_targets(100, max_alphabet=4, seed=2016):
        positive = min(dist.probs) > 0
        for n in range(1, 31):
            comp = typemath.quantize_to_ntype(dist, n)
            kl = typemath.kl_divergence(comp, dist)
            _, best_kl = typemath.brute_force_quantize(dist, n)
            assert kl == pytest.approx(best_kl, abs=1e-12), (dist.probs, n)
            if positive:
                assert kl < typemath.quantization_gap_bound(dist, n), (dist.probs, n)


def _sandwich_corpus():
    for n in range(1, 13):
        for k in range(1, 5):
            yield from typemath.all_compositions(n, k)
    for dist in _random_targets(20, max_alphabet=5, seed=7):
        for n in (17, 64, 255, 1000):
            yield typemath.quantize_to_ntype(dist, n)


def test_input_length_and_rate_sandwich():
    for comp in _sandwich_corpus():
        size = typemath.type_class_size(comp)
        m = typemath.input_length(comp)
        assert 2 ** m <= size < 2 ** (m + 1), comp
        h_bar = typemath.entropy(comp)
        rate = m / comp.n
        assert typemath.rate_lower_bound(h_bar, comp.n, comp.k) <= rate <= h_bar + 1e-12, comp
