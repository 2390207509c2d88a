"""Lexicographic ranking and the reference index maps"""
import itertools
import math

import pytest

from matcher import ranker
from matcher.errors import CompositionMismatch, IndexOutOfRange, LengthMismatch, NotACodeword, TooLarge
from matcher.typemath import type_class_size
from models.distribution import CodeParams, Composition

P = ranker.parse_symbols
B = ranker.parse_bits


def _members(comp):
    """All sequences of the type class in lexicographic order, by brute force"""
    base = [a for a, c in enumerate(comp.counts) for _ in range(c)]
    return sorted(set(itertools.permutations(base)))


@pytest.mark.parametrize("word,index", [("0011", 0), ("0110", 2), ("1001", 3), ("1010", 4), ("1100", 5)])
def test_rank_unrank_worked_example(word, index):
    comp = Composition(counts=(2, 2))
    assert ranker.rank(P(word), comp) == index
    assert ranker.unrank(index, comp) == P(word)


def test_unrank_single_member_class():
    assert ranker.unrank(0, Composition(counts=(0, 3))) == P("111")


@pytest.mark.parametrize("counts", [(2, 2), (1, 2, 1), (3, 0, 2), (2, 1, 1, 1), (4,)])
def test_rank_is_lexicographic_bijection(counts):
    comp = Composition(counts=counts)
    members = _members(comp)
    assert len(members) == type_class_size(comp)
    for i, seq in enumerate(members):
        assert ranker.rank(seq, comp) == i
        assert ranker.unrank(i, comp) == seq


def test_rank_rejects_foreign_sequences():
    comp = Composition(counts=(2, 2))
    for bad in ("0001", "011", "00112", "0211"):
        with pytest.raises(CompositionMismatch):
            ranker.rank(P(bad), comp)


def test_unrank_out_of_range():
    comp = Composition(counts=(2, 2))
    for index in (-1, 6):
        with pytest.raises(IndexOutOfRange):
            ranker.unrank(index, comp)


def test_successor_walks_type_class():
    comp = Composition(counts=(2, 1, 1))
    members = _members(comp)
    for current, following in zip(members, members[1:]):
        assert ranker.successor(current) == following
    assert ranker.successor(members[-1]) is None


@pytest.mark.parametrize("bits,word", [("00", "0011"), ("01", "0110"), ("10", "1001"), ("11", "1100")])
def test_ref_encode_worked_example(worked_params, bits, word):
    assert ranker.ref_encode(B(bits), worked_params) == P(word)
    assert ranker.ref_decode(P(word), worked_params) == B(bits)


def test_ref_encode_length_check(worked_params):
    with pytest.raises(LengthMismatch):
        ranker.ref_encode(B("010"), worked_params)


def test_ref_decode_strict_and_lenient(worked_params):
    with pytest.raises(NotACodeword):
        ranker.ref_decode(P("0101"), worked_params, strict=True)
    # floor(1 * 4 / 6) = 0
    assert ranker.ref_decode(P("0101"), worked_params, strict=False) == B("00")
    with pytest.raises(CompositionMismatch):
        ranker.ref_decode(P("0111"), worked_params, strict=False)


@pytest.mark.parametrize("counts", [(2, 2), (1, 2, 3), (3, 3, 1), (2, 2, 2, 1)])
def test_codeword_index_is_strictly_increasing(counts):
    params = CodeParams.from_composition(Composition(counts=counts))
    indices = [ranker.codeword_index(j, params) for j in range(params.codebook_size)]
    assert indices[0] == 0
    assert indices[-1] < params.type_class_size
    assert all(1 <= b - a <= 2 for a, b in zip(indices, indices[1:]))
    for j, i in enumerate(indices):
        assert i == math.ceil(j * params.type_class_size / params.codebook_size)


@pytest.mark.parametrize("counts,words", [
    ((2, 2), ["0011", "0110", "1001", "1100"]),
    ((1, 0), ["0"]),
    ((1, 1), ["01", "10"]),
])
def test_codebook_examples(counts, words):
    params = CodeParams.from_composition(Composition(counts=counts))
    assert [ranker.format_symbols(w) for w in ranker.codebook(params)] == words


@pytest.mark.parametrize("counts", [(3, 2, 2), (1, 2, 3, 2), (4, 4)])
def test_codebook_walk_matches_reference(counts):
    params = CodeParams.from_composition(Composition(counts=counts))
    words = ranker.codebook(params)
    assert len(words) == params.codebook_size
    assert len(set(words)) == len(words)
    for j, word in enumerate(words):
        assert word == ranker.ref_encode(ranker.int_to_bits(j, params.m), params)


def test_codebook_enumeration_limit(reference_dist):
    params = CodeParams.for_distribution(reference_dist, 10)
    with pytest.raises(TooLarge):
        ranker.codebook(params, limit=12)


def test_bit_helpers():
    assert ranker.bits_to_int(B("1011")) == 11
    assert ranker.int_to_bits(11, 4) == B("1011")
    assert ranker.int_to_bits(0, 0) == ()
    assert ranker.format_bits(B("0010")) == "0010"
    with pytest.raises(ValueError):
        ranker.parse_bits("0120")
