import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import DeskScaleError, ParameterError
from src.gf import as_ints, field_make
from src.lincode import code_from_basis, code_from_parity_check, covering_radius, nearest_codeword

GF2 = field_make(2)
GF3 = field_make(3)

HAMMING_H = [[(j >> i) & 1 for j in range(1, 8)] for i in range(3)]


def brute_covering_radius(code) -> int:
    """Largest coset minimum weight, found by scanning every vector."""
    n, q = code.n, code.q
    H = as_ints(code.parity_check).reshape(-1, n)
    vectors = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    syndromes = (vectors @ H.T) % q
    keys = syndromes @ (q ** np.arange(H.shape[0], dtype=np.int64))
    best = np.full(q ** H.shape[0], n + 1)
    np.minimum.at(best, keys, np.count_nonzero(vectors, axis=1))
    return int(best.max())


@pytest.mark.parametrize("n", [5, 7, 15])
def test_repetition_code_radius_gf2(n):
    code = code_from_basis(GF2, [[1] * n])
    assert code.label == f"[{n},1]"
    assert covering_radius(code) == n // 2


@pytest.mark.parametrize("n", [4, 5, 7])
def test_repetition_code_radius_gf3(n):
    code = code_from_basis(GF3, [[1] * n])
    assert covering_radius(code) == n - -(-n // 3)


def test_hamming_code_is_perfect():
    code = code_from_parity_check(GF2, HAMMING_H)
    assert code.dimension == 4
    assert code.covering_radius() == 1
    assert code.coset_table.distribution == (1, 7)
    assert len(list(code.codewords())) == 16


def test_trivial_codes():
    zero = code_from_basis(GF2, [], n=4)
    assert zero.dimension == 0
    assert zero.covering_radius() == 4
    whole = code_from_basis(GF2, np.eye(4, dtype=np.int64).tolist())
    assert whole.dimension == 4
    assert whole.covering_radius() == 0
    assert whole.contains(GF2.GF([1, 0, 1, 1]))


def test_generator_is_reduced_and_spans():
    code = code_from_basis(GF2, [[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0]])
    assert code.dimension == 2
    assert code.contains(GF2.GF([1, 0, 1, 0]))
    assert not code.contains(GF2.GF([0, 0, 0, 1]))
    assert np.all(as_ints(code.generator @ code.parity_check.T) == 0)


def test_inconsistent_lengths():
    with pytest.raises(ParameterError):
        code_from_basis(GF2, [[1, 0], [1, 0, 1]])
    with pytest.raises(ParameterError):
        code_from_basis(GF2, [[1, 0]], n=3)
    with pytest.raises(ParameterError):
        code_from_basis(GF2, [[2, 0]])


@given(st.lists(st.integers(0, 1), min_size=7, max_size=7))
def test_nearest_codeword_is_a_closest_codeword(bits):
    code = code_from_parity_check(GF2, HAMMING_H)
    v = GF2.GF(bits)
    c, distance = nearest_codeword(code, v)
    assert code.contains(c)
    assert distance == np.count_nonzero(as_ints(v - c))
    assert distance == min(np.count_nonzero(as_ints(v - w)) for w in code.codewords())


def test_nearest_codeword_on_repetition_code():
    code = code_from_basis(GF2, [[1, 1, 1]])
    for bits in itertools.product(range(2), repeat=3):
        _, distance = code.nearest_codeword(GF2.GF(list(bits)))
        assert distance == min(sum(bits), 3 - sum(bits))


def test_coset_leader_ties_break_lexicographically():
    # 1100 and 0011 share a coset of the [4,1] repetition code; 0011 is the leader
    code = code_from_basis(GF2, [[1, 1, 1, 1]])
    c, distance = code.nearest_codeword(GF2.GF([1, 1, 0, 0]))
    assert c.tolist() == [1, 1, 1, 1]
    assert distance == 2
    c, _ = code.nearest_codeword(GF2.GF([0, 0, 1, 1]))
    assert c.tolist() == [0, 0, 0, 0]


@pytest.mark.parametrize(
    "field, rows",
    [
        (GF2, [[1, 1, 0, 1, 0, 0, 0, 0], [0, 1, 1, 0, 1, 0, 0, 0], [0, 0, 1, 1, 0, 1, 0, 1]]),
        (GF3, [[1, 2, 0, 1, 0], [0, 1, 1, 2, 1]]),
        (GF2, [[1, 0, 0, 0, 0, 0, 0, 0, 0, 1]]),
    ],
)
def test_covering_radius_matches_exhaustive_scan(field, rows):
    code = code_from_basis(field, rows)
    assert code.covering_radius() == brute_covering_radius(code)


def test_syndrome_limit(limits):
    limits(max_syndromes=8)
    code = code_from_basis(GF2, [[1] * 6])
    with pytest.raises(DeskScaleError):
        code.covering_radius()


def test_codeword_listing_limit(limits):
    limits(max_exhaustive_messages=8)
    code = code_from_parity_check(GF2, HAMMING_H)
    with pytest.raises(DeskScaleError):
        list(code.codewords())


def test_equality_ignores_input_basis():
    a = code_from_basis(GF2, [[1, 1, 0], [0, 1, 1]])
    b = code_from_basis(GF2, [[1, 0, 1], [1, 1, 0]])
    assert a == b
    assert hash(a) == hash(b)
    assert a.is_subcode_of(b)
