"""Halton-type sequences, digital sequences and the interval census."""
from fractions import Fraction

import numpy as np
import pytest

from algebra.ffpoly import PolyOverFp, int_to_poly
from evaluation.suites import faure_equivalence
from sequences.census import elementary_interval_census
from sequences.digital import (
    GeneratingMatrix,
    check_t_property,
    digital_point,
    faure_matrices,
    identity_matrix,
    matrix_width_for,
    pascal_matrix_power,
    sobol_2d,
)
from sequences.halton import radical_inverse
from sequences.polynomial import (
    PolyBaseSet,
    bx_expand,
    faure_bases,
    halton_type_point,
    parse_poly_bases,
    poly_radical_inverse,
)
from utils.config import QMCConfig, set_config
from utils.errors import InvalidBaseError, InvalidInputError, ResourceCapError, TruncationError


@pytest.fixture
def triple():
    return PolyBaseSet(2, (PolyOverFp.x(2), PolyOverFp.linear(1, 2), PolyOverFp.make([1, 1, 1], 2)))


def test_expansion_reassembles():
    b = PolyOverFp.make([1, 1, 1], 2)
    for n in (0, 1, 5, 63, 1000):
        assert bx_expand(n, b).reassemble() == int_to_poly(n, 2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_base_x_is_van_der_corput(p):
    x = PolyOverFp.x(p)
    for n in range(10 ** 4):
        assert poly_radical_inverse(n, x).exact == radical_inverse(n, p).exact


def test_degree_two_base_digits():
    # 5 = X^2 + 1 = 1 * (X^2 + X + 1) + X over F_2
    r = poly_radical_inverse(5, PolyOverFp.make([1, 1, 1], 2))
    assert r.expansion.digit_values == (2, 1)
    assert r.exact == Fraction(2, 4) + Fraction(1, 16)


def test_base_set_validation():
    with pytest.raises(InvalidBaseError):
        PolyBaseSet(2, (PolyOverFp.x(2), PolyOverFp.make([0, 1, 1], 2)))
    with pytest.raises(InvalidBaseError):
        PolyBaseSet(3, (PolyOverFp.one(3),))
    assert parse_poly_bases("0,1;1,1", 2).degrees == (1, 1)


def test_faure_bases():
    bases = faure_bases(3)
    assert bases.bases == (PolyOverFp.make([0, 1], 3), PolyOverFp.make([2, 1], 3), PolyOverFp.make([1, 1], 3))


def test_pascal_matrix_entries():
    P = pascal_matrix_power(3, 1, 4, 4)
    assert P.to_rows() == [[1, 1, 1, 1], [0, 1, 2, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert pascal_matrix_power(3, 0, 3, 3) == identity_matrix(3, 3)
    assert pascal_matrix_power(5, 2, 6, 6) == pascal_matrix_power(5, 1, 6, 6).matmul(pascal_matrix_power(5, 1, 6, 6))


def test_lower_triangular_shape():
    P = pascal_matrix_power(3, 1, 4, 4)
    assert identity_matrix(3, 4).is_lower_triangular()
    assert GeneratingMatrix(3, P.entries.T).is_lower_triangular()
    assert not P.is_lower_triangular()
    assert not GeneratingMatrix(3, np.tril(np.ones((3, 4), dtype=np.int64))).is_lower_triangular()


def test_identity_matrix_gives_van_der_corput():
    matrices = sobol_2d(8, 8)
    for n in range(100):
        assert digital_point(n, matrices).coords[0] == radical_inverse(n, 2).value


def test_truncation_is_reported():
    with pytest.raises(TruncationError):
        digital_point(2 ** 10, faure_matrices(2, 4, 4))


def test_matrix_width():
    assert matrix_width_for(3, 729) == 7
    assert matrix_width_for(2, 16) == 5


def test_pascal_digital_equals_halton_type_faure():
    for p in (2, 3):
        assert faure_equivalence(p, digits=4) == 0
    matrices = faure_matrices(5, 6, 6)
    for n in (0, 7, 124, 3124):
        assert digital_point(n, matrices).exact_digits == halton_type_point(n, faure_bases(5)).exact_digits


@pytest.mark.parametrize("p", [2, 3])
def test_faure_is_a_zero_sequence(p):
    verdict = check_t_property(faure_matrices(p, 6, 6), t=0, m_max=6)
    assert verdict.passed
    assert verdict.checked > 0


def test_repeated_matrix_fails_rank_check():
    verdict = check_t_property([identity_matrix(2, 4), identity_matrix(2, 4)], t=0, m_max=3)
    assert not verdict.passed
    assert verdict.failures[2] == (1, 1)


def test_generating_matrix_validation():
    with pytest.raises(InvalidInputError):
        GeneratingMatrix(2, np.zeros((0, 3)))
    assert GeneratingMatrix(3, np.array([[4, -1]])).to_rows() == [[1, 2]]


def test_census_triple(triple):
    result = elementary_interval_census(triple, (2, 2, 1))
    assert result.n_points == 64
    assert result.counts.size == 64
    assert result.all_ones


def test_census_does_not_depend_on_chunks(triple):
    whole = elementary_interval_census(triple, (2, 2, 1))
    chunked = elementary_interval_census(triple, (2, 2, 1), chunk_size=7)
    assert np.array_equal(whole.counts, chunked.counts)


def test_census_faure():
    assert elementary_interval_census(faure_bases(3), (2, 1, 1)).all_ones


def test_census_cap(triple):
    set_config(QMCConfig(census_cap=10))
    with pytest.raises(ResourceCapError):
        elementary_interval_census(triple, (2, 2, 1))


def test_census_validation(triple):
    with pytest.raises(InvalidInputError):
        elementary_interval_census(triple, (2, 2))
