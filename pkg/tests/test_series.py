import math
from fractions import Fraction
from math import comb

import pytest

from feynman_checkers.arith import dyadic_sum
from feynman_checkers.series import (
    FIXED_BITS,
    UnsupportedLine,
    base_terms_fixed,
    engine_checkpoints,
    exact_term,
    partial_sum_closed,
    partial_sum_engine,
    partial_sums_closed,
    tail_bound,
    target,
    term,
    validate_tail_bound,
)

LINES = [-1, 0, 2, 3]


def base_term_exact(k):
    c = comb(2 * k, k) // (k + 1)
    return Fraction(c * c, 2 ** (4 * k + 3))


def closed_sum_exact(line, k_max):
    s = sum(base_term_exact(k) for k in range(k_max + 1))
    return {
        0: Fraction(1, 2) + s,
        2: Fraction(1, 2) + s,
        -1: 2 * s,
        3: Fraction(1, 4) + 2 * (s - base_term_exact(0)) + 2 * s,
    }[line]


class TestTerms:
    def test_examples(self):
        assert term(0, 2) == 0.5
        assert term(0, 8) == 1 / 128
        assert term(3, 3) == 0.25
        assert term(3, 4) == 0.0
        assert term(-1, 3) == 0.25

    def test_theorem2_relations(self):
        for k in range(1, 60):
            assert exact_term(3, 4 * k + 1) == 2 * exact_term(0, 4 * k)
            assert exact_term(3, 4 * k + 3) == 2 * exact_term(0, 4 * k + 4)
        for t in range(3, 200):
            assert exact_term(-1, t) == 2 * exact_term(0, t + 1)

    def test_unsupported(self):
        with pytest.raises(UnsupportedLine):
            term(5, 3)
        with pytest.raises(UnsupportedLine):
            partial_sum_closed(7, 10)


class TestFixedPoint:
    def test_base_terms_are_floors(self):
        scale = 2 ** FIXED_BITS
        for k, f in base_terms_fixed(300):
            exact = base_term_exact(k) * scale
            assert f <= exact < f + k + 1

    @pytest.mark.parametrize("line", LINES)
    def test_partial_sum_against_fractions(self, line):
        r = partial_sum_closed(line, 80)
        assert r.partial_sum == pytest.approx(float(closed_sum_exact(line, 80)), rel=1e-15)


@pytest.mark.parametrize("line", LINES)
def test_exactness_bridge(line):
    reports = engine_checkpoints(line, 200, "exact", range(1, 201))
    running = []
    for r in reports:
        running.append(exact_term(line, r.index))
        assert r.exact == dyadic_sum(running)


def test_engine_partial_sums():
    assert partial_sum_engine(0, 2).exact.to_fraction() == Fraction(1, 2)
    r = partial_sum_engine(0, 20)
    assert r.exact == dyadic_sum(exact_term(0, t) for t in range(1, 21))
    r7 = partial_sum_engine(7, 400, "float")
    assert 0 < r7.partial_sum < 1 and r7.target is None and r7.verdict == "exploratory"


@pytest.mark.parametrize("line", LINES)
def test_monotone_and_bounded(line):
    reports = partial_sums_closed(line, 5000, range(1, 5001, 37))
    sums = [r.partial_sum for r in reports]
    assert sums == sorted(sums)
    assert all(s <= 1 for s in sums)
    assert all(s <= target(line) + 1e-15 for s in sums)
    assert all(r.certified for r in reports)


class TestTailBound:
    def test_small_kmax(self):
        assert tail_bound(0, 200) <= 1e-6

    def test_against_reference(self):
        r = validate_tail_bound(0, 200)
        assert 0 < r.reference_residual <= r.tail_bound
        assert r.certified

    def test_monotone(self):
        for k in (1, 5, 100, 10**4):
            assert tail_bound(0, 2 * k) < tail_bound(0, k)

    def test_line_multiplicities(self):
        assert tail_bound(3, 50) == pytest.approx(4 * tail_bound(0, 50), rel=1e-14)
        assert tail_bound(-1, 50) == pytest.approx(2 * tail_bound(0, 50), rel=1e-14)

    def test_bound_dominates_exact_tail(self):
        # exact tail estimate sum_{K<k<=4K} f_k via fractions stays below the bound
        K = 40
        partial_tail = sum(base_term_exact(k) for k in range(K + 1, 4 * K + 1))
        assert float(partial_tail) < tail_bound(0, K)


@pytest.mark.parametrize("line, tol", [(0, 1e-9), (3, 4e-9), (-1, 2e-9)])
def test_constants_certified(line, tol):
    r = partial_sum_closed(line, 10**5)
    assert r.certified
    assert abs(r.partial_sum - r.target) <= tol
    assert 0 <= r.residual <= r.tail_bound


def test_line3_is_twice_line_minus1():
    for k in (1, 10, 1000):
        assert partial_sum_closed(3, k).partial_sum == 2 * partial_sum_closed(-1, k).partial_sum


def test_partial_sum_window_kmax_1e4():
    r = partial_sum_closed(0, 10**4)
    assert 0.6366 < r.partial_sum < 2 / math.pi
    assert 2 / math.pi - r.partial_sum <= r.tail_bound


@pytest.mark.parametrize("line, t_of_k", [(0, lambda k: 4 * k + 4), (-1, lambda k: 4 * k + 3), (3, lambda k: 4 * k + 5)])
def test_report_last_term(line, t_of_k):
    for r in partial_sums_closed(line, 300, [1, 10, 100]):
        assert r.last_term == pytest.approx(term(line, t_of_k(r.index)), rel=1e-12)
