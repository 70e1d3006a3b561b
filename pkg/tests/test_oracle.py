import pytest

from feynman_checkers.arith import AMP_ZERO, amp
from feynman_checkers.engine import FREE, bypass
from feynman_checkers.oracle import (
    CapExceeded,
    DomainError,
    PathRecord,
    check_lemma1,
    check_lemma2,
    check_lemma3,
    check_lemma4,
    enumerate_paths,
    iter_paths,
    lemma4_join,
    map_lemma1,
    map_lemma2,
    map_lemma3_rl,
    map_lemma3_split,
    map_lemma4_split,
    oracle_amplitude,
    path_sum,
)


def moves(paths):
    return {p.moves for p in paths}


def brute_paths(x, t, x0=None):
    """Every R-first move string, filtered by the definition directly."""
    out = set()
    for bits in range(2 ** (t - 1)):
        m = "R" + "".join("R" if bits >> i & 1 else "L" for i in range(t - 1))
        p = PathRecord(m)
        if p.end == (x, t) and p.avoids(x0):
            out.add(m)
    return out


class TestPathRecord:
    def test_turns_and_weight(self):
        p = PathRecord("RRL")
        assert p.turns() == 1
        assert p.vertices() == [(0, 0), (1, 1), (2, 2), (1, 3)]
        assert p.weight() == amp(1, 0, 2)  # (1/2, 0)
        assert PathRecord("RLR").weight() == amp(0, -1, 2)  # (0, -1/2)

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            PathRecord("RX")
        with pytest.raises(ValueError):
            PathRecord("")


class TestEnumerate:
    def test_examples(self):
        assert moves(enumerate_paths(1, 3, FREE)) == {"RRL", "RLR"}
        assert moves(enumerate_paths(1, 3, bypass(0))) == {"RRL"}
        assert moves(enumerate_paths(0, 4, bypass(0))) == {"RRLL"}

    @pytest.mark.parametrize("x0", [None, -1, 0, 1, 2, 3])
    def test_pruned_search_matches_brute_force(self, x0):
        cfg = FREE if x0 is None else bypass(x0)
        for t in range(1, 11):
            for x in range(-t, t + 1):
                assert moves(enumerate_paths(x, t, cfg)) == brute_paths(x, t, x0)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            enumerate_paths(0, 30, FREE)
        with pytest.raises(CapExceeded):
            list(iter_paths(12, FREE, cap=10))

    def test_oracle_amplitudes(self):
        assert oracle_amplitude(1, 3, FREE) == amp(1, -1, 2)
        assert oracle_amplitude(1, 3, bypass(0)) == amp(1, 0, 2)
        assert oracle_amplitude(0, 2, bypass(0)) == amp(1, 0, 1)
        assert oracle_amplitude(-2, 2, bypass(0)) == AMP_ZERO

    def test_path_sum_agrees(self):
        for t in range(1, 10):
            for x in range(-t, t + 1):
                assert path_sum(enumerate_paths(x, t, bypass(0))) == oracle_amplitude(x, t, bypass(0))


class TestMaps:
    def test_lemma1_example(self):
        s2 = map_lemma1(PathRecord("RRLL"))
        assert s2.moves == "RLL"
        assert s2.end == (-1, 3) and s2.avoids(-1)

    def test_lemma2_example(self):
        s2 = map_lemma2(PathRecord("RRLL"))
        assert s2.moves == "RLRR"
        assert s2.end == (2, 4) and s2.avoids(2)

    def test_lemma3_branches(self):
        assert map_lemma3_split(PathRecord("RRLRR")) == ("R", PathRecord("RLRR"))
        branch, img = map_lemma3_split(PathRecord("RLRRR"))
        assert branch == "L" and img.moves == "RRLLL" and img.end == (-1, 5)
        assert map_lemma3_rl(PathRecord("RLRLL")) == PathRecord("RLRR")

    def test_lemma4_example(self):
        j, m, l = map_lemma4_split(PathRecord("RRLRLL"))
        assert (j, m.moves, l.moves) == (1, "RRLL", "RL")
        assert lemma4_join(j, m, l).moves == "RRLRLL"

    @pytest.mark.parametrize(
        "fn, path",
        [
            (map_lemma1, "RRL"),       # too short: needs t + 1 > 3
            (map_lemma1, "RRLR"),      # wrong endpoint
            (map_lemma2, "RL"),        # t = 2 excluded
            (map_lemma2, "RLLR"),      # touches x = 0 at (0, 2)
            (map_lemma3_split, "RRR"), # t = 3 excluded
            (map_lemma3_rl, "RRLLL"),  # starts RR
            (map_lemma4_split, "RRLL"),  # n = 2 excluded
            (map_lemma4_split, "LRRL"),  # does not start with R
        ],
    )
    def test_domain_errors(self, fn, path):
        with pytest.raises(DomainError):
            fn(PathRecord(path))


@pytest.mark.parametrize("t", range(3, 16))
def test_lemma1_bijection(t):
    assert check_lemma1(t).holds


@pytest.mark.parametrize("t", range(3, 17))
def test_lemma2_bijection(t):
    assert check_lemma2(t).holds


@pytest.mark.parametrize("t", range(4, 17))
def test_lemma3_bijections(t):
    assert all(r.holds for r in check_lemma3(t))


@pytest.mark.parametrize("n", range(3, 9))
def test_lemma4_bijection(n):
    r = check_lemma4(n)
    assert r.holds, r.detail


def test_lemma3_partition_counts():
    total = len(enumerate_paths(3, 5, bypass(3)))
    reports = check_lemma3(5)
    assert reports[0].domain_size + reports[1].domain_size == total


def test_lemma3_identity_by_path_sums():
    from feynman_checkers.arith import MINUS_I, amp_add, amp_mul_unit, amp_scale_sqrt2

    for t in (5, 7, 9):
        lhs = oracle_amplitude(3, t, bypass(3))
        rhs = amp_add(
            amp_scale_sqrt2(oracle_amplitude(2, t - 1, bypass(2)), 1),
            amp_mul_unit(oracle_amplitude(-1, t, bypass(-1)), MINUS_I),
        )
        assert lhs == rhs
