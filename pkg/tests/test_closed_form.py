import pytest

from feynman_checkers.arith import AMP_ZERO, amp, amp_mul
from feynman_checkers.closed_form import (
    catalan,
    lemma4_convolution,
    theorem1_amplitude,
    theorem1_induction_check,
    verify_lemma1,
    verify_lemma2,
    verify_lemma3,
    verify_lemma4,
    verify_proposition1,
)
from feynman_checkers.engine import amplitude, bypass
from feynman_checkers.oracle import DomainError, oracle_amplitude


def catalan_by_recurrence(n):
    c = [1]
    for k in range(n):
        c.append(sum(c[i] * c[k - i] for i in range(k + 1)))
    return c


def test_catalan():
    assert catalan(0) == 1
    assert catalan(3) == 5
    assert catalan(10) == 16796
    assert [catalan(k) for k in range(30)] == catalan_by_recurrence(29)


class TestTheorem1Amplitude:
    def test_examples(self):
        assert theorem1_amplitude(2) == amp(1, 0, 1)
        assert theorem1_amplitude(4) == amp(1, 0, 3)
        assert theorem1_amplitude(6) == AMP_ZERO
        assert theorem1_amplitude(12) == amp(1, 0, 9)

    def test_matches_oracle_small(self):
        for t in range(1, 19):
            assert theorem1_amplitude(t) == oracle_amplitude(0, t, bypass(0))

    def test_matches_engine(self):
        for t in range(1, 201):
            assert theorem1_amplitude(t) == amplitude(0, t, bypass(0))

    def test_zero_pattern_and_sign(self):
        for t in range(1, 401):
            a = theorem1_amplitude(t)
            if t % 2 or (t % 4 == 2 and t > 2):
                assert a.is_zero()
            elif t % 4 == 0:
                k = (t - 4) // 4
                assert (a.g.re > 0) == (k % 2 == 0) and a.g.im == 0


class TestIdentities:
    def test_lemma1_example(self):
        r = verify_lemma1(3)
        assert r.holds and r.lhs == amp(1, 0, 2)

    def test_lemma2_example(self):
        r = verify_lemma2(4)
        assert r.holds and r.rhs == amp(0, -1, 3)

    def test_proposition1_example(self):
        r = verify_proposition1(5)
        assert r.holds and r.lhs.g.norm() * 4 == 2 ** r.lhs.k  # probability 1/4
        assert r.lhs == oracle_amplitude(3, 5, bypass(3))

    def test_lemma4_examples(self):
        r4 = verify_lemma4(4)
        assert r4.holds and r4.lhs == amp(-1, 0, 7)
        assert verify_lemma4(3).holds and verify_lemma4(3).rhs.is_zero()
        assert verify_lemma4(5).holds and verify_lemma4(5).lhs.is_zero()

    @pytest.mark.parametrize("fn, bad_t", [
        (verify_lemma1, 2), (verify_lemma2, 2), (verify_lemma3, 3), (verify_proposition1, 3), (verify_lemma4, 2),
    ])
    def test_domain(self, fn, bad_t):
        with pytest.raises(DomainError):
            fn(bad_t)

    def test_all_up_to_200(self):
        for t in range(3, 201):
            assert verify_lemma1(t).holds and verify_lemma2(t).holds
        for t in range(4, 201):
            assert verify_lemma3(t).holds and verify_proposition1(t).holds
        for n in range(3, 101):
            assert verify_lemma4(n).holds


def test_induction_check():
    assert theorem1_induction_check(20)
    assert theorem1_induction_check(3)
    n = 4
    assert lemma4_convolution(n, theorem1_amplitude) == theorem1_amplitude(8)


def test_convolution_hand_value():
    # n = 4 has the single term a(0,4)^2 = 1/8, times -1/sqrt2
    assert amp_mul(amp(1, 0, 3), amp(1, 0, 3)) == amp(1, 0, 6)
    assert lemma4_convolution(4, theorem1_amplitude) == amp(-1, 0, 7)


def test_report_str():
    assert str(verify_lemma1(3)).startswith("ok")
