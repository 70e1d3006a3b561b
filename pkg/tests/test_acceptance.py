"""Exit criteria, one test per criterion; a PASS/FAIL line per criterion is
printed in the terminal summary."""

import pytest

from feynman_checkers.arith import AMP_ZERO, DyadicRational, amp, amp_to_float
from feynman_checkers.cli import oracle_mismatches
from feynman_checkers.closed_form import (
    theorem1_amplitude,
    theorem1_induction_check,
    verify_lemma1,
    verify_lemma2,
    verify_lemma3,
    verify_lemma4,
    verify_proposition1,
)
from feynman_checkers.engine import (
    FREE,
    amplitude,
    bypass,
    conservation_holds,
    probability,
    run,
    survival_mass,
    trajectory,
)
from feynman_checkers.oracle import check_lemma1, check_lemma2, check_lemma3, check_lemma4
from feynman_checkers.series import partial_sum_closed

LINES = (-1, 0, 2, 3)


@pytest.mark.criterion(1, "engine amplitudes equal brute-force path sums, t <= 18, five configurations")
def test_oracle_equivalence():
    bad = [b for line in (None,) + LINES for t in range(1, 19) for b in oracle_mismatches(line, t)]
    assert not bad, bad[:5]


@pytest.mark.criterion(2, "Catalan closed form equals engine a(0, t bypass 0), 1 <= t <= 200")
def test_theorem1_closed_form():
    for t in range(1, 201):
        assert theorem1_amplitude(t) == amplitude(0, t, bypass(0)), t


@pytest.mark.criterion(3, "lemmas 1-4, proposition 1 and the induction step hold exactly")
def test_identity_suite():
    for t in range(3, 201):
        assert verify_lemma1(t).holds, t
        assert verify_lemma2(t).holds, t
    for t in range(4, 201):
        assert verify_lemma3(t).holds, t
        assert verify_proposition1(t).holds, t
    for n in range(3, 101):
        assert verify_lemma4(n).holds, n
    assert theorem1_induction_check(100)


@pytest.mark.criterion(4, "path bijections: round trips, setwise images, weights, all t <= 14")
def test_bijection_suite():
    reports = [check_lemma1(t) for t in range(3, 14)]  # paths of length t + 1 <= 14
    reports += [check_lemma2(t) for t in range(3, 15)]
    for t in range(4, 15):
        reports += check_lemma3(t)
    reports += [check_lemma4(n) for n in range(3, 8)]  # 2n <= 14
    failed = [str(r) for r in reports if not r.holds]
    assert not failed, failed


@pytest.mark.criterion(5, "probability conservation exact for t <= 64, free walk and four lines")
def test_conservation():
    for state in trajectory(64, FREE):
        assert survival_mass(state) == DyadicRational(1)
    for line in LINES:
        for state in trajectory(64, bypass(line)):
            assert conservation_holds(state), (line, state.t)


@pytest.mark.criterion(6, "2/pi, 8/pi - 2, 4/pi - 1 certified from 1e5 closed-form terms")
@pytest.mark.parametrize("line, tol", [(0, 1e-9), (3, 4e-9), (-1, 2e-9)])
def test_constant_certification(line, tol):
    r = partial_sum_closed(line, 10**5)
    residual = abs(r.partial_sum - r.target)
    assert residual <= tol
    assert abs(r.residual) <= r.tail_bound
    assert r.certified


@pytest.mark.criterion(7, "known point values reproduced exactly")
def test_known_values():
    assert probability(0, 2, bypass(0)) == DyadicRational(1, 1)
    assert probability(0, 4, bypass(0)) == DyadicRational(1, 3)
    assert probability(3, 3, bypass(3)) == DyadicRational(1, 2)
    assert amplitude(1, 3, bypass(0)) == amp(1, 0, 2)
    assert amplitude(1, 3, FREE) == amp(1, -1, 2)


@pytest.mark.criterion(8, "float mode within 1e-12 of exact mode at t = 200, four lines")
def test_cross_mode():
    for line in LINES:
        exact = run(200, bypass(line), "exact")
        flt = run(200, bypass(line), "float")
        err = max(abs(amp_to_float(exact.amplitude_at(x)) - flt.amplitude_at(x)) for x in exact.xs())
        arrivals = dict(exact.absorbed)
        err = max([err] + [abs(amp_to_float(arrivals.get(t, AMP_ZERO)) - a) for t, a in flt.absorbed])
        assert err <= 1e-12, (line, err)
