from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaudin_bethe.actions import apply_I_component
from gaudin_bethe.betheroots import BetheConfig, eigenvalue
from gaudin_bethe.gaudin import CollisionError
from gaudin_bethe.ketcalc import (FormalKetSum, KetLabel, LabelError, apply_P, apply_P_power,
                                  evaluate, evaluate_label, p_power_closed, p_series)
from gaudin_bethe.liealg import SL3, algebra

a1, a2, b1, b2 = Fr(1, 5), Fr(2, 7), Fr(3, 4), Fr(5, 3)


def single(*fams):
    return FormalKetSum.single(KetLabel(*fams), Fr(1))


def test_apply_P_basic():
    out = apply_P(single([a1], [b1], []))
    assert dict(out) == {KetLabel([], [], [a1]): 1 / (b1 - a1)}
    assert len(apply_P(single([a1], [], []))) == 0
    assert len(apply_P(single([], [b1], [a2]))) == 0
    out = apply_P(single([a1, a2], [b1, b2], []))
    assert len(out) == 4
    for lab, c in out:
        (r,), (s,) = set([a1, a2]) - set(lab.w1), set([b1, b2]) - set(lab.w2)
        assert lab.w3 == (r,) and c == 1 / (s - r)


def test_apply_P_zero_denominator():
    with pytest.raises(LabelError):
        apply_P(single([a1], [a1], []))


def test_series_single_pair():
    s = p_series([a1], [b1])
    assert dict(s) == {KetLabel([a1], [b1], []): 1, KetLabel([], [], [a1]): 1 / (b1 - a1)}


def test_series_two_pairs():
    s = dict(p_series([a1, a2], [b1, b2]))
    expected = {
        KetLabel([a1, a2], [b1, b2], []): Fr(1),
        KetLabel([a1], [b1], [a2]): 1 / (b2 - a2),
        KetLabel([a1], [b2], [a2]): 1 / (b1 - a2),
        KetLabel([a2], [b1], [a1]): 1 / (b2 - a1),
        KetLabel([a2], [b2], [a1]): 1 / (b1 - a1),
    }
    first = 1 / ((b2 - a2) * (b1 - a1))
    second = 1 / ((b1 - a2) * (b2 - a1))
    expected[KetLabel([], [], [a1, a2])] = first + second
    assert s == expected
    assert all(isinstance(c, Fr) for c in s.values())
    # both F3 F3 pairings are needed: neither alone reproduces the coefficient
    assert s[KetLabel([], [], [a1, a2])] not in (first, second)


def test_series_without_second_family():
    assert dict(p_series([a1, a2], [])) == {KetLabel([a1, a2], [], []): 1}


def test_closed_form_small_cases():
    assert dict(p_power_closed([a1, a2], [b1], 0)) == {KetLabel([a1, a2], [b1], []): 1}
    assert dict(p_power_closed([a1], [b1], 1)) == dict(apply_P(single([a1], [b1], [])))
    assert len(p_power_closed([a1], [b1], 2)) == 0
    assert len(p_power_closed([a1], [b1], -1)) == 0


distinct_points = st.lists(
    st.tuples(st.integers(-40, 40), st.integers(1, 9)).map(lambda t: Fr(*t)),
    min_size=2, max_size=6, unique=True)


@settings(max_examples=60, deadline=None)
@given(distinct_points, st.data())
def test_closed_form_equals_iteration(points, data):
    k = data.draw(st.integers(0, min(3, len(points) - 1)))
    w1, w2 = points[:k], points[k:k + 3]
    base = single(w1, w2, [])
    for n in range(min(len(w1), len(w2)) + 1):
        assert dict(p_power_closed(w1, w2, n)) == dict(apply_P_power(base, n))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=6, unique=True), st.data())
def test_closed_form_equals_iteration_complex(points, data):
    k = data.draw(st.integers(0, min(3, len(points) - 1)))
    w1, w2 = points[:k], points[k:k + 3]
    if any(abs(x - y) < 1e-3 for x in w1 for y in w2):
        return
    base = FormalKetSum.single(KetLabel(w1, w2, ()), 1.0)
    for n in range(min(len(w1), len(w2)) + 1):
        closed, it = p_power_closed(w1, w2, n), apply_P_power(base, n)
        assert set(closed.labels()) == set(it.labels())
        for lab, c in closed:
            assert abs(c - it[lab]) <= 1e-12 * max(1.0, abs(c))


@settings(max_examples=40, deadline=None)
@given(distinct_points, st.data())
def test_termination_and_weight_conservation(points, data):
    k = data.draw(st.integers(0, len(points)))
    w1, w2 = points[:k], points[k:]
    s = single(w1, w2, [])
    for _ in range(min(len(w1), len(w2))):
        s = apply_P(s)
        for lab, _c in s:
            kk, ll, m = lab.shape
            assert (kk + m, ll + m) == (len(w1), len(w2))
    assert len(apply_P(s)) == 0


def test_evaluated_weight_space(roomy_sl3):
    w1, w2 = [0.5 + 0.1j, -0.3 - 0.2j], [0.9 + 0.6j, 0.2 - 0.8j]
    lam1 = sum(w[0] for w in (s.weight for s in roomy_sl3.sites))
    lam2 = sum(w[1] for w in (s.weight for s in roomy_sl3.sites))
    s = FormalKetSum.single(KetLabel(w1, w2, ()), 1.0)
    H1 = lambda v: sum(roomy_sl3.apply_site("h1", i, v) for i in range(3))
    H2 = lambda v: sum(roomy_sl3.apply_site("h2", i, v) for i in range(3))
    for n in range(3):
        v = evaluate(apply_P_power(s, n), roomy_sl3)
        assert np.linalg.norm(v) > 0
        for lab, _c in apply_P_power(s, n):
            k, l, m = lab.shape
            weight = (lam1 - 2 * k + l - m, lam2 + k - 2 * l - m)
            assert weight == (lam1 - 2 * 2 + 2, lam2 + 2 - 2 * 2)
        assert np.allclose(H1(v), (lam1 - 2) * v) and np.allclose(H2(v), (lam2 - 2) * v)


def test_label_canonical_and_equality():
    lab = KetLabel([2 + 1j, 1 + 5j, 1 - 1j], [], [])
    assert lab.w1 == (1 - 1j, 1 + 5j, 2 + 1j)
    assert KetLabel(*[lab.w1, lab.w2, lab.w3]) == lab
    assert lab.isclose(KetLabel([2 + 1j + 1e-14, 1 + 5j, 1 - 1j]))
    assert not lab.isclose(KetLabel([2 + 1.1j, 1 + 5j, 1 - 1j]))
    with pytest.raises(LabelError):
        KetLabel([1, 1]).validate()
    with pytest.raises(LabelError):
        KetLabel([1], [1]).validate()
    with pytest.raises(LabelError):
        p_series([a1], [a1])


def test_pretty_is_deterministic():
    s = p_series([a1, a2], [b1, b2])
    text = s.pretty()
    assert text == p_series([a2, a1], [b2, b1]).pretty()
    assert text.splitlines()[0] == "1 · |{1/5, 2/7},{3/4, 5/3},{}>"
    assert len(text.splitlines()) == 6


def test_cleanup_threshold():
    s = FormalKetSum([(KetLabel([1.0]), 1.0), (KetLabel([2.0]), 1e-17)])
    assert len(s.cleaned()) == 1


def test_evaluate_basics(fund_dual):
    assert np.array_equal(evaluate_label(KetLabel(), fund_dual), fund_dual.vacuum())
    w = 0.4 + 0.3j
    direct = sum(fund_dual.site_operator("f1", i) @ fund_dual.vacuum() / (w - fund_dual.z[i]) for i in range(2))
    assert np.allclose(evaluate_label(KetLabel([w]), fund_dual), direct)
    with pytest.raises(CollisionError):
        evaluate_label(KetLabel([1.0]), fund_dual)


def test_series_at_roots_is_invariant(fund_dual):
    """At (1/3, 2/3) the series vector is the sl3-invariant vector of 3 (x) 3bar."""
    v = evaluate(p_series([Fr(1, 3)], [Fr(2, 3)]), fund_dual)
    assert np.linalg.norm(v) > 1
    for g in algebra(SL3).generators:
        total = sum(fund_dual.apply_site(g, i, v) for i in range(2))
        assert np.linalg.norm(total) < 1e-12 * np.linalg.norm(v)


def test_action_components_at_bethe_roots(roomy_sl3):
    from gaudin_bethe.betheroots import multistart_solve
    cfg = multistart_solve(roomy_sl3, (2, 1), attempts=8)[0].config
    base = FormalKetSum.single(KetLabel(cfg.w1, cfg.w2, ()), 1.0)
    u = 0.4 - 0.6j
    assert len(apply_I_component("I1_m", u, base, roomy_sl3)) == 0
    out = apply_I_component("I0_0", u, base, roomy_sl3)
    assert out.labels() == base.labels()
    assert abs(out[base.labels()[0]] - eigenvalue(u, cfg, roomy_sl3)) < 1e-12
