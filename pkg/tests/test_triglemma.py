from fractions import Fraction
from math import ceil, cos, floor, log, pi, sin, sqrt

import pytest
from hypothesis import given, settings, strategies as st

from pvshort import triglemma as T
from pvshort.errors import RangeTooShortError


def naive_sigma(a, b, alpha):
    return sum(cos(alpha * n) / n for n in range(max(1, ceil(a)), floor(b) + 1))


def test_alternating_sum_oracle():
    exact = sum(Fraction((-1) ** n, n) for n in range(2, 10))
    assert abs(T.sigma(2, 9, pi) - float(exact)) < 1e-10


@given(st.floats(0.5, 300), st.floats(0, 300), st.floats(-10, 10))
@settings(max_examples=200)
def test_sigma_matches_naive(a, width, alpha):
    assert abs(T.sigma(a, a + width, alpha) - naive_sigma(a, a + width, alpha)) < 1e-12


def test_real_limits_select_integers():
    assert T.sigma(1.5, 3.9, 0) == pytest.approx(1 / 2 + 1 / 3)
    assert T.sigma(4, 3, 0.3) == 0


def test_split_points_gamma_zero():
    sp = T.split_points(10**6, 0.0, 0.05)
    f = floor((10**6) ** (1 / 3 + 0.05) / 3)
    assert sp.m_bar == 1
    assert sp.p_bar == (f if f % 2 else f - 1)
    assert sp.v_bar == 3 * sp.p_bar
    assert sp.top - sp.v_bar <= 6
    assert sp.precondition_ok


def test_split_points_precondition():
    with pytest.raises(RangeTooShortError):
        T.split_points(10**6, 1 / 3, 0.05)
    sp = T.split_points(10**4, 0.2, 0.05, strict=False)
    assert not sp.precondition_ok


@given(st.integers(10**3, 10**7), st.floats(0, 0.3), st.floats(0.01, 0.2))
@settings(max_examples=200)
def test_split_point_structure(q, gamma, eps):
    if not T.precondition_holds(q, gamma, eps):
        return
    sp = T.split_points(q, gamma, eps)
    assert sp.p_bar % 2 == 1
    assert sp.v_bar == sp.p_bar * (2 * sp.m_bar + 1) <= sp.top
    # the next admissible odd p would overshoot
    assert (sp.p_bar + 2) * (2 * sp.m_bar + 1) > sp.top
    assert sp.top - sp.v_bar <= 2 * (2 * sp.m_bar + 1)


def test_eq4_example():
    c = T.lower_bound_eq4(1, 3, pi, 100)
    assert c.holds and c.bound == -5.005
    assert c.value == pytest.approx(sum((-1) ** n / n for n in range(2, 10)), abs=1e-12)


def test_eq4_rejects_even_p():
    with pytest.raises(ValueError):
        T.lower_bound_eq4(1, 2, 0.1, 100)


def test_eq4_small_sweep():
    margin, *_ = T.eq4_sweep(range(0, 6), range(1, 12, 2), [2 * pi * j / 40 for j in range(40)], 10**4)
    assert margin > 0


def test_eq3_grid():
    for j in range(200):
        r = T.sigma_lower_bound_eq3(10**6, 0.0, 0.05, 2 * pi * j / 200)
        assert r.holds and r.identity_residual <= 1e-10


def test_chain_floor():
    assert T.chain_floor(10) == pytest.approx(-8.05)


def test_eq1_example():
    r = T.lemma_eq1(10**6, 0.0, 0.05, 1.0)
    assert r.residual <= 9
    assert r.main_term == pytest.approx((1 / 3 + 0.05) * log(10**6))


def test_eq2_example_finite():
    r = T.lemma_eq2(10**6, 0.2, 0.05, sqrt(2))
    assert abs(r.residual) < T.EQ2_RESIDUAL_CEILING
    assert r.lhs <= T.eq2_consistency_bound(10**6, 0.2, 0.05)


def test_lemma_alpha_zero():
    assert T.lemma_eq1(10**5, 0.1, 0.05, 0.0).lhs == 0
    assert T.lemma_eq2(10**5, 0.1, 0.05, 0.0).lhs == 0


def test_one_minus_cos_stable_for_tiny_alpha():
    v = T.one_minus_cos_sum(1, 10, 1e-9)
    ref = sum((1e-9 * n) ** 2 / 2 / n for n in range(1, 11))
    assert v == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("M", [1, 2, 10, 1000, 12345])
def test_telescoping(M):
    assert abs(T.telescoping_sum(M) - M / (2 * M + 1)) <= 1e-12


def test_fourier_examples():
    approx, bound = T.abs_sin_fourier(pi / 2, 10**4)
    assert abs(approx - 1) <= bound and bound == pytest.approx(3.2e-5, rel=0.01)
    approx0, b0 = T.abs_sin_fourier(0.0, 10**4)
    # the worst case: the tail is exactly (2/pi)/(2M+1) at theta = 0
    assert approx0 == pytest.approx(b0, rel=1e-9)


@given(st.floats(-20, 20), st.integers(1, 2000))
@settings(max_examples=100)
def test_fourier_bound(theta, M):
    approx, bound = T.abs_sin_fourier(theta, M)
    assert abs(approx - abs(sin(theta))) <= bound + 1e-14


def test_trig_spec_value():
    assert T.TrigSumSpec(2, 9, pi).value == T.sigma(2, 9, pi)
    with pytest.raises(ValueError):
        T.TrigSumSpec(0, 9, 1.0)
