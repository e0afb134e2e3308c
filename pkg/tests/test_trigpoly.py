import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from s3verify import trigpoly as tp

angle = st.floats(0, 2 * np.pi, allow_nan=False, exclude_max=True)
amp = st.floats(-2, 2, allow_nan=False)


@st.composite
def trig_polys(draw, max_k=6):
    k = draw(st.integers(1, max_k))
    b = draw(st.lists(amp, min_size=k + 1, max_size=k + 1))
    assume(abs(b[-1]) > 1e-2)
    th = draw(st.lists(angle, min_size=k, max_size=k))
    return tp.TrigPoly(tuple(b), tuple(th))


@st.composite
def separated_roots(draw, max_k=5):
    k = draw(st.integers(1, max_k))
    roots = np.sort(np.array(draw(st.lists(angle, min_size=2 * k, max_size=2 * k))))
    gaps = np.diff(np.concatenate([roots, roots[:1] + 2 * np.pi]))
    assume(gaps.min() > 0.05)
    return roots


def test_cos_zeros():
    zs = tp.companion_zeros(tp.TrigPoly((0.0, 1.0), (0.0,)))
    assert zs.total_order == 2
    assert zs.angles == pytest.approx([np.pi / 2, 3 * np.pi / 2], abs=1e-12)


def test_double_zero_detected():
    zs = tp.companion_zeros(tp.TrigPoly((1.0, 1.0), (0.0,)))
    assert len(zs) == 1 and zs.orders[0] == 2
    assert zs.angles[0] == pytest.approx(np.pi, abs=1e-6)


def test_constant_has_no_zeros():
    sd = tp.signed_zeros(tp.TrigPoly((2.0, 0.5), (1.0,)))
    assert sd.count == 0 and sd.constant_sign == 1
    assert tp.zero_sum_minus(sd) == 0.0


def test_phase_count_validated():
    with pytest.raises(ValueError):
        tp.TrigPoly((1.0, 1.0), ())


def test_cos2_half_invariant():
    T = tp.TrigPoly((0.0, 0.0, 1.0), (0.0, 0.0))
    sd = tp.signed_zeros(T)
    assert sd.count == 4
    assert tp.circle_distance(tp.zero_sum_minus(sd), 0.0) < 1e-12
    assert tp.circle_distance(tp.zero_sum_minus_formula(T), 0.0) < 1e-12


@given(trig_polys())
@settings(max_examples=150, deadline=None)
def test_order_bound(T):
    assert tp.companion_zeros(T).total_order <= 2 * T.degree


@given(separated_roots(), st.floats(0.5, 2.0))
@settings(max_examples=100, deadline=None)
def test_zero_sum_of_constructed_polynomial(roots, scale):
    T = tp.TrigPoly.from_roots(roots, scale)
    zs = tp.zero_sum(T)
    assert zs.full_order
    # the prescribed roots and the leading phase give two independent values
    assert tp.circle_distance(zs.value, float(np.sum(roots))) < 1e-8
    assert tp.circle_distance(zs.value, -2 * T.theta[-1]) < 1e-8


@given(separated_roots())
@settings(max_examples=100, deadline=None)
def test_zminus_formula_either_sign_convention(roots):
    T = tp.TrigPoly.from_roots(roots)
    value = tp.zero_sum_minus(tp.signed_zeros(T))
    for form in (T, T.with_negated_leading()):
        assert tp.circle_distance(value, tp.zero_sum_minus_formula(form)) < 1e-8


@given(trig_polys())
@settings(max_examples=150, deadline=None)
def test_zero_sum_is_twice_half_invariant(T):
    sd = tp.signed_zeros(T)
    assume(sd.count > 0)
    assert tp.circle_distance(tp.zero_sum_of(sd.zeros), 2 * tp.zero_sum_minus(sd)) < 1e-8


@given(trig_polys(), st.lists(angle, min_size=8, max_size=8))
@settings(max_examples=50, deadline=None)
def test_negated_leading_is_same_function(T, alphas):
    a = np.array(alphas)
    assert np.allclose(T(a), T.with_negated_leading()(a), atol=1e-12)


@given(trig_polys())
@settings(max_examples=60, deadline=None)
def test_sampled_route_agrees_with_companion(T):
    a = tp.signed_zeros(T)
    assume(a.all_simple)
    assume(len(a.zeros) < 2 or np.diff(np.sort(a.zeros.angles)).min() > 1e-3)
    b = tp.zeros_of_smooth(T)
    assert len(a.zeros) == len(b.zeros)
    if len(a.zeros):
        assert tp.circle_distance(a.zeros.angles, b.zeros.angles).max() < 1e-8


@given(trig_polys())
@settings(max_examples=50, deadline=None)
def test_fourier_roundtrip(T):
    U = tp.TrigPoly.from_fourier(T.fourier())
    a = np.linspace(0, 2 * np.pi, 17)
    assert np.allclose(T(a), U(a), atol=1e-12)


def test_sign_structure_counts():
    sd = tp.signed_zeros(tp.TrigPoly((0.0, 0.0, 1.0), (0.0, 0.0)))
    assert sd.n_counts == (1, 1, 1, 1)
    assert len(sd.negative_midpoints) == 2


def test_smooth_route_finds_even_zero():
    sd = tp.zeros_of_smooth(lambda a: (1 - np.cos(a - 1.0)) * (2 + np.sin(a)))
    assert len(sd.zeros) == 1 and sd.zeros.orders[0] == 2
    assert sd.zeros.angles[0] == pytest.approx(1.0, abs=1e-5)


@given(st.floats(-1, 1), st.floats(-1, 1), angle, st.integers(1, 3))
@settings(max_examples=60, deadline=None)
def test_cos2_stable_under_small_smooth_perturbation(c1, c2, phase, freq):
    # derivatives up to order 4 of g stay below 1e-3
    eps = 1e-3 / (4 * freq**4 * np.e)
    base = tp.TrigPoly((0.0, 0.0, 1.0), (0.0, 0.0))

    def f(a):
        return base(a) + eps * (c1 * np.exp(np.sin(a)) / 2 + c2 * np.cos(freq * a + phase))

    sd = tp.zeros_of_smooth(f)
    assert sd.zeros.total_order <= 4
    if sd.zeros.total_order == 4:
        assert tp.circle_distance(tp.zero_sum_minus(sd), 0.0) < 1e-2
