"""Special functions against mpmath and their defining recurrences."""

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from su3chain.specfun import (
    PoleError,
    SpecialValue,
    digamma,
    digamma_array,
    digamma_asymptotic_direct,
    hurwitz_zeta,
    hurwitz_zeta_array,
    polygamma,
    tetragamma_array,
    trigamma_array,
)

mp.mp.dps = 30

SAMPLE_POINTS = [
    0.3 + 0.0j,
    1.0 + 0.0j,
    4 / 3 + 0.0j,
    -2.4 + 0.7j,
    5.5 - 3.2j,
    -0.45 - 0.05j,
    17.0 + 0.0j,
    0.01 + 2j,
]


@pytest.mark.parametrize("z", SAMPLE_POINTS)
def test_digamma_against_mpmath(z):
    ours = complex(digamma_array(z)[0])
    ref = complex(mp.digamma(mp.mpc(z)))
    assert abs(ours - ref) < 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", SAMPLE_POINTS)
def test_trigamma_against_mpmath(z):
    ours = complex(trigamma_array(z)[0])
    ref = complex(mp.polygamma(1, mp.mpc(z)))
    assert abs(ours - ref) < 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", SAMPLE_POINTS)
def test_tetragamma_against_mpmath(z):
    ours = complex(tetragamma_array(z)[0])
    ref = complex(mp.polygamma(2, mp.mpc(z)))
    assert abs(ours - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("s", [2, 3, 5, 7, 11])
@pytest.mark.parametrize("a", [1.0, 4 / 3, 0.25 + 0.5j, 6.0 - 2.0j])
def test_hurwitz_zeta_against_mpmath(s, a):
    ours = complex(hurwitz_zeta_array(s, a)[0])
    ref = complex(mp.zeta(s, mp.mpc(a)))
    assert abs(ours - ref) < 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("order", [1, 2, 3, 6])
def test_polygamma_against_mpmath(order):
    z = 0.8 + 0.3j
    ours = polygamma(order, z)
    ref = complex(mp.polygamma(order, mp.mpc(z)))
    assert abs(ours.value - ref) < 1e-12 * max(1.0, abs(ref))


@settings(max_examples=60, deadline=None)
@given(
    st.floats(-8, 8, allow_nan=False),
    st.floats(0.1, 8, allow_nan=False),
)
def test_digamma_recurrence(re, im):
    z = complex(re, im)  # off the real axis, so never at a pole
    lhs = complex(digamma_array(z + 1)[0] - digamma_array(z)[0])
    assert abs(lhs - 1 / z) < 1e-12 * max(1.0, abs(1 / z))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 8, allow_nan=False), st.floats(0.1, 8, allow_nan=False))
def test_trigamma_is_derivative_of_digamma(re, im):
    z = complex(re, im)
    h = 1e-5
    stencil = (
        complex(digamma_array(z - 2 * h)[0])
        - 8 * complex(digamma_array(z - h)[0])
        + 8 * complex(digamma_array(z + h)[0])
        - complex(digamma_array(z + 2 * h)[0])
    ) / (12 * h)
    assert abs(stencil - complex(trigamma_array(z)[0])) < 1e-8


def test_pole_guard():
    with pytest.raises(PoleError):
        digamma(0.0)
    with pytest.raises(PoleError):
        digamma(-3 + 1e-10j)
    with pytest.raises(PoleError):
        polygamma(1, -1.0)
    with pytest.raises(PoleError):
        hurwitz_zeta(3, 0.0)


def test_hurwitz_zeta_rejects_bad_s():
    with pytest.raises(ValueError):
        hurwitz_zeta_array(1, 2.0)
    with pytest.raises(ValueError):
        hurwitz_zeta_array(2.5, 2.0)


def test_polygamma_order_range():
    with pytest.raises(ValueError):
        polygamma(0, 1.0)
    with pytest.raises(ValueError):
        polygamma(7, 1.0)


def test_asymptotic_direct_agrees_with_lifted_evaluation():
    for z in (12.0 + 0.0j, 15.0 - 4.0j, 30.0 + 9.0j):
        assert abs(
            digamma_asymptotic_direct(z) - complex(digamma_array(z)[0])
        ) < 1e-13 * abs(np.log(z))
    with pytest.raises(ValueError):
        digamma_asymptotic_direct(2.0)


def test_special_value_interface():
    val = digamma(2.5)
    assert isinstance(val, SpecialValue)
    assert val.estimated_error > 0
    assert abs(complex(val) - val.value) == 0
    assert float(digamma(2.5)) == pytest.approx(val.value.real)
