import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frictionless.errors import NonPositiveParameter, PositivityViolated
from frictionless.model import (
    VALIDATION_POINTS,
    ConstantProfile,
    InverseEngineeredProfile,
    NumericLaw,
    PolynomialLaw,
    hz_to_angular,
    linear_ramp,
    make_spec,
    uniform_ramp,
)

positive = st.floats(min_value=1e-3, max_value=1e5, allow_nan=False, allow_infinity=False)


def test_make_spec_gamma_ten():
    spec = make_spec(hz_to_angular(250), hz_to_angular(2.5), 0.025, 1, 1)
    assert spec.gamma == pytest.approx(10.0, rel=1e-15)


def test_make_spec_no_expansion():
    assert make_spec(3.0, 3.0, 1.0).gamma == 1.0


def test_make_spec_gamma_two():
    spec = make_spec(hz_to_angular(250), hz_to_angular(62.5), 0.01)
    assert spec.gamma == pytest.approx(2.0, rel=1e-15)


def test_compression_is_accepted():
    spec = make_spec(1.0, 4.0, 1.0)
    assert spec.gamma == pytest.approx(0.5)


@pytest.mark.parametrize("field", range(5))
@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_make_spec_rejects_bad_inputs(field, bad):
    args = [1.0, 0.5, 1.0, 1.0, 1.0]
    args[field] = bad
    with pytest.raises(NonPositiveParameter):
        make_spec(*args)


@pytest.mark.parametrize("f, w", [(250, 1570.7963267948965), (0, 0.0), (2.5, 15.707963267948966)])
def test_hz_to_angular(f, w):
    assert hz_to_angular(f) == pytest.approx(w, rel=1e-15)


@given(positive, positive)
def test_gamma_squared_times_omegaf(w0, wf):
    spec = make_spec(w0, wf, 1.0)
    assert spec.gamma**2 * wf == pytest.approx(w0, rel=4 * np.finfo(float).eps)


def test_positivity_check_rejects_dipping_law():
    # 1 - 4 s (1 - s) reaches zero at s = 1/2
    with pytest.raises(PositivityViolated):
        PolynomialLaw([1.0, -4.0, 4.0], 1.0)


def test_positivity_check_catches_narrow_dip_on_grid():
    # minimum -1e-6 at s = 1/2, a validation grid point
    with pytest.raises(PositivityViolated):
        PolynomialLaw([1.0 - 1e-6 + 1.0, -8.0, 8.0], 1.0)


def test_validation_grid_density():
    assert VALIDATION_POINTS >= 10_000


def test_numeric_law_requires_increasing_grid():
    with pytest.raises(ValueError):
        NumericLaw([0.0, 0.0, 1.0], [1, 1, 1], [0, 0, 0])
    with pytest.raises(PositivityViolated):
        NumericLaw([0.0, 1.0], [1.0, -1.0], [0.0, 0.0])


def test_numeric_law_reproduces_cubic():
    t = np.linspace(0.0, 2.0, 7)
    law = NumericLaw(t, 1 + t**3, 3 * t**2, 6 * t)
    tt = np.linspace(0.0, 2.0, 101)
    assert np.allclose(law.b(tt), 1 + tt**3, rtol=1e-13)
    assert np.allclose(law.bdot(tt), 3 * tt**2, rtol=1e-13, atol=1e-13)
    assert np.allclose(law.bddot(tt), 6 * tt, rtol=1e-13, atol=1e-13)
    assert law.tf == 2.0


def test_inverse_profile_asserts_endpoints():
    # b(s) = 1 + s^2 has bddot(0) != 0, so omega^2(0) misses omega0^2
    with pytest.raises(AssertionError):
        InverseEngineeredProfile(PolynomialLaw([1.0, 0.0, 1.0], 1.0), 1.0)


def test_linear_ramp_examples():
    spec = make_spec(hz_to_angular(250), hz_to_angular(2.5), 1.0)
    ramp = linear_ramp(spec)
    assert ramp.omega_sq(0.0) == pytest.approx(spec.omega0**2, rel=1e-15)
    assert ramp.omega_sq(1.0) == pytest.approx(spec.omegaf**2, rel=1e-13)
    assert ramp.omega_sq(0.5) == pytest.approx(((spec.omega0 + spec.omegaf) / 2) ** 2, rel=1e-15)


def test_uniform_ramp_examples():
    spec = make_spec(hz_to_angular(250), hz_to_angular(2.5), 0.045)
    ramp = uniform_ramp(spec)
    assert ramp.omega(0.0) == pytest.approx(spec.omega0, rel=1e-15)
    assert ramp.omega(spec.tf) == pytest.approx(spec.omegaf, rel=1e-13)


def test_uniform_ramp_constant_ratio():
    spec = make_spec(hz_to_angular(250), hz_to_angular(2.5), 0.045)
    ramp = uniform_ramp(spec)
    t = np.random.default_rng(1).uniform(0.0, spec.tf, 10)
    # derivative of the closed form by central differences, independent of omega_dot
    h = 1e-9
    wdot = (ramp.omega(t + h) - ramp.omega(t - h)) / (2 * h)
    ratio = wdot / ramp.omega(t) ** 2
    assert np.allclose(ratio, ratio[0], rtol=1e-6)
    exact = ramp.omega_dot(t) / ramp.omega(t) ** 2
    assert np.allclose(exact, exact[0], rtol=1e-10)


@given(positive, positive, st.floats(min_value=1e-4, max_value=10.0))
@settings(max_examples=50)
def test_ramps_stay_confining(w0, wf, tf):
    spec = make_spec(max(w0, wf), min(w0, wf), tf)
    t = np.linspace(0.0, tf, 1001)
    assert np.all(linear_ramp(spec).omega_sq(t) > 0)
    assert np.all(uniform_ramp(spec).omega_sq(t) > 0)


def test_constant_profile_needs_omega0_when_expulsive():
    with pytest.raises(ValueError):
        ConstantProfile(-1.0, 1.0)
    assert ConstantProfile(4.0, 1.0).omega0 == 2.0
