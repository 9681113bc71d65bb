import numpy as np
import pytest

from membrane.core import (BlowupReport, CharCurve, CharFamily, InitialDatum,
                           PhiGradients, Profile, RunStatus, UVPoint, UVState)


def test_phi_gradients_delta():
    g = PhiGradients.from_gradients(phi_t=0.5, phi_r=1.0)
    assert g.delta == pytest.approx(1.0 + 1.0 - 0.25)
    assert g.recomputed_delta() == pytest.approx(g.delta)
    assert g.timelike


def test_phi_gradients_spacelike_flag():
    g = PhiGradients.from_gradients(phi_t=2.0, phi_r=0.0)
    assert g.delta == pytest.approx(-3.0)
    assert not g.timelike


def test_uvpoint_discriminant_known_values():
    # u=0: D = (v^2-1)^2
    assert UVPoint(0.0, 3.0).discriminant() == pytest.approx(64.0)
    # u=0.5, v=2: Q = 2, 4u^2v^2 = 4, D = 0 (sonic)
    assert UVPoint(0.5, 2.0).discriminant() == pytest.approx(0.0)


def test_uvpoint_valid_region():
    assert UVPoint(0.2, 3.0).in_valid_region()
    assert not UVPoint(0.99, 10.0).in_valid_region()
    assert not UVPoint(-0.5, 3.0).in_valid_region()


def test_uvstate_shape_mismatch():
    r = np.linspace(1, 2, 8)
    with pytest.raises(ValueError):
        UVState(time=0.0, grid=r, u_field=r[:4], v_field=np.ones(8),
                left_boundary=1.0, right_boundary=2.0)


def test_uvstate_fields_immutable():
    r = np.linspace(1, 2, 8)
    s = UVState(time=0.0, grid=r, u_field=np.zeros(8), v_field=np.ones(8),
                left_boundary=1.0, right_boundary=2.0)
    with pytest.raises(ValueError):
        s.u_field[0] = 1.0


def test_uvstate_copies_aliased_buffers():
    # a view into a mutable buffer must be copied, not aliased
    master = np.linspace(1, 2, 16)
    vals = np.ones(16)
    s = UVState(time=0.0, grid=master[2:10], u_field=vals[2:10],
                v_field=vals[2:10], left_boundary=master[2],
                right_boundary=master[9])
    vals[:] = 99.0
    assert np.all(s.u_field == 1.0)


def test_uvstate_dict_round_trip():
    r = np.linspace(1, 2, 8)
    s = UVState(time=0.5, grid=r, u_field=np.full(8, 0.3),
                v_field=np.full(8, 2.0), left_boundary=1.0, right_boundary=2.0)
    s2 = UVState.from_dict(s.to_dict())
    assert s2.time == s.time
    assert np.array_equal(s2.grid, s.grid)
    assert np.array_equal(s2.v_field, s.v_field)


def test_profile_from_samples_matches_closed_form():
    r = np.linspace(1.0, 2.0, 64)
    prof = Profile.from_samples(r, r ** 3)
    x = np.linspace(1.1, 1.9, 11)
    assert np.allclose(prof(x), x ** 3, rtol=1e-6)
    assert np.allclose(prof.derivative(x), 3 * x ** 2, rtol=1e-4)


def test_profile_rejects_bad_samples():
    with pytest.raises(ValueError):
        Profile.from_samples(np.array([1.0, 2.0, 1.5, 3.0]), np.zeros(4))
    with pytest.raises(ValueError):
        Profile.from_samples(np.array([1.0, 2.0]), np.zeros(2))


def _linear_profile(a, b):
    return Profile(lambda r: a + b * r, lambda r: b + 0.0 * np.asarray(r))


def test_initial_datum_validation():
    prof = _linear_profile(0.5, -0.1)
    with pytest.raises(ValueError):
        InitialDatum(r1=-1.0, r2=2.0, v0=10.0, u_bar=prof)
    with pytest.raises(ValueError):
        InitialDatum(r1=1.0, r2=0.5, v0=10.0, u_bar=prof)
    with pytest.raises(ValueError):
        InitialDatum(r1=1.0, r2=2.0, v0=0.5, u_bar=prof)
    with pytest.raises(ValueError):
        InitialDatum(r1=1.0, r2=2.0, v0=10.0, u_bar=prof, eta1=1.5, eta2=1.2)


def test_char_curve_monotone_and_position():
    t = np.array([0.0, 0.1, 0.2])
    r = np.array([1.0, 1.1, 1.3])
    c = CharCurve(CharFamily.PLUS, 1.0, t, r)
    assert c.position(0.05) == pytest.approx(1.05)
    with pytest.raises(ValueError):
        CharCurve(CharFamily.PLUS, 1.0, t[::-1], r)


def test_blowup_report_dict():
    rep = BlowupReport(t_blow_observed=0.5, t_blow_uncertainty=1e-3,
                       t_star_bound=1.0, v_max=1e3, v_max_location=1.2,
                       delta_min_reconstructed=1e-6, mass_drift_rel=1e-8,
                       invariant_violations=0, run_status=RunStatus.BLEW_UP)
    d = rep.to_dict()
    assert d["run_status"] == "blew_up"
    assert d["t_blow_observed"] == 0.5
