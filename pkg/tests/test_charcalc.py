import numpy as np
import pytest

from membrane.charcalc import (SnapshotStack, a12_radical, a22_radical,
                               char_rhs, coefficients, commutator_residual,
                               commutator_residual_field,
                               decomposition_residual_field, eigenvalues,
                               rtilde, states_from_fields)
from membrane.core import UVPoint
from membrane.transform import f_value, sample_valid_region


def test_eigenvalues_ordering():
    lp, lm = eigenvalues(UVPoint(0.3, 2.0))
    assert lp == pytest.approx(0.8)
    assert lm == pytest.approx(-0.2)
    assert lp > lm


def test_char_rhs_identity_against_equations():
    # with u_t, v_t given by the first-order system, the directional
    # derivatives must satisfy d_pm u = coef_pm d_pm v + src_pm exactly
    rng = np.random.default_rng(11)
    for _ in range(50):
        p = UVPoint(float(rng.uniform(0.05, 0.4)), float(rng.uniform(1.5, 5.0)))
        r = float(rng.uniform(0.5, 3.0))
        u_r = float(rng.uniform(-2, 2))
        v_r = float(rng.uniform(-2, 2))
        f = f_value(p.u, p.v)
        u_t = -p.u * u_r - v_r / p.v ** 3 - f / (r * p.v ** 2)
        v_t = -p.v * u_r - p.u * v_r - p.u * p.v / r
        rhs = char_rhs(p, r)
        lp, lm = eigenvalues(p)
        lhs_p = (u_t + lp * u_r) - rhs.coef_plus * (v_t + lp * v_r)
        lhs_m = (u_t + lm * u_r) - rhs.coef_minus * (v_t + lm * v_r)
        assert lhs_p == pytest.approx(rhs.src_plus, rel=1e-10, abs=1e-12)
        assert lhs_m == pytest.approx(rhs.src_minus, rel=1e-10, abs=1e-12)


def test_coefficient_radical_cross_checks():
    for p in sample_valid_region(200, seed=5):
        c = coefficients(p, alpha=1.0)
        assert c.a12 == pytest.approx(a12_radical(p), rel=1e-8, abs=1e-8)
        assert c.a22 == pytest.approx(a22_radical(p), rel=1e-8, abs=1e-8)


def test_coefficients_a13_equals_a23():
    for p in sample_valid_region(50, seed=9):
        c = coefficients(p, alpha=2.0)
        assert c.a13 == c.a23


def test_rtilde_shift():
    p = UVPoint(0.3, 2.5)
    rp, rm = rtilde(p, dv_plus=1.0, dv_minus=0.5, r=2.0, alpha=1.5)
    shift = 1.5 * f_value(p.u, p.v) / 2.0
    assert rp == pytest.approx(1.0 - shift)
    assert rm == pytest.approx(0.5 - shift)


def _manufactured(u_fn, v_fn, n=257, steps=21):
    r = np.linspace(1.0, 1.4, n)
    times = np.linspace(0.0, 0.01, steps)
    return states_from_fields(u_fn, v_fn, r, times)


def test_snapshot_stack_alignment():
    snaps = _manufactured(lambda r, t: 0.0 * r, lambda r, t: 1.0 + 0.0 * r)
    stack = SnapshotStack(snaps)
    assert stack.r.size == snaps[0].grid.size
    assert np.allclose(stack.v, 1.0)
    assert np.allclose(stack.t, [s.time for s in snaps])


def test_commutator_zero_when_v_flat_in_r():
    # the commutator residual is proportional to v_r; v = 1 + t kills it
    snaps = _manufactured(lambda r, t: r, lambda r, t: (1.0 + t) + 0.0 * r)
    res = commutator_residual_field(snaps, 0)
    assert np.nanmax(np.abs(res)) < 1e-10


def test_commutator_nonzero_on_generic_field():
    snaps = _manufactured(lambda r, t: 0.2 + 0.1 * r, lambda r, t: 2.0 + t + 0.5 * r)
    res = commutator_residual_field(snaps, 0)
    assert np.nanmedian(np.abs(res)) > 0.05


def test_commutator_pointwise_raises_on_boundary():
    snaps = _manufactured(lambda r, t: r, lambda r, t: (1.0 + t) + 0.0 * r)
    with pytest.raises(ValueError):
        commutator_residual(snaps, 0, 0)  # edge stencil has no centered dr


def test_decomposition_residual_small_on_solution(sol512):
    stack = SnapshotStack(sol512.snapshots)
    rp, rm = decomposition_residual_field(stack, 4)
    med = np.nanmedian(np.abs(np.concatenate([rp, rm])))
    assert med < 0.5


def test_decomposition_residual_large_on_non_solution():
    snaps = _manufactured(lambda r, t: 0.2 + 0.1 * r, lambda r, t: 2.0 + 2 * t + 3.0 * r)
    rp, rm = decomposition_residual_field(snaps, 0)
    med = np.nanmedian(np.abs(np.concatenate([rp, rm])))
    assert med > 1.0
