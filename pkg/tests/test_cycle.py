import math

import numpy as np
import pytest

from qhe_otto.cycle import (
    CycleConfig,
    a_for_cost_ratio,
    fidelity_pair,
    run_cycle,
    stroke_fidelities,
    stroke_unitaries,
)
from qhe_otto.errors import GapTooLarge, RadicandNegative
from qhe_otto.thermo import HeatForm, Regime, zero_work_fidelity


def test_config_validation():
    with pytest.raises(ValueError):
        CycleConfig(tau=1.0, ratio=1.2)
    with pytest.raises(ValueError):
        CycleConfig(tau=0.0, ratio=0.5)
    with pytest.raises(ValueError):
        CycleConfig(tau=1.0, ratio=0.5, n=1)
    with pytest.raises(ValueError):
        CycleConfig(tau=1.0, ratio=0.5, drive="inv")
    with pytest.raises(ValueError):
        CycleConfig(tau=1.0, ratio=0.5, beta1=0.05, beta2=0.04)
    with pytest.raises(GapTooLarge):
        CycleConfig(tau=1.0, ratio=0.05, x=0.1)
    cfg = CycleConfig(tau=1.0, ratio=0.5, drive="inv", a_const=2.0, protocol="sine", heat_form="printed")
    assert cfg.heat_form is HeatForm.PRINTED
    assert cfg.eps2 == 0.5


@pytest.mark.parametrize("tau", [0.3, 1.0, 7.0])
def test_no_compression_is_adiabatic_accelerator(tau):
    res = run_cycle(CycleConfig(tau=tau, ratio=1.0))
    t1, t2 = math.tanh(0.01), math.tanh(0.04)
    assert res.f1 == pytest.approx(1.0, abs=1e-12)
    assert res.f2 == pytest.approx(1.0, abs=1e-12)
    assert res.w == pytest.approx(0.0, abs=1e-12)
    assert res.q1 == pytest.approx(t2 - t1, abs=1e-12)
    assert res.q2 == pytest.approx(-(t2 - t1), abs=1e-12)
    assert res.eta is None
    assert res.regime is Regime.ACCELERATOR
    assert res.w_qs == 0.0 and res.eta_qs == 0.0


@pytest.mark.parametrize("tau, ratio", [(0.5, 0.4), (1.0, 0.6), (3.0, 0.3)])
def test_fidelity_does_not_depend_on_level(tau, ratio):
    cfg = CycleConfig(tau=tau, ratio=ratio, x=0.2)
    h1, h2 = cfg.hamiltonians()
    u_egc, u_ege = stroke_unitaries(cfg)
    ground = stroke_fidelities(u_egc, u_ege, h1, h2, "ground")
    excited = stroke_fidelities(u_egc, u_ege, h1, h2, "excited")
    np.testing.assert_allclose(ground, excited, atol=1e-10)


def test_fidelity_level_agreement_invariant():
    cfg = CycleConfig(tau=1.0, ratio=0.6, drive="inv", a_const=1.3, protocol="sextic")
    h1, h2 = cfg.hamiltonians()
    u_egc, u_ege = stroke_unitaries(cfg)
    np.testing.assert_allclose(
        stroke_fidelities(u_egc, u_ege, h1, h2, "ground"),
        stroke_fidelities(u_egc, u_ege, h1, h2, "excited"),
        atol=1e-10,
    )


@pytest.mark.parametrize("tau", [0.5, 1.0, 1.5, 3.0])
@pytest.mark.parametrize("ratio", [0.3, 0.4, 0.6, 0.9])
def test_lz_strokes_share_fidelity(tau, ratio):
    f1, f2 = fidelity_pair(CycleConfig(tau=tau, ratio=ratio))
    assert abs(f1 - f2) < 1e-6
    assert 0.0 <= f1 <= 1.0


def test_invariant_strokes_report_distinct_fidelities():
    # no time-reversal symmetry forces these to match; both are reported
    f1, f2 = fidelity_pair(CycleConfig(tau=1.0, ratio=0.6, drive="inv", a_const=0.8))
    assert 0.0 <= f1 <= 1.0 and 0.0 <= f2 <= 1.0
    assert abs(f1 - f2) > 1e-6


def _engine_window(x):
    signs = []
    for tau in (0.5, 1.0, 1.5):
        for ratio in np.linspace(0.3, 0.95, 27):
            cfg = CycleConfig(tau=tau, ratio=float(ratio), x=x)
            res = run_cycle(cfg)
            f0 = zero_work_fidelity(cfg.eps1, cfg.eps2, cfg.beta1, cfg.beta2)
            assert (res.regime is Regime.ENGINE) == (res.f1 > f0)
            assert (res.w > 0) == (res.f1 > f0)
            signs.append(res.w > 0)
    return signs


def test_engine_window_matches_zero_work_boundary():
    _engine_window(0.1)


def test_work_changes_sign_across_boundary():
    # a wider avoided crossing pushes strong compressions below the boundary
    signs = _engine_window(0.3)
    assert any(signs) and not all(signs)


def test_result_invariants():
    res = run_cycle(CycleConfig(tau=0.7, ratio=0.5, x=0.2))
    assert res.w == pytest.approx(res.q1 + res.q2, abs=1e-15)
    assert res.cost >= 0
    assert res.cost_ratio is None
    d = res.as_dict()
    assert d["regime"] is res.regime and set(d) >= {"f1", "f2", "clausius"}


def test_invariant_cost_ratio_targeting():
    base = CycleConfig(tau=1.0, ratio=0.6, drive="inv", a_const=1.0)
    a = a_for_cost_ratio(base, 10.0)
    inv = run_cycle(CycleConfig(tau=1.0, ratio=0.6, drive="inv", a_const=a))
    assert inv.cost_ratio == pytest.approx(10.0, rel=1e-12)


def _ladder_f1(tau, ratio):
    return np.array(
        [
            run_cycle(CycleConfig(tau=tau, ratio=ratio, drive="inv", a_const=float(a))).f1
            for a in np.geomspace(0.5, 16, 11)
        ]
    )


@pytest.mark.parametrize("tau, ratio", [(1.0, 0.6), (1.5, 0.4)])
def test_invariant_beats_lz_on_ladder(tau, ratio):
    lz = run_cycle(CycleConfig(tau=tau, ratio=ratio)).f1
    f1 = _ladder_f1(tau, ratio)
    assert f1[-1] > lz
    assert np.any(f1 > lz)


@pytest.mark.parametrize("tau, ratio", [(1.0, 0.6), (1.5, 0.4)])
def test_invariant_fidelity_envelope_rises_with_a(tau, ratio):
    # F1(A) dips at moderate A before approaching 1; only the envelope is monotone
    f1 = _ladder_f1(tau, ratio)
    assert f1[-1] > 0.99
    assert np.max(1 - f1[-3:]) < np.max(1 - f1[3:6])


def test_invariant_infeasible_error_carries_context():
    cfg = CycleConfig(tau=1.0, ratio=0.4, drive="inv", a_const=2.0)
    with pytest.raises(RadicandNegative) as info:
        run_cycle(cfg)
    msg = str(info.value)
    assert "building inv drive" in msg and "ratio=0.4" in msg and "A=2.0" in msg
