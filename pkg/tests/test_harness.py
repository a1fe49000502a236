import math

import numpy as np
import pytest

from pddagp.errors import ConfigInvalid, InsufficientPoints
from pddagp.harness import (SWEEP_HEADER, SweepSpec, check_gradients, run_baseline, run_sweep,
                            sweep_csv, timing_scan, trial_config)
from pddagp.model import ChannelSet, ScenarioConfig, generate_channels
from pddagp.objective import nats_to_bits
from pddagp.solver import SolverConfig, solve

FAST = SolverConfig(outer_max=6)


@pytest.mark.parametrize('bad', [dict(axis='n_i'), dict(values=[]), dict(trials=0), dict(workers=0),
                                 dict(baselines=('bcd',)), dict(values=[-5]), dict(values=[2.5])])
def test_spec_validation(bad):
    kw = dict(axis='n_s', values=[4], trials=1)
    kw.update(bad)
    with pytest.raises(ConfigInvalid):
        SweepSpec(**kw)


def test_spec_dict_roundtrip():
    spec = SweepSpec(axis='p_th_mw', values=[0.1, 0.2], trials=3, seed=9, base=ScenarioConfig(n_s=8))
    again = SweepSpec.from_dict(spec.to_dict())
    assert again.to_dict() == spec.to_dict()
    with pytest.raises(ConfigInvalid):
        SweepSpec.from_dict({'axis': 'n_s'})


def test_degenerate_sweep_equals_direct_solve():
    spec = SweepSpec(axis='n_s', values=[16], trials=1, seed=4, base=ScenarioConfig(p_b_dbm=40),
                     baselines=())
    row = run_sweep(spec)[0]
    cfg = trial_config(spec, 16, 0)
    rep = solve(generate_channels(cfg), cfg)
    assert row.records[0].channel_hash == rep.channel_hash
    assert row.feas_rate == float(rep.feasible)
    assert row.mean_wsr_bits == nats_to_bits(rep.wsr_nats)


def test_csv_is_deterministic_and_parallel_safe():
    kw = dict(axis='er_center_x', values=[5.0, 6.0], trials=2, base=ScenarioConfig(n_s=16, p_b_dbm=40),
              solver=FAST)
    a = sweep_csv(run_sweep(SweepSpec(**kw)))
    b = sweep_csv(run_sweep(SweepSpec(**kw)))
    c = sweep_csv(run_sweep(SweepSpec(workers=2, **kw)))
    assert a == b == c
    lines = a.splitlines()
    assert lines[0].split(',') == SWEEP_HEADER and len(lines) == 3
    assert lines[1].split(',')[4] == 'nan'


def test_rows_account_for_feasibility_and_pairing():
    spec = SweepSpec(axis='n_s', values=[16], trials=3, base=ScenarioConfig(p_b_dbm=40), solver=FAST)
    row = run_sweep(spec)[0]
    assert 0 <= row.feas_rate <= 1
    feas = [r.wsr_bits for r in row.records if r.feasible]
    assert row.feas_rate == len(feas) / 3
    if feas:
        assert row.mean_wsr_bits == pytest.approx(np.mean(feas))
    for r in row.records:
        assert set(r.baseline_hashes.values()) == {r.channel_hash}


def test_all_infeasible_row_reports_nan():
    spec = SweepSpec(axis='p_th_mw', values=[1e6], trials=2, base=ScenarioConfig(n_s=4),
                     solver=SolverConfig(outer_max=3), baselines=())
    row = run_sweep(spec)[0]
    assert row.feas_rate == 0.0 and math.isnan(row.mean_wsr_bits)


def test_timing_column_when_enabled():
    spec = SweepSpec(axis='n_s', values=[4], trials=1, solver=FAST, baselines=(), timing=True)
    assert run_sweep(spec)[0].mean_ms > 0


def test_no_irs_without_direct_links():
    base = generate_channels(ScenarioConfig(n_s=8, seed=1))
    ch = ChannelSet(base.h_s, np.zeros_like(base.h_i), np.zeros_like(base.h_e), base.g_i, base.g_e, True)
    rep = run_baseline(ch, ScenarioConfig(n_s=8), 'no_irs', SolverConfig(outer_max=4))
    assert rep.wsr_nats == 0.0 and not rep.feasible
    assert rep.channel_hash == ch.fingerprint()


def test_random_phase_on_empty_surface_equals_no_irs():
    cfg = ScenarioConfig(n_s=0, seed=2, p_b_dbm=40)
    ch = generate_channels(cfg)
    a = run_baseline(ch, cfg, 'random_phase')
    b = run_baseline(ch, cfg, 'no_irs')
    assert a.wsr_nats == b.wsr_nats and a.feasible == b.feasible
    assert np.array_equal(a.final.x, b.final.x)


def test_random_phase_keeps_drawn_phases():
    cfg = ScenarioConfig(n_s=8, seed=2)
    rep = run_baseline(generate_channels(cfg), cfg, 'random_phase', FAST, rng=np.random.default_rng(3))
    assert np.allclose(rep.final.phi, np.exp(2j * np.pi * np.random.default_rng(3).random(8)))
    with pytest.raises(ConfigInvalid):
        run_baseline(generate_channels(cfg), cfg, 'bcd')


def test_check_gradients_passes_and_reports():
    rep = check_gradients(cases=10, seed=3)
    assert rep.passed and rep.cases == 10
    assert rep.max_rel_x <= 1e-5 and rep.max_rel_phi <= 1e-5
    assert rep.summary().startswith('PASS')


def test_check_gradients_scalar_dims():
    assert check_gradients(dict(n_b=1, n_i=1, n_e=1, n_s=1, m_i=1, m_e=1), cases=10).passed


def test_timing_scan_validation_and_shape():
    with pytest.raises(InsufficientPoints):
        timing_scan([100])
    with pytest.raises(InsufficientPoints):
        timing_scan([100, 150, 200])
    rep = timing_scan([4, 8, 16], iterations=3, repeats=1)
    assert len(rep.seconds) == 3 and all(s > 0 for s in rep.seconds)
    assert math.isfinite(rep.exponent) and len(rep.ratios()) == 2
