"""
Average WSR against the number of IRS elements, with both baselines.

More elements give the reflected path more gain and the phase optimizer
more freedom. Fixing random phases keeps part of the gain. Removing the
surface altogether is the floor.

Run:  python3 demos/irs_size_sweep.py [trials]
"""

import sys

from pddagp import ScenarioConfig, SweepSpec, run_sweep

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 10
spec = SweepSpec(axis='n_s', values=[20, 40, 80, 160], trials=trials,
                 base=ScenarioConfig(p_b_dbm=40.0), seed=1)
print(f"{trials} placements per point, P_B = 40 dBm")
print(f"{'N_S':>5} {'PDDAGP':>8} {'random':>8} {'no IRS':>8} {'feasible':>9}")
for row in run_sweep(spec):
    print(f"{row.axis_value:5d} {row.mean_wsr_bits:8.2f} {row.base_random_phase_bits:8.2f} "
          f"{row.base_no_irs_bits:8.2f} {row.feas_rate:9.0%}")
