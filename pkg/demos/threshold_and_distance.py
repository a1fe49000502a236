"""
Two trade-offs of the harvest constraint.

A higher harvest threshold pulls transmit power toward the energy
receivers and away from the information receivers. Moving the energy
receivers away from the surface weakens their channel, so meeting the
same threshold costs more rate and fails more often.

Run:  python3 demos/threshold_and_distance.py [trials]
"""

import sys

from pddagp import ScenarioConfig, SweepSpec, run_sweep, sweep_csv

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 10
base = ScenarioConfig(p_b_dbm=35.0)

print("harvest threshold sweep (mW), P_B = 35 dBm")
rows = run_sweep(SweepSpec(axis='p_th_mw', values=[0.05, 0.1, 0.2, 0.4], trials=trials,
                           base=base, baselines=()))
print(sweep_csv(rows))

print("energy-receiver distance sweep (m)")
rows = run_sweep(SweepSpec(axis='er_center_x', values=[3.0, 5.0, 8.0, 12.0], trials=trials,
                           base=base, baselines=()))
print(sweep_csv(rows))
