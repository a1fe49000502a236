"""
Convergence of PDDAGP on one placement of the default scenario.

The augmented objective climbs inside every penalty phase. When the
penalty parameter shrinks, it can drop, because the same residual now
costs more. By the end the residual is zero and the augmented objective
coincides with the weighted sum rate.

Run:  python3 demos/convergence_trace.py
"""

from pddagp import ScenarioConfig, generate_channels, solve

cfg = ScenarioConfig(seed=2)
report = solve(generate_channels(cfg), cfg)

print(f"{'outer':>5} {'inner':>5} {'aug (nats)':>12} {'wsr (nats)':>11} {'f':>10} {'rho':>8}")
trace = report.trace
for k, row in enumerate(trace):
    # every 10th row of a phase plus its last row
    phase_end = k + 1 == len(trace) or trace[k + 1].outer != row.outer
    if row.inner % 10 == 0 or phase_end:
        print(f"{row.outer:5d} {row.inner:5d} {row.aug_obj_nats:12.4f} {row.wsr_nats:11.4f} "
              f"{row.f:10.2e} {row.rho:8.0e}")

print(f"\nfeasible={report.feasible}, WSR={report.wsr_bits:.2f} bits/s/Hz, "
      f"harvested/threshold={report.harvested_norm:.4f}, "
      f"{report.outer_iterations} outer / {report.inner_iterations} inner iterations, "
      f"{report.wall_time:.2f} s")
