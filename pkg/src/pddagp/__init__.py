"""Weighted-sum-rate maximization for IRS-assisted SWIPT MIMO broadcast via PDDAGP."""

from .errors import *  # noqa: F401,F403
from .model import (ChannelSet, EffectiveChannels, Fading, PathLoss, ScenarioConfig,
                    dbm_to_watt, effective_channels, generate_channels, noise_power)
from .objective import (DesignPoint, Evaluation, PenaltyState, aug_objective, evaluate,
                        harvested_power_norm, nats_to_bits, rates, residual_f, wsr)
from .gradients import fd_oracle, grad_phi, grad_x
from .projections import project_covariances, project_phases, water_level
from .solver import SolveReport, SolverConfig, factor_precoders, solve, update_tau
from .harness import (SweepRow, SweepSpec, check_gradients, run_baseline, run_sweep,
                      sweep_csv, timing_scan)

__version__ = '0.1.0'
