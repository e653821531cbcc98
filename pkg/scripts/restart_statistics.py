#!/usr/bin/env python3
"""Sample post-selection restart statistics for a bundled config.

Replays the deterministic tau schedule as shot-by-shot trajectories: every
ancilla measurement either keeps the run alive (probability p0 of that
stage) or forces a restart. The mean number of restarts should match the
geometric law 1/P_success - 1; this script prints both with a standard
error so deviations are visible.
"""

import argparse
import math
import statistics
import sys
from dataclasses import replace

from peigen import run as run_protocol
from peigen import stochastic_trajectory
from peigen.config import build_initial_state, load_experiment, resolve_config_path


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default="harmonic_fixed")
    ap.add_argument("--trajectories", type=int, default=2000)
    ap.add_argument("--seed0", type=int, default=0, help="first seed; one per trajectory")
    args = ap.parse_args(argv)

    cfg = load_experiment(resolve_config_path(args.config))
    from peigen.models import build_model

    h = build_model(cfg.model)
    trace = run_protocol(build_initial_state(cfg), h, cfg.run)
    print(f"{args.config}: {trace.n_stages} stages, P_success = {trace.p_success:.6f}")

    restarts = []
    for seed in range(args.seed0, args.seed0 + args.trajectories):
        out = stochastic_trajectory(build_initial_state(cfg), h,
                                    replace(cfg.run, seed=seed), trace.schedule)
        restarts.append(out.restarts)
    mean = statistics.fmean(restarts)
    se = statistics.stdev(restarts) / math.sqrt(len(restarts))
    expected = 1.0 / trace.p_success - 1.0
    print(f"mean restarts over {args.trajectories} trajectories: {mean:.3f} ± {se:.3f}")
    print(f"geometric-law expectation 1/P - 1:                   {expected:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
