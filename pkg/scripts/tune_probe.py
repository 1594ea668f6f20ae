"""Scratch harness for probing convergence settings (not part of the package)."""

import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

sys.path.insert(0, "src")

from qslack import build_problem
from qslack.optimizer import LrSchedule, RunRecord, SpsaConfig, run_optimization


def one_run(args):
    tag, at, layers, born_layers, c, lr, cp, normalize, sched_kw, iters, seed = args
    p = build_problem(tag, n_system=2, ansatz_type=at, layers=layers,
                      born_layers=born_layers, c=c, instance_seed=11)
    spsa = SpsaConfig(learning_rate=lr, perturbation=cp, normalize=normalize, max_iters=iters)
    sched = LrSchedule(**sched_kw)
    rec = run_optimization(p.objective, spsa, sched, np.random.default_rng([7, seed]),
                           oracle=p.oracle.value)
    # error trajectory at checkpoints
    marks = {}
    for frac in (0.25, 0.5, 0.75, 1.0):
        i = min(len(rec.rows) - 1, int(iters * frac) - 1)
        marks[frac] = rec.rows[i].error
    return rec.final_error, marks


def sweep(jobs, workers=2):
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one_run, jobs))


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "td_dual"
    t0 = time.time()
    if which == "td_dual":
        variants = [
            ("cp05_min1e-3", 0.1, 0.05, dict(kind="regression_window", window=500, min_lr=1e-3)),
            ("cp02_min1e-3", 0.1, 0.02, dict(kind="regression_window", window=500, min_lr=1e-3)),
            ("cp05_min2e-4", 0.1, 0.05, dict(kind="regression_window", window=500, min_lr=2e-4)),
            ("cp02_min2e-4", 0.1, 0.02, dict(kind="regression_window", window=500, min_lr=2e-4)),
        ]
        for name, lr, cp, sk in variants:
            jobs = [("trace_distance_dual", "purification", 3, 2, 100.0, lr, cp, True, sk, 12000, s)
                    for s in range(4)]
            res = sweep(jobs)
            finals = [r[0] for r in res]
            half = [r[1][0.5] for r in res]
            print(f"{name}: finals={[f'{e:.4f}' for e in finals]} median={np.median(finals):.4f} "
                  f"at-half={[f'{e:.4f}' for e in half]}", flush=True)
    print(f"total {time.time()-t0:.0f}s")
