"""Probe stronger initial rates for the slow-converging combos (scratch)."""

import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

sys.path.insert(0, "src")

from qslack import build_problem
from qslack.config import problem_defaults
from qslack.optimizer import LrSchedule, SpsaConfig, run_optimization


def one(args):
    name, tag, at, lr, cp, normalize, sched_kw, iters, seed = args
    d = problem_defaults(tag, at)
    p = build_problem(tag, n_system=2, ansatz_type=at, layers=d["layers"],
                      born_layers=d.get("born_layers", 2), c=d["c"], instance_seed=11)
    spsa = SpsaConfig(learning_rate=lr, perturbation=cp, normalize=normalize, max_iters=iters)
    rec = run_optimization(p.objective, spsa, LrSchedule(**sched_kw), np.random.default_rng([7, seed]),
                           oracle=p.oracle.value)
    mid = rec.rows[int(0.6 * iters)].error
    return name, seed, rec.final_error, mid


if __name__ == "__main__":
    REG = lambda w, m: dict(kind="regression_window", window=w, min_lr=m)
    HALVE = lambda per, m: dict(kind="halve_every", period=per, min_lr=m)
    jobs = []
    for name, tag, lr, cp, norm, sk, iters in [
        ("fp_lr.3_m5e-3", "fidelity_primal", 0.3, 0.02, True, REG(500, 5e-3), 16000),
        ("fp_lr.5_m5e-3", "fidelity_primal", 0.5, 0.02, True, REG(500, 5e-3), 16000),
        ("fd_lr.3_m2e-3", "fidelity_dual", 0.3, 0.02, True, REG(300, 2e-3), 16000),
        ("nd_lr.3_m2e-3", "negativity_dual", 0.3, 0.02, True, REG(500, 2e-3), 16000),
        ("np_lr.2_m1e-3", "negativity_primal", 0.2, 0.02, True, REG(500, 1e-3), 16000),
        ("cd_lr5e-4", "cham_dual", 5e-4, 0.02, False, HALVE(1000, 1e-6), 12000),
        ("cd_lr1e-3", "cham_dual", 1e-3, 0.02, False, HALVE(1000, 1e-6), 12000),
        ("cd_lr2e-3", "cham_dual", 2e-3, 0.02, False, HALVE(1000, 1e-6), 12000),
        ("tp_16k", "trace_distance_primal", 0.1, 0.02, True, REG(500, 1e-3), 16000),
    ]:
        for seed in (0, 1):
            jobs.append((name, tag, "purification", lr, cp, norm, sk, iters, seed))
    t0 = time.time()
    with ProcessPoolExecutor(max_workers=2) as pool:
        results = list(pool.map(one, jobs))
    by = {}
    for name, seed, fin, mid in results:
        by.setdefault(name, []).append((fin, mid))
    for name, rs in by.items():
        print(f"{name:16s} finals={[f'{r[0]:.4f}' for r in rs]} mids={[f'{r[1]:.4f}' for r in rs]}", flush=True)
    print(f"total {time.time()-t0:.0f}s")
