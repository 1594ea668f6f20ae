"""Trajectory diagnostics for specific problem/setting combos (scratch)."""

import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

sys.path.insert(0, "src")

from qslack import build_problem
from qslack.config import problem_defaults
from qslack.optimizer import LrSchedule, SpsaConfig, run_optimization


def traj(args):
    tag, at, lr, cp, normalize, sched_kw, iters, seed = args
    d = problem_defaults(tag, at)
    p = build_problem(tag, n_system=2, ansatz_type=at, layers=d["layers"],
                      born_layers=d.get("born_layers", 2), c=d["c"], instance_seed=11)
    spsa = SpsaConfig(learning_rate=lr, perturbation=cp, normalize=normalize, max_iters=iters)
    rec = run_optimization(p.objective, spsa, LrSchedule(**sched_kw), np.random.default_rng([7, seed]),
                           oracle=p.oracle.value)
    lines = [f"== {tag} {at} lr={lr} cp={cp} norm={normalize} sched={sched_kw} oracle={p.oracle.value:.4f}"]
    step = max(1, iters // 12)
    for i in range(0, len(rec.rows), step):
        r = rec.rows[i]
        lines.append(f"  it {r.iteration:6d} obj {r.objective: 9.4f} pen {r.penalty:9.5f} err {r.error:8.4f} lr {r.lr:.5f}")
    lines.append(f"  final obj {rec.final_objective:.4f} err {rec.final_error:.4f}{' ABORT ' + rec.abort_reason if rec.aborted else ''}")
    return "\n".join(lines)


if __name__ == "__main__":
    jobs = [
        ("fidelity_primal", "purification", 0.1, 0.02, True,
         dict(kind="regression_window", window=500, min_lr=1e-3), 12000, 0),
        ("fidelity_dual", "purification", 0.1, 0.02, True,
         dict(kind="regression_window", window=300, min_lr=1e-3), 12000, 0),
        ("negativity_dual", "purification", 0.1, 0.02, True,
         dict(kind="regression_window", window=500, min_lr=1e-3), 12000, 0),
        ("cham_dual", "purification", 1e-4, 0.02, False,
         dict(kind="halve_every", period=1000, min_lr=1e-6), 12000, 0),
        ("cham_dual", "purification", 1e-5, 0.02, False,
         dict(kind="halve_every", period=1000, min_lr=1e-7), 12000, 0),
        ("negativity_primal", "purification", 0.1, 0.02, True,
         dict(kind="regression_window", window=500, min_lr=1e-3), 12000, 0),
    ]
    with ProcessPoolExecutor(max_workers=2) as pool:
        for out in pool.map(traj, jobs):
            print(out, flush=True)
