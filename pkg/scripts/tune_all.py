"""Sweep all problem/ansatz combos with candidate defaults (scratch harness)."""

import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

sys.path.insert(0, "src")

from qslack import build_problem
from qslack.config import problem_defaults
from qslack.optimizer import LrSchedule, SpsaConfig, run_optimization

CP = 0.02
ITERS = {"default": 12000}


def one(args):
    tag, at, seed, iters, cp = args
    d = problem_defaults(tag, at)
    p = build_problem(tag, n_system=2, ansatz_type=at, layers=d["layers"],
                      born_layers=d.get("born_layers", 2), c=d["c"], instance_seed=11)
    spsa = SpsaConfig(learning_rate=d["lr"], perturbation=cp, normalize=d["normalize"], max_iters=iters)
    sched = LrSchedule(**d["schedule"])
    rec = run_optimization(p.objective, spsa, sched, np.random.default_rng([7, seed]),
                           oracle=p.oracle.value)
    mid = rec.rows[iters // 2].error if len(rec.rows) > iters // 2 else float("nan")
    return tag, at, seed, rec.final_error, mid, rec.aborted


def main(combos, iters=12000, seeds=3, cp=CP):
    jobs = [(tag, at, s, iters, cp) for tag, at in combos for s in range(seeds)]
    t0 = time.time()
    with ProcessPoolExecutor(max_workers=2) as pool:
        results = list(pool.map(one, jobs))
    by = {}
    for tag, at, s, fin, mid, ab in results:
        by.setdefault((tag, at), []).append((fin, mid, ab))
    for (tag, at), rs in by.items():
        fins = [r[0] for r in rs]
        mids = [r[1] for r in rs]
        ab = any(r[2] for r in rs)
        print(f"{tag:26s} {at:20s} median={np.median(fins):.4f} finals={[f'{e:.3f}' for e in fins]} "
              f"mid={np.median(mids):.4f}{' ABORTED' if ab else ''}", flush=True)
    print(f"total {time.time() - t0:.0f}s")


if __name__ == "__main__":
    group = sys.argv[1] if len(sys.argv) > 1 else "pur"
    quantum = ["trace_distance_primal", "trace_distance_dual", "fidelity_primal",
               "fidelity_dual", "negativity_primal", "negativity_dual", "cham_primal", "cham_dual"]
    if group == "pur":
        main([(t, "purification") for t in quantum])
    elif group == "cc":
        main([(t, "convex_combination") for t in quantum])
    elif group == "cslack":
        main([(t, "born") for t in ["tvd_primal", "tvd_dual", "classical_cham_primal", "classical_cham_dual"]],
             iters=4000)
