"""Criterion-8 seed scan: standard-protocol inputs (Sobol generation set,
default swarm and q, budgets 60/100), single-sweep refinement, varying the
input seed and the refinement seed independently.  Input metrics are
computed once per input; each refinement seed only pays for its own output
metrics."""

import time

import numpy as np

from minimax_design.lds import candidate_set
from minimax_design.maxpro import minimaxpro
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

REGION = Hypercube(8)
GEN = candidate_set(REGION, 10**4, seed=0)


def metric_table(design):
    rows = {}
    for k in range(1, 9):
        m = projection_metrics(design, GEN, k)
        rows[k] = (m.mM, m.avg)
    return rows


def verdict(t_in, t_out):
    ok = True
    bad = []
    for k in range(1, 9):
        if k <= 2 and not t_out[k][0] < t_in[k][0]:
            ok = False
            bad.append(f"mM{k}")
        if not t_out[k][1] < t_in[k][1]:
            ok = False
            bad.append(f"avg{k}")
    return ok, bad


if __name__ == "__main__":
    for ps in (0, 1, 2, 3):
        t0 = time.time()
        d_in = mmc_pso(
            REGION, 60, cfg=PsoConfig(seed=ps, t_mmc=60, t_pp=100), candidates=GEN
        )
        t_in = metric_table(d_in)
        h_in, _ = minimax_criterion(d_in, GEN)
        print(
            f"input ps={ps}: h={h_in:.5f} avg8={t_in[8][1]:.4f} ({time.time()-t0:.0f}s)",
            flush=True,
        )
        for rs in range(6):
            t0 = time.time()
            d_out = minimaxpro(d_in, GEN, max_sweeps=1, seed=rs)
            t_out = metric_table(d_out)
            ok, bad = verdict(t_in, t_out)
            deltas = " ".join(
                f"a{k}{t_out[k][1]-t_in[k][1]:+.4f}" for k in (6, 7, 8)
            )
            print(
                f"  ps={ps} rs={rs}: {'PASS' if ok else 'FAIL ' + ','.join(bad)} "
                f"{deltas} ({time.time()-t0:.0f}s)",
                flush=True,
            )
