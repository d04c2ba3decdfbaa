"""Measure candidate protocols for the p=8 criteria.

- refinement property: 10 seeds, n=20, p in {2,8}, scrambled-Sobol inputs
- projection improvement: n=60, p=8, mmc-pso input -> minimaxpro output,
  directions of mM_1, mM_2, avg_k for every k
"""
import time

import numpy as np

from minimax_design.lds import CandidateSet, candidate_set, scrambled_sobol
from minimax_design.maxpro import eps_prop, minimaxpro
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.mmc import Design
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

for p in (2, 8):
    reg = Hypercube(p)
    gen = candidate_set(reg, 10**4, seed=0)
    eps = eps_prop(gen.n_points, reg)
    t0 = time.time()
    worst = -np.inf
    for seed in range(10):
        d_in = Design(points=scrambled_sobol(20, p, seed), region=reg)
        h_in, _ = minimax_criterion(d_in, gen)
        d_out = minimaxpro(d_in, gen, seed=seed)
        h_out, _ = minimax_criterion(d_out, gen)
        worst = max(worst, h_out - h_in)
    print(
        f"p={p}: worst minimax inflation over 10 seeds = {worst:.6f} "
        f"(eps_prop={eps:.5f}) in {time.time()-t0:.1f}s",
        flush=True,
    )

reg8 = Hypercube(8)
gen8 = candidate_set(reg8, 10**4, seed=0)
rec = {}
t0 = time.time()
d_in = mmc_pso(reg8, 60, cfg=PsoConfig(seed=0, t_mmc=25, t_pp=50), candidates=gen8, record=rec)
t_pso = time.time() - t0
h_in, _ = minimax_criterion(d_in, gen8)
print(f"pso p=8 n=60 (t_mmc=25,t_pp=50): h={h_in:.5f} reset={rec['h_at_reset']:.5f} {t_pso:.1f}s", flush=True)

t0 = time.time()
d_out = minimaxpro(d_in, gen8)
t_ref = time.time() - t0
h_out, _ = minimax_criterion(d_out, gen8)
print(f"minimaxpro: h={h_out:.5f} (inflation {h_out-h_in:+.6f}, eps={eps_prop(10**4, reg8):.4f}) {t_ref:.1f}s", flush=True)

t0 = time.time()
for k in range(1, 9):
    m_in = projection_metrics(d_in, gen8, k)
    m_out = projection_metrics(d_out, gen8, k)
    print(
        f"k={k}: mM {m_in.mM:.5f}->{m_out.mM:.5f} ({'ok' if m_out.mM < m_in.mM else 'WORSE'})  "
        f"avg {m_in.avg:.5f}->{m_out.avg:.5f} ({'ok' if m_out.avg < m_in.avg else 'WORSE'})  "
        f"Mm {m_in.Mm:.5f}->{m_out.Mm:.5f}",
        flush=True,
    )
print(f"metrics sweep {time.time()-t0:.1f}s", flush=True)
print("done", flush=True)
