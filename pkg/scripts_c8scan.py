"""Criterion-8 protocol scan over swarm size, q, budgets and seeds."""
import time

import numpy as np

from minimax_design.cqcenter import AgdConfig
from minimax_design.lds import CandidateSet, candidate_set, scrambled_sobol
from minimax_design.maxpro import minimaxpro
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

reg8 = Hypercube(8)
gen8 = candidate_set(reg8, 10**4, seed=0)
fresh = CandidateSet(points=scrambled_sobol(3 * 10**4, 8, seed=1), region=reg8)

combos = [
    ("A s=1 500/0 q=10 seed0", dict(s=1, t_mmc=500, t_pp=0, seed=0, agd=AgdConfig(q=10.0))),
    ("B s=1 500/0 q=20 seed0", dict(s=1, t_mmc=500, t_pp=0, seed=0, agd=AgdConfig(q=20.0))),
    ("C1 s=10 60/100 seed1", dict(s=10, t_mmc=60, t_pp=100, seed=1, agd=AgdConfig(q=10.0))),
    ("C2 s=10 60/100 seed2", dict(s=10, t_mmc=60, t_pp=100, seed=2, agd=AgdConfig(q=10.0))),
    ("C3 s=10 60/100 seed3", dict(s=10, t_mmc=60, t_pp=100, seed=3, agd=AgdConfig(q=10.0))),
    ("D s=10 120/150 seed0", dict(s=10, t_mmc=120, t_pp=150, seed=0, agd=AgdConfig(q=10.0))),
]

for name, kw in combos:
    t0 = time.time()
    d_in = mmc_pso(reg8, 60, cfg=PsoConfig(**kw), candidates=gen8)
    h_in, _ = minimax_criterion(d_in, gen8)
    d_out = minimaxpro(d_in, gen8)
    h_out, _ = minimax_criterion(d_out, gen8)
    gaps = d_in.points[:, None, :] - d_in.points[None, :, :]
    pd = np.sqrt(np.sum(gaps**2, axis=-1))
    np.fill_diagonal(pd, np.inf)
    hist = np.histogram(d_in.points[:, 0], bins=8, range=(0, 1))[0]
    print(f"{name}: h {h_in:.5f}->{h_out:.5f} minpair={pd.min():.4f} hist={hist} {time.time()-t0:.0f}s", flush=True)
    for tag, ev in (("gen", gen8), ("fr", fresh)):
        flags = []
        ok = True
        for k in range(1, 9):
            m_in = projection_metrics(d_in, ev, k)
            m_out = projection_metrics(d_out, ev, k)
            f_mm = m_out.mM < m_in.mM
            f_avg = m_out.avg < m_in.avg
            if k <= 2 and not f_mm:
                ok = False
            if not f_avg:
                ok = False
            flags.append(f"k{k}:{'mM+' if f_mm else 'mM-'}{'av+' if f_avg else 'av-'}")
        print(f"  [{tag}] {' '.join(flags)} -> {'PASS' if ok else 'FAIL'}", flush=True)
