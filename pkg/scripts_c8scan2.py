"""Criterion-8 scan, round 2: sharper clustering exponents."""
import time

import numpy as np

from minimax_design.cqcenter import AgdConfig
from minimax_design.lds import candidate_set
from minimax_design.maxpro import minimaxpro
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

reg8 = Hypercube(8)
gen8 = candidate_set(reg8, 10**4, seed=0)

combos = [
    ("F s=1 500/0 q=30 seed0", dict(s=1, t_mmc=500, t_pp=0, seed=0, agd=AgdConfig(q=30.0))),
    ("G s=1 500/0 q=40 seed0", dict(s=1, t_mmc=500, t_pp=0, seed=0, agd=AgdConfig(q=40.0))),
    ("H s=10 60/100 q=20 seed0", dict(s=10, t_mmc=60, t_pp=100, seed=0, agd=AgdConfig(q=20.0))),
    ("I s=1 500/0 q=20 seed1", dict(s=1, t_mmc=500, t_pp=0, seed=1, agd=AgdConfig(q=20.0))),
]

for name, kw in combos:
    t0 = time.time()
    d_in = mmc_pso(reg8, 60, cfg=PsoConfig(**kw), candidates=gen8)
    h_in, _ = minimax_criterion(d_in, gen8)
    np.save(f"/root/pkg/c8_{name.split()[0]}_in.npy", d_in.points)
    for sweeps, tag in ((10, "full"), (1, "1sweep")):
        d_out = minimaxpro(d_in, gen8, max_sweeps=sweeps)
        h_out, _ = minimax_criterion(d_out, gen8)
        flags = []
        ok = True
        vals = []
        for k in range(1, 9):
            m_in = projection_metrics(d_in, gen8, k)
            m_out = projection_metrics(d_out, gen8, k)
            f_mm = m_out.mM < m_in.mM
            f_avg = m_out.avg < m_in.avg
            if k <= 2 and not f_mm:
                ok = False
            if not f_avg:
                ok = False
            flags.append(f"k{k}:{'mM+' if f_mm else 'mM-'}{'av+' if f_avg else 'av-'}")
            vals.append(f"k{k}av {m_in.avg:.4f}->{m_out.avg:.4f}")
        print(
            f"{name} [{tag}]: h {h_in:.5f}->{h_out:.5f} {' '.join(flags)} -> "
            f"{'PASS' if ok else 'FAIL'} ({time.time()-t0:.0f}s)",
            flush=True,
        )
        print(f"  {' | '.join(vals)}", flush=True)
