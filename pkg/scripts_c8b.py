"""Criterion-8 protocol with a converged swarm input (t_mmc=60)."""
import time

import numpy as np

from minimax_design.lds import candidate_set
from minimax_design.maxpro import minimaxpro
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

reg8 = Hypercube(8)
gen8 = candidate_set(reg8, 10**4, seed=0)
rec = {}
t0 = time.time()
d_in = mmc_pso(reg8, 60, cfg=PsoConfig(seed=0, t_mmc=60, t_pp=100), candidates=gen8, record=rec)
t_pso = time.time() - t0
h_in, _ = minimax_criterion(d_in, gen8)
print(f"pso p=8 n=60 (t_mmc=60,t_pp=100): h={h_in:.5f} reset={rec['h_at_reset']:.5f} {t_pso:.1f}s", flush=True)

t0 = time.time()
d_out = minimaxpro(d_in, gen8)
t_ref = time.time() - t0
h_out, _ = minimax_criterion(d_out, gen8)
print(f"minimaxpro: h={h_out:.5f} (inflation {h_out-h_in:+.6f}) {t_ref:.1f}s", flush=True)

coord = np.sort(d_in.points[:, 0])
print("input first-coordinate histogram:", np.histogram(coord, bins=8, range=(0, 1))[0], flush=True)

t0 = time.time()
ok = True
for k in range(1, 9):
    m_in = projection_metrics(d_in, gen8, k)
    m_out = projection_metrics(d_out, gen8, k)
    flag_mm = "ok" if m_out.mM < m_in.mM else "WORSE"
    flag_avg = "ok" if m_out.avg < m_in.avg else "WORSE"
    if k <= 2 and flag_mm == "WORSE":
        ok = False
    if flag_avg == "WORSE":
        ok = False
    print(
        f"k={k}: mM {m_in.mM:.5f}->{m_out.mM:.5f} ({flag_mm})  "
        f"avg {m_in.avg:.5f}->{m_out.avg:.5f} ({flag_avg})  "
        f"Mm {m_in.Mm:.5f}->{m_out.Mm:.5f}",
        flush=True,
    )
print(f"metrics sweep {time.time()-t0:.1f}s; criterion-8 pattern: {'PASS' if ok else 'FAIL'}", flush=True)
