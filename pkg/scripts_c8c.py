"""Criterion-8 protocol with the default swarm budget (t_mmc=500, t_pp=250)."""
import time

import numpy as np

from minimax_design.lds import CandidateSet, candidate_set, scrambled_sobol
from minimax_design.maxpro import minimaxpro, per_point_minimax
from minimax_design.metrics import minimax_criterion, projection_metrics
from minimax_design.pso import PsoConfig, mmc_pso
from minimax_design.region import Hypercube

reg8 = Hypercube(8)
gen8 = candidate_set(reg8, 10**4, seed=0)
rec = {}
t0 = time.time()
d_in = mmc_pso(reg8, 60, cfg=PsoConfig(seed=0), candidates=gen8, record=rec)
t_pso = time.time() - t0
np.save("/root/pkg/c8c_in.npy", d_in.points)
h_in, _ = minimax_criterion(d_in, gen8)
print(f"pso p=8 n=60 (defaults 500/250): h={h_in:.5f} reset={rec['h_at_reset']:.5f} {t_pso:.1f}s", flush=True)

slack = per_point_minimax(d_in, gen8)
radii = slack.d_star - np.asarray(slack.d)
print(
    f"slack: d*={slack.d_star:.4f} radii min={radii.min():.4f} "
    f"median={np.median(radii):.4f} max={radii.max():.4f}",
    flush=True,
)

t0 = time.time()
d_out = minimaxpro(d_in, gen8)
t_ref = time.time() - t0
np.save("/root/pkg/c8c_out.npy", d_out.points)
h_out, _ = minimax_criterion(d_out, gen8)
print(f"minimaxpro: h={h_out:.5f} (inflation {h_out-h_in:+.6f}) {t_ref:.1f}s", flush=True)

fresh = CandidateSet(points=scrambled_sobol(10**5, 8, seed=1), region=reg8)
for name, ev in (("gen", gen8), ("fresh1e5", fresh)):
    t0 = time.time()
    ok = True
    for k in range(1, 9):
        m_in = projection_metrics(d_in, ev, k)
        m_out = projection_metrics(d_out, ev, k)
        flag_mm = "ok" if m_out.mM < m_in.mM else "WORSE"
        flag_avg = "ok" if m_out.avg < m_in.avg else "WORSE"
        if k <= 2 and flag_mm == "WORSE":
            ok = False
        if flag_avg == "WORSE":
            ok = False
        print(
            f"[{name}] k={k}: mM {m_in.mM:.5f}->{m_out.mM:.5f} ({flag_mm})  "
            f"avg {m_in.avg:.5f}->{m_out.avg:.5f} ({flag_avg})",
            flush=True,
        )
    print(f"[{name}] sweep {time.time()-t0:.1f}s; pattern: {'PASS' if ok else 'FAIL'}", flush=True)
