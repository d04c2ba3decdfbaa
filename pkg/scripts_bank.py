"""Re-measure the numbers bank with the fixed AGD stopping rule.

Protocols under consideration for the acceptance tests:
- generation set: candidate_set(Hypercube(2), 1e4, seed=0)
- evaluation set: cli.evaluation_candidates(reg, 1e6) (unscrambled Sobol)
- pso: PsoConfig(seed=0, t_mmc=60, t_pp=100) except tiny n
- lloyd: init = cli._initial_design(reg, n, seed=0), t_max=500
- greedy: greedy_cover(gen, n)
- mmc single (criterion 6): same init as lloyd, default AgdConfig
"""
import time

import numpy as np

from minimax_design import cli
from minimax_design.baselines import greedy_cover, lloyd
from minimax_design.cqcenter import AgdConfig
from minimax_design.lds import candidate_set
from minimax_design.mmc import mmc
from minimax_design.pso import PsoConfig, mmc_pso, _minimax_h
from minimax_design.region import Hypercube

reg = Hypercube(2)
gen = candidate_set(reg, 10**4, seed=0)
t0 = time.time()
ev = cli.evaluation_candidates(reg, 10**6).points
print(f"eval set built in {time.time()-t0:.1f}s", flush=True)


def h_eval(pts):
    return _minimax_h(ev, pts)


def h_gen(pts):
    return _minimax_h(gen.points, pts)


CFG = {
    1: dict(t_mmc=20, t_pp=20),
    2: dict(t_mmc=30, t_pp=50),
    4: dict(t_mmc=40, t_pp=60),
    7: dict(t_mmc=60, t_pp=100),
    20: dict(t_mmc=60, t_pp=100),
    40: dict(t_mmc=60, t_pp=100),
    60: dict(t_mmc=60, t_pp=100),
}

for n in (1, 2, 4, 7, 20, 40, 60):
    rec = {}
    cfg = PsoConfig(seed=0, **CFG[n])
    t0 = time.time()
    d = mmc_pso(reg, n, cfg=cfg, candidates=gen, record=rec)
    t_pso = time.time() - t0
    print(
        f"n={n:2d} pso(t_mmc={cfg.t_mmc},t_pp={cfg.t_pp}): gen={h_gen(d.points):.5f} "
        f"eval={h_eval(d.points):.5f} reset={rec['h_at_reset']:.5f} {t_pso:.1f}s",
        flush=True,
    )
    init = cli._initial_design(reg, n, 0)
    mse: list[float] = []
    t0 = time.time()
    dl = lloyd(gen, init, t_max=500, trace=mse)
    t_l = time.time() - t0
    print(
        f"      lloyd(seed0 init): gen={h_gen(dl.points):.5f} eval={h_eval(dl.points):.5f} "
        f"iters={len(mse)} {t_l:.1f}s",
        flush=True,
    )
    t0 = time.time()
    dg = greedy_cover(gen, n)
    t_g = time.time() - t0
    print(
        f"      greedy: gen={h_gen(dg.points):.5f} eval={h_eval(dg.points):.5f} {t_g:.1f}s",
        flush=True,
    )
    if n == 7:
        tr: list[float] = []
        t0 = time.time()
        dm = mmc(gen, init, cfg=AgdConfig(), trace=tr)
        t_m = time.time() - t0
        print(
            f"      mmc single(seed0 init): gen={h_gen(dm.points):.5f} "
            f"eval={h_eval(dm.points):.5f} iters={len(tr)} {t_m:.1f}s",
            flush=True,
        )
print("done", flush=True)
