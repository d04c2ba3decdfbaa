"""Command-line front end: generate design files, evaluate metric reports,
compare methods across design sizes, and plot 2-d designs as SVG with the
minimax witness segment.

Design files are CSV with header ``x1,...,xp`` and one point per row at 17
significant digits, so re-running a command with the same flags and seed
reproduces the file byte for byte.  Structured output (metric reports,
generation sidecars) is JSON.  Exit codes: 0 success, 2 usage error, 3
numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np

from ._parallel import set_workers
from .baselines import fff_ward, greedy_cover, lloyd
from .cqcenter import AgdConfig
from .errors import MinimaxDesignError, NumericFailure
from .lds import CandidateSet, LowAcceptanceRate, candidate_set, sobol
from .maxpro import eps_prop, minimaxpro
from .metrics import compute_report, minimax_criterion
from .mmc import Design, mmc
from .pso import PsoConfig, _sample_particle, mmc_pso
from .region import Hypercube, Region, UnsupportedTransform, make_region

_METHODS = ("mmc", "mmc-pso", "minimaxpro", "lloyd", "fff", "bip-approx")
_DEFAULT_N = 10**5
_FFF_DEFAULT_N = 2000  # Ward linkage is dense in the candidate count
_DEFAULT_EVAL_N = 10**6

EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _resolve_workers(value: int | None) -> int:
    if value is None:
        env = os.environ.get("MINIMAX_WORKERS")
        if env is not None:
            try:
                value = int(env)
            except ValueError:
                raise ValueError(f"MINIMAX_WORKERS must be an integer, got {env!r}") from None
    if value is None:
        value = os.cpu_count() or 1
    if value < 1:
        raise ValueError("worker count must be at least 1")
    return value


def _resolve_region(args) -> Region:
    return make_region(args.region, args.dim)


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w"), True


# ---------------------------------------------------------------------------
# design file I/O


def write_design_csv(path: str, points: np.ndarray) -> None:
    p = points.shape[1]
    lines = [",".join(f"x{i + 1}" for i in range(p))]
    lines.extend(",".join(_fmt(v) for v in row) for row in points)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_design_csv(path: str) -> np.ndarray:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read design file {path}: {exc}") from exc
    lines = raw.splitlines()
    if not lines:
        raise ValueError(f"{path} line 1: empty design file")
    header = lines[0].split(",")
    p = len(header)
    if header != [f"x{i + 1}" for i in range(p)]:
        raise ValueError(f"{path} line 1: expected header x1,...,x{p}")
    rows = []
    for line_no, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != p:
            raise ValueError(f"{path} line {line_no}: expected {p} fields, got {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError:
            raise ValueError(f"{path} line {line_no}: could not parse a number") from None
    if not rows:
        raise ValueError(f"{path} line 2: design file has no points")
    return np.asarray(rows, dtype=float)


def evaluation_candidates(region: Region, n_points: int) -> CandidateSet:
    """The first n_points of the Sobol sequence mapped into the region.

    Regions without an inverse Rosenblatt map (polygons) are filled by
    rejection from the bounding box, keeping accepted points in sequence
    order so the set is deterministic without a seed.
    """
    if n_points < 1:
        raise ValueError("evaluation point count must be at least 1")
    p = region.dim
    try:
        pts = region.inverse_rosenblatt(sobol(n_points, p))
        return CandidateSet(points=pts, region=region)
    except UnsupportedTransform:
        pass
    lo, hi = region.bounding_box()
    m = 4 * n_points + 1024
    for _ in range(8):
        base = lo + (hi - lo) * sobol(m, p)
        keep = region.contains(base)
        if int(keep.sum()) >= n_points:
            return CandidateSet(points=base[keep][:n_points], region=region)
        m *= 2
    raise LowAcceptanceRate("region accepts too small a fraction of its bounding box")


# ---------------------------------------------------------------------------
# method dispatch


def _initial_design(region: Region, n: int, seed: int) -> Design:
    pts = _sample_particle(region, n, seed, np.random.default_rng(seed))
    return Design(points=pts, region=region)


def _summ(trace) -> dict | None:
    if not trace:
        return None
    return {"length": len(trace), "first": float(trace[0]), "last": float(trace[-1])}


def run_method(method: str, region: Region, cands: CandidateSet, n: int, args) -> tuple[Design, dict]:
    """Produce a design with the named method; returns it plus sidecar facts
    (objective trace summary, and pre/post minimax for minimaxpro)."""
    sidecar: dict = {}
    if method in ("mmc-pso", "minimaxpro"):
        cfg = PsoConfig(
            s=args.swarm,
            t_mmc=args.t_mmc,
            t_pp=args.t_pp,
            seed=args.seed,
            agd=AgdConfig(q=args.q, eps_in=args.eps_in),
        )
        record: dict = {}
        design = mmc_pso(
            region, n, n_candidates=cands.points.shape[0], cfg=cfg, candidates=cands, record=record
        )
        sidecar["trace"] = {
            "phase1_hq": _summ(record.get("phase1_hq")),
            "phase2_h": _summ(record.get("phase2_h")),
            "h_final": record.get("h_final"),
        }
        if method == "minimaxpro":
            pre, _ = minimax_criterion(design, cands)
            design = minimaxpro(
                design,
                cands,
                seed=args.seed,
                eps_in=args.eps_in if args.eps_in is not None else 1e-4,
            )
            post, _ = minimax_criterion(design, cands)
            sidecar["pre_minimax"] = float(pre)
            sidecar["post_minimax"] = float(post)
            sidecar["eps_prop"] = eps_prop(cands.points.shape[0], region)
    elif method == "mmc":
        trace: list = []
        init = _initial_design(region, n, args.seed)
        design = mmc(
            cands, init, cfg=AgdConfig(q=args.q, eps_in=args.eps_in), t_mmc=args.t_mmc, trace=trace
        )
        sidecar["trace"] = {"hq": _summ(trace)}
    elif method == "lloyd":
        trace = []
        init = _initial_design(region, n, args.seed)
        design = lloyd(cands, init, t_max=args.t_mmc, trace=trace)
        sidecar["trace"] = {"mse": _summ(trace)}
    elif method == "fff":
        design = fff_ward(cands, n)
        sidecar["trace"] = None
    elif method == "bip-approx":
        design = greedy_cover(cands, n)
        sidecar["trace"] = None
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(_METHODS)}")
    return design, sidecar


def _candidate_budget(method: str, requested: int | None) -> int:
    if requested is not None:
        return requested
    return _FFF_DEFAULT_N if method == "fff" else _DEFAULT_N


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    region = _resolve_region(args)
    n_cand = _candidate_budget(args.method, args.N)
    t0 = time.perf_counter()
    cands = candidate_set(region, n_cand, seed=args.seed)
    design, sidecar = run_method(args.method, region, cands, args.n, args)
    runtime = time.perf_counter() - t0

    write_design_csv(args.out, design.points)
    meta = {
        "method": args.method,
        "seed": args.seed,
        "runtime_s": runtime,
        "config": {
            "region": args.region,
            "dim": args.dim,
            "n": args.n,
            "N": n_cand,
            "q": args.q,
            "swarm": args.swarm,
            "t_mmc": args.t_mmc,
            "t_pp": args.t_pp,
            "eps_in": args.eps_in,
            "workers": args.workers,
        },
    }
    meta.update(sidecar)
    if args.out == "-":
        json.dump(meta, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        sidecar_path = str(Path(args.out).with_suffix(".json"))
        with open(sidecar_path, "w") as f:
            json.dump(meta, f, indent=2, sort_keys=True)
            f.write("\n")
        print(f"{args.method}: n={args.n} in {runtime:.2f}s -> {args.out}, {sidecar_path}")
    return 0


def cmd_evaluate(args) -> int:
    region = _resolve_region(args)
    pts = read_design_csv(args.design)
    if pts.shape[1] != region.dim:
        raise ValueError(
            f"design has {pts.shape[1]} coordinates per point but the region dimension is {region.dim}"
        )
    design = Design(points=pts, region=region)
    cands = evaluation_candidates(region, args.eval_N)
    ks = tuple(args.proj_dims) if args.proj_dims else ()
    report = compute_report(design, cands, proj_dims=ks)
    out, should_close = _open_out(args.out)
    try:
        json.dump(report.to_dict(), out, indent=2, sort_keys=True)
        out.write("\n")
    finally:
        if should_close:
            out.close()
    return 0


def cmd_compare(args) -> int:
    region = _resolve_region(args)
    for method in args.method:
        if method not in _METHODS:
            raise ValueError(f"unknown method {method!r}; choose from {', '.join(_METHODS)}")
    eval_cands = evaluation_candidates(region, args.eval_N)
    gen_cache: dict[int, CandidateSet] = {}
    rows = []
    for method in args.method:
        n_cand = _candidate_budget(method, args.N)
        if n_cand not in gen_cache:
            gen_cache[n_cand] = candidate_set(region, n_cand, seed=args.seed)
        cands = gen_cache[n_cand]
        for n in args.n:
            t0 = time.perf_counter()
            design, _ = run_method(method, region, cands, n, args)
            runtime = time.perf_counter() - t0
            h, _ = minimax_criterion(design, eval_cands)
            rows.append((method, n, args.seed, h, runtime))
    out, should_close = _open_out(args.out)
    try:
        out.write("method,n,seed,minimax,runtime_s\n")
        for method, n, seed, h, runtime in rows:
            out.write(f"{method},{n},{seed},{_fmt(h)},{runtime:.3f}\n")
    finally:
        if should_close:
            out.close()
    return 0


def _svg_document(region: Region, points: np.ndarray, witness: np.ndarray, anchor: np.ndarray, h: float) -> ET.Element:
    lo, hi = region.bounding_box()
    span = float(max(hi - lo))
    size, pad = 640.0, 40.0
    scale = (size - 2 * pad) / span
    tx = pad - float(lo[0]) * scale
    ty = size - pad + float(lo[1]) * scale

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=f"{size:g}",
        height=f"{size:g}",
        viewBox=f"0 0 {size:g} {size:g}",
    )
    g = ET.SubElement(svg, "g", transform=f"translate({_fmt(tx)},{_fmt(ty)}) scale({_fmt(scale)},{_fmt(-scale)})")

    outline = np.asarray(region.outline())
    d = "M " + " L ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in outline) + " Z"
    ET.SubElement(g, "path", d=d, fill="none", stroke="black", attrib={"stroke-width": _fmt(1.5 / scale)})
    for x, y in points:
        ET.SubElement(g, "circle", cx=_fmt(x), cy=_fmt(y), r=_fmt(4.0 / scale), fill="#1f6fb5")
    ET.SubElement(
        g,
        "line",
        id="witness",
        x1=_fmt(witness[0]),
        y1=_fmt(witness[1]),
        x2=_fmt(anchor[0]),
        y2=_fmt(anchor[1]),
        stroke="red",
        attrib={"stroke-width": _fmt(2.0 / scale)},
    )
    caption = ET.SubElement(svg, "text", x=f"{pad:g}", y=f"{size - 10:g}", attrib={"font-family": "sans-serif", "font-size": "16"})
    caption.text = f"minimax = {h:.6f}"
    return svg


def cmd_plot(args) -> int:
    region = _resolve_region(args)
    pts = read_design_csv(args.design)
    if pts.shape[1] != 2:
        if not args.proj_dims:
            raise ValueError(
                f"plot needs a 2-d design but {args.design} has {pts.shape[1]} coordinates; "
                "pass --proj-dims i,j to plot a coordinate projection"
            )
        if len(args.proj_dims) != 2:
            raise ValueError("--proj-dims must name exactly two coordinates for plotting")
        i, j = args.proj_dims
        if not (1 <= i <= pts.shape[1] and 1 <= j <= pts.shape[1]) or i == j:
            raise ValueError(f"--proj-dims must be two distinct coordinates in 1..{pts.shape[1]}")
        if region.kind != "hypercube":
            raise ValueError("coordinate-projection plots are only supported for hypercube regions")
        pts = pts[:, [i - 1, j - 1]]
        region = Hypercube(2)
    elif region.dim != 2:
        raise ValueError(f"design is 2-d but the region dimension is {region.dim}")

    design = Design(points=pts, region=region)
    cands = evaluation_candidates(region, args.eval_N)
    h, witness = minimax_criterion(design, cands)
    gap = pts - witness
    anchor = pts[int(np.argmin(np.einsum("ij,ij->i", gap, gap)))]

    svg = _svg_document(region, pts, witness, anchor, h)
    text = ET.tostring(svg, encoding="unicode")
    if args.out == "-":
        sys.stdout.write(text + "\n")
    else:
        Path(args.out).write_text(text + "\n")
        print(f"plot: minimax={h:.6f} -> {args.out}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text: str) -> list[str]:
    return [v for v in text.split(",") if v != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minimax-design",
        description="Minimax and minimax-projection designs on convex bounded regions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    region_args = argparse.ArgumentParser(add_help=False)
    region_args.add_argument(
        "--region",
        default="hypercube",
        help="hypercube | simplex | ball | polygon:<vertex file>",
    )
    region_args.add_argument("--dim", type=int, default=2, help="region dimension p")
    region_args.add_argument("--workers", type=int, default=None, help="worker count (env MINIMAX_WORKERS, then machine parallelism)")

    method_args = argparse.ArgumentParser(add_help=False)
    method_args.add_argument("--N", type=int, default=None, help=f"generation candidate count (default {_DEFAULT_N}, {_FFF_DEFAULT_N} for fff)")
    method_args.add_argument("--q", type=float, default=10.0, help="center-smoothing exponent")
    method_args.add_argument("--swarm", type=int, default=10, help="swarm size")
    method_args.add_argument("--t-mmc", type=int, default=500, dest="t_mmc", help="clustering iteration cap")
    method_args.add_argument("--t-pp", type=int, default=250, dest="t_pp", help="post-processing iteration cap")
    method_args.add_argument("--eps-in", type=float, default=None, dest="eps_in", help="inner stopping tolerance")

    p_gen = sub.add_parser("generate", parents=[region_args, method_args], help="generate a design CSV + JSON sidecar")
    p_gen.add_argument("--n", type=int, required=True, help="design size")
    p_gen.add_argument("--method", required=True, choices=_METHODS)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default="design.csv")
    p_gen.set_defaults(func=cmd_generate)

    p_eval = sub.add_parser("evaluate", parents=[region_args], help="evaluate a design CSV into a JSON metrics report")
    p_eval.add_argument("design", help="design CSV path")
    p_eval.add_argument("--eval-N", type=int, default=_DEFAULT_EVAL_N, dest="eval_N", help="evaluation point count")
    p_eval.add_argument("--proj-dims", type=_int_list, default=None, dest="proj_dims", help="projection sizes k, comma-separated")
    p_eval.add_argument("--out", default="-")
    p_eval.set_defaults(func=cmd_evaluate)

    p_cmp = sub.add_parser("compare", parents=[region_args, method_args], help="minimax table across methods and design sizes")
    p_cmp.add_argument("--method", type=_str_list, required=True, help="comma-separated methods")
    p_cmp.add_argument("--n", type=_int_list, required=True, help="comma-separated design sizes")
    p_cmp.add_argument("--seed", type=int, required=True, help="seed (mandatory so tables reproduce)")
    p_cmp.add_argument("--eval-N", type=int, default=_DEFAULT_EVAL_N, dest="eval_N")
    p_cmp.add_argument("--out", default="-")
    p_cmp.set_defaults(func=cmd_compare)

    p_plot = sub.add_parser("plot", parents=[region_args], help="SVG plot of a 2-d design with the witness segment")
    p_plot.add_argument("design", help="design CSV path")
    p_plot.add_argument("--eval-N", type=int, default=_DEFAULT_EVAL_N, dest="eval_N")
    p_plot.add_argument("--proj-dims", type=_int_list, default=None, dest="proj_dims", help="two 1-based coordinates to project onto")
    p_plot.add_argument("--out", default="design.svg")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        set_workers(_resolve_workers(args.workers))
        return args.func(args)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MinimaxDesignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
