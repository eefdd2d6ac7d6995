"""Run every figure preset and write one CSV per surface, plus a short summary.

    python3 scripts/reproduce_figures.py --out data --jobs 4
    python3 scripts/reproduce_figures.py --only fig4 fig5 --steps 81
"""
from __future__ import annotations

import argparse
import logging
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from hubbard_dimer.analysis import jump_regions, max_jump
from hubbard_dimer.sweep import PRESETS, emit_csv, figure_preset, run_sweep

log = logging.getLogger("reproduce")


def summarize(name: str, grid) -> str:
    obs = grid.observables[0]
    F = grid.column(obs)
    finite = F[np.isfinite(F)]
    line = f"{name}: {obs} in [{finite.min():.4f}, {finite.max():.4f}]"
    if grid.y_name == "V" and grid.x_name in ("mu", "B"):
        n, _ = jump_regions(F, 0.2)
        line += f", max adjacent jump {max_jump(F):.3f}, regions at 0.2 cut: {n}"
    return line


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("data"))
    ap.add_argument("--only", nargs="+", choices=PRESETS, default=list(PRESETS))
    ap.add_argument("--steps", type=int, help="override grid resolution on both axes")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.only:
        cfg = figure_preset(name)
        if args.steps:
            cfg = replace(cfg, x=replace(cfg.x, steps=args.steps), y=replace(cfg.y, steps=args.steps))
        start = time.perf_counter()
        grid = run_sweep(cfg, jobs=args.jobs)
        path = emit_csv(grid, args.out / f"{name}.csv")
        log.info("%s (%.1fs) -> %s", summarize(name, grid), time.perf_counter() - start, path)


if __name__ == "__main__":
    main()
