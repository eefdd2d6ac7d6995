"""Command-line front end.

    hubbard-dimer sweep --preset fig1 --out fig1.csv
    hubbard-dimer sweep --x U:-8:8:161 --y V:-8:8:161 --ensemble ground --obs c_wootters,c_eq5 --out uv.csv
    hubbard-dimer tth --u 4 --v -2
    hubbard-dimer point --U 2 --V 1 --ensemble grand:0.1
    hubbard-dimer contour --in uv.csv --obs c_wootters --level 0.999

Exit status: 0 on success, 1 on usage errors, 2 when a sweep produced NaN cells.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import dimer
from .errors import DomainError, SearchFailure
from .model import ModelParams
from .pipeline import OBSERVABLES, EnsembleChoice, evaluate_analytic, evaluate_ed, threshold_temperature_ed
from .sweep import (ANALYTIC, ED, PRESETS, Axis, SweepConfig, contour_zero, emit_csv, emit_json,
                    figure_preset, point_params, read_csv, run_sweep, write_csv)

log = logging.getLogger("hubbard_dimer")

EXIT_OK, EXIT_USAGE, EXIT_NAN = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--U", type=float)
    p.add_argument("--V", type=float)
    p.add_argument("--mu", type=float, help="staggered site potential (+mu, -mu, ...)")
    p.add_argument("--B", type=float, help="staggered Zeeman field (+B, -B, ...)")
    p.add_argument("--L", type=int)
    p.add_argument("--boundary", choices=("periodic", "open"))
    p.add_argument("--global-mu", type=float, dest="global_mu")
    p.add_argument("--ensemble", help="ground | ground:grand | canonical:T | grand:T")
    p.add_argument("--filling", type=int, help="particle number for canonical ensembles (default L)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hubbard-dimer", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="evaluate observables on a 2-axis grid")
    sw.add_argument("--preset", choices=PRESETS)
    sw.add_argument("--config", type=Path, help="JSON document mirroring SweepConfig")
    sw.add_argument("--x", help="NAME:MIN:MAX:STEPS")
    sw.add_argument("--y", help="NAME:MIN:MAX:STEPS")
    sw.add_argument("--obs", help=f"comma-separated subset of {','.join(OBSERVABLES)}")
    sw.add_argument("--route", choices=(ED, ANALYTIC))
    sw.add_argument("--ground-row", action="store_true", default=None, dest="ground_row")
    sw.add_argument("--out", type=Path)
    sw.add_argument("--format", choices=("csv", "json"))
    sw.add_argument("--jobs", type=int, default=1)
    _model_flags(sw)

    th = sub.add_parser("tth", help="threshold temperature of the two-electron dimer")
    th.add_argument("--u", type=float, required=True)
    th.add_argument("--v", type=float, required=True)
    th.add_argument("--route", choices=(ED, ANALYTIC), default=ANALYTIC)

    pt = sub.add_parser("point", help="all observables at one parameter point")
    pt.add_argument("--route", choices=(ED, ANALYTIC), default=ED)
    _model_flags(pt)

    ct = sub.add_parser("contour", help="level set of a swept observable")
    ct.add_argument("--in", dest="src", type=Path, required=True, help="CSV written by `sweep`")
    ct.add_argument("--obs", default="c_wootters")
    ct.add_argument("--level", type=float, default=0.0)
    ct.add_argument("--out", type=Path)
    return parser


def _base_params(args, base: ModelParams) -> ModelParams:
    L = args.L if args.L is not None else base.L
    if L != base.L:
        base = ModelParams(L=L, t=base.t, U=base.U, V=base.V, boundary=base.boundary,
                           global_mu=base.global_mu)
    kw = {k: getattr(args, k) for k in ("U", "V", "boundary", "global_mu") if getattr(args, k) is not None}
    base = replace(base, **kw)
    updates = {k: getattr(args, k) for k in ("mu", "B") if getattr(args, k) is not None}
    return point_params(base, updates) if updates else base


def sweep_config(args) -> SweepConfig:
    if args.preset and args.config:
        raise UsageError("--preset and --config are mutually exclusive")
    if args.preset:
        doc = figure_preset(args.preset).to_dict()
    elif args.config:
        try:
            doc = json.loads(args.config.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    else:
        doc = {}
    for flag, key in (("x", "x"), ("y", "y"), ("obs", "observables"), ("route", "route"),
                      ("ground_row", "ground_row"), ("format", "format"), ("ensemble", "ensemble"),
                      ("filling", "filling")):
        if getattr(args, flag) is not None:
            doc[key] = getattr(args, flag)
    if args.out is not None:
        doc["output"] = str(args.out)
    if "x" not in doc or "y" not in doc:
        raise UsageError("sweep needs --preset, --config, or both --x and --y")
    config = SweepConfig.from_dict(doc)
    return replace(config, base=_base_params(args, config.base))


def cmd_sweep(args) -> int:
    config = sweep_config(args)
    log.info("sweeping %s: %s x %s", config.name, config.x, config.y)
    grid = run_sweep(config, jobs=args.jobs)
    if config.output:
        (emit_json if config.format == "json" else emit_csv)(grid, config.output)
    else:
        write_csv(grid, sys.stdout)
    if grid.failures:
        print(f"{grid.failures} grid cells failed and were written as nan", file=sys.stderr)
        return EXIT_NAN
    return EXIT_OK


def cmd_tth(args) -> int:
    if args.route == ANALYTIC:
        res = dimer.threshold_temperature(args.u, args.v)
    else:
        res = threshold_temperature_ed(ModelParams(L=2, U=args.u, V=args.v))
    if res is None:
        print("no threshold: concurrence vanishes at all temperatures")
        return EXIT_OK
    print(json.dumps({"U": args.u, "V": args.v, "t_th": res.t_th, "residual": res.residual,
                      "bracket": list(res.bracket)}))
    return EXIT_OK


def cmd_point(args) -> int:
    params = _base_params(args, ModelParams(L=args.L or 2))
    choice = EnsembleChoice.parse(args.ensemble or "ground", args.filling)
    if args.route == ANALYTIC:
        vals = evaluate_analytic(params.U, params.V, choice)
    else:
        vals = evaluate_ed(params, choice)
    print(json.dumps({k: float(v) for k, v in vals.items()}))
    return EXIT_OK


def cmd_contour(args) -> int:
    grid = read_csv(args.src)
    lines = contour_zero(grid, args.obs, args.level)
    doc = {"observable": args.obs, "level": args.level, "x": grid.x_name, "y": grid.y_name,
           "polylines": [line.tolist() for line in lines]}
    text = json.dumps(doc)
    if args.out:
        args.out.write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


COMMANDS = {"sweep": cmd_sweep, "tth": cmd_tth, "point": cmd_point, "contour": cmd_contour}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DomainError, SearchFailure, OSError) as exc:
        print(f"hubbard-dimer: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
