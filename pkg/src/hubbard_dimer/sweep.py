"""Two-axis parameter sweeps, figure presets, and flat-file output."""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .contour import marching_squares
from .errors import DomainError, NumericError, SearchFailure
from .model import ModelParams
from .pipeline import GRAND_SPACE, OBSERVABLES, EnsembleChoice, evaluate_analytic, evaluate_ed

AXIS_NAMES = ("U", "V", "T", "mu", "B")
ED, ANALYTIC = "ed", "analytic"


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise DomainError(f"unknown axis {self.name!r}; expected one of {AXIS_NAMES}")
        if not self.min < self.max:
            raise DomainError(f"axis {self.name}: need min < max, got {self.min}, {self.max}")
        if self.steps < 2:
            raise DomainError(f"axis {self.name}: need at least 2 steps")

    def values(self) -> np.ndarray:
        k = np.arange(self.steps)
        return self.min + k * (self.max - self.min) / (self.steps - 1)

    @classmethod
    def parse(cls, spec: str) -> "Axis":
        """``NAME:MIN:MAX:STEPS``."""
        try:
            name, lo, hi, steps = spec.split(":")
            return cls(name, float(lo), float(hi), int(steps))
        except ValueError as exc:
            raise DomainError(f"bad axis spec {spec!r} (want NAME:MIN:MAX:STEPS)") from exc


@dataclass(frozen=True)
class SweepConfig:
    x: Axis
    y: Axis
    base: ModelParams = field(default_factory=lambda: ModelParams(L=2))
    ensemble: EnsembleChoice = EnsembleChoice()
    observables: tuple = ("c_wootters", "c_eq5")
    route: str = ED
    # prepend a T = 0 row (ground ensemble) when the y axis is temperature
    ground_row: bool = False
    output: Optional[str] = None
    format: str = "csv"
    name: str = "custom"

    def __post_init__(self):
        if self.x.name == self.y.name:
            raise DomainError("x and y axes must differ")
        bad = [o for o in self.observables if o not in OBSERVABLES]
        if bad or not self.observables:
            raise DomainError(f"unknown observables {bad}; choose from {OBSERVABLES}")
        names = (self.x.name, self.y.name)
        if "t_th" in self.observables and "T" in names:
            raise DomainError("t_th cannot be swept against a temperature axis")
        if "T" in names and self.ensemble.is_ground:
            raise DomainError("a temperature axis needs a thermal ensemble (canonical:T or grand:T)")
        if self.ground_row and self.y.name != "T":
            raise DomainError("ground_row applies only when the y axis is T")
        if self.route not in (ED, ANALYTIC):
            raise DomainError(f"unknown route {self.route!r}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.format!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ensemble"] = self.ensemble.token()
        d["filling"] = self.ensemble.filling
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        d = dict(d)
        filling = d.pop("filling", None)
        ens = d.get("ensemble", "ground")
        d["ensemble"] = EnsembleChoice.parse(ens, filling) if isinstance(ens, str) else EnsembleChoice(**ens)
        d["x"] = Axis(**d["x"]) if isinstance(d["x"], dict) else Axis.parse(d["x"])
        d["y"] = Axis(**d["y"]) if isinstance(d["y"], dict) else Axis.parse(d["y"])
        if "base" in d:
            d["base"] = ModelParams(**d["base"])
        if "observables" in d:
            obs = d["observables"]
            d["observables"] = tuple(obs.split(",") if isinstance(obs, str) else obs)
        return cls(**d)


@dataclass
class SweepGrid:
    """Observable table on a 2-axis grid; ``values[iy, ix, k]`` for observable ``k``."""

    x_name: str
    y_name: str
    x_values: np.ndarray
    y_values: np.ndarray
    observables: tuple
    values: np.ndarray
    failures: int = 0

    def column(self, observable: str) -> np.ndarray:
        return self.values[:, :, self.observables.index(observable)]

    def rows(self):
        """``(x, y, *observables)`` with the y loop outermost."""
        for iy, y in enumerate(self.y_values):
            for ix, x in enumerate(self.x_values):
                yield (float(x), float(y), *map(float, self.values[iy, ix]))

    @property
    def has_nan(self) -> bool:
        return bool(np.isnan(self.values).any())


def point_params(base: ModelParams, updates: dict) -> ModelParams:
    """Apply axis values; ``mu`` and ``B`` set a staggered pattern ``(+v, -v, +v, ...)``."""
    kw = {}
    for name, v in updates.items():
        if name in ("U", "V"):
            kw[name] = float(v)
        elif name in ("mu", "B"):
            kw[name] = tuple(float(v) * (-1) ** j for j in range(base.L))
    return replace(base, **kw)


def evaluate_cell(config: SweepConfig, x: float, y: float) -> tuple:
    updates = {config.x.name: x, config.y.name: y}
    T = updates.get("T")
    choice = config.ensemble
    if T is not None:
        choice = choice.with_T(None if T == 0.0 else T)
    params = point_params(config.base, updates)
    try:
        if config.route == ANALYTIC:
            if params.L != 2 or any(params.mu) or any(params.B) or params.global_mu:
                raise DomainError("analytic route needs the zero-field dimer")
            vals = evaluate_analytic(params.U, params.V, choice, config.observables)
        else:
            vals = evaluate_ed(params, choice, config.observables)
    except (NumericError, SearchFailure, np.linalg.LinAlgError):
        return tuple(math.nan for _ in config.observables)
    return tuple(float(vals[o]) for o in config.observables)


def _row(args) -> list:
    config, y, xs = args
    return [evaluate_cell(config, x, y) for x in xs]


def run_sweep(config: SweepConfig, jobs: int = 1) -> SweepGrid:
    """Evaluate every grid cell; numeric failures become NaN rows instead of aborting.

    Rows are independent; with ``jobs > 1`` they are farmed out to worker
    processes and reassembled in grid order, so output is identical either way.
    """
    xs = config.x.values()
    ys = config.y.values()
    if config.ground_row:
        ys = np.concatenate([[0.0], ys])
    tasks = [(config, float(y), [float(x) for x in xs]) for y in ys]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_row, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [_row(t) for t in tasks]
    values = np.array(rows, dtype=float).reshape(len(ys), len(xs), len(config.observables))
    failures = int(np.isnan(values).any(axis=2).sum())
    return SweepGrid(config.x.name, config.y.name, xs, ys, tuple(config.observables), values, failures)


# --- presets ---------------------------------------------------------------

SURFACE_STEPS = 161


def figure_preset(name: str) -> SweepConfig:
    """Sweep reproducing one of the seven dimer figures.

    Axis ranges are choices that contain every feature of interest.
    """
    n = SURFACE_STEPS
    uv = dict(x=Axis("U", -8.0, 8.0, n), y=Axis("V", -8.0, 8.0, n))
    field_base = ModelParams(L=2, U=2.0)
    presets = {
        "fig1": lambda: SweepConfig(**uv, ensemble=EnsembleChoice(), name=name),
        "fig2": lambda: SweepConfig(
            x=Axis("U", -8.0, 8.0, n), y=Axis("T", 0.05, 5.0, n),
            ensemble=EnsembleChoice(T=1.0), ground_row=True, name=name),
        "fig3": lambda: SweepConfig(**uv, observables=("t_th",), route=ANALYTIC, name=name),
        "fig4": lambda: SweepConfig(
            x=Axis("mu", -4.0, 4.0, n), y=Axis("V", -8.0, 8.0, n), base=field_base,
            ensemble=EnsembleChoice(GRAND_SPACE), name=name),
        "fig5": lambda: SweepConfig(
            x=Axis("mu", -4.0, 4.0, n), y=Axis("V", -8.0, 8.0, n), base=field_base,
            ensemble=EnsembleChoice(GRAND_SPACE, 0.1), name=name),
        "fig6": lambda: SweepConfig(
            x=Axis("B", -4.0, 4.0, n), y=Axis("V", -8.0, 8.0, n), base=field_base,
            ensemble=EnsembleChoice(GRAND_SPACE), name=name),
        "fig7": lambda: SweepConfig(
            x=Axis("B", -4.0, 4.0, n), y=Axis("V", -8.0, 8.0, n), base=field_base,
            ensemble=EnsembleChoice(GRAND_SPACE, 0.1), name=name),
    }
    if name not in presets:
        raise DomainError(f"unknown preset {name!r}; choose from {sorted(presets)}")
    return presets[name]()


PRESETS = tuple(f"fig{k}" for k in range(1, 8))


# --- output ----------------------------------------------------------------

def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else format(v, ".12g")


def write_csv(grid: SweepGrid, fh) -> None:
    fh.write(",".join((grid.x_name, grid.y_name) + grid.observables) + "\n")
    for row in grid.rows():
        fh.write(",".join(_fmt(v) for v in row) + "\n")


def emit_csv(grid: SweepGrid, path) -> Path:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            write_csv(grid, fh)
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc}") from exc
    return path


def emit_json(grid: SweepGrid, path) -> Path:
    path = Path(path)
    doc = {
        "x": grid.x_name,
        "y": grid.y_name,
        "observables": list(grid.observables),
        "rows": [[None if math.isnan(v) else float(_fmt(v)) for v in row] for row in grid.rows()],
    }
    try:
        path.write_text(json.dumps(doc) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write sweep JSON to {path}: {exc}") from exc
    return path


def read_csv(path) -> SweepGrid:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = np.array([[float(v) for v in r] for r in reader])
    xs = np.unique(rows[:, 0])
    ys = np.unique(rows[:, 1])
    if len(rows) != xs.size * ys.size:
        raise DomainError(f"{path}: rows do not form a full grid")
    order = np.lexsort((rows[:, 0], rows[:, 1]))
    values = rows[order, 2:].reshape(ys.size, xs.size, -1)
    return SweepGrid(header[0], header[1], xs, ys, tuple(header[2:]), values,
                     int(np.isnan(values).any(axis=2).sum()))


def contour_zero(grid: SweepGrid, observable: str, level: float = 0.0) -> list[np.ndarray]:
    """Level set of one observable as ``(x, y)`` polylines."""
    if observable not in grid.observables:
        raise DomainError(f"observable {observable!r} not in grid")
    return marching_squares(grid.x_values, grid.y_values, grid.column(observable), level)
