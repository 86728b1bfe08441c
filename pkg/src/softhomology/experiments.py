"""Experiment configs, alpha sweeps and hole-count scaling runs."""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, field
from pathlib import Path as FsPath
from typing import Callable

import numpy as np

from .blk import ClassRecord, blk_search, write_class_records_csv
from .complex import Rect, SimplicialSurface, SurfaceError, build_grid_complex
from .homology import HarmonicBasis, format_class_key, harmonic_basis, hodge_laplacian_1, path_projection
from .hstar import SearchResult, hstar_search
from .paths import Path, reference_from_keypoints
from .rollout import fortified_rollout, pruned_rollout

ALGORITHMS = ("hstar", "rhstar", "prhstar", "blk")
HOMOLOGY_TOL = 1e-6


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    bounds: Rect


@dataclass
class ExperimentConfig:
    grid: GridSpec
    holes: list[Rect]
    source: tuple[int, int]
    dest: tuple[int, int]
    keypoints: list[tuple[int, int]]
    alphas: list[float]
    epsilon: float | None = None
    algorithms: tuple[str, ...] = ALGORITHMS
    seed: int = 0
    output_dir: str | None = None
    name: str = "experiment"

    def __post_init__(self):
        _validate(self)


@dataclass
class ExperimentRow:
    experiment_id: str
    algorithm: str
    alpha: float
    path_length: float
    proj_diff: float
    nodes_visited: int
    class_key: str
    wall_time_seconds: float | None = None


ROW_FIELDS = [f.name for f in dataclasses.fields(ExperimentRow)]


@dataclass
class Setup:
    """Surface, harmonic basis and reference path shared by every run of a config."""

    surface: SimplicialSurface
    basis: HarmonicBasis
    source: int
    dest: int
    reference: Path
    reference_proj: np.ndarray = field(repr=False)


# -- config loading ---------------------------------------------------------

_FIELDS = {"grid", "holes", "source", "dest", "keypoints", "alphas", "epsilon", "algorithms",
           "seed", "output_dir"}
_REQUIRED = {"grid", "source", "dest", "alphas"}


def load_config(path) -> ExperimentConfig:
    """Parse and validate a JSON experiment config.

    Raises
    ------
    ConfigError
        On malformed JSON (with line and column), unknown or missing fields,
        or semantically invalid values.
    """
    path = FsPath(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return config_from_dict(data, name=path.stem, origin=str(path))


def config_from_dict(data: dict, name: str = "experiment", origin: str = "<config>") -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{origin}: top level must be an object")
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"{origin}: unknown field(s): {', '.join(unknown)}")
    missing = sorted(_REQUIRED - set(data))
    if missing:
        raise ConfigError(f"{origin}: missing field(s): {', '.join(missing)}")

    def fail(fld, msg):
        raise ConfigError(f"{origin}: field '{fld}': {msg}")

    g = data["grid"]
    if not isinstance(g, dict) or set(g) - {"rows", "cols", "bounds"} or not {"rows", "cols"} <= set(g):
        fail("grid", "expected an object with rows, cols and optional bounds")
    try:
        grid = GridSpec(int(g["rows"]), int(g["cols"]), Rect(*map(float, g.get("bounds", [-1, -1, 1, 1]))))
    except (TypeError, ValueError):
        fail("grid", "rows/cols must be integers and bounds [xmin, ymin, xmax, ymax]")

    try:
        holes = [Rect(*map(float, h)) for h in data.get("holes", [])]
    except (TypeError, ValueError):
        fail("holes", "each hole must be [xmin, ymin, xmax, ymax]")

    def coord(fld, v):
        if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, int) for x in v)):
            fail(fld, f"expected [col, row] integers, got {v!r}")
        return (v[0], v[1])

    alphas = data["alphas"]
    if isinstance(alphas, dict):
        if set(alphas) != {"start", "stop", "num"}:
            fail("alphas", "range form needs exactly start, stop, num")
        alphas = np.linspace(float(alphas["start"]), float(alphas["stop"]), int(alphas["num"])).tolist()
    if not isinstance(alphas, list) or not alphas:
        fail("alphas", "expected a non-empty list or {start, stop, num}")

    algorithms = data.get("algorithms", list(ALGORITHMS))
    if not isinstance(algorithms, list) or not algorithms:
        fail("algorithms", "expected a non-empty list")

    epsilon = data.get("epsilon")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        fail("seed", "expected an integer")

    try:
        return ExperimentConfig(
            grid=grid,
            holes=holes,
            source=coord("source", data["source"]),
            dest=coord("dest", data["dest"]),
            keypoints=[coord("keypoints", k) for k in data.get("keypoints", [])],
            alphas=[float(a) for a in alphas],
            epsilon=None if epsilon is None else float(epsilon),
            algorithms=tuple(algorithms),
            seed=seed,
            output_dir=data.get("output_dir"),
            name=name,
        )
    except ConfigError as exc:
        raise ConfigError(f"{origin}: {exc}") from None


def _validate(cfg: ExperimentConfig) -> None:
    g = cfg.grid
    if g.rows < 2 or g.cols < 2:
        raise ConfigError("field 'grid': rows and cols must be >= 2")
    b = g.bounds
    if not (b.xmin < b.xmax and b.ymin < b.ymax):
        raise ConfigError("field 'grid': empty bounds")
    for h in cfg.holes:
        if not (b.xmin < h.xmin < h.xmax < b.xmax and b.ymin < h.ymin < h.ymax < b.ymax):
            raise ConfigError(f"field 'holes': {list(h)} is not strictly inside the bounds")
    xs = np.linspace(b.xmin, b.xmax, g.cols)
    ys = np.linspace(b.ymin, b.ymax, g.rows)
    for fld, pts in [("source", [cfg.source]), ("dest", [cfg.dest]), ("keypoints", cfg.keypoints)]:
        for c, r in pts:
            if not (0 <= c < g.cols and 0 <= r < g.rows):
                raise ConfigError(f"field '{fld}': ({c}, {r}) is off the {g.cols}x{g.rows} grid")
            for h in cfg.holes:
                if h.contains_open(xs[c], ys[r]):
                    raise ConfigError(f"field '{fld}': ({c}, {r}) lies inside hole {list(h)}")
    if cfg.source == cfg.dest:
        raise ConfigError("field 'dest': must differ from source")
    if any(a < 0 or not np.isfinite(a) for a in cfg.alphas):
        raise ConfigError("field 'alphas': values must be finite and non-negative")
    if cfg.epsilon is not None and not cfg.epsilon > 0:
        raise ConfigError("field 'epsilon': must be positive")
    bad = [a for a in cfg.algorithms if a not in ALGORITHMS]
    if bad:
        raise ConfigError(f"field 'algorithms': unknown {bad}; choose from {list(ALGORITHMS)}")


# -- running ----------------------------------------------------------------

def prepare(cfg: ExperimentConfig) -> Setup:
    surface = build_grid_complex(cfg.grid.rows, cfg.grid.cols, cfg.grid.bounds, cfg.holes)
    basis = harmonic_basis(hodge_laplacian_1(surface), seed=cfg.seed)
    try:
        waypoints = [surface.vertex_at(*p) for p in [cfg.source, *cfg.keypoints, cfg.dest]]
    except SurfaceError as exc:
        raise ConfigError(str(exc)) from None
    reference = reference_from_keypoints(surface, waypoints)
    return Setup(surface, basis, waypoints[0], waypoints[-1], reference,
                 path_projection(surface, basis, reference))


def _runner(name: str, setup: Setup, epsilon: float | None) -> Callable[[float], SearchResult]:
    s = setup
    if name == "hstar":
        return lambda a: hstar_search(s.surface, s.basis, s.source, s.dest, s.reference, a)
    if name == "rhstar":
        return lambda a: fortified_rollout(s.surface, s.basis, s.source, s.dest, s.reference, a)
    if name == "prhstar":
        return lambda a: pruned_rollout(s.surface, s.basis, s.source, s.dest, s.reference, a, epsilon)
    raise ValueError(name)


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def _row(exp_id, algorithm, alpha, res: SearchResult, wall, timing) -> ExperimentRow:
    return ExperimentRow(exp_id, algorithm, float(alpha), res.length, res.proj_diff, res.visited_count,
                         format_class_key(res.class_key), wall if timing else None)


def run_alpha_sweep(cfg: ExperimentConfig, timing: bool = False,
                    setup: Setup | None = None) -> list[ExperimentRow]:
    """One row per (algorithm, alpha); BLK's single run is repeated for every alpha.

    When ``cfg.output_dir`` is set, writes ``rows.csv``, ``surface.json``,
    ``basis.json``, ``blk_classes.csv`` and the three sweep plots there.
    """
    setup = setup or prepare(cfg)
    rows = []
    blk_records = None
    for alg in [a for a in ALGORITHMS if a in cfg.algorithms]:
        if alg == "blk":
            (res, blk_records), wall = _timed(blk_search, setup.surface, setup.basis, setup.source,
                                              setup.dest, setup.reference)
            rows.extend(_row(cfg.name, alg, a, res, wall, timing) for a in cfg.alphas)
            continue
        run = _runner(alg, setup, cfg.epsilon)
        for a in cfg.alphas:
            res, wall = _timed(run, a)
            rows.append(_row(cfg.name, alg, a, res, wall, timing))
    if cfg.output_dir:
        out = FsPath(cfg.output_dir)
        write_outputs(out, rows, setup)
        if blk_records is not None:
            write_class_records_csv(out / "blk_classes.csv", blk_records)
        from .plotting import plot_sweep

        plot_sweep(rows, out)
    return rows


@dataclass
class SurfaceSummary:
    """Per-surface outcome of a hole-scaling run."""

    holes: int
    num_vertices: int
    blk_classes: int
    rows: list[ExperimentRow]
    blk_records: list[ClassRecord] = field(repr=False, default_factory=list)


def hole_family(cfg: ExperimentConfig) -> list[ExperimentConfig]:
    """Configs with the first 1, 2, ..., all of ``cfg.holes``."""
    return [dataclasses.replace(cfg, holes=cfg.holes[:k], name=f"{cfg.name}_holes{k}")
            for k in range(1, len(cfg.holes) + 1)]


def hole_scaling_details(family: list[ExperimentConfig], timing: bool = False) -> list[SurfaceSummary]:
    """Best reference-class result of each algorithm on each surface of a family.

    H*-type algorithms are run at every alpha of the config and the shortest
    path homologous to the reference is kept (ties go to the smaller alpha).
    If no alpha reaches the reference class, the run with the smallest
    projection difference is reported instead.
    """
    out = []
    for cfg in family:
        setup = prepare(cfg)
        rows, records = [], []
        for alg in [a for a in ALGORITHMS if a in cfg.algorithms]:
            if alg == "blk":
                (res, records), wall = _timed(blk_search, setup.surface, setup.basis, setup.source,
                                              setup.dest, setup.reference)
                rows.append(_row(cfg.name, alg, 0.0, res, wall, timing))
                continue
            run = _runner(alg, setup, cfg.epsilon)
            best = None
            for a in cfg.alphas:
                res, wall = _timed(run, a)
                rank = (res.proj_diff > HOMOLOGY_TOL, res.proj_diff if res.proj_diff > HOMOLOGY_TOL else 0.0,
                        res.length)
                if best is None or rank < best[0]:
                    best = (rank, a, res, wall)
            rows.append(_row(cfg.name, alg, best[1], best[2], best[3], timing))
        out.append(SurfaceSummary(len(cfg.holes), setup.surface.num_vertices, len(records), rows, records))
    return out


def run_hole_scaling(family: list[ExperimentConfig], timing: bool = False,
                     output_dir: str | None = None) -> list[ExperimentRow]:
    """Rows for every surface of the family; see :func:`hole_scaling_details`.

    With an output directory (argument, or the last config's ``output_dir``),
    writes ``rows.csv``, ``classes.csv`` (BLK classes settled before the
    reference class, per surface), the largest surface and its basis, and
    the scaling plots.
    """
    details = hole_scaling_details(family, timing)
    rows = [r for d in details for r in d.rows]
    output_dir = output_dir or (family[-1].output_dir if family else None)
    if output_dir:
        out = FsPath(output_dir)
        write_outputs(out, rows, prepare(family[-1]))
        with open(out / "classes.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["experiment_id", "holes", "num_vertices", "blk_classes"])
            for d in details:
                w.writerow([d.rows[0].experiment_id, d.holes, d.num_vertices, d.blk_classes])
        from .plotting import plot_holes

        plot_holes(rows, out)
    return rows


# -- output -----------------------------------------------------------------

def write_rows_csv(path, rows: list[ExperimentRow]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(ROW_FIELDS)
        for r in rows:
            w.writerow([
                r.experiment_id, r.algorithm, repr(r.alpha), repr(r.path_length), repr(r.proj_diff),
                r.nodes_visited, r.class_key,
                "" if r.wall_time_seconds is None else f"{r.wall_time_seconds:.6f}",
            ])


def read_rows_csv(path) -> list[ExperimentRow]:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ROW_FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [
            ExperimentRow(
                d["experiment_id"], d["algorithm"], float(d["alpha"]), float(d["path_length"]),
                float(d["proj_diff"]), int(d["nodes_visited"]), d["class_key"],
                float(d["wall_time_seconds"]) if d["wall_time_seconds"] else None,
            )
            for d in reader
        ]


def write_outputs(out: FsPath, rows: list[ExperimentRow], setup: Setup) -> None:
    out.mkdir(parents=True, exist_ok=True)
    write_rows_csv(out / "rows.csv", rows)
    setup.surface.save(out / "surface.json")
    setup.basis.save(out / "basis.json")
