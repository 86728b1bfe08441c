"""Command-line entry point: ``softhomology {sweep,holes,oracle,plot}``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from pathlib import Path as FsPath

from .complex import SurfaceError
from .experiments import (
    ALGORITHMS,
    ConfigError,
    ExperimentConfig,
    hole_family,
    load_config,
    prepare,
    read_rows_csv,
    run_alpha_sweep,
    run_hole_scaling,
)
from .homology import class_key, format_class_key
from .oracle import OracleError, enumerate_classes

EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("softhomology")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="softhomology", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="JSON experiment config")
        sp.add_argument("--out", help="output directory (overrides output_dir in the config)")
        sp.add_argument("--algorithms", help=f"comma-separated subset of {','.join(ALGORITHMS)}")
        sp.add_argument("--seed", type=int, help="override the config seed")
        sp.add_argument("--wall-time", action="store_true",
                        help="fill wall_time_seconds in rows.csv (makes output non-reproducible)")

    common(sub.add_parser("sweep", help="run every algorithm over the config's alpha grid"))
    common(sub.add_parser("holes", help="run the cumulative hole-count family of a config"))
    common(sub.add_parser("oracle", help="sweep a tiny surface and cross-check classes by enumeration"))
    pl = sub.add_parser("plot", help="redraw SVG plots from an existing rows.csv")
    pl.add_argument("--out", required=True, help="directory holding rows.csv")
    pl.add_argument("--kind", choices=["sweep", "holes"], help="default: inferred from rows.csv")
    return p


def _configure(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    changes = {}
    if args.out:
        changes["output_dir"] = args.out
    if args.algorithms:
        changes["algorithms"] = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    if args.seed is not None:
        changes["seed"] = args.seed
    cfg = dataclasses.replace(cfg, **changes) if changes else cfg
    if not cfg.output_dir:
        raise ConfigError("no output directory: pass --out or set output_dir")
    return cfg


def _oracle(cfg: ExperimentConfig, timing: bool) -> list:
    """Sweep a tiny surface, then check every row's class against exhaustive enumeration."""
    setup = prepare(cfg)
    table = enumerate_classes(setup.surface, setup.basis, setup.source, setup.dest)
    rows = run_alpha_sweep(cfg, timing=timing, setup=setup)
    out = FsPath(cfg.output_dir)
    with open(out / "oracle_classes.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["signature_key", "shortest_length", "member_count", "representative", "is_reference"])
        ref_key = format_class_key(class_key(setup.reference_proj))
        for key in sorted(table.classes, key=lambda k: (table.classes[k].shortest_length, k)):
            e = table.classes[key]
            w.writerow([format_class_key(key), repr(e.shortest_length), e.member_count,
                        e.representative.to_json(), format_class_key(key) == ref_key])
    known = {format_class_key(k) for k in table.classes}
    stray = sorted({(r.algorithm, r.class_key) for r in rows if r.class_key not in known})
    if stray:
        raise OracleError(f"rows in classes missing from the enumeration: {stray}")
    return rows


def _plot(args) -> None:
    from .plotting import plot_holes, plot_sweep

    out = FsPath(args.out)
    rows = read_rows_csv(out / "rows.csv")
    kind = args.kind or ("holes" if len({r.experiment_id for r in rows}) > 1 else "sweep")
    (plot_holes if kind == "holes" else plot_sweep)(rows, out)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args = _parser().parse_args(argv)
    try:
        if args.command == "plot":
            _plot(args)
            return 0
        cfg = _configure(args)
        if args.command == "sweep":
            rows = run_alpha_sweep(cfg, timing=args.wall_time)
        elif args.command == "holes":
            rows = run_hole_scaling(hole_family(cfg), timing=args.wall_time, output_dir=cfg.output_dir)
        else:
            rows = _oracle(cfg, args.wall_time)
        log.info("wrote %d rows to %s", len(rows), cfg.output_dir)
        return 0
    except (ConfigError, SurfaceError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
