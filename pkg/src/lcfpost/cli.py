"""Command-line front end: analyze, calibrate, convergence.

Exit codes are a stable contract: 0 success, 1 usage error, 2 input
parse error, 3 numerical failure.  Logs go to standard error only;
data outputs are files in the chosen output directory, written
deterministically (no timestamps, fixed ordering, full-precision
floats), so identical runs produce bit-identical artifacts.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from .calibration import DEFAULT_FREE, fit_mle, load_specimens
from .materials import MATERIAL_KEYS, load_material, save_material
from .mesh import MeshParseError, read_mesh
from .reliability import (aggregate_segments, integrate_hazard, pof,
                          top_faces_report, write_density_vtk,
                          write_faces_csv, write_pof_csv)

__all__ = ["main", "RunConfig", "run_analysis", "run_calibration",
           "run_convergence_study"]

log = logging.getLogger("lcfpost")

# cycle multiples n/eta reported in the summary table
_NSTAR_ROWS = (1e-4, 1e-3, 3.231e-3, 1e-2, 1e-1, 0.5, 1.0)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, for exit-code control."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class RunConfig:
    """Everything one analysis run needs; see the CLI flags of ``analyze``."""

    mesh_path: str
    material_path: str
    lq: int = 4
    segments: int = 1
    out_dir: str = "."
    workers: int = 1
    grid_start: float = None
    grid_stop: float = None
    grid_count: int = 200
    grid_spacing: str = "log"
    halve_before_shakedown: bool = True

    def __post_init__(self):
        if not 1 <= self.lq <= 6:
            raise _UsageError(f"--lq must lie in [1, 6], got {self.lq}")
        if self.segments < 1:
            raise _UsageError(f"--segments must be >= 1, got {self.segments}")
        if self.workers < 1:
            raise _UsageError(f"--workers must be >= 1, got {self.workers}")
        if self.grid_count < 1:
            raise _UsageError(f"--grid-count must be >= 1, got {self.grid_count}")
        if self.grid_spacing not in ("log", "linear"):
            raise _UsageError(
                f"--grid-spacing must be 'log' or 'linear', got {self.grid_spacing}")
        for name in ("grid_start", "grid_stop"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise _UsageError(f"--{name.replace('_', '-')} must be positive")
        if (self.grid_start is not None and self.grid_stop is not None
                and not self.grid_start < self.grid_stop):
            raise _UsageError("--grid-start must be below --grid-stop")


def _cycle_grid(config, eta):
    start = config.grid_start
    stop = config.grid_stop
    if start is None:
        if not math.isfinite(eta):
            return np.array([])
        start = eta * 1e-4
    if stop is None:
        if not math.isfinite(eta):
            return np.array([])
        stop = eta * 10.0
    if config.grid_count == 1:
        return np.array([start])
    if config.grid_spacing == "log":
        return np.geomspace(start, stop, config.grid_count)
    return np.linspace(start, stop, config.grid_count)


def _write_summary(path, config, result, faces_count):
    eta, m = result.eta, result.m
    lines = []
    lines.append("component reliability summary")
    lines.append("")
    lines.append(f"mesh = {config.mesh_path}")
    lines.append(f"material = {config.material_path}")
    lines.append(f"quadrature points per dimension = {config.lq}")
    lines.append(f"boundary faces = {faces_count}")
    lines.append(f"skipped degenerate elements = {len(result.skipped_elements)}")
    if result.skipped_elements:
        lines.append(f"skipped element ids = {list(result.skipped_elements)}")
    lines.append(f"m = {m!r}")
    lines.append(f"total hazard = {result.total!r}")
    lines.append(f"eta = {eta!r}")
    lines.append(f"segments = {config.segments}")
    lines.append("")
    if math.isfinite(eta):
        lines.append("PoF at cycle multiples of eta (N* = n/eta):")
        lines.append("N*          n               segment_pof     "
                     f"combined_pof({config.segments} segments)")
        for nstar in _NSTAR_ROWS:
            p1 = pof(nstar * eta, eta, m)
            pc = aggregate_segments(p1, config.segments)
            lines.append(f"{nstar:<11.6g} {nstar * eta:<15.9g} "
                         f"{p1:<15.9e} {pc:.9e}")
        lines.append("")
        report = top_faces_report(result.contributions, eta, m)
        lines.append("faces ranked by crack-initiation density "
                     "(combined PoF evaluated at n = eta):")
        lines.append("rank  element  face  density         share    combined_pof")
        for rank, row in enumerate(report[:25], start=1):
            c = row.contribution
            lines.append(f"{rank:<5d} {c.element_id:<8d} {c.face_index:<5d} "
                         f"{c.density:<15.9e} {row.share:<8.4f} "
                         f"{row.combined_pof:.9e}")
        if len(report) > 25:
            lines.append(f"... {len(report) - 25} more face(s)")
        for frac in (0.5, 0.9):
            k = next((i + 1 for i, row in enumerate(report) if row.share >= frac),
                     len(report))
            lines.append(f"faces covering {frac:.0%} of the hazard total = {k}")
    else:
        lines.append("total hazard is zero: PoF identically zero at all cycles")
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def run_analysis(config):
    """Full pipeline: mesh + material in, four artifacts out."""
    mesh = read_mesh(config.mesh_path)
    params = load_material(config.material_path)
    log.info("mesh: %d nodes, %d elements", len(mesh.nodes), len(mesh.elements))
    result = integrate_hazard(
        mesh, params, config.lq, workers=config.workers,
        halve_before_shakedown=config.halve_before_shakedown)
    if not result.contributions:
        log.warning("no boundary faces found; outputs describe a zero hazard")
    log.info("eta = %r (m = %r, %d faces)", result.eta, result.m,
             len(result.contributions))
    os.makedirs(config.out_dir, exist_ok=True)
    grid = _cycle_grid(config, result.eta)
    curve = pof(grid, result.eta, result.m) if grid.size else np.array([])
    write_pof_csv(os.path.join(config.out_dir, "pof.csv"), grid, curve)
    write_faces_csv(os.path.join(config.out_dir, "faces.csv"),
                    result.contributions)
    write_density_vtk(os.path.join(config.out_dir, "density.vtk"), mesh,
                      result.contributions, result.eta, result.m)
    _write_summary(os.path.join(config.out_dir, "summary.txt"), config, result,
                   len(result.contributions))
    log.info("wrote pof.csv, faces.csv, density.vtk, summary.txt to %s",
             config.out_dir)
    return 0


def run_convergence_study(config):
    """Weibull scale for every interval point count 1..6."""
    mesh = read_mesh(config.mesh_path)
    params = load_material(config.material_path)
    etas = []
    for lq in range(1, 7):
        result = integrate_hazard(mesh, params, lq, workers=config.workers,
                                  halve_before_shakedown=config.halve_before_shakedown)
        etas.append(result.eta)
        log.info("lq = %d: eta = %r", lq, result.eta)
    os.makedirs(config.out_dir, exist_ok=True)
    path = os.path.join(config.out_dir, "convergence.csv")
    with open(path, "w") as handle:
        handle.write("lq,eta,eta_over_eta6\n")
        for lq, eta in enumerate(etas, start=1):
            ratio = eta / etas[-1] if math.isfinite(etas[-1]) else math.nan
            handle.write(f"{lq},{eta!r},{ratio!r}\n")
    log.info("wrote %s", path)
    return 0


def run_calibration(data_path, fixed_path, out_dir, free, seed, restarts):
    """Fit the free parameters and write the fitted material + report."""
    records = load_specimens(data_path)
    initial = load_material(fixed_path)
    levels = len({r.strain_amplitude for r in records})
    if len(records) < 3 or levels < 2:
        log.error("under-determined fit: %d record(s) on %d strain level(s); "
                  "need >= 3 records spanning >= 2 levels", len(records), levels)
        return 2
    result = fit_mle(records, initial, free=free, seed=seed, restarts=restarts)
    os.makedirs(out_dir, exist_ok=True)
    fitted_path = os.path.join(out_dir, "fitted_material.txt")
    save_material(result.params, fitted_path)
    report_path = os.path.join(out_dir, "fit_report.txt")
    with open(report_path, "w") as handle:
        handle.write("maximum-likelihood fit report\n\n")
        handle.write(f"records = {len(records)}\n")
        handle.write(f"strain levels = {levels}\n")
        handle.write(f"free parameters = {', '.join(free)}\n")
        handle.write(f"seed = {seed}\n")
        handle.write(f"restarts = {restarts}\n")
        handle.write(f"best restart = {result.best_restart}\n")
        handle.write(f"iterations = {result.iterations}\n")
        handle.write(f"converged = {result.converged}\n")
        handle.write(f"log_likelihood = {result.log_likelihood!r}\n\n")
        for key in MATERIAL_KEYS:
            marker = "fitted" if key in free else "fixed"
            handle.write(f"{key} = {getattr(result.params, key)!r}  # {marker}\n")
    log.info("wrote %s and %s (log-likelihood %r)", fitted_path, report_path,
             result.log_likelihood)
    return 0


# ---------------------------------------------------------------------------
# argument handling

_CONFIG_CONVERTERS = {
    "lq": int, "segments": int, "workers": int, "grid_count": int,
    "seed": int, "restarts": int,
    "grid_start": float, "grid_stop": float,
    "grid_spacing": str, "shakedown_halving": str, "out": str, "free": str,
}


def _load_config_file(path):
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.replace("=", " ").split(None, 1)
            if len(parts) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'key value', got {text!r}")
            key = parts[0].replace("-", "_")
            if key not in _CONFIG_CONVERTERS:
                raise ValueError(f"{path}: line {lineno}: unknown option {key!r}")
            try:
                values[key] = _CONFIG_CONVERTERS[key](parts[1].strip())
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: bad value {parts[1]!r} for {key!r}")
    return values


def _pick(args, config, name, default):
    v = getattr(args, name, None)
    if v is not None:
        return v
    if name in config:
        return config[name]
    return default


def _build_parser():
    parser = _Parser(prog="lcfpost",
                     description="probabilistic LCF postprocessor for FEA results")
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="debug-level logging")
    parser.add_argument("--config", metavar="FILE",
                        help="key-value file supplying defaults for the "
                             "optional flags (explicit flags win)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    pa = sub.add_parser("analyze", help="hazard integration and PoF outputs")
    pa.add_argument("--mesh", required=True, help="neutral-format mesh file")
    pa.add_argument("--material", required=True, help="material parameter file")
    pa.add_argument("--lq", type=int, help="quadrature points per dimension (1..6)")
    pa.add_argument("--segments", type=int, help="identical-segment count")
    pa.add_argument("--out", help="output directory")
    pa.add_argument("--workers", type=int, help="parallel element evaluations")
    pa.add_argument("--grid-start", type=float, dest="grid_start",
                    help="first cycle value of the PoF grid")
    pa.add_argument("--grid-stop", type=float, dest="grid_stop",
                    help="last cycle value of the PoF grid")
    pa.add_argument("--grid-count", type=int, dest="grid_count",
                    help="PoF grid size (default 200)")
    pa.add_argument("--grid-spacing", choices=("log", "linear"),
                    dest="grid_spacing", help="PoF grid spacing (default log)")
    pa.add_argument("--shakedown-halving", choices=("before", "after"),
                    dest="shakedown_halving",
                    help="apply the amplitude factor 1/2 before (default) or "
                         "after the Neuber inversion")

    pc = sub.add_parser("calibrate", help="maximum-likelihood parameter fit")
    pc.add_argument("--data", required=True, help="specimen CSV")
    pc.add_argument("--fixed", required=True,
                    help="material file with fixed values and starting point")
    pc.add_argument("--seed", type=int, help="restart RNG seed (default 0)")
    pc.add_argument("--restarts", type=int, help="optimizer restarts (default 5)")
    pc.add_argument("--free", help="comma-separated fitted parameters "
                                   f"(default {','.join(DEFAULT_FREE)})")
    pc.add_argument("--out", help="output directory")

    pv = sub.add_parser("convergence", help="eta for every quadrature order")
    pv.add_argument("--mesh", required=True, help="neutral-format mesh file")
    pv.add_argument("--material", required=True, help="material parameter file")
    pv.add_argument("--out", help="output directory")
    pv.add_argument("--workers", type=int, help="parallel element evaluations")
    pv.add_argument("--shakedown-halving", choices=("before", "after"),
                    dest="shakedown_halving",
                    help="amplitude factor placement, as in analyze")
    return parser


def _analysis_config(args, config):
    return RunConfig(
        mesh_path=args.mesh,
        material_path=args.material,
        lq=_pick(args, config, "lq", 4),
        segments=_pick(args, config, "segments", 1),
        out_dir=_pick(args, config, "out", "."),
        workers=_pick(args, config, "workers", 1),
        grid_start=_pick(args, config, "grid_start", None),
        grid_stop=_pick(args, config, "grid_stop", None),
        grid_count=_pick(args, config, "grid_count", 200),
        grid_spacing=_pick(args, config, "grid_spacing", "log"),
        halve_before_shakedown=_pick(
            args, config, "shakedown_halving", "before") == "before",
    )


def main(argv=None):
    """Entry point; returns the exit code."""
    try:
        parser = _build_parser()
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s",
                        level=logging.DEBUG if args.verbose else logging.INFO,
                        force=True)
    if args.command is None:
        print("error: a subcommand is required "
              "(analyze, calibrate, convergence)", file=sys.stderr)
        return 1
    try:
        config = _load_config_file(args.config) if args.config else {}
        if args.command == "analyze":
            return run_analysis(_analysis_config(args, config))
        if args.command == "convergence":
            run_config = RunConfig(
                mesh_path=args.mesh,
                material_path=args.material,
                out_dir=_pick(args, config, "out", "."),
                workers=_pick(args, config, "workers", 1),
                halve_before_shakedown=_pick(
                    args, config, "shakedown_halving", "before") == "before")
            return run_convergence_study(run_config)
        free = tuple(
            name.strip()
            for name in _pick(args, config, "free", ",".join(DEFAULT_FREE)).split(",")
            if name.strip())
        bad = [name for name in free if name not in MATERIAL_KEYS]
        if bad:
            raise _UsageError(f"unknown parameter name(s) in --free: {bad}")
        return run_calibration(
            data_path=args.data,
            fixed_path=args.fixed,
            out_dir=_pick(args, config, "out", "."),
            free=free,
            seed=_pick(args, config, "seed", 0),
            restarts=_pick(args, config, "restarts", 5))
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MeshParseError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        log.error("numerical failure: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
