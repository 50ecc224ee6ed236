"""Command-line front end.

All energies on the command line are in units of the drive strength g and
times are the dimensionless product g*t.  Every command writes CSV data plus
a ``manifest.json`` describing how it was produced.

Exit codes: 0 ok, 1 usage, 2 numerical validity, 3 I/O.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .cache import cache_lambda, table_checksum
from .dynamics import evolve_series
from .entropy import attach_entropy, bloch_grid, pointer_scan
from .errors import (
    DomainError,
    NumericalValidityError,
    OracleError,
    RangeError,
    TruncationError,
    UsageError,
)
from .model import BathSpec, ModelParams, QubitState, state_from_label
from .partition import DEFAULT_TOL, build_lambda_table, difference_weights
from .presets import PRESETS, resolve
from .spectrum import frequency_spectrum, spectrum_summary, write_spectrum_csv
from .verify import DEFAULT_SEED, format_report, run_checks

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("drivenspin")


@dataclass
class RunConfig:
    epsilon: float = 0.0
    j0: float = 0.05
    omega: Optional[float] = None
    n_atoms: Optional[float] = None
    temperature: Optional[float] = None
    coordination: Optional[float] = None
    exchange: Optional[float] = None
    state: Optional[str] = "up"
    delta: Optional[object] = None
    gamma: Optional[object] = None
    p_up: Optional[float] = None
    p_down: Optional[float] = None
    t_start: float = 0.0
    t_end: float = 50.0
    points: int = 2000
    tol: float = DEFAULT_TOL
    out: str = "out"
    cache_dir: Optional[str] = None
    threads: int = 1
    grid: int = 64
    kind: Optional[str] = field(default=None, repr=False)

    def validate(self):
        if self.points < 1:
            raise UsageError("points: must be >= 1")
        if self.t_start < 0:
            raise UsageError("t_start: must be >= 0")
        if self.t_end < self.t_start:
            raise UsageError("t_end: must be >= t_start")
        if self.points > 1 and self.t_end == self.t_start:
            raise UsageError("t_end: must exceed t_start when points > 1")
        if not 0 < self.tol < 1:
            raise UsageError("tol: must lie in (0, 1)")
        if self.threads < 1:
            raise UsageError("threads: must be >= 1")
        if self.grid < 1:
            raise UsageError("grid: must be >= 1")
        for name in ("epsilon", "j0"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"{name}: must be finite")
        self.bath()
        self.initial_state()
        return self

    def params(self) -> ModelParams:
        return ModelParams(self.epsilon, 1.0, self.j0)

    def bath(self) -> BathSpec:
        micro = (self.n_atoms, self.temperature, self.coordination, self.exchange)
        try:
            if all(m is not None for m in micro):
                spec = BathSpec.from_microscopic(*micro)
                if self.omega is not None and not math.isclose(self.omega, spec.omega, rel_tol=1e-12):
                    raise UsageError(f"omega: {self.omega!r} disagrees with microscopic value {spec.omega!r}")
                return spec
            if any(m is not None for m in micro):
                raise UsageError("n_atoms/temperature/coordination/exchange: give all four or none")
            if self.omega is None:
                raise UsageError("omega: bath factor is required (or the microscopic tuple)")
            return BathSpec(float(self.omega))
        except DomainError as exc:
            raise UsageError(f"omega: {exc}") from exc

    def initial_state(self) -> QubitState:
        try:
            if self.delta is not None or self.gamma is not None:
                return QubitState.pure(_complex(self.delta or 0), _complex(self.gamma or 0))
            if self.p_up is not None or self.p_down is not None:
                p_up = self.p_up if self.p_up is not None else 1.0 - self.p_down
                p_down = self.p_down if self.p_down is not None else 1.0 - self.p_up
                return QubitState.mixed(p_up, p_down)
            if self.state is None:
                raise UsageError("state: give a label, (delta, gamma) or (p_up, p_down)")
            return state_from_label(self.state, self.epsilon, 1.0)
        except DomainError as exc:
            raise UsageError(f"state: {exc}") from exc

    def time_grid(self) -> np.ndarray:
        if self.points == 1:
            return np.array([float(self.t_start)])
        return np.linspace(self.t_start, self.t_end, self.points)

    def to_json(self) -> dict:
        data = dataclasses.asdict(self)
        for key in ("delta", "gamma"):
            if data[key] is not None:
                c = _complex(data[key])
                data[key] = [c.real, c.imag]
        return data


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise UsageError(f"complex value must be [re, im], got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


_CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path}: expected a flat JSON object")
    unknown = sorted(set(data) - _CONFIG_FIELDS)
    if unknown:
        raise UsageError(f"config {path}: unknown field(s) {', '.join(unknown)}")
    return data


def _resolve_table(config: RunConfig, omega: float):
    start = time.perf_counter()
    if config.cache_dir:
        table, path, hit = cache_lambda(omega, config.tol, config.cache_dir)
        provenance = {"cache": "hit" if hit else "miss", "path": str(path)}
    else:
        table = build_lambda_table(omega, config.tol)
        provenance = {"cache": "disabled", "path": None}
    provenance.update(
        omega=table.omega,
        tol=table.tol,
        p_max=table.p_max,
        cumulative_mass=table.cumulative_mass,
        sha256=table_checksum(table),
        seconds=round(time.perf_counter() - start, 6),
    )
    return table, provenance


def _write_manifest(out: Path, command: str, config: RunConfig, provenance: dict, outputs, started: float, extra=None):
    manifest = {
        "command": command,
        "version": __version__,
        "config": config.to_json(),
        "lambda_table": provenance,
        "outputs": sorted(outputs),
        "wall_time_s": round(time.perf_counter() - started, 6),
    }
    if extra:
        manifest.update(extra)
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_series_csv(path: Path, series) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gt", "sz", "rho11", "rho22", "re_rho12", "im_rho12", "entropy"])
        for i in range(len(series)):
            writer.writerow(
                [
                    _fmt(series.times[i]),
                    _fmt(series.sz[i]),
                    _fmt(series.rho11[i]),
                    _fmt(series.rho22[i]),
                    _fmt(series.rho12[i].real),
                    _fmt(series.rho12[i].imag),
                    _fmt(series.entropy[i]),
                ]
            )


def run_evolve(config: RunConfig) -> Path:
    started = time.perf_counter()
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    table, provenance = _resolve_table(config, config.bath().omega)
    weights = difference_weights(table)
    series = evolve_series(config.params(), config.initial_state(), weights, config.time_grid(), workers=config.threads)
    attach_entropy(series)
    write_series_csv(out / "series.csv", series)
    _write_manifest(
        out, "evolve", config, provenance, ["series.csv"], started, {"weights": {"d_max": weights.d_max, "raw_mass": weights.mass}}
    )
    return out


def run_spectrum(config: RunConfig) -> Path:
    started = time.perf_counter()
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    table, provenance = _resolve_table(config, config.bath().omega)
    weights = difference_weights(table)
    lines = frequency_spectrum(config.params(), weights)
    write_spectrum_csv(out / "spectrum.csv", lines, g=1.0)
    summary = dataclasses.asdict(spectrum_summary(lines))
    _write_manifest(out, "spectrum", config, provenance, ["spectrum.csv"], started, {"summary": summary, "lines": len(lines)})
    return out


def run_entropy_scan(config: RunConfig) -> Path:
    started = time.perf_counter()
    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    table, provenance = _resolve_table(config, config.bath().omega)
    weights = difference_weights(table)
    params = config.params()
    times = config.time_grid()

    series = attach_entropy(evolve_series(params, config.initial_state(), weights, times, workers=config.threads))
    with open(out / "entropy.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gt", "p1", "p2", "entropy"])
        for i in range(len(series)):
            writer.writerow([_fmt(series.times[i]), _fmt(series.p1[i]), _fmt(series.p2[i]), _fmt(series.entropy[i])])

    scan = pointer_scan(params, weights, bloch_grid(config.grid, config.grid), times)
    with open(out / "landscape.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "phi", "score"])
        for i, theta in enumerate(scan.thetas):
            for j, phi in enumerate(scan.phis):
                writer.writerow([_fmt(theta), _fmt(phi), _fmt(scan.landscape[i, j])])
    best = {
        "theta": scan.best_theta,
        "phi": scan.best_phi,
        "score": scan.entropy_score,
        "delta": [scan.best_state.delta.real, scan.best_state.delta.imag],
        "gamma": [scan.best_state.gamma.real, scan.best_state.gamma.imag],
    }
    _write_manifest(out, "entropy-scan", config, provenance, ["entropy.csv", "landscape.csv"], started, {"pointer_state": best})
    return out


def run_figure(name: str, base: RunConfig) -> list:
    try:
        members = resolve(name)
    except KeyError:
        raise UsageError(f"unknown figure {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
    written = []
    for member in members:
        preset = dict(PRESETS[member])
        kind = preset.pop("kind")
        config = dataclasses.replace(
            base, **preset, out=str(Path(base.out) / member), delta=None, gamma=None, p_up=None, p_down=None,
            n_atoms=None, temperature=None, coordination=None, exchange=None,
        )
        runner = run_spectrum if kind == "spectrum" else run_evolve
        written.append(runner(config))
    return written


def run_verify(level: str, seed: int = DEFAULT_SEED, stream=None, amplitudes=None) -> int:
    stream = stream or sys.stdout
    results = run_checks(level, seed=seed, amplitudes=amplitudes)
    print(format_report(results, level, seed), file=stream)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="flat JSON file with RunConfig fields")
    p.add_argument("--epsilon", type=float, help="detuning in units of g")
    p.add_argument("--j0", type=float, help="scaled coupling J0 in units of g")
    p.add_argument("--omega-factor", dest="omega", type=float, help="dimensionless bath factor Omega")
    p.add_argument("--state", help="up, down, phi1, phi2 or phi-super")
    p.add_argument("--t-start", dest="t_start", type=float, help="first g*t sample")
    p.add_argument("--t-end", dest="t_end", type=float, help="last g*t sample")
    p.add_argument("--points", type=int, help="number of time samples")
    p.add_argument("--tol", type=float, help="Lambda-table tail tolerance")
    p.add_argument("--out", help="output directory")
    p.add_argument("--cache-dir", dest="cache_dir", help="Lambda-table cache directory")
    p.add_argument("--threads", type=int, help="worker threads for time chunks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drivenspin", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("evolve", help="spin inversion, reduced density matrix and entropy over time")
    _add_run_flags(p)
    p = sub.add_parser("spectrum", help="weighted Rabi-frequency distribution")
    _add_run_flags(p)
    p = sub.add_parser("entropy-scan", help="entropy series plus pointer-state scan over a Bloch grid")
    _add_run_flags(p)
    p.add_argument("--grid", type=int, help="points per Bloch-sphere axis (default 64)")
    p = sub.add_parser("figure", help="run a figure preset")
    p.add_argument("name", help="figure or preset name, e.g. fig1a, fig2b, fig5a-super")
    _add_run_flags(p)
    p = sub.add_parser("verify", help="run the oracle verification suite")
    p.add_argument("level", choices=["quick", "full"])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p = sub.add_parser("cache", help="build or load the Lambda table for a bath")
    _add_run_flags(p)
    return parser


def config_from_args(args) -> RunConfig:
    data = {}
    if getattr(args, "config", None):
        data.update(load_config(args.config))
    for name in _CONFIG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if getattr(args, "state", None) is not None:
        # an explicit --state flag overrides amplitudes from the file
        for k in ("delta", "gamma", "p_up", "p_down"):
            data.pop(k, None)
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise UsageError(str(exc)) from exc


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(args.level, seed=args.seed)
        config = config_from_args(args)
        if args.command == "evolve":
            out = run_evolve(config)
        elif args.command == "spectrum":
            out = run_spectrum(config)
        elif args.command == "entropy-scan":
            out = run_entropy_scan(config)
        elif args.command == "figure":
            for path in run_figure(args.name, config):
                print(path)
            return EXIT_OK
        elif args.command == "cache":
            config.validate()
            if not config.cache_dir:
                raise UsageError("cache_dir: required for the cache command")
            omega = config.bath().omega
            table, path, hit = cache_lambda(omega, config.tol, config.cache_dir)
            print(f"{'hit' if hit else 'miss'} {path} p_max={table.p_max} sha256={table_checksum(table)}")
            return EXIT_OK
        else:  # pragma: no cover - argparse enforces the choices
            raise UsageError(f"unknown command {args.command!r}")
        print(out)
        return EXIT_OK
    except (UsageError, DomainError, RangeError) as exc:
        print(f"drivenspin: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalValidityError, TruncationError, OracleError) as exc:
        print(f"drivenspin: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"drivenspin: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
