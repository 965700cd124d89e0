"""Command-line front end: configure, run, and serialize simulations.

Two subcommands:

    wigprop run      --config cfg.json [--output-dir DIR]
    wigprop validate --config cfg.json

Configs are flat JSON documents with blocks grid / potential / state /
propagation / output (plus an optional validation block for thresholds used
by the validate subcommand). Unknown keys anywhere are rejected, and error
messages name the offending key, e.g. "grid.nx".

Exit codes: 0 success, 1 validation thresholds exceeded, 2 config error,
3 propagation aborted on non-finite values.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .grid import make_grid
from .oracle import cross_validate
from .potentials import KINDS, Drive, PotentialSpec, _PARAMS
from .propagator import PropagationError, make_plan, propagate
from .states import StateSpec, build_initial_state
from .transforms import worker_count

__all__ = ["ConfigError", "RunConfig", "load_config", "run", "validate", "main"]

log = logging.getLogger(__name__)

CSV_MAX_SIDE = 256


class ConfigError(ValueError):
    """A config file failed validation; the message names the offending key."""


def _require_mapping(raw, path):
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected an object, got {type(raw).__name__}")
    return raw


def _reject_unknown(raw, path, allowed):
    for key in raw:
        if key not in allowed:
            raise ConfigError(f"unknown key {path}.{key}" if path else f"unknown key {key}")


def _number(raw, path, key, default=None, required=False, positive=False,
            nonnegative=False):
    if key not in raw:
        if required:
            raise ConfigError(f"{path}.{key}: required key is missing")
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"{path}.{key}: must be finite, got {value}")
    if positive and not value > 0:
        raise ConfigError(f"{path}.{key}: must be positive, got {value:g}")
    if nonnegative and value < 0:
        raise ConfigError(f"{path}.{key}: must be >= 0, got {value:g}")
    return value


def _integer(raw, path, key, default=None, required=False, minimum=None):
    if key not in raw:
        if required:
            raise ConfigError(f"{path}.{key}: required key is missing")
        return default
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {value}")
    return value


def _boolean(raw, path, key, default):
    if key not in raw:
        return default
    value = raw[key]
    if not isinstance(value, bool):
        raise ConfigError(f"{path}.{key}: expected true/false, got {value!r}")
    return value


def _string(raw, path, key, default=None, required=False, choices=None):
    if key not in raw:
        if required:
            raise ConfigError(f"{path}.{key}: required key is missing")
        return default
    value = raw[key]
    if not isinstance(value, str):
        raise ConfigError(f"{path}.{key}: expected a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(
            f"{path}.{key}: must be one of {sorted(choices)}, got {value!r}"
        )
    return value


@dataclass(frozen=True)
class GridConfig:
    nx: int
    np: int
    lx: float
    lp: float
    hbar: float


@dataclass(frozen=True)
class PropagationConfig:
    dt: float
    n_steps: int
    order: int
    snapshot_every: int
    mass: float
    merge_half_steps: bool
    debug_flip_kinetic_sign: bool


@dataclass(frozen=True)
class OutputConfig:
    directory: str
    format: str
    emit_marginals: bool


@dataclass(frozen=True)
class ValidationConfig:
    l2_rel_max: float | None
    linf_rel_max: float | None


@dataclass(frozen=True)
class RunConfig:
    grid: GridConfig
    potential: PotentialSpec
    state: StateSpec
    propagation: PropagationConfig
    output: OutputConfig
    validation: ValidationConfig | None
    raw: dict

    def make_grid(self):
        g = self.grid
        return make_grid(g.nx, g.np, g.lx, g.lp, g.hbar)

    def make_potential(self):
        return self.potential

    def make_state_spec(self):
        return self.state


def _parse_grid(raw):
    raw = _require_mapping(raw, "grid")
    _reject_unknown(raw, "grid", {"nx", "np", "lx", "lp", "hbar"})
    nx = _integer(raw, "grid", "nx", required=True)
    np_ = _integer(raw, "grid", "np", required=True)
    for name, count in (("nx", nx), ("np", np_)):
        if count < 2 or count % 2 != 0:
            raise ConfigError(f"grid.{name}: must be even and >= 2, got {count}")
    return GridConfig(
        nx=nx,
        np=np_,
        lx=_number(raw, "grid", "lx", required=True, positive=True),
        lp=_number(raw, "grid", "lp", required=True, positive=True),
        hbar=_number(raw, "grid", "hbar", default=1.0, positive=True),
    )


def _parse_drive(raw):
    if raw is None:
        return None
    raw = _require_mapping(raw, "potential.drive")
    _reject_unknown(raw, "potential.drive", {"E0", "omega", "phi"})
    return Drive(
        E0=_number(raw, "potential.drive", "E0", required=True),
        omega=_number(raw, "potential.drive", "omega", required=True),
        phi=_number(raw, "potential.drive", "phi", default=0.0),
    )


# catalog defaults applied when a parameter is omitted from the config
_PARAM_DEFAULTS = {
    "harmonic": {"m": 1.0, "omega": 1.0},
    "quartic": {"c": 0.1},
    "morse": {"D": 20.0, "a": 0.16, "x0": 0.0},
    "morse_unsquared": {"D": 20.0, "a": 0.16, "x0": 0.0},
    "gaussian_barrier": {"V0": 3.0, "sigma": 1.0, "x0": 0.0},
    "free": {},
}


def _parse_potential(raw):
    raw = _require_mapping(raw, "potential")
    kind = _string(raw, "potential", "kind", required=True, choices=set(KINDS))
    allowed = {"kind", "drive", *_PARAMS[kind]}
    _reject_unknown(raw, "potential", allowed)
    params = {}
    for name in _PARAMS[kind]:
        params[name] = _number(
            raw, "potential", name, default=_PARAM_DEFAULTS[kind][name]
        )
    drive = _parse_drive(raw.get("drive"))
    try:
        return PotentialSpec(kind, params, drive)
    except ValueError as exc:
        raise ConfigError(f"potential: {exc}") from None


def _parse_state(raw, config_dir):
    raw = _require_mapping(raw, "state")
    kind = _string(
        raw, "state", "kind", required=True,
        choices={"gaussian", "ho_eigenstate", "from_wavefunction"},
    )
    normalize = _boolean(raw, "state", "normalize", default=True)
    if kind == "gaussian":
        _reject_unknown(
            raw, "state", {"kind", "x0", "p0", "sigma_x", "sigma_p", "normalize"}
        )
        return StateSpec(
            kind="gaussian",
            x0=_number(raw, "state", "x0", default=0.0),
            p0=_number(raw, "state", "p0", default=0.0),
            sigma_x=_number(raw, "state", "sigma_x", default=None, positive=True),
            sigma_p=_number(raw, "state", "sigma_p", default=None, positive=True),
            normalize=normalize,
        )
    if kind == "ho_eigenstate":
        _reject_unknown(raw, "state", {"kind", "n", "m", "omega", "normalize"})
        return StateSpec(
            kind="ho_eigenstate",
            n=_integer(raw, "state", "n", required=True, minimum=0),
            m=_number(raw, "state", "m", default=1.0, positive=True),
            omega=_number(raw, "state", "omega", default=1.0, positive=True),
            normalize=normalize,
        )
    _reject_unknown(raw, "state", {"kind", "path", "normalize"})
    path = Path(_string(raw, "state", "path", required=True))
    if not path.is_absolute():
        path = config_dir / path
    if not path.exists():
        raise ConfigError(f"state.path: no such file: {path}")
    psi = np.load(path)
    return StateSpec(kind="from_wavefunction", psi=psi, normalize=normalize)


def _parse_propagation(raw):
    raw = _require_mapping(raw, "propagation")
    _reject_unknown(
        raw, "propagation",
        {"dt", "n_steps", "order", "snapshot_every", "mass", "merge_half_steps",
         "debug_flip_kinetic_sign"},
    )
    order = _integer(raw, "propagation", "order", default=2)
    if order not in (1, 2):
        raise ConfigError(f"propagation.order: must be 1 or 2, got {order}")
    return PropagationConfig(
        dt=_number(raw, "propagation", "dt", required=True, positive=True),
        n_steps=_integer(raw, "propagation", "n_steps", required=True, minimum=1),
        order=order,
        snapshot_every=_integer(raw, "propagation", "snapshot_every", default=0, minimum=0),
        mass=_number(raw, "propagation", "mass", default=1.0, positive=True),
        merge_half_steps=_boolean(raw, "propagation", "merge_half_steps", False),
        debug_flip_kinetic_sign=_boolean(
            raw, "propagation", "debug_flip_kinetic_sign", False
        ),
    )


def _parse_output(raw):
    raw = _require_mapping(raw, "output")
    _reject_unknown(raw, "output", {"directory", "format", "emit_marginals"})
    return OutputConfig(
        directory=_string(raw, "output", "directory", default="out"),
        format=_string(raw, "output", "format", default="raw64",
                       choices={"csv", "raw64"}),
        emit_marginals=_boolean(raw, "output", "emit_marginals", False),
    )


def _parse_validation(raw):
    if raw is None:
        return None
    raw = _require_mapping(raw, "validation")
    _reject_unknown(raw, "validation", {"l2_rel_max", "linf_rel_max"})
    return ValidationConfig(
        l2_rel_max=_number(raw, "validation", "l2_rel_max", default=None, positive=True),
        linf_rel_max=_number(raw, "validation", "linf_rel_max", default=None,
                             positive=True),
    )


def load_config(path):
    """Parse and fully validate a config file into a RunConfig."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    raw = _require_mapping(raw, "config")
    _reject_unknown(
        raw, "",
        {"description", "grid", "potential", "state", "propagation", "output",
         "validation"},
    )
    if "description" in raw and not isinstance(raw["description"], str):
        raise ConfigError("description: expected a string")
    for block in ("grid", "potential", "state", "propagation"):
        if block not in raw:
            raise ConfigError(f"{block}: required block is missing")
    grid = _parse_grid(raw["grid"])
    output = _parse_output(raw.get("output", {}))
    if output.format == "csv" and (grid.nx > CSV_MAX_SIDE or grid.np > CSV_MAX_SIDE):
        raise ConfigError(
            f"output.format: csv snapshots are refused above "
            f"{CSV_MAX_SIDE}x{CSV_MAX_SIDE} (grid is {grid.nx}x{grid.np}); use raw64"
        )
    return RunConfig(
        grid=grid,
        potential=_parse_potential(raw["potential"]),
        state=_parse_state(raw["state"], path.resolve().parent),
        propagation=_parse_propagation(raw["propagation"]),
        output=output,
        validation=_parse_validation(raw.get("validation")),
        raw=raw,
    )


def _write_snapshot_raw64(path, field):
    field.data.real.astype("<f8").tofile(path)


def _write_snapshot_csv(path, field):
    g = field.grid
    w = field.data.real
    with open(path, "w") as fh:
        fh.write("x,p,w\n")
        for j in range(g.nx):
            xj = g.x[j]
            row = w[j]
            for k in range(g.np):
                fh.write(f"{xj:.17g},{g.p[k]:.17g},{row[k]:.17g}\n")


def _write_marginals(path, axis_name, axis, density):
    with open(path, "w") as fh:
        fh.write(f"{axis_name},density\n")
        for value, rho in zip(axis, density):
            fh.write(f"{value:.17g},{rho:.17g}\n")


_DIAG_COLUMNS = (
    "step", "t", "total_prob", "purity", "mean_x", "mean_p", "energy",
    "min_w", "max_im_rel", "boundary_mass",
)


def _write_diagnostics(path, rows):
    with open(path, "w") as fh:
        fh.write(",".join(_DIAG_COLUMNS) + "\n")
        for step, record in rows:
            values = record.as_dict()
            fh.write(
                f"{step}," + ",".join(f"{values[c]:.17g}" for c in _DIAG_COLUMNS[1:])
                + "\n"
            )


def run(config, output_dir=None):
    """Execute a propagation run and serialize snapshots plus diagnostics.

    Writes W_<index>.<ext> per snapshot (Re W only; raw64 is row-major
    little-endian float64 with axis 0 = x slow, axis 1 = p fast),
    diagnostics.csv, and metadata.json describing how to reinterpret the
    snapshot files without the config.
    """
    out_dir = Path(output_dir) if output_dir else Path(config.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)

    grid = config.make_grid()
    potential = config.make_potential()
    w0 = build_initial_state(grid, config.make_state_spec())
    prop = config.propagation
    plan = make_plan(
        grid, potential, prop.mass, prop.dt, prop.order,
        merge_half_steps=prop.merge_half_steps,
        flip_kinetic_sign=prop.debug_flip_kinetic_sign,
    )

    ext = "raw64" if config.output.format == "raw64" else "csv"
    writer = _write_snapshot_raw64 if ext == "raw64" else _write_snapshot_csv
    snapshot_every = prop.snapshot_every if prop.snapshot_every > 0 else prop.n_steps

    files = []
    diag_rows = []

    def observer(step, field, record):
        index = len(files)
        name = f"W_{index:05d}.{ext}"
        writer(out_dir / name, field)
        if config.output.emit_marginals:
            from .observables import marginals

            rho_x, rho_p = marginals(field)
            _write_marginals(out_dir / f"xmarg_{index:05d}.csv", "x", grid.x, rho_x)
            _write_marginals(out_dir / f"pmarg_{index:05d}.csv", "p", grid.p, rho_p)
        files.append({"index": index, "filename": name, "step": step, "t": record.t})
        diag_rows.append((step, record))

    propagate(
        w0, plan, prop.n_steps,
        observer_callback=observer, snapshot_every=snapshot_every,
    )

    _write_diagnostics(out_dir / "diagnostics.csv", diag_rows)
    metadata = {
        "version": __version__,
        "grid": {
            "nx": grid.nx, "np": grid.np, "lx": grid.lx, "lp": grid.lp,
            "hbar": grid.hbar, "dx": grid.dx, "dp": grid.dp,
            "x_first": grid.x[0], "p_first": grid.p[0],
        },
        "snapshot_format": {
            "format": config.output.format,
            "dtype": "<f8",
            "byte_order": "little-endian",
            "layout": "row-major",
            "axis0": "x (slow)",
            "axis1": "p (fast)",
            "content": "Re W only",
        },
        "files": files,
        "diagnostics": "diagnostics.csv",
        "threads": worker_count(),
        "config": config.raw,
    }
    (out_dir / "metadata.json").write_text(json.dumps(metadata, indent=2) + "\n")
    log.info("wrote %d snapshots to %s", len(files), out_dir)
    return 0


def validate(config):
    """Cross-validate the phase-space run against the wavefunction oracle."""
    report = cross_validate(config)
    print(f"{'step':>8} {'t':>12} {'l2_rel':>12} {'linf_rel':>12}")
    for row in report.rows:
        print(f"{row.step:>8} {row.t:>12.6g} {row.l2_rel:>12.4e} {row.linf_rel:>12.4e}")
    if report.l2_rel_max is None and report.linf_rel_max is None:
        print("no thresholds configured (validation block absent); report only")
        return 0
    limits = []
    if report.l2_rel_max is not None:
        limits.append(f"l2_rel <= {report.l2_rel_max:g}")
    if report.linf_rel_max is not None:
        limits.append(f"linf_rel <= {report.linf_rel_max:g}")
    verdict = "PASS" if report.passed else "FAIL"
    print(
        f"{verdict}: worst l2_rel {report.worst_l2:.4e}, "
        f"worst linf_rel {report.worst_linf:.4e} against {', '.join(limits)}"
    )
    return 0 if report.passed else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="wigprop",
        description="Spectral split-operator propagation of the Wigner function",
    )
    parser.add_argument("--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a propagation described by a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--output-dir", default=None,
                       help="overrides output.directory from the config")
    p_val = sub.add_parser(
        "validate", help="cross-check the run against the wavefunction oracle"
    )
    p_val.add_argument("--config", required=True)

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)

    try:
        config = load_config(args.config)
        if args.command == "run":
            return run(config, args.output_dir)
        return validate(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PropagationError as exc:
        print(f"propagation aborted: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
