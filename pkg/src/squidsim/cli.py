"""Command-line front end.

    squidsim {derive,spectrum,visibility,report,validate,sweep} --config run.json
             [--out DIR] [--format csv|json] [--workers N]

Exit codes: 0 success, 2 configuration error, 3 parameter domain or
numerical failure, 4 oracle agreement tolerance violated (validate only).
``report`` exits 0 even when checks fail; the verdict is in the file.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import fields
from pathlib import Path

import jsonschema
import numpy as np

from . import io
from .errors import ConfigError, SquidSimError
from .feasibility import feasibility_report
from .flux_spectrum import FluxGrid, eigenstate_report, potential_surface, solve_eigen
from .oracle import DEFAULT_TRUNCATION, approximation_error_scan, return_fidelity
from .params import CODATA, DeviceParams, PhysicalConstants, derive
from .two_level import derive_coupling, extract_two_level
from .visibility import visibility_series

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 2, 3, 4
DEFAULT_OUT = "squidsim_out"
VALIDATE_TOLERANCE = 1e-3
SURFACE_BETA_L = 20.0

_DEVICE_FIELDS = [f.name for f in fields(DeviceParams)]
_NUM = {"type": "number"}
_POS_INT = {"type": "integer", "minimum": 1}


def _obj(props, required=()):
    return {
        "type": "object",
        "properties": props,
        "required": list(required),
        "additionalProperties": False,
    }


CONFIG_SCHEMA = _obj(
    {
        "device": _obj(
            {name: _NUM for name in _DEVICE_FIELDS},
            [n for n in _DEVICE_FIELDS if n != "bias_phase"],
        ),
        "constants": _obj({"hbar": _NUM, "electron_charge": _NUM, "boltzmann": _NUM}),
        "grid": _obj({"phi_min": _NUM, "phi_max": _NUM, "num_points": {"type": "integer", "minimum": 3}}),
        "spectrum": _obj(
            {
                "beta_L": _NUM,
                "beta_C": _NUM,
                "bias": _NUM,
                "num_states": _POS_INT,
                "bias_min": _NUM,
                "bias_max": _NUM,
                "bias_points": _POS_INT,
                "surface_points": {"type": "array", "items": _POS_INT, "minItems": 2, "maxItems": 2},
            }
        ),
        "simulation": _obj({"t_max": _NUM, "num_points": {"type": "integer", "minimum": 2}, "truncation": _POS_INT}),
        "validate": _obj(
            {
                "zeta_list": {"type": "array", "items": _NUM, "minItems": 1},
                "tolerance": _NUM,
                "samples_per_period": _POS_INT,
            }
        ),
        "sweep": {
            "type": "object",
            "properties": {
                "parameter": {"enum": _DEVICE_FIELDS},
                "values": {"type": "array", "items": _NUM, "minItems": 1},
                "start": _NUM,
                "stop": _NUM,
                "num": _POS_INT,
                "spacing": {"enum": ["linear", "log"]},
            },
            "required": ["parameter"],
            "additionalProperties": False,
            "oneOf": [{"required": ["values"]}, {"required": ["start", "stop", "num"]}],
        },
        "output": _obj({"directory": {"type": "string"}, "format": {"enum": ["csv", "json"]}}),
    },
    ["device"],
)


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            cfg = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {e.message}")
    return cfg


class Run:
    """Resolved configuration plus the shared computation chain."""

    def __init__(self, cfg: dict, out: str | None, fmt: str | None, workers: int | None):
        self.cfg = cfg
        self.device = DeviceParams.from_dict(cfg["device"])
        self.constants = PhysicalConstants.from_dict(cfg["constants"]) if "constants" in cfg else CODATA
        self.grid = FluxGrid(**cfg["grid"]) if "grid" in cfg else FluxGrid()
        self.spectrum_cfg = cfg.get("spectrum", {})
        output = cfg.get("output", {})
        self.out = Path(out or output.get("directory", DEFAULT_OUT))
        self.format = fmt or output.get("format", "csv")
        self.workers = workers
        self.derived = derive(self.device, self.constants)

    @property
    def betas(self):
        s = self.spectrum_cfg
        return s.get("beta_L", self.derived.beta_L), s.get("beta_C", self.derived.beta_C)

    def chain(self):
        bL, bC = self.betas
        model = extract_two_level(bL, bC, self.derived.U0, grid=self.grid)
        return model, derive_coupling(model, self.device, self.derived, self.constants)

    def table(self, stem, header, rows) -> Path:
        if self.format == "json":
            rows = np.atleast_2d(np.asarray(rows, dtype=float))
            return io.write_json(self.out / f"{stem}.json", {h: rows[:, j] for j, h in enumerate(header)})
        return io.write_csv(self.out / f"{stem}.csv", header, rows)


def cmd_derive(run: Run) -> int:
    doc = run.derived.to_dict()
    doc["U0_over_kB_K"] = run.derived.U0 / run.constants.boltzmann
    doc["flux_quantum_Wb"] = run.constants.flux_quantum
    io.write_json(run.out / "derived.json", doc)
    sys.stdout.write(io.json_text(doc))
    return EXIT_OK


def cmd_spectrum(run: Run) -> int:
    s = run.spectrum_cfg
    bL, bC = run.betas
    k = s.get("num_states", 3)
    spec = solve_eigen(run.grid, s.get("bias", 0.0), bL, bC, k=k)
    biases = np.linspace(s.get("bias_min", -0.5), s.get("bias_max", 0.5), s.get("bias_points", 41))
    rep = eigenstate_report(spec, k=k, sweep_biases=biases, workers=run.workers)
    written = [
        run.table("eigenstates", rep.header, rep.states),
        run.table("bias_sweep", rep.sweep_header, rep.sweep),
    ]

    # potential landscape of a strongly hysteretic loop at half a flux quantum
    phi0 = run.constants.flux_quantum
    L = run.device.loop_inductance
    fig = run.device.with_(
        critical_current=SURFACE_BETA_L * phi0 / (2 * math.pi * L), bias_phase=0.0
    )
    U0 = run.derived.U0
    k_mech = fig.effective_mass * fig.angular_frequency**2
    x_span = math.sqrt(4 * SURFACE_BETA_L * U0 / k_mech)
    nx, nphi = s.get("surface_points", [61, 121])
    x = np.linspace(-x_span, x_span, nx)
    Phi = np.linspace(-phi0, 2 * phi0, nphi)
    U = potential_surface(x, Phi, fig, run.constants)
    X, F = np.meshgrid(x, Phi, indexing="ij")
    written.append(run.table("potential_surface", ("x_m", "Phi_Wb", "U_J"), np.column_stack([X.ravel(), F.ravel(), U.ravel()])))
    for p in written:
        print(p)
    return EXIT_OK


def cmd_visibility(run: Run) -> int:
    model, coupling = run.chain()
    sim = run.cfg.get("simulation", {})
    series = visibility_series(
        model,
        coupling,
        run.device,
        run.derived,
        t_max=sim.get("t_max"),
        num_points=sim.get("num_points"),
        constants=run.constants,
    )
    meta = dict(series.metadata)
    meta["two_level"] = model.to_dict()
    print(run.table("visibility", series.HEADER, series.table()))
    print(io.write_json(run.out / "visibility_meta.json", meta))
    return EXIT_OK


def cmd_report(run: Run) -> int:
    bL, bC = run.betas
    rep = feasibility_report(run.device, run.constants, run.grid, bL, bC)
    doc = rep.to_dict()
    io.write_json(run.out / "report.json", doc)
    sys.stdout.write(io.json_text(doc))
    return EXIT_OK


def cmd_validate(run: Run) -> int:
    model, coupling = run.chain()
    v = run.cfg.get("validate", {})
    zeta, alpha0, n = coupling.zeta, coupling.alpha0, run.derived.n_thermal
    zetas = v.get("zeta_list", [0.0, 8 * zeta, 4 * zeta, 2 * zeta, zeta])
    tol = v.get("tolerance", VALIDATE_TOLERANCE)
    trunc = run.cfg.get("simulation", {}).get("truncation", DEFAULT_TRUNCATION)
    scan = approximation_error_scan(
        zetas, alpha0, n, samples_per_period=v.get("samples_per_period", 48), truncation=trunc
    )
    worst = max(r.max_error for r in scan.rows)
    doc = {
        "passed": worst <= tol,
        "tolerance": tol,
        "max_error": worst,
        "device_zeta": zeta,
        "scan": scan.to_dict(),
        "period_fidelity": {
            "scaled_generator": return_fidelity("scaled", zeta, alpha0, trunc),
            "exact_generator": return_fidelity("exact", zeta, alpha0, trunc),
        },
    }
    io.write_json(run.out / "validate.json", doc)
    sys.stdout.write(io.json_text(doc))
    return EXIT_OK if doc["passed"] else EXIT_TOLERANCE


SWEEP_COLUMNS = (
    "value",
    "beta_L",
    "beta_C",
    "U0_J",
    "n_thermal",
    "eta_over_U0",
    "delta_over_U0",
    "gap_ratio",
    "x0_m",
    "zeta",
    "alpha0",
    "t_recoherence_s",
    "zener_exponent",
    "decoherence_depth",
    "log_nu_d_t1",
    "nu_d_t1",
    "all_passed",
)


def sweep_point(device: DeviceParams, constants, grid, beta_L, beta_C) -> tuple:
    """One sweep row; top-level so it pickles into worker processes."""
    rep = feasibility_report(device, constants, grid, beta_L, beta_C)
    d = rep.derived
    row = [rep.beta_L, rep.beta_C, d.U0, d.n_thermal]
    if rep.two_level is None:
        row += [math.nan] * 11
    else:
        m, c = rep.two_level, rep.coupling
        log_nu = rep.check("recoherence").value
        row += [
            m.eta_over_U0,
            m.delta_over_U0,
            m.gap_ratio,
            c.x0,
            c.zeta,
            c.alpha0,
            c.t_recoherence,
            c.zener_exponent,
            rep.check("decoherence_depth").value,
            log_nu,
            math.exp(log_nu),
        ]
    return tuple(row) + (1.0 if rep.passed else 0.0,), rep.to_dict()


def sweep_values(spec: dict) -> np.ndarray:
    if "values" in spec:
        return np.asarray(spec["values"], dtype=float)
    if spec.get("spacing", "linear") == "log":
        if spec["start"] <= 0 or spec["stop"] <= 0:
            raise ConfigError("sweep: log spacing needs positive start and stop")
        return np.geomspace(spec["start"], spec["stop"], spec["num"])
    return np.linspace(spec["start"], spec["stop"], spec["num"])


def cmd_sweep(run: Run) -> int:
    if "sweep" not in run.cfg:
        raise ConfigError("<root>: 'sweep' is a required property for the sweep command")
    spec = run.cfg["sweep"]
    values = np.sort(sweep_values(spec))
    devices = [run.device.with_(**{spec["parameter"]: float(v)}) for v in values]
    bL, bC = (run.spectrum_cfg.get("beta_L"), run.spectrum_cfg.get("beta_C"))
    args = [(dev, run.constants, run.grid, bL, bC) for dev in devices]
    workers = run.workers or 1
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(args))) as pool:
            results = list(pool.map(sweep_point, *zip(*args)))
    else:
        results = [sweep_point(*a) for a in args]
    if run.format == "json":
        doc = {
            "parameter": spec["parameter"],
            "points": [{"value": float(v), "report": rep} for v, (_, rep) in zip(values, results)],
        }
        print(io.write_json(run.out / "sweep.json", doc))
    else:
        rows = [(float(v),) + row for v, (row, _) in zip(values, results)]
        print(io.write_csv(run.out / "sweep.csv", SWEEP_COLUMNS, rows))
    return EXIT_OK


COMMANDS = {
    "derive": cmd_derive,
    "spectrum": cmd_spectrum,
    "visibility": cmd_visibility,
    "report": cmd_report,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
}


def _workers(flag):
    if flag is not None:
        return flag
    env = os.environ.get("SQUIDSIM_WORKERS")
    if env is None or env == "":
        return None
    try:
        n = int(env)
    except ValueError:
        raise ConfigError(f"SQUIDSIM_WORKERS={env!r} is not an integer") from None
    if n < 1:
        raise ConfigError(f"SQUIDSIM_WORKERS={n} must be >= 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="squidsim", description="RF SQUID / nanomechanical resonator simulator")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output directory (overrides output.directory)")
        p.add_argument("--format", choices=("csv", "json"), default=None, help="tabular output format")
        p.add_argument("--workers", type=int, default=None, help="parallel workers (env SQUIDSIM_WORKERS)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.workers is not None and args.workers < 1:
            raise ConfigError(f"--workers={args.workers} must be >= 1")
        cfg = load_config(args.config)
        run = Run(cfg, args.out, args.format, _workers(args.workers))
        return COMMANDS[args.command](run)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SquidSimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
