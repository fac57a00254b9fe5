"""``wqed <task> --config <path> [--out <dir>] [--threads <n>] [--seed <u64>]``

Writes ``<out>/<output>.csv`` plus a ``<output>.json`` sidecar holding the
resolved config and run metadata.  The sidecar is itself a valid config.

Exit codes: 0 ok, 2 config error, 3 numerical error, 4 I/O error.  Failures
print one JSON error record on stderr.
"""
from __future__ import annotations

import argparse
import io
import json
import os
import platform
import sys
import tempfile
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .config import TASKS, RunConfig, load_config
from .disorder import DisorderSpec, localization_spectrum, xi_vs_drive
from .errors import ConfigError, NumericalError
from .lattice import band_scan, density_of_states
from .parallel import resolve_threads
from .raman import driven_v_scatter, lambda_scatter
from .scattering import check_grid, spectrum
from .schemes import DrivenLambda, DrivenV, LambdaTwoTransition
from .transistor import switch_map

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


def fmt(x) -> str:
    """Shortest round-trip decimal; ``inf``/``nan`` spelled literally."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return repr(float(x))


def _scaled_scheme(cfg: RunConfig):
    """Scheme with every rate and energy multiplied by omega0."""
    if cfg.omega0 == 1.0:
        return cfg.scheme
    fields = {k: v * cfg.omega0 for k, v in vars(cfg.scheme).items()}
    return replace(cfg.scheme, **fields)


def _disorder_spec(cfg: RunConfig) -> DisorderSpec:
    s = cfg.disorder
    return DisorderSpec(s.n_emitters, s.n_realizations, s.d_min, s.d_max, cfg.seed)


def task_spectrum(cfg, scheme, threads):
    grid = check_grid(cfg.grid.array(cfg.omega0))
    if isinstance(scheme, (LambdaTwoTransition, DrivenV)):
        if isinstance(scheme, LambdaTwoTransition):
            scatter, states = lambda_scatter, ("lower", "upper")
        else:
            scatter, states = driven_v_scatter, ("plus", "minus")
        header = ["omega", "initial", "k_out", "elastic_re", "elastic_im", "raman_re", "raman_im", "norm2"]
        rows = []
        for k in grid:
            for state in states:
                row = scatter(scheme, k, state)
                rows.append([k, state, row.k_out, row.elastic.real, row.elastic.imag,
                             row.raman.real, row.raman.imag, row.norm2])
        return header, rows
    header = ["omega", "t_re", "t_im", "r_re", "r_im", "transmittance", "reflectance", "loss"]
    rows = [
        [w, a.t.real, a.t.imag, a.r.real, a.r.imag, a.transmittance, a.reflectance, a.loss]
        for w, a in zip(grid, spectrum(scheme, grid))
    ]
    return header, rows


def task_switch_map(cfg, scheme, threads):
    if not isinstance(scheme, DrivenV):
        raise ConfigError("switch-map needs a driven_v scheme")
    tr = cfg.transistor
    result = switch_map(scheme, tr.gammas.array(cfg.omega0), tr.sigmas.array(cfg.omega0), threads)
    header = ["gamma", "sigma", "p_switch", "p_coherent", "p_loss"]
    rows = [[g, s, r.p_switch, r.p_coherent, r.p_loss_assisted] for g, s, r in result.rows()]
    return header, rows


def task_bands(cfg, scheme, threads):
    d = cfg.lattice.d * cfg.wavelength
    points = band_scan(scheme, d, cfg.grid.array(cfg.omega0))
    header = ["omega", "kind", "kappa", "attenuation", "absorption"]
    rows = [[p.omega, p.kind, p.kappa, p.attenuation, p.absorption_sigma] for p in points]
    return header, rows


def task_dos(cfg, scheme, threads):
    lat = cfg.lattice
    broadening = None if lat.broadening is None else lat.broadening * cfg.omega0
    curve = density_of_states(scheme, lat.d * cfg.wavelength, lat.x0,
                              cfg.grid.array(cfg.omega0), broadening)
    return ["omega", "density"], [list(p) for p in zip(curve.omega_grid, curve.density)]


_LOC_HEADER = ["omega", "inv_xi_mean", "inv_xi_stderr", "n_divergent"]


def _loc_rows(estimates):
    return [[e.omega, e.inv_xi_mean, e.inv_xi_stderr, e.n_divergent] for e in estimates]


def task_localization(cfg, scheme, threads):
    estimates = localization_spectrum(scheme, _disorder_spec(cfg), cfg.grid.array(cfg.omega0),
                                      cfg.wavelength, threads)
    return _LOC_HEADER, _loc_rows(estimates)


def task_xi_vs_drive(cfg, scheme, threads):
    if not isinstance(scheme, DrivenLambda):
        raise ConfigError("xi-vs-drive needs a driven_lambda scheme")
    drive = cfg.drive
    estimates = xi_vs_drive(scheme, _disorder_spec(cfg), drive.omega * cfg.omega0,
                            drive.Omega.array(cfg.omega0), cfg.wavelength, threads)
    # first column holds the Rabi frequency
    return ["Omega"] + _LOC_HEADER[1:], _loc_rows(estimates)


TASK_FUNCTIONS = {
    "spectrum": task_spectrum,
    "switch-map": task_switch_map,
    "bands": task_bands,
    "dos": task_dos,
    "localization": task_localization,
    "xi-vs-drive": task_xi_vs_drive,
}


def render_csv(header, rows) -> bytes:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue().encode("ascii")


def write_atomic(path: Path, data: bytes):
    """Write to a temp file in the target directory, then rename over ``path``."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig, out_dir, threads: int = 1) -> tuple[Path, Path]:
    """Execute one task and write its CSV and JSON sidecar; returns both paths."""
    out_dir = Path(out_dir)
    started = time.perf_counter()
    header, rows = TASK_FUNCTIONS[cfg.task](cfg, _scaled_scheme(cfg), threads)
    csv_bytes = render_csv(header, rows)
    wall = time.perf_counter() - started

    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{cfg.output}.csv"
    json_path = out_dir / f"{cfg.output}.json"
    sidecar = cfg.to_dict()
    sidecar["meta"] = {
        "versions": {
            "wqed": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "seed": cfg.seed,
        "threads": threads,
        "wall_time_s": wall,
        "csv": csv_path.name,
        "rows": len(rows),
    }
    write_atomic(csv_path, csv_bytes)
    write_atomic(json_path, (json.dumps(sidecar, indent=2) + "\n").encode("utf-8"))
    return csv_path, json_path


def _fail(code: int, kind: str, exc: BaseException) -> int:
    record = {"status": "error", "kind": kind, "exit_code": code,
              "type": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wqed", description="Waveguide QED scattering and array calculations.")
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", required=True, help="TOML config or JSON sidecar of an earlier run")
    parser.add_argument("--out", default=".", help="output directory (default: current)")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (fallback: WQED_THREADS)")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed (u64)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        threads = resolve_threads(args.threads)
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "config", exc)

    try:
        cfg = load_config(args.config, task=args.task, seed=args.seed)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    except (ConfigError, TypeError) as exc:
        return _fail(EXIT_CONFIG, "config", exc)

    try:
        csv_path, _ = run(cfg, args.out, threads)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", exc)
    except (NumericalError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERICAL, "numerical", exc)
    except (ValueError, TypeError) as exc:
        # bad grid ordering or a scheme the task cannot handle
        return _fail(EXIT_CONFIG, "config", exc)
    except OSError as exc:
        return _fail(EXIT_IO, "io", exc)
    print(csv_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
