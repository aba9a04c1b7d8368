"""Experiment orchestration and deterministic serialization.

run_experiment executes a SweepConfig, writes one delimited text file
per (order, coupling, observable) plus per-run diagnostics, and ends
with a manifest (config echo, library version, checksum and shape per
file). All floats are rendered with repr, so files are byte-identical
across runs of the same build. verify_manifest re-reads a finished
output directory and checks checksums, completeness, and the physical
invariants every observable must satisfy.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from ._backend import backend_name
from .config import SweepConfig
from .errors import ConsistencyError, InputError
from .evolution import FractionalOrder
from .inverse import extract_coupling, roundtrip_report
from .observables import (concurrence, field_moments, husimi_grid, mandel_q,
                          oscillation_periods, quadrature_variance_x)
from .states import (evolve_trajectory, field_density, init_coherent_excited,
                     init_fock_excited, qubit_density)

__all__ = ["time_grid", "run_experiment", "verify_manifest", "MANIFEST_NAME"]

MANIFEST_NAME = "manifest.json"
WORKERS_ENV = "FTJC_WORKERS"

NORM_DRIFT_TOL = 1e-9
BOUND_SLACK = 1e-10
HUSIMI_NORM_TOL = 1e-3


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid [0, t_max] with step as close to dt as divisibility allows."""
    n_steps = int(round(t_max / dt))
    if n_steps < 1:
        raise InputError(f"no steps between 0 and t_max={t_max} at dt={dt}")
    return np.linspace(0.0, t_max, n_steps + 1)


def _fmt(x) -> str:
    return repr(float(x))


def _table(header: list, columns: list) -> str:
    lines = ["\t".join(header)]
    rows = len(columns[0])
    for i in range(rows):
        lines.append("\t".join(_fmt(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def _tag(alpha: float, mu: float, with_mu: bool) -> str:
    tag = f"alpha{alpha:g}"
    if with_mu:
        tag += f"_mu{mu:g}"
    return tag


def _seed_state(config: SweepConfig):
    if config.seed == "coherent":
        return init_coherent_excited(config.beta, config.n_max)
    return init_fock_excited(config.n_max)


def _run_single(config: SweepConfig, alpha: float, mu: float) -> dict:
    """All output files for one (order, coupling) pair, as name -> text."""
    ts = time_grid(config.t_max, config.dt)
    dt = float(ts[1] - ts[0])
    with_mu = config.mu_list is not None
    tag = _tag(alpha, mu, with_mu)
    state0 = _seed_state(config)
    traj = evolve_trajectory(state0, FractionalOrder(alpha), mu, ts,
                             ml_tol=config.ml_tol)

    pe = np.abs(traj.amp_e) ** 2
    pg = np.abs(traj.amp_g) ** 2
    pg0 = abs(traj.amp_g0) ** 2
    n_idx = np.arange(config.n_max + 1, dtype=float)
    inversion = pe.sum(axis=1) - (pg.sum(axis=1) + pg0)

    files: dict[str, str] = {}

    def emit(obs: str, header: list, columns: list) -> None:
        files[f"{obs}_{tag}.tsv"] = _table(header, columns)

    for obs in config.observables:
        if obs == "inversion":
            emit(obs, ["t", "w"], [ts, inversion])
        elif obs == "concurrence":
            vals = np.array([concurrence(qubit_density(traj.state(i)))
                             for i in range(ts.size)])
            emit(obs, ["t", "concurrence"], [ts, vals])
        elif obs == "mean_n":
            vals = (n_idx * pe).sum(axis=1) + ((n_idx + 1.0) * pg).sum(axis=1)
            emit(obs, ["t", "mean_n"], [ts, vals])
        elif obs == "parity":
            sign = np.where(np.arange(config.n_max + 1) % 2 == 0, 1.0, -1.0)
            vals = (sign * pe).sum(axis=1) - (sign * pg).sum(axis=1) + pg0
            emit(obs, ["t", "parity"], [ts, vals])
        elif obs == "mandel_q":
            vals = np.array([mandel_q(traj.state(i)) for i in range(ts.size)])
            emit(obs, ["t", "mandel_q"], [ts, vals])
        elif obs == "var_x":
            vals = np.array([quadrature_variance_x(field_density(traj.state(i)))
                             for i in range(ts.size)])
            emit(obs, ["t", "var_x"], [ts, vals])
        elif obs == "field_moments":
            a1 = np.empty(ts.size, dtype=complex)
            a2 = np.empty(ts.size, dtype=complex)
            for i in range(ts.size):
                a1[i], a2[i], _ = field_moments(field_density(traj.state(i)))
            emit(obs, ["t", "mean_a_re", "mean_a_im", "mean_a2_re", "mean_a2_im"],
                 [ts, a1.real, a1.imag, a2.real, a2.imag])
        elif obs == "periods":
            periods = oscillation_periods(ts, inversion, config.period_count)
            ells = np.arange(1, periods.size + 1, dtype=float)
            emit(obs, ["ell", "period"], [ells, periods])
        elif obs == "husimi":
            snapped = sorted({int(round(tau / dt)) for tau in config.husimi_times})
            for i in snapped:
                fd = field_density(traj.state(i))
                grid = husimi_grid(fd, config.husimi_window[:2],
                                   config.husimi_window[2:],
                                   config.husimi_resolution)
                meta = [_fmt(grid.re_range[0]), _fmt(grid.re_range[1]),
                        _fmt(grid.im_range[0]), _fmt(grid.im_range[1]),
                        repr(grid.resolution), _fmt(ts[i])]
                lines = ["\t".join(["re_lo", "re_hi", "im_lo", "im_hi",
                                    "resolution", "t"]),
                         "\t".join(meta)]
                for row in grid.values:
                    lines.append("\t".join(_fmt(v) for v in row))
                files[f"husimi_{tag}_t{ts[i]:g}.tsv"] = "\n".join(lines) + "\n"
        elif obs == "coupling":
            profile = extract_coupling(ts, inversion)
            emit(obs, ["t", "gamma", "singular"],
                 [ts, profile.gamma, profile.singular.astype(float)])
            report = roundtrip_report(alpha, mu, config.t_max, dt=dt,
                                      ml_tol=config.ml_tol)
            files[f"roundtrip_{tag}.json"] = json.dumps(
                report.to_dict(), sort_keys=True, indent=2) + "\n"

    if config.observables:
        norms = pe.sum(axis=1) + pg.sum(axis=1) + pg0
        weights = np.arange(1, config.n_max + 2, dtype=float)
        excitation = (weights * (pe + pg)).sum(axis=1)
        files[f"diagnostics_{tag}.tsv"] = _table(
            ["t", "norm", "excitation"], [ts, norms, excitation])
    return files


def _file_entry(kind: str, text: str) -> dict:
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    lines = text.splitlines()
    if kind == "json":
        return {"sha256": digest, "rows": len(lines), "cols": 1, "kind": kind}
    if kind == "husimi":
        # two meta lines, then the row-major grid
        rows = len(lines) - 2
        cols = len(lines[2].split("\t")) if rows else 0
        return {"sha256": digest, "rows": rows, "cols": cols, "kind": kind}
    rows = len(lines) - 1
    cols = len(lines[1].split("\t")) if rows else len(lines[0].split("\t"))
    return {"sha256": digest, "rows": rows, "cols": cols, "kind": kind}


def _kind_of(name: str) -> str:
    if name.endswith(".json"):
        return "json"
    return name.split("_alpha")[0]


def run_experiment(config: SweepConfig) -> dict:
    """Execute a sweep, write its files and manifest, return the manifest.

    Independent (order, coupling) pairs run in parallel when the
    FTJC_WORKERS environment variable is set above 1; output bytes do
    not depend on the worker count.
    """
    jobs = [(alpha, mu) for alpha in config.alpha_list
            for mu in config.couplings()]
    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_single, [config] * len(jobs),
                                    [a for a, _ in jobs], [m for _, m in jobs]))
    else:
        results = [_run_single(config, a, m) for a, m in jobs]

    os.makedirs(config.output_dir, exist_ok=True)
    entries: dict[str, dict] = {}
    for file_map in results:
        for name, text in file_map.items():
            if name in entries:
                raise ConsistencyError(f"duplicate output file name {name}")
            entries[name] = _file_entry(_kind_of(name), text)
            with open(os.path.join(config.output_dir, name), "w",
                      encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    manifest = {
        "config": config.to_dict(),
        "version": __version__,
        "backend": backend_name(),
        "files": entries,
    }
    with open(os.path.join(config.output_dir, MANIFEST_NAME), "w",
              encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return manifest


def _load_table(path: str) -> tuple:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split("\t")
    data = np.array([[float(v) for v in line.split("\t")]
                     for line in lines[1:]], dtype=float)
    return header, data


def _verify_kind(kind: str, header, data, checks: list) -> None:
    def add(label, ok_flag):
        checks.append((label, bool(ok_flag)))

    if kind == "inversion":
        add("inversion magnitude <= 1", np.max(np.abs(data[:, 1])) <= 1.0 + BOUND_SLACK)
    elif kind == "concurrence":
        add("concurrence in [0, 1]",
            data[:, 1].min() >= -BOUND_SLACK and data[:, 1].max() <= 1.0 + BOUND_SLACK)
    elif kind == "mean_n":
        add("mean photon number >= 0", data[:, 1].min() >= -BOUND_SLACK)
    elif kind == "parity":
        add("parity magnitude <= 1", np.max(np.abs(data[:, 1])) <= 1.0 + BOUND_SLACK)
    elif kind == "mandel_q":
        add("Mandel Q >= -1", data[:, 1].min() >= -1.0 - BOUND_SLACK)
    elif kind == "var_x":
        add("quadrature variance > 0", data[:, 1].min() > 0.0)
    elif kind == "field_moments":
        add("field moments finite", np.all(np.isfinite(data)))
    elif kind == "periods":
        add("periods positive", data[:, 1].min() > 0.0)
        add("oscillation index increasing", np.all(np.diff(data[:, 0]) > 0))
    elif kind == "coupling":
        add("coupling nonnegative", data[:, 1].min() >= 0.0)
        add("singular flags binary", set(np.unique(data[:, 2])) <= {0.0, 1.0})
    elif kind == "diagnostics":
        add("norm drift <= 1e-9", np.max(np.abs(data[:, 1] - 1.0)) <= NORM_DRIFT_TOL)
        exc = data[:, 2]
        add("excitation drift <= 1e-9", np.max(np.abs(exc - exc[0])) <= NORM_DRIFT_TOL)
    if kind != "periods" and data.shape[0] > 1 and header[0] == "t":
        add("time column increasing", np.all(np.diff(data[:, 0]) > 0))


def _verify_husimi(path: str, checks: list) -> None:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    meta = dict(zip(lines[0].split("\t"), lines[1].split("\t")))
    res = int(meta["resolution"])
    values = np.array([[float(v) for v in line.split("\t")]
                       for line in lines[2:]], dtype=float)
    checks.append(("husimi grid shape matches resolution",
                   values.shape == (res, res)))
    checks.append(("husimi values nonnegative", values.min() >= 0.0))
    dre = (float(meta["re_hi"]) - float(meta["re_lo"])) / (res - 1)
    dim = (float(meta["im_hi"]) - float(meta["im_lo"])) / (res - 1)
    norm = float(values.sum() * dre * dim)
    checks.append((f"husimi normalization within {HUSIMI_NORM_TOL:g}",
                   abs(norm - 1.0) <= HUSIMI_NORM_TOL))


def verify_manifest(output_dir: str) -> dict:
    """Check a finished output directory against its manifest.

    Confirms the manifest parses, every listed file exists with the
    recorded checksum and shape, no unlisted data files are present,
    and each observable satisfies its invariants. Returns a report
    dict with "ok", per-file check results, and error strings.
    """
    report: dict = {"ok": False, "checks": [], "errors": []}
    man_path = os.path.join(output_dir, MANIFEST_NAME)
    try:
        with open(man_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        report["errors"].append(f"cannot load manifest: {exc}")
        return report
    try:
        SweepConfig.from_dict(manifest["config"])
    except Exception as exc:
        report["errors"].append(f"manifest config invalid: {exc}")
        return report

    listed = manifest.get("files", {})
    on_disk = {name for name in os.listdir(output_dir)
               if name != MANIFEST_NAME and (name.endswith(".tsv")
                                             or name.endswith(".json"))}
    for name in sorted(on_disk - set(listed)):
        report["errors"].append(f"file {name} on disk but not in manifest")
    for name in sorted(listed):
        path = os.path.join(output_dir, name)
        entry = listed[name]
        if not os.path.exists(path):
            report["errors"].append(f"file {name} in manifest but missing on disk")
            continue
        with open(path, "rb") as fh:
            raw = fh.read()
        digest = hashlib.sha256(raw).hexdigest()
        if digest != entry.get("sha256"):
            report["errors"].append(f"checksum mismatch for {name}")
            continue
        checks: list = []
        kind = entry.get("kind", _kind_of(name))
        try:
            if kind == "husimi":
                _verify_husimi(path, checks)
            elif kind == "json":
                payload = json.loads(raw.decode("utf-8"))
                checks.append(("roundtrip record is a mapping",
                               isinstance(payload, dict)))
            else:
                header, data = _load_table(path)
                if data.shape[0] != entry.get("rows"):
                    report["errors"].append(f"row count mismatch for {name}")
                    continue
                if data.shape[1] != entry.get("cols"):
                    report["errors"].append(f"column count mismatch for {name}")
                    continue
                if not np.all(np.isfinite(data)):
                    report["errors"].append(f"non-finite values in {name}")
                    continue
                _verify_kind(kind, header, data, checks)
        except Exception as exc:
            report["errors"].append(f"cannot parse {name}: {exc}")
            continue
        for label, ok_flag in checks:
            report["checks"].append({"file": name, "check": label, "ok": ok_flag})
            if not ok_flag:
                report["errors"].append(f"{name}: failed check: {label}")
    report["ok"] = not report["errors"]
    return report
