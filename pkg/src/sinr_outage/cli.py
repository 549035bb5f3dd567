"""Command-line front end: config parsing, sweeps, CSV emission.

Config files are flat INI: ``[section]`` headers with ``key = value`` lines,
``#``/``;`` comments, no nesting.  Unknown sections or keys are hard errors
with line/column positions, so typos cannot silently change an experiment.

Output is CSV on stdout with header ``sweep_value,method,p_out,diag_err,
diag_note`` (floats printed to 9 significant digits).  Exit codes: 0 on
success, 1 on config errors, 2 when no cell could be computed.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cgf import (CaseAModel, CaseBModel, CaseCModel, case_a_cgf, case_b_cgf,
                  case_c_cgf)
from .charlier import outage_hermite, outage_krishnamoorthy
from .cumulants import FadingModel, NetworkGeometry, cumulants_to_moments
from .errors import ArgumentError, CapabilityError, ConfigError, OutageError
from .gilpelaez import InversionConfig, outage_gp
from .mc import SimConfig, simulate
from .result import OutageResult
from .spa import outage_spa

_WORKER_ENV = "SINR_OUTAGE_WORKERS"

_METHODS = ("gil_pelaez", "spa:normal", "spa:chisq", "spa:ig", "spa:nig",
            "charlier:hermite", "charlier:t", "mc")
_SWEEP_VARS = ("theta_db", "num_bs", "p_coop", "L")

# section -> key -> parser
_SCHEMA = {
    "model": {
        "case": str, "theta": float, "theta_db": float,
        "fading_shape": float, "fading_rate": float,
        "lam1": float, "lam2": float, "L": int, "p_coop": float,
        "num_bs": float, "intensity": float,
        "exclusion_radius": float, "cooperation_radius": float,
        "path_loss": float, "tx_power": float, "window_radius": float,
        "sinr": bool, "noise_power": float,
    },
    "methods": {"names": str},
    "sweep": {"variable": str, "lo": float, "hi": float, "steps": int},
    "gil_pelaez": {"rel_tol": float, "max_panels": int},
    "mc": {"trials": int, "seed": int, "independent_counts": bool},
    "charlier": {"order": int, "mode": str},
}

_REQUIRED = {
    "a_poisson": ("fading_shape", "fading_rate", "lam1", "lam2"),
    "a_binomial": ("fading_shape", "fading_rate", "L", "p_coop"),
    "b": ("exclusion_radius", "cooperation_radius", "path_loss"),
    "c": ("exclusion_radius", "cooperation_radius", "path_loss",
          "fading_shape", "fading_rate"),
}


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def parse_config(path: str) -> dict:
    """Read a flat INI file into {section: {key: typed value}}."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    out: dict = {}
    section = None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].split(";", 1)[0].rstrip()
        if not text.strip():
            continue
        stripped = text.strip()
        col = text.index(stripped[0]) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header",
                                  line=lineno, column=col)
            section = stripped[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]",
                                  line=lineno, column=col)
            out.setdefault(section, {})
            continue
        if section is None:
            raise ConfigError("key outside any [section]",
                              line=lineno, column=col)
        if "=" not in stripped:
            raise ConfigError("expected key = value", line=lineno, column=col)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in [{section}]",
                              line=lineno, column=col)
        caster = _SCHEMA[section][key]
        try:
            out[section][key] = (_parse_bool(value) if caster is bool
                                 else caster(value))
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {exc}",
                              line=lineno, column=col + len(key) + 2) from exc
    return out


@dataclass(frozen=True)
class RunConfig:
    """A fully validated experiment: model parameters, methods, sweep."""

    case: str
    theta: float
    model_keys: dict
    methods: tuple
    sweep_variable: str | None
    sweep_values: tuple
    knobs: dict = field(default_factory=dict)


def _build_run_config(raw: dict) -> RunConfig:
    model = raw.get("model")
    if not model:
        raise ConfigError("missing [model] section")
    case = model.get("case")
    if case not in _REQUIRED:
        raise ConfigError(f"model case must be one of {sorted(_REQUIRED)}, "
                          f"got {case!r}")
    has_db = "theta_db" in model
    has_lin = "theta" in model
    if has_db == has_lin:
        raise ConfigError("give exactly one of theta (linear) or theta_db")
    theta = 10.0 ** (model["theta_db"] / 10.0) if has_db else model["theta"]
    for key in _REQUIRED[case]:
        if key not in model:
            raise ConfigError(f"case {case} requires model key {key!r}")
    if case in ("b", "c"):
        if ("num_bs" in model) == ("intensity" in model):
            raise ConfigError("give exactly one of num_bs or intensity")
    names = raw.get("methods", {}).get("names")
    if not names:
        raise ConfigError("missing [methods] names = ...")
    methods = tuple(m.strip() for m in names.split(",") if m.strip())
    for m in methods:
        if m not in _METHODS:
            raise ConfigError(f"unknown method {m!r}; choose from "
                              + ", ".join(_METHODS))
    sweep = raw.get("sweep")
    if sweep:
        for key in ("variable", "lo", "hi", "steps"):
            if key not in sweep:
                raise ConfigError(f"[sweep] requires {key}")
        var = sweep["variable"]
        if var not in _SWEEP_VARS:
            raise ConfigError(f"sweep variable must be one of {_SWEEP_VARS}")
        if var == "p_coop" and case != "a_binomial":
            raise ConfigError("sweep over p_coop needs case a_binomial")
        if var == "L" and case != "a_binomial":
            raise ConfigError("sweep over L needs case a_binomial")
        if var == "num_bs" and case not in ("b", "c"):
            raise ConfigError("sweep over num_bs needs case b or c")
        if sweep["steps"] < 1:
            raise ConfigError("sweep steps must be >= 1")
        grid = np.linspace(sweep["lo"], sweep["hi"], sweep["steps"])
        if var == "L":
            values = tuple(dict.fromkeys(int(round(v)) for v in grid))
        else:
            values = tuple(float(v) for v in grid)
        sweep_var, sweep_vals = var, values
    else:
        sweep_var, sweep_vals = None, (None,)
    knobs = {sec: dict(raw.get(sec, {}))
             for sec in ("gil_pelaez", "mc", "charlier")}
    return RunConfig(case=case, theta=theta, model_keys=dict(model),
                     methods=methods, sweep_variable=sweep_var,
                     sweep_values=sweep_vals, knobs=knobs)


def _build_model(cfg: RunConfig, sweep_value):
    keys = dict(cfg.model_keys)
    theta = cfg.theta
    if cfg.sweep_variable == "theta_db":
        theta = 10.0 ** (sweep_value / 10.0)
    elif cfg.sweep_variable is not None and sweep_value is not None:
        keys[cfg.sweep_variable] = sweep_value
        if cfg.sweep_variable == "num_bs":
            keys.pop("intensity", None)
    window = keys.get("window_radius", 1000.0)
    if cfg.case == "a_poisson":
        return CaseAModel(
            fading=FadingModel.gamma(keys["fading_shape"], keys["fading_rate"]),
            theta=theta, aggregation="poisson",
            lam1=keys["lam1"], lam2=keys["lam2"])
    if cfg.case == "a_binomial":
        return CaseAModel(
            fading=FadingModel.gamma(keys["fading_shape"], keys["fading_rate"]),
            theta=theta, aggregation="binomial",
            L=keys["L"], p=keys["p_coop"])
    intensity = keys.get("intensity")
    if intensity is None:
        intensity = keys["num_bs"] / (math.pi * window ** 2)
    geom = NetworkGeometry(intensity=intensity, a=keys["exclusion_radius"],
                           R=keys["cooperation_radius"],
                           alpha=keys["path_loss"],
                           P=keys.get("tx_power", 1.0))
    if cfg.case == "b":
        return CaseBModel(geom=geom, theta=theta, window=window)
    return CaseCModel(
        geom=geom, theta=theta,
        fading=FadingModel.gamma(keys["fading_shape"], keys["fading_rate"]),
        window=window)


def _model_cgf(cfg: RunConfig, model):
    if cfg.case in ("a_poisson", "a_binomial"):
        return case_a_cgf(model)
    if cfg.case == "b":
        return case_b_cgf(model)
    return case_c_cgf(model)


def _eval_point(cfg: RunConfig, model) -> float:
    if cfg.model_keys.get("sinr", False):
        return -model.theta * cfg.model_keys.get("noise_power", 1.0)
    return 0.0


def _run_cell(cfg: RunConfig, model, method: str) -> OutageResult:
    omega = _eval_point(cfg, model)
    if method == "mc":
        mk = cfg.knobs["mc"]
        sim = SimConfig(
            model=model, trials=mk.get("trials", 100_000),
            seed=mk.get("seed", 0),
            window_radius=cfg.model_keys.get("window_radius", 1000.0),
            sinr=cfg.model_keys.get("sinr", False),
            noise_power=cfg.model_keys.get("noise_power", 1.0),
            independent_counts=mk.get("independent_counts", False))
        res = simulate(sim)
        return OutageResult(probability=res.p_hat, method="mc",
                            err_estimate=res.std_err)
    cgf = _model_cgf(cfg, model)
    if method == "gil_pelaez":
        gk = cfg.knobs["gil_pelaez"]
        inv = InversionConfig(rel_tol=gk.get("rel_tol", 1e-8),
                              max_panels=gk.get("max_panels", 64))
        return outage_gp(cgf, omega, inv)
    if method.startswith("spa:"):
        return outage_spa(cgf, omega, base=method.split(":", 1)[1])
    ck = cfg.knobs["charlier"]
    order = ck.get("order", 6)
    mode = ck.get("mode", "standardized")
    cums = cgf.cumulants(order=8)
    moms = cumulants_to_moments(cums)
    if method == "charlier:hermite":
        return outage_hermite(moms, omega, max_order=order, mode=mode)
    return outage_krishnamoorthy(moms, cums, omega, max_order=order, mode=mode)


def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) \
        else f"{x:.9g}"


def _note_text(notes) -> str:
    return " | ".join(str(n).replace(",", ";").replace("\n", " ")
                      for n in notes)


def _worker_count(n_cells: int) -> int:
    cap = os.environ.get(_WORKER_ENV)
    if cap is None:
        return 1
    try:
        return max(1, min(int(cap), n_cells))
    except ValueError:
        return 1


def run(config_path: str, out=None) -> int:
    """Evaluate every (sweep point, method) cell and emit CSV. Returns exit code."""
    out = out or sys.stdout
    cfg = _build_run_config(parse_config(config_path))
    cells = [(sv, m) for sv in cfg.sweep_values for m in cfg.methods]

    def compute(cell):
        sv, method = cell
        try:
            model = _build_model(cfg, sv)
            return _run_cell(cfg, model, method)
        except (CapabilityError, OutageError, ArgumentError) as exc:
            return exc

    workers = _worker_count(len(cells))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(compute, cells))
    else:
        results = [compute(c) for c in cells]

    out.write("sweep_value,method,p_out,diag_err,diag_note\n")
    n_ok = 0
    for (sv, method), res in zip(cells, results):
        sv_txt = "" if sv is None else _fmt(float(sv))
        if isinstance(res, Exception):
            note = f"{type(res).__name__}: {res}"
            print(f"note: {method} at sweep={sv_txt or '-'}: {note}",
                  file=sys.stderr)
            out.write(f"{sv_txt},{method},NA,,{_note_text([note])}\n")
            continue
        n_ok += 1
        out.write(f"{sv_txt},{method},{_fmt(res.probability)},"
                  f"{_fmt(res.err_estimate)},{_note_text(res.notes)}\n")
    return 0 if n_ok else 2


def cumulants_cmd(config_path: str, out=None) -> int:
    """Emit kappa_1..kappa_8, skewness, excess kurtosis per sweep point."""
    out = out or sys.stdout
    cfg = _build_run_config(parse_config(config_path))
    header = ",".join(["sweep_value"] + [f"kappa_{n}" for n in range(1, 9)]
                      + ["skewness", "excess_kurtosis"])
    out.write(header + "\n")
    n_ok = 0
    for sv in cfg.sweep_values:
        sv_txt = "" if sv is None else _fmt(float(sv))
        try:
            model = _build_model(cfg, sv)
            kappa = _model_cgf(cfg, model).cumulants(order=8)
        except (CapabilityError, OutageError, ArgumentError) as exc:
            print(f"note: cumulants at sweep={sv_txt or '-'}: {exc}",
                  file=sys.stderr)
            out.write(f"{sv_txt}" + ",NA" * 10 + "\n")
            continue
        n_ok += 1
        cols = [_fmt(kappa[n]) for n in range(1, 9)]
        cols += [_fmt(kappa.skewness), _fmt(kappa.excess_kurtosis)]
        out.write(",".join([sv_txt] + cols) + "\n")
    return 0 if n_ok else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sinr-outage",
        description="Outage probability of a cooperative cellular downlink "
                    "by CF inversion, saddle point, orthogonal-series, and "
                    "Monte Carlo methods.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="evaluate outage over a sweep")
    p_run.add_argument("config", help="path to INI config file")
    p_cum = sub.add_parser("cumulants",
                           help="emit cumulants/shape stats over a sweep")
    p_cum.add_argument("config", help="path to INI config file")
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run(args.config)
        return cumulants_cmd(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
