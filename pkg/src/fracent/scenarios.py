"""Scenario configs and the sweeps behind ``fracent run``.

A config is one JSON object.  ``scenario`` selects the sweep; each scenario
has a fixed set of required physics keys and unknown keys are rejected.
Masses accept a number or ``"critical"`` (replaced by ``numerics.mass_min``).
Integer sweeps (``n_d``, ``ell``) accept an int, a list, or a closed range
``{"start": a, "stop": b, "step": s}``; time grids are closed ranges of
floats.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import jsonschema
import numpy as np

from fracent import chain, correlators, gaussian, otoc, quasiparticle
from fracent.analysis import DEFAULT_EXP_WINDOW, DEFAULT_POWER_WINDOW, fit_decay
from fracent.errors import ConfigError, FracentError, NumericsUnhealthy

SCENARIOS = (
    "static_negativity_vs_separation",
    "static_negativity_vs_subsystem",
    "quench_negativity_vs_time",
    "quench_entropy_vs_time",
    "dip_vs_system_size",
    "quasiparticle_prediction",
    "otoc_vs_time",
)

REQUIRED = {
    "static_negativity_vs_separation": ["L", "alpha", "mass", "n_A", "n_B", "n_d"],
    "static_negativity_vs_subsystem": ["L", "alpha", "mass", "ell", "n_d"],
    "quench_negativity_vs_time": ["L", "alpha", "m_pre", "m_post", "n_A", "n_B", "n_d", "time"],
    "quench_entropy_vs_time": ["L", "alpha", "m_pre", "m_post", "ell", "time"],
    "dip_vs_system_size": ["alpha", "m_pre", "m_post", "ell", "L_list"],
    "quasiparticle_prediction": ["L", "alpha", "m_pre", "m_post", "ell", "time"],
    "otoc_vs_time": ["L", "alpha", "m_pre", "m_post", "sep", "time"],
}

OPTIONAL = {
    "static_negativity_vs_separation": ["fit"],
    "dip_vs_system_size": ["dip"],
    "otoc_vs_time": ["exact_commutator"],
}

COLUMNS = {
    "static_negativity_vs_separation": ["alpha", "n_d", "E_LN", "residual", "clamped"],
    "static_negativity_vs_subsystem": ["alpha", "ell", "E_LN", "residual", "clamped"],
    "quench_negativity_vs_time": ["alpha", "n_d", "t", "E_LN", "residual", "clamped"],
    "quench_entropy_vs_time": [
        "alpha", "ell", "t", "S", "S_per_site", "S_predicted", "residual", "clamped",
    ],
    "dip_vs_system_size": [
        "alpha", "L", "ell", "t_revival", "saturation", "t_dip", "delta_S",
        "t_dip_predicted", "delta_S_predicted", "residual", "clamped",
    ],
    "quasiparticle_prediction": ["alpha", "ell", "t", "S_finite", "S_continuum", "residual", "clamped"],
    "otoc_vs_time": ["alpha", "sep", "t", "c", "b", "residual", "clamped"],
}

_number = {"type": "number"}
_pos_int = {"type": "integer", "minimum": 1}
_mass = {"oneOf": [{"type": "number", "minimum": 0}, {"const": "critical"}]}
_int_range = {
    "type": "object",
    "properties": {"start": {"type": "integer"}, "stop": {"type": "integer"}, "step": _pos_int},
    "required": ["start", "stop"],
    "additionalProperties": False,
}
_int_sweep = {
    "oneOf": [
        {"type": "integer", "minimum": 0},
        {"type": "array", "items": {"type": "integer", "minimum": 0}},
        _int_range,
    ]
}
_window = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}

PROPERTIES = {
    "scenario": {"enum": list(SCENARIOS)},
    "L": {"type": "integer", "minimum": 2},
    "alpha": {
        "oneOf": [
            {"type": "number", "exclusiveMinimum": 0},
            {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 1},
        ]
    },
    "mass": _mass,
    "m_pre": _mass,
    "m_post": _mass,
    "n_A": _pos_int,
    "n_B": _pos_int,
    "n_d": _int_sweep,
    "ell": _int_sweep,
    "L_list": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
    "sep": {"type": "integer", "minimum": 0},
    "exact_commutator": {"type": "boolean"},
    "time": {
        "type": "object",
        "properties": {"start": _number, "stop": _number, "step": {"type": "number", "exclusiveMinimum": 0}},
        "required": ["start", "stop", "step"],
        "additionalProperties": False,
    },
    "fit": {
        "type": "object",
        "properties": {"power_window": _window, "exp_window": _window, "min_points": _pos_int},
        "additionalProperties": False,
    },
    "dip": {
        "type": "object",
        "properties": {"window": _window, "dt": {"type": "number", "exclusiveMinimum": 0}},
        "additionalProperties": False,
    },
    "numerics": {
        "type": "object",
        "properties": {
            "eps_zero": {"type": "number", "exclusiveMinimum": 0},
            "clamp_tol": {"type": "number", "minimum": 0},
            "mass_min": {"type": "number", "exclusiveMinimum": 0},
            "max_residual": {"type": "number", "exclusiveMinimum": 0},
            "max_clamped": {"type": "integer", "minimum": 0},
        },
        "additionalProperties": False,
    },
    "output": {
        "type": "object",
        "properties": {"path": {"type": "string"}, "format": {"enum": ["csv", "csv+json"]}},
        "additionalProperties": False,
    },
}


def schema_for(scenario):
    allowed = ["scenario", *REQUIRED[scenario], *OPTIONAL.get(scenario, []), "numerics", "output"]
    return {
        "type": "object",
        "properties": {k: PROPERTIES[k] for k in allowed},
        "required": ["scenario", *REQUIRED[scenario]],
        "additionalProperties": False,
    }


@dataclass(frozen=True)
class Numerics:
    eps_zero: float = chain.EPS_ZERO
    clamp_tol: float = gaussian.CLAMP_TOL
    mass_min: float = chain.MASS_MIN
    max_residual: float = gaussian.HEALTH_RESIDUAL
    max_clamped: int = None


@dataclass
class ScenarioConfig:
    scenario: str
    params: dict
    numerics: Numerics = field(default_factory=Numerics)
    output_path: str = None
    output_format: str = "csv"

    def resolved(self):
        """Config echo with defaults filled in; goes into the output header."""
        out = {"scenario": self.scenario, **self.params}
        out["numerics"] = {k: v for k, v in asdict(self.numerics).items() if v is not None}
        out["output"] = {"format": self.output_format}
        if self.output_path is not None:
            out["output"]["path"] = self.output_path
        return out


def validate(raw):
    """Schema-check a parsed config and return a :class:`ScenarioConfig`."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {', '.join(SCENARIOS)}; got {scenario!r}")
    try:
        jsonschema.validate(raw, schema_for(scenario))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None
    params = {k: v for k, v in raw.items() if k not in ("scenario", "numerics", "output")}
    numerics = Numerics(**raw.get("numerics", {}))
    out = raw.get("output", {})
    cfg = ScenarioConfig(scenario, params, numerics, out.get("path"), out.get("format", "csv"))
    _check_geometry(cfg)
    return cfg


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return validate(raw)


# ------------------------------------------------------------------ helpers


def int_sweep(value):
    if isinstance(value, int):
        return [value]
    if isinstance(value, list):
        return list(value)
    step = value.get("step", 1)
    return list(range(value["start"], value["stop"] + 1, step))


def time_grid(spec):
    """Closed grid ``start, start+step, ..., stop`` computed by index (no accumulation)."""
    start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
    if stop < start:
        return np.array([])
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(n)


def alphas(params):
    a = params["alpha"]
    return [float(x) for x in a] if isinstance(a, list) else [float(a)]


def _mass(value, numerics):
    return numerics.mass_min if value == "critical" else float(value)


def _check_geometry(cfg):
    p = cfg.params
    L = p.get("L")
    if L is None:
        return
    if cfg.scenario in ("static_negativity_vs_separation", "quench_negativity_vs_time"):
        for nd in int_sweep(p["n_d"]):
            if p["n_A"] + p["n_B"] + nd > L:
                raise ConfigError(f"n_A + n_B + n_d = {p['n_A'] + p['n_B'] + nd} exceeds L = {L}")
    if cfg.scenario == "static_negativity_vs_subsystem":
        for nd in int_sweep(p["n_d"]):
            for ell in int_sweep(p["ell"]):
                if 2 * ell + nd > L:
                    raise ConfigError(f"2*ell + n_d = {2 * ell + nd} exceeds L = {L}")
    if cfg.scenario in ("quench_entropy_vs_time", "quasiparticle_prediction"):
        for ell in int_sweep(p["ell"]):
            if not 1 <= ell <= L:
                raise ConfigError(f"ell = {ell} outside 1..{L}")
    if cfg.scenario == "otoc_vs_time" and p["sep"] >= L:
        raise ConfigError(f"sep = {p['sep']} must be < L = {L}")


# ------------------------------------------------------------------ sweeps


def _static(cfg, alpha):
    return chain.QuenchSpec.static(chain.ChainSpec(cfg.params["L"], alpha, _mass(cfg.params["mass"], cfg.numerics)))


def _quench(cfg, alpha, L=None):
    p, n = cfg.params, cfg.numerics
    return chain.QuenchSpec.mass_quench(L or p["L"], alpha, _mass(p["m_pre"], n), _mass(p["m_post"], n))


def _negativity_point(q, t, n_a, n_b, n_d, numerics):
    a, b = correlators.two_blocks(n_a, n_b, n_d)
    cov = correlators.realspace_correlators(q, t, np.concatenate([a, b]), numerics.eps_zero)
    neg = gaussian.negativity_details(cov, a, b)
    return neg.value, neg.spectrum.residual, 0


def _entropy_point(q, t, ell, numerics):
    cov = correlators.realspace_correlators(q, t, correlators.block(1, ell), numerics.eps_zero)
    spec = gaussian.symplectic_spectrum(cov.gamma, clamp_tol=numerics.clamp_tol)
    return gaussian.entanglement_entropy(spec, numerics.clamp_tol), spec.residual, spec.clamped


def _run_points(fn, points, workers):
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: fn(*p), points))
    return [fn(*p) for p in points]


def sweep_static_separation(cfg, workers):
    p, n = cfg.params, cfg.numerics
    points = [(a, nd) for a in alphas(p) for nd in int_sweep(p["n_d"])]
    specs = {a: _static(cfg, a) for a in alphas(p)}
    res = _run_points(lambda a, nd: _negativity_point(specs[a], 0.0, p["n_A"], p["n_B"], nd, n), points, workers)
    return [(a, nd, *r) for (a, nd), r in zip(points, res)]


def sweep_static_subsystem(cfg, workers):
    p, n = cfg.params, cfg.numerics
    points = [(a, nd, ell) for a in alphas(p) for nd in int_sweep(p["n_d"]) for ell in int_sweep(p["ell"])]
    specs = {a: _static(cfg, a) for a in alphas(p)}
    res = _run_points(lambda a, nd, ell: _negativity_point(specs[a], 0.0, ell, ell, nd, n), points, workers)
    return [(a, ell, *r) for (a, nd, ell), r in zip(points, res)]


def sweep_quench_negativity(cfg, workers):
    p, n = cfg.params, cfg.numerics
    times = time_grid(p["time"])
    quenches = {a: _quench(cfg, a) for a in alphas(p)}
    points = [(a, nd, t) for a in alphas(p) for nd in int_sweep(p["n_d"]) for t in times]
    res = _run_points(
        lambda a, nd, t: _negativity_point(quenches[a], t, p["n_A"], p["n_B"], nd, n), points, workers
    )
    return [(a, nd, float(t), *r) for (a, nd, t), r in zip(points, res)]


def sweep_quench_entropy(cfg, workers):
    p, n = cfg.params, cfg.numerics
    times = time_grid(p["time"])
    rows = []
    for ell in int_sweep(p["ell"]):
        for a in alphas(p):
            q = _quench(cfg, a)
            pred = quasiparticle.entropy_prediction_finite(q, times, ell) if times.size else []
            res = _run_points(lambda t: _entropy_point(q, t, ell, n), [(t,) for t in times], workers)
            for t, sp, (s, resid, clamped) in zip(times, pred, res):
                rows.append((a, ell, float(t), s, s / ell, float(sp), resid, clamped))
    return rows


def sweep_quasiparticle(cfg, workers):
    p = cfg.params
    times = time_grid(p["time"])
    rows = []
    for ell in int_sweep(p["ell"]):
        for a in alphas(p):
            q = _quench(cfg, a)
            finite = quasiparticle.entropy_prediction_finite(q, times, ell) if times.size else []
            for t, sf in zip(times, finite):
                sc = quasiparticle.entropy_prediction_continuum(q, t, ell)
                rows.append((a, ell, float(t), float(sf), sc, 0.0, 0))
    return rows


def sweep_dip(cfg, workers):
    p = cfg.params
    dip = p.get("dip", {})
    window = tuple(dip.get("window", (0.5, 1.5)))
    dt = dip.get("dt", 0.5)
    rows = []
    for ell in int_sweep(p["ell"]):
        for a in alphas(p):
            q = _quench(cfg, a, L=max(p["L_list"]))

            def one(L):
                r = quasiparticle.dip_height(q, ell, [L], window, dt)[0]
                _, resid, clamped = _entropy_point(_quench(cfg, a, L=L), r.t_dip, ell, cfg.numerics)
                return r, resid, clamped

            for r, resid, clamped in _run_points(one, [(L,) for L in p["L_list"]], workers):
                rows.append(
                    (a, r.L, r.ell, r.t_revival, r.saturation, r.t_dip, r.delta_s,
                     r.t_dip_predicted, r.delta_s_predicted, resid, clamped)
                )
    return rows


def sweep_otoc(cfg, workers):
    p = cfg.params
    times = time_grid(p["time"])
    exact = p.get("exact_commutator", False)
    rows = []
    for a in alphas(p):
        q = _quench(cfg, a)
        series = otoc.otoc_series(q, p["sep"], times, exact)
        for t, c in zip(series.times, series.c):
            rows.append((a, p["sep"], float(t), float(c), float(math.sqrt(c)), 0.0, 0))
    return rows


SWEEPS = {
    "static_negativity_vs_separation": sweep_static_separation,
    "static_negativity_vs_subsystem": sweep_static_subsystem,
    "quench_negativity_vs_time": sweep_quench_negativity,
    "quench_entropy_vs_time": sweep_quench_entropy,
    "dip_vs_system_size": sweep_dip,
    "quasiparticle_prediction": sweep_quasiparticle,
    "otoc_vs_time": sweep_otoc,
}


@dataclass
class ScenarioResult:
    config: ScenarioConfig
    columns: list
    rows: list
    extras: dict = field(default_factory=dict)


def check_health(cfg, rows, columns):
    ir, ic = columns.index("residual"), columns.index("clamped")
    worst = max((r[ir] for r in rows), default=0.0)
    if worst > cfg.numerics.max_residual:
        raise NumericsUnhealthy(f"residual {worst:.3e} exceeds {cfg.numerics.max_residual:.1e}")
    if cfg.numerics.max_clamped is not None:
        clamps = max((r[ic] for r in rows), default=0)
        if clamps > cfg.numerics.max_clamped:
            raise NumericsUnhealthy(f"{clamps} clamped eigenvalues exceed {cfg.numerics.max_clamped}")


def _fits(cfg, rows):
    fit = {
        "power_window": list(DEFAULT_POWER_WINDOW),
        "exp_window": list(DEFAULT_EXP_WINDOW),
        **cfg.params.get("fit", {}),
    }
    out = {}
    for a in alphas(cfg.params):
        x = np.array([r[1] for r in rows if r[0] == a], dtype=float)
        y = np.array([r[2] for r in rows if r[0] == a], dtype=float)
        entry = {}
        for model, key in (("power", "power_window"), ("exponential", "exp_window")):
            try:
                f = fit_decay(x, y, model, tuple(fit[key]), fit.get("min_points", 4))
                entry[model] = asdict(f)
            except FracentError as exc:
                entry[model] = {"error": f"{type(exc).__name__}: {exc}"}
        out[repr(a)] = entry
    return out


def run_scenario(cfg, workers=1, strict=False):
    rows = SWEEPS[cfg.scenario](cfg, max(1, int(workers)))
    columns = COLUMNS[cfg.scenario]
    rows.sort(key=lambda r: tuple(r[:_n_keys(cfg.scenario)]))
    if strict:
        check_health(cfg, rows, columns)
    extras = {}
    if cfg.scenario == "static_negativity_vs_separation":
        extras["fits"] = _fits(cfg, rows)
    return ScenarioResult(cfg, columns, rows, extras)


def _n_keys(scenario):
    return {
        "static_negativity_vs_separation": 2,
        "static_negativity_vs_subsystem": 2,
        "quench_negativity_vs_time": 3,
        "quench_entropy_vs_time": 3,
        "dip_vs_system_size": 3,
        "quasiparticle_prediction": 3,
        "otoc_vs_time": 3,
    }[scenario]
