"""``key = value`` run configuration with line-precise validation.

Recognised keys and defaults::

    equation                 phnls            # phnls | dcr
    grid.n_points            256              # power of two >= 8
    grid.half_length         32.0
    n_modes                  8                # 1 .. 512
    integrator.scheme        strang_phnls     # strang_phnls | lawson_rk4_dcr
    integrator.dt            0.01
    integrator.t_end         1.0
    integrator.diag_stride   10
    initial_data.kind        gaussian_mode0   # gaussian_mode0 | mode_mix | checkpoint
    initial_data.sigma       1.0
    initial_data.amplitude   1.0
    initial_data.modes       0:1.0:1.0        # comma-separated n:amplitude:sigma
    initial_data.path        (none)
    sweep.t_end              0.5
    sweep.theta              0.1
    sweep.lambdas            2,4,8
    seed                     0
    output_dir               out

When ``integrator.scheme`` is omitted it follows ``equation``.
"""

import math
from dataclasses import dataclass, field, fields, replace

from .evolve import IntegratorSpec
from .hermite import MAX_MODES

PAIRING = {"phnls": "strang_phnls", "dcr": "lawson_rk4_dcr"}
INITIAL_KINDS = ("gaussian_mode0", "mode_mix", "checkpoint")


class ConfigError(ValueError):
    def __init__(self, message, key=None, line=None):
        where = f"line {line}: " if line is not None else ""
        what = f"{key}: " if key else ""
        super().__init__(f"{where}{what}{message}")
        self.key = key
        self.line = line


@dataclass(frozen=True)
class RunConfig:
    equation: str = "phnls"
    n_points: int = 256
    half_length: float = 32.0
    n_modes: int = 8
    scheme: str = "strang_phnls"
    dt: float = 0.01
    t_end: float = 1.0
    diag_stride: int = 10
    initial_kind: str = "gaussian_mode0"
    sigma: float = 1.0
    amplitude: float = 1.0
    modes: tuple = ((0, 1.0, 1.0),)
    checkpoint_path: str = ""
    sweep_t_end: float = 0.5
    sweep_theta: float = 0.1
    sweep_lambdas: tuple = (2.0, 4.0, 8.0)
    seed: int = 0
    output_dir: str = "out"

    def integrator(self):
        return IntegratorSpec(self.scheme, self.dt, self.t_end, self.diag_stride)

    def as_dict(self):
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = [list(m) for m in v] if f.name == "modes" else (list(v) if isinstance(v, tuple) else v)
        return out


def _int(text):
    v = int(text, 10)
    return v


def _float(text):
    v = float(text)
    if not math.isfinite(v):
        raise ValueError("must be finite")
    return v


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text
    return parse


def _modes(text):
    out = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 3:
            raise ValueError("entries must read n:amplitude:sigma")
        out.append((int(parts[0]), float(parts[1]), float(parts[2])))
    return tuple(out)


def _floats(text):
    return tuple(float(p) for p in text.split(",") if p.strip())


# key -> (attribute, parser)
KEYS = {
    "equation": ("equation", _choice(tuple(PAIRING))),
    "grid.n_points": ("n_points", _int),
    "grid.half_length": ("half_length", _float),
    "n_modes": ("n_modes", _int),
    "integrator.scheme": ("scheme", _choice(tuple(PAIRING.values()))),
    "integrator.dt": ("dt", _float),
    "integrator.t_end": ("t_end", _float),
    "integrator.diag_stride": ("diag_stride", _int),
    "initial_data.kind": ("initial_kind", _choice(INITIAL_KINDS)),
    "initial_data.sigma": ("sigma", _float),
    "initial_data.amplitude": ("amplitude", _float),
    "initial_data.modes": ("modes", _modes),
    "initial_data.path": ("checkpoint_path", str),
    "sweep.t_end": ("sweep_t_end", _float),
    "sweep.theta": ("sweep_theta", _float),
    "sweep.lambdas": ("sweep_lambdas", _floats),
    "seed": ("seed", _int),
    "output_dir": ("output_dir", str),
}


def parse_config(text):
    """Parse and validate configuration text into a :class:`RunConfig`.

    Raises
    ------
    ConfigError
        Naming the offending key and line for unknown keys, unparsable
        values and guard violations.
    """
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        attr, parser = KEYS[key]
        try:
            values[attr] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"invalid value {value!r} ({exc})", key=key, line=lineno) from None
        lines[attr] = (key, lineno)
    if "scheme" not in values and "equation" in values:
        values["scheme"] = PAIRING[values["equation"]]
    cfg = replace(RunConfig(), **values)
    validate(cfg, lines)
    return cfg


def validate(cfg, lines=None):
    lines = lines or {}

    def fail(attr, msg):
        key, lineno = lines.get(attr, (next(k for k, v in KEYS.items() if v[0] == attr), None))
        raise ConfigError(msg, key=key, line=lineno)

    n = cfg.n_points
    if n < 8 or n & (n - 1):
        fail("n_points", "n_points must be a power of two >= 8")
    if not cfg.half_length > 0:
        fail("half_length", "half_length must be positive")
    if not 1 <= cfg.n_modes <= MAX_MODES:
        fail("n_modes", f"n_modes must be in [1, {MAX_MODES}]")
    if PAIRING[cfg.equation] != cfg.scheme:
        fail("scheme", f"equation {cfg.equation} requires integrator.scheme = {PAIRING[cfg.equation]}")
    if not cfg.dt > 0:
        fail("dt", "dt must be positive")
    if not cfg.t_end > 0:
        fail("t_end", "t_end must be positive")
    if cfg.dt > cfg.t_end:
        fail("dt", "dt must not exceed t_end")
    if cfg.diag_stride < 1:
        fail("diag_stride", "diag_stride must be >= 1")
    if cfg.scheme == "strang_phnls":
        try:
            cfg.integrator().check_guard(cfg.n_modes)
        except ValueError as exc:
            fail("dt", str(exc))
    if cfg.initial_kind == "mode_mix":
        for mode, _, sig in cfg.modes:
            if not 0 <= mode < cfg.n_modes:
                fail("modes", f"mode {mode} outside 0..{cfg.n_modes - 1}")
            if not sig > 0:
                fail("modes", "sigma must be positive")
    if cfg.initial_kind == "gaussian_mode0" and not cfg.sigma > 0:
        fail("sigma", "sigma must be positive")
    if cfg.initial_kind == "checkpoint" and not cfg.checkpoint_path:
        fail("checkpoint_path", "initial_data.path is required for checkpoint data")
    if cfg.seed < 0 or cfg.seed >= 2**64:
        fail("seed", "seed must be an unsigned 64-bit integer")
    for lam in cfg.sweep_lambdas:
        k = math.log2(lam) if lam > 0 else 0.5
        if abs(k - round(k)) > 1e-12:
            fail("sweep_lambdas", f"scale {lam} is not a power of two")
    return cfg
