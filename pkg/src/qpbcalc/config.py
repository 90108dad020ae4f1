"""Run configuration: baked-in defaults, a key = value file, command-line overrides."""

from __future__ import annotations

import configparser
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import QpbError

ENV_VAR = "QPBCALC_CONFIG"


class ConfigError(QpbError):
    pass


@dataclass(frozen=True)
class Config:
    hopf_degree: int = 4
    window_degree: int = 2
    exponent_bound: int = 1
    overlap_length: int = 5
    samples: int = 100
    form_samples: int = 50
    equalizer_degree: int = 6
    separation_degree: int = 4
    gluing_degree: int = 2
    horizontal_degree: int = 2
    coinvariant_degree: int = 4
    seed: int = 0
    eval_points: tuple[int, ...] = (2, 3, 5)
    step_budget: int = 10**6

    def header(self) -> str:
        return " ".join(f"{k}={_fmt(v)}" for k, v in asdict(self).items())


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


def _parse(name: str, raw: str):
    kind = {f.name: f.type for f in fields(Config)}[name]
    try:
        if "tuple" in str(kind):
            return tuple(int(x) for x in raw.split(",") if x.strip())
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot read {raw!r}") from exc


def load_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> Config:
    """Defaults, then the file at ``path`` (or $QPBCALC_CONFIG), then ``overrides``."""
    cfg = Config()
    path = path or os.environ.get(ENV_VAR)
    known = {f.name for f in fields(Config)}
    if path:
        text = Path(path).read_text()
        cp = configparser.ConfigParser()
        cp.read_string("[qpbcalc]\n" + text)
        vals = {}
        for k, v in cp["qpbcalc"].items():
            if k not in known:
                raise ConfigError(f"unknown key {k!r} in {path}")
            vals[k] = _parse(k, v)
        cfg = replace(cfg, **vals)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg
