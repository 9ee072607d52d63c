"""Experiment configurations: the dataclass, shipped presets and JSON loading."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, fields
from pathlib import Path

import jsonschema

from .bounds import BoundError, theorem_presets

SCHEMES = ("alg1-rational", "alg1-hermitian", "alg2-hermitian", "baseline-repetition")
MODELS = ("none", "exact", "prf", "file")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One Monte-Carlo experiment.

    ``q`` is always the alphabet of the Reed-Muller word being decoded.  For
    ``alg1-hermitian`` the codex lives on the Hermitian curve over GF(q), so
    q must be a square; for ``alg2-hermitian`` the outer codex lives over
    GF(q^2).  ``sigma`` only feeds the nominal bound and the constraint check.
    """

    scheme: str
    q: int
    m: int
    d: int
    k: int
    t: int
    r: int
    n: int | None = None
    delta: float = 0.05
    error_model: str = "prf"
    trials: int = 1000
    seed: int | None = None
    preset: str | None = None
    theorem: str | None = None
    sigma: float | None = None
    s: int = 1
    poly: str = "auto"
    adversarial_file: str | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **{k: v for k, v in kw.items() if v is not None})

    def theorem_params(self) -> dict:
        p = dict(q=self.q, d=self.d, t=self.t, delta=self.delta, sigma=self.sigma, m=self.m)
        if self.theorem and self.theorem.startswith("thm4.5"):
            p.update(k=self.k, n=self.n)
        return p

    def validate(self) -> None:
        """Raise :class:`ConfigError` naming the first violated condition."""
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        if self.error_model not in MODELS:
            raise ConfigError(f"unknown error model {self.error_model!r}")
        if self.error_model == "file" and not self.adversarial_file:
            raise ConfigError("error model 'file' needs an adversarial file")
        if not 0 <= self.delta < 1:
            raise ConfigError("0 <= delta < 1 violated")
        if self.trials < 1:
            raise ConfigError("trials >= 1 violated")
        if self.scheme == "baseline-repetition" and self.s % 2 == 0:
            raise ConfigError(f"repetition count s={self.s} must be odd")
        if self.scheme == "alg1-hermitian" and math.isqrt(self.q) ** 2 != self.q:
            raise ConfigError("alg1-hermitian needs a square alphabet q")
        if self.scheme == "alg2-hermitian" and self.q <= self.d:
            raise ConfigError("q > d violated (no multiplication-friendly pair)")
        if self.theorem:
            try:
                pr = theorem_presets(self.theorem, **self.theorem_params())
            except BoundError as exc:
                raise ConfigError(str(exc)) from None
            bad = pr.violated
            if bad:
                raise ConfigError(f"{bad[0]} violated ({pr.name})")


# Desk-scale presets.  Each comment says which result the parameters follow
# and where the desk-scale choice departs from it.
PRESETS: dict[str, ExperimentConfig] = {
    # rational line codex over GF(5), t = 1, sigma = r/n = 3/4
    "gf5-t1": ExperimentConfig("alg1-rational", q=5, m=2, d=2, k=1, t=1, r=3, n=4,
                               theorem="ex4.1i", sigma=0.75, trials=1000),
    # GF(5) with t = 2 forces d = 1 (r > 2d and r <= n = 4); used for the exact independence audit
    "gf5-t2": ExperimentConfig("alg1-rational", q=5, m=2, d=1, k=1, t=2, r=3, n=4, trials=1000,
                               note="d = 1 is the only degree a t = 2 codex over GF(5) admits"),
    "gf7": ExperimentConfig("alg1-rational", q=7, m=2, d=2, k=1, t=1, r=3, n=6,
                            theorem="ex4.1i", sigma=0.5, trials=1000),
    # single point on a line over GF(256): d <= sigma(q-1) - 1 with sigma = 1/2
    "ex4.1i": ExperimentConfig("alg1-rational", q=256, m=4, d=126, k=1, t=1, r=127, n=255,
                               theorem="ex4.1i", sigma=0.5, trials=10000),
    # degree-2 curves, r = 2 sigma (q-1)
    "ex4.1ii": ExperimentConfig("alg1-rational", q=256, m=8, d=50, k=1, t=2, r=102, n=255,
                                theorem="ex4.1ii", sigma=0.2, trials=100000),
    # degree-4 curves, d <= sigma(q-1)/t - 1/t, r = sigma(q-1)
    "ex4.1iii": ExperimentConfig("alg1-rational", q=256, m=8, d=12, k=1, t=4, r=51, n=255,
                                 theorem="ex4.1iii", sigma=0.2, trials=100000),
    "thm4.5i": ExperimentConfig("alg1-rational", q=256, m=2, d=12, k=8, t=1, r=100, n=200,
                                theorem="thm4.5i", sigma=0.5, trials=10000),
    # sigma = r/n = 0.16; the acceptance bound is evaluated at sigma = d(k+2)/n = 0.15
    "thm4.5ii": ExperimentConfig("alg1-rational", q=256, m=8, d=3, k=8, t=2, r=32, n=200,
                                 theorem="thm4.5ii", sigma=0.16, trials=100000),
    "thm4.5iii": ExperimentConfig("alg1-rational", q=256, m=2, d=8, k=8, t=4, r=100, n=200,
                                  theorem="thm4.5iii", sigma=0.5, trials=10000),
    # Hermitian curve over GF(9): n = 26 places after the target, deg G = 7, deg dG = 14
    "herm3-alg1": ExperimentConfig("alg1-hermitian", q=9, m=2, d=2, k=1, t=1, r=15, n=26, trials=1000),
    # interleaved Hermitian codex over GF(16) with a (2,2,4)-pair; qn = 252 queries.
    # The single-point Hermitian regime (d <= sigma q with sigma < (1 - 2 delta)/2) is empty at q = 4.
    "herm4-alg2": ExperimentConfig("alg2-hermitian", q=4, m=4, d=2, k=1, t=4, r=33, n=63, trials=10000,
                                   note="nominal regime empty at q = 4; only the effective bound applies"),
    # four targets on the Hermitian curve; rho = (k + t + q^2 - q)/q^2 = 1.25 so the nominal regime is empty
    "thm4.5iv": ExperimentConfig("alg2-hermitian", q=4, m=4, d=2, k=4, t=4, r=39, n=60, trials=2000,
                                 note="rho > 1 at q = 4; only the effective bound applies"),
    # repetition baseline built from the degree-2 curve decoder
    "baseline-ex4.1ii": ExperimentConfig("baseline-repetition", q=256, m=8, d=50, k=2, t=2, r=102, n=255,
                                         theorem="ex4.1ii", sigma=0.2, s=3, trials=2000),
}

BOUND_ONLY_PRESETS = ("thm4.4", "cor4.4", "thm4.5v", "thm2")


_FIELD_TYPES = {
    "scheme": {"type": "string", "enum": list(SCHEMES)},
    "q": {"type": "integer", "minimum": 2},
    "m": {"type": "integer", "minimum": 1},
    "d": {"type": "integer", "minimum": 1},
    "k": {"type": "integer", "minimum": 1},
    "t": {"type": "integer", "minimum": 1},
    "r": {"type": "integer", "minimum": 1},
    "n": {"type": ["integer", "null"], "minimum": 1},
    "delta": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
    "error_model": {"type": "string", "enum": list(MODELS)},
    "trials": {"type": "integer", "minimum": 1},
    "seed": {"type": ["integer", "null"], "minimum": 0},
    "preset": {"type": ["string", "null"]},
    "theorem": {"type": ["string", "null"]},
    "sigma": {"type": ["number", "null"], "minimum": 0, "exclusiveMaximum": 1},
    "s": {"type": "integer", "minimum": 1},
    "poly": {"type": "string", "enum": ["auto", "dense", "sparse"]},
    "adversarial_file": {"type": ["string", "null"]},
    "note": {"type": "string"},
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": _FIELD_TYPES,
    "additionalProperties": False,
}

_REQUIRED = ("scheme", "q", "m", "d", "k", "t", "r")


def config_from_dict(data: dict, require_seed: bool = False, validate: bool = True) -> ExperimentConfig:
    """Build a config from JSON data; a ``preset`` key supplies defaults for absent fields."""
    try:
        jsonschema.validate(data, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "config"
        raise ConfigError(f"{where}: {exc.message}") from None
    base = {}
    if data.get("preset"):
        base = preset_config(data["preset"]).to_dict()
    merged = {**base, **data}
    missing = [k for k in _REQUIRED if k not in merged]
    if missing:
        raise ConfigError(f"missing required field(s): {', '.join(missing)}")
    cfg = ExperimentConfig(**{f.name: merged[f.name] for f in fields(ExperimentConfig) if f.name in merged})
    if require_seed and cfg.seed is None:
        raise ConfigError("a master seed is required")
    if validate:
        cfg.validate()
    return cfg


def load_config(path, require_seed: bool = False) -> ExperimentConfig:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file {p} not found") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{p}: top level must be an object")
    return config_from_dict(data, require_seed=require_seed)


def preset_config(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        extra = f" (bound-only: {', '.join(BOUND_ONLY_PRESETS)})"
        raise ConfigError(f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}{extra}")
    return dataclasses.replace(PRESETS[name], preset=name)


def dump_presets(names=None) -> dict:
    return {name: preset_config(name).to_dict() for name in (names or PRESETS)}
