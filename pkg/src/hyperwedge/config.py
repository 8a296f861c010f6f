"""Run configuration: nested dataclasses loaded from JSON or YAML."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from pathlib import Path

from .errors import BlendNotConvex, ConfigError
from .model import FlowConstants
from .wall import make_blended_profile, make_pure_tail_profile


@dataclass
class WallConfig:
    flat: float = 0.3
    sharp: float = 0.6
    alpha: float = 1.0
    delta: float = 0.05
    kind: str = "blended"


@dataclass
class GridConfig:
    nk: int = 256
    ns: int = 32


@dataclass
class TruncationConfig:
    """Truncation distances as fractions of ``sharp - flat``."""

    eta_l: float = 0.01
    eta_r: float = 0.01
    edge_mode: str = "truncation"


@dataclass
class Tolerances:
    refine_rel_change: float = 0.10
    max_refinements: int = 2
    solver_rel_residual: float = 1e-10
    edge_buffer: float = 0.02


@dataclass
class RunConfig:
    q_bar: float = 2.0
    wall: WallConfig = field(default_factory=WallConfig)
    eps_list: list = field(default_factory=lambda: [1e-2, 3e-3, 1e-3, 3e-4])
    grid: GridConfig = field(default_factory=GridConfig)
    truncation: TruncationConfig = field(default_factory=TruncationConfig)
    tolerances: Tolerances = field(default_factory=Tolerances)
    output_dir: str = "out"
    workers: int = 1

    # derived objects
    def flow_constants(self) -> FlowConstants:
        return FlowConstants(self.q_bar)

    def profile(self):
        w = self.wall
        if w.kind == "blended":
            return make_blended_profile(w.flat, w.sharp, w.alpha, w.delta)
        return make_pure_tail_profile(w.flat, w.sharp, w.alpha, w.delta)

    def etas(self):
        span = self.wall.sharp - self.wall.flat
        return self.truncation.eta_l * span, self.truncation.eta_r * span

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> "RunConfig":
        """Check every module precondition up front.

        Raises
        ------
        ConfigError
            Naming the violated condition.
        """
        w = self.wall
        if not (self.q_bar > 0 and math.isfinite(self.q_bar)):
            raise ConfigError("q_bar must be positive")
        if not (0 < w.flat < w.sharp):
            raise ConfigError("need 0 < flat < sharp")
        if w.sharp >= math.sqrt(0.5):
            raise ConfigError("sharp must satisfy the supersonic wall condition "
                              "sharp < sqrt((gamma - 1) / 2) = sqrt(1/2)")
        if w.alpha <= 0:
            raise ConfigError("alpha must be positive")
        if not (0 < w.delta < w.sharp - w.flat):
            raise ConfigError("delta must lie in (0, sharp - flat)")
        if w.kind not in ("blended", "pure_tail"):
            raise ConfigError(f"unknown wall kind {w.kind!r}")
        try:
            self.profile()
        except (BlendNotConvex, ValueError) as exc:
            raise ConfigError(f"wall profile rejected: {exc}") from exc
        eps_max = self.flow_constants().eps_max
        if not self.eps_list:
            raise ConfigError("eps_list is empty")
        for e in self.eps_list:
            if not (0 < e < eps_max):
                raise ConfigError(f"eps={e} outside (0, eps_max={eps_max:.6g})")
        if self.grid.nk < 16 or self.grid.ns < 8:
            raise ConfigError("grid must be at least 16x8")
        t = self.truncation
        if not (0 < t.eta_l < 0.5 and 0 < t.eta_r < 0.5):
            raise ConfigError("truncation fractions must lie in (0, 0.5)")
        if t.edge_mode not in ("truncation", "capped"):
            raise ConfigError(f"unknown edge mode {t.edge_mode!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        return self


def _build(cls, data):
    if not isinstance(data, dict):
        raise ConfigError(f"section for {cls.__name__} must be a mapping")
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown keys in {cls.__name__}: {sorted(unknown)}")
    kwargs = {}
    defaults = cls()
    for name, val in data.items():
        cur = getattr(defaults, name)
        if is_dataclass(cur):
            kwargs[name] = _build(type(cur), val)
        elif isinstance(cur, list):
            kwargs[name] = [float(x) for x in val]
        elif isinstance(cur, bool):
            kwargs[name] = bool(val)
        elif isinstance(cur, int):
            kwargs[name] = int(val)
        elif isinstance(cur, float):
            kwargs[name] = float(val)
        else:
            kwargs[name] = val
    return cls(**kwargs)


def config_from_dict(data: dict) -> RunConfig:
    try:
        return _build(RunConfig, data or {})
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path) -> RunConfig:
    """Read a ``.json`` or ``.yaml``/``.yml`` file (nested keys as in :class:`RunConfig`)."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    if p.suffix.lower() in (".yaml", ".yml"):
        import yaml
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}") from exc
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
    return config_from_dict(data)
