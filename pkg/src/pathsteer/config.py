"""Flat key=value configuration covering every tunable parameter."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .phase1 import Phase1Config
from .prune_grips import PruneOriginalConfig
from .prune_hs import PruneHSConfig
from .steering import RobotParams, SteerConfig, SteeringGains


@dataclass(frozen=True)
class PlannerSettings:
    """Everything a planning run needs besides the map itself."""

    robot: RobotParams = field(default_factory=RobotParams)
    gains: SteeringGains = field(default_factory=SteeringGains)
    steer: SteerConfig = field(default_factory=SteerConfig)
    phase1: Phase1Config = field(default_factory=Phase1Config)
    prune: PruneOriginalConfig = field(default_factory=PruneOriginalConfig)
    prune_hs: PruneHSConfig = field(default_factory=PruneHSConfig)
    cell_size: float = 0.2
    min_clearance: float = 20.0  # scenario start/goal clearance, cells
    min_separation: float = 10.0  # scenario start/goal distance, cells


# key -> (settings section, field name); None means a top-level field.
_KEYMAP: dict[str, tuple[str | None, str]] = {
    "wheelbase": ("robot", "wheelbase"),
    "v_max": ("robot", "v_max"),
    "a_max": ("robot", "a_max"),
    "gamma_max": ("robot", "gamma_max"),
    "radius": ("robot", "radius"),
    "k_rho": ("gains", "k_rho"),
    "k_alpha": ("gains", "k_alpha"),
    "k_beta": ("gains", "k_beta"),
    "dt": ("steer", "dt"),
    "max_steps": ("steer", "max_steps"),
    "pos_tol": ("steer", "pos_tol"),
    "ang_tol": ("steer", "ang_tol"),
    "eta0": ("phase1", "eta0"),
    "discount": ("phase1", "discount"),
    "move_rounds": ("phase1", "move_rounds"),
    "d_min": ("phase1", "d_min"),
    "insert_rounds": ("phase1", "insert_rounds"),
    "max_prune_rounds": ("prune", "max_rounds"),
    "horizon": ("prune_hs", "horizon"),
    "max_offset": ("prune_hs", "max_offset"),
    "sample_step": ("prune_hs", "sample_step"),
    "extra_mode": ("prune_hs", "extra_mode"),
    "candidate_order": ("prune_hs", "candidate_order"),
    "cell_size": (None, "cell_size"),
    "min_clearance": (None, "min_clearance"),
    "min_separation": (None, "min_separation"),
}

_INT_FIELDS = {"max_steps", "move_rounds", "insert_rounds", "max_prune_rounds", "horizon"}
_STR_FIELDS = {"extra_mode", "candidate_order"}


def parse_settings(text: str, base: PlannerSettings | None = None) -> PlannerSettings:
    """Parse ``key = value`` lines (# comments allowed) over default settings."""
    settings = base if base is not None else PlannerSettings()
    overrides: dict[str, dict] = {}
    top: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYMAP:
            raise ValueError(f"config line {lineno}: unknown key '{key}'")
        if key in _STR_FIELDS:
            parsed: object = value
        elif key in _INT_FIELDS:
            parsed = int(value)
        else:
            parsed = float(value)
        section, name = _KEYMAP[key]
        if section is None:
            top[name] = parsed
        else:
            overrides.setdefault(section, {})[name] = parsed
    for section, values in overrides.items():
        settings = replace(settings, **{section: replace(getattr(settings, section), **values)})
    if top:
        settings = replace(settings, **top)
    return settings


def load_settings(path: str | Path, base: PlannerSettings | None = None) -> PlannerSettings:
    return parse_settings(Path(path).read_text(), base)


def dump_settings(settings: PlannerSettings) -> str:
    """Settings as config-file text, one key per line."""
    lines = []
    for key, (section, name) in _KEYMAP.items():
        obj = settings if section is None else getattr(settings, section)
        lines.append(f"{key} = {getattr(obj, name)}")
    return "\n".join(lines) + "\n"
