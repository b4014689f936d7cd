"""Run-time limits shared by the library and the CLI."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Config:
    level_cap: int = 6
    materialization_cap: int = 5
    rohlin_scan_bound: int = 30
    # full odometer orbits are enumerated only up to this factorial
    orbit_cap: int = 8
    seed: int = 0

    def __post_init__(self):
        if min(self.level_cap, self.materialization_cap, self.rohlin_scan_bound) < 1:
            raise ValueError("caps must be positive")
        if self.materialization_cap > self.level_cap:
            raise ValueError("materialization_cap may not exceed level_cap")

    def with_(self, **changes):
        return replace(self, **changes)


DEFAULTS = Config()


def current():
    return DEFAULTS


def set_defaults(cfg):
    """Install ``cfg`` as the process-wide default (the CLI does this once)."""
    global DEFAULTS
    DEFAULTS = cfg
