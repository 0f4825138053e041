"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass, field

from .errors import BadParameters, ResourceLimit


@dataclass
class RunConfig:
    matrix_path: str | None = None
    depth: int = 6
    radius: int = 6
    max_roots: int = 200000
    max_chambers: int = 200000
    max_cubes: int = 200000
    budget_seconds: float = 600.0
    output: str | None = None
    precision: int = 20
    threads: int = field(default_factory=lambda: int(os.environ.get("COXWALLS_THREADS", "1") or 1))

    def __post_init__(self) -> None:
        for name in ("depth", "radius", "max_roots", "max_chambers", "max_cubes", "precision", "threads"):
            if getattr(self, name) <= 0:
                raise BadParameters(f"{name} must be positive")
        if self.budget_seconds <= 0:
            raise BadParameters("budget_seconds must be positive")
        self._start = time.monotonic()

    def check_budget(self) -> None:
        """Cooperative wall-clock check, called between work units."""
        if time.monotonic() - self._start > self.budget_seconds:
            raise ResourceLimit("wall-clock budget exhausted")

    def limits(self) -> dict:
        d = asdict(self)
        for k in ("matrix_path", "output"):
            d.pop(k)
        return d
