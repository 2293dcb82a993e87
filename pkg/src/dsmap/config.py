"""Optional ``key=value`` configuration, located through ``DSM_CONFIG``."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping, Optional

from .errors import InvalidArgument
from .orbits import DEFAULT_MEMORY_BUDGET

ENV_VAR = "DSM_CONFIG"
MIN_BUDGET = 10**6


@dataclass(frozen=True)
class CliConfig:
    memory_budget_states: int = DEFAULT_MEMORY_BUDGET
    output_dir: Path = Path(".")
    threads: int = 0

    def __post_init__(self):
        if self.memory_budget_states < MIN_BUDGET:
            raise InvalidArgument(f"memory_budget_states must be >= {MIN_BUDGET}")
        if self.threads < 0:
            raise InvalidArgument("threads must be >= 0")

    @property
    def workers(self) -> int:
        return self.threads or (os.cpu_count() or 1)

    def override(self, values: Mapping[str, Optional[object]]) -> "CliConfig":
        return replace(self, **_coerce({k: v for k, v in values.items() if v is not None}))


def _coerce(raw: Mapping[str, object]) -> dict:
    known = {f.name: f.type for f in fields(CliConfig)}
    out = {}
    for key, value in raw.items():
        if key not in known:
            raise InvalidArgument(f"unknown config key {key!r}")
        out[key] = Path(value) if key == "output_dir" else int(value)
    return out


def parse_config(text: str) -> CliConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        raw[key] = value
    try:
        return CliConfig(**_coerce(raw))
    except ValueError as exc:
        raise InvalidArgument(str(exc)) from exc


def load_config(environ: Mapping[str, str] = os.environ) -> CliConfig:
    path = environ.get(ENV_VAR)
    if not path:
        return CliConfig()
    return parse_config(Path(path).read_text())
