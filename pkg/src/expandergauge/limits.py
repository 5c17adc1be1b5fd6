"""Size limits shared by the library entry points and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "EXPANDERGAUGE_LIMITS"


@dataclass(frozen=True)
class Limits:
    exact: int = 26
    dense: int = 4096
    lattice: int = 2000
    elements: int = 10000

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"limit {f.name} must be positive")

    def merged(self, text: str | None) -> "Limits":
        """Apply overrides written as "exact:26,dense:4096,lattice:2000"."""
        if not text:
            return self
        names = {f.name for f in fields(self)}
        changes = {}
        for pos, item in enumerate(text.split(",")):
            item = item.strip()
            if not item:
                continue
            key, sep, val = item.partition(":")
            key = key.strip()
            if not sep or key not in names:
                raise ValueError(f"limits item {pos + 1} {item!r}: expected one of "
                                 f"{sorted(names)} followed by ':<int>'")
            try:
                changes[key] = int(val)
            except ValueError:
                raise ValueError(f"limits item {pos + 1} {item!r}: expected an integer after ':'") from None
        return replace(self, **changes)


def limits_from_env(base: Limits | None = None) -> Limits:
    return (base or Limits()).merged(os.environ.get(ENV_VAR))
