"""Brute-force size caps, overridable through the ``EA_CAPS`` environment variable.

``EA_CAPS="topology=10,compact=14"`` lowers two caps; unknown keys are an error.
"""

from __future__ import annotations

import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Caps:
    compact: int = 12  # carrier size for the 2^n subset scan in compactness checks
    topology: int = 12  # carrier size for generating closed-set families
    states: int = 32  # variables in vertex enumeration
    enumerate: int = 8  # largest size the small-model enumerator accepts
    truncate: int = 256  # carrier size of family truncations

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "Caps":
        raw = (env if env is not None else os.environ).get("EA_CAPS", "").strip()
        if not raw:
            return cls()
        names = {f.name for f in dataclasses.fields(cls)}
        values = {}
        for item in raw.split(","):
            item = item.strip()
            if not item:
                continue
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in names:
                raise ValueError(f"EA_CAPS: cannot parse {item!r} (known keys: {sorted(names)})")
            values[key] = int(val)
        return cls(**values)


def current() -> Caps:
    return Caps.from_env()
