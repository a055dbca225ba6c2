"""Solver configuration.

Settings can come from keyword arguments, a flat dict with dotted keys
(``{"multilp.gap": 1.2}``), or a JSON file named by ``$PARDS_CONFIG``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

CONFIG_ENV = "PARDS_CONFIG"

ALL_RULES = frozenset(range(1, 10))

_DOTTED = {
    "seed": "seed",
    "time_limit_seconds": "time_limit_seconds",
    "multilp.enabled": "multilp_enabled",
    "multilp.gap": "multilp_gap",
    "multilp.min_r": "multilp_min_r",
    "multilp.density": "multilp_density",
    "rules.enabled_mask": "rules",
    "branching.strategy": "branching",
}


@dataclass(frozen=True)
class Config:
    seed: int = 0
    time_limit_seconds: float | None = None
    multilp_enabled: bool = True
    multilp_gap: float = 1.1
    multilp_min_r: int = 8
    # "edges": m is the edge count of the instance; "ud": m is |UD|
    multilp_density: str = "edges"
    rules: frozenset[int] = ALL_RULES
    branching: str = "ldpb"

    def __post_init__(self):
        object.__setattr__(self, "rules", parse_rule_mask(self.rules))
        if self.branching not in ("ldpb", "maxdeg"):
            raise ValueError(f"unknown branching strategy {self.branching!r}")
        if self.multilp_density not in ("edges", "ud"):
            raise ValueError(f"unknown density measure {self.multilp_density!r}")

    def with_(self, **changes) -> "Config":
        return replace(self, **changes)

    @classmethod
    def from_mapping(cls, data: dict) -> "Config":
        names = {f.name for f in fields(cls)}
        kwargs = {}
        for key, value in data.items():
            name = _DOTTED.get(key, key)
            if name not in names:
                raise ValueError(f"unknown config key {key!r}")
            kwargs[name] = value
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "Config":
        """Read a JSON config from ``path`` or ``$PARDS_CONFIG``; defaults if neither is set."""
        path = path or os.environ.get(CONFIG_ENV)
        if not path:
            return cls()
        return cls.from_mapping(json.loads(Path(path).read_text(encoding="utf-8")))


def parse_rule_mask(mask) -> frozenset[int]:
    """Accept a set of rule numbers, a 9-char ``0/1`` string, or ``"1,2,5"``."""
    if isinstance(mask, (set, frozenset, list, tuple)):
        rules = frozenset(int(r) for r in mask)
    elif isinstance(mask, str):
        text = mask.strip()
        if len(text) == 9 and set(text) <= {"0", "1"}:
            rules = frozenset(i + 1 for i, ch in enumerate(text) if ch == "1")
        elif text in ("", "none"):
            rules = frozenset()
        else:
            rules = frozenset(int(tok) for tok in text.replace(",", " ").split())
    else:
        raise ValueError(f"cannot read rule mask {mask!r}")
    if not rules <= ALL_RULES:
        raise ValueError(f"rule numbers must be in 1..9, got {sorted(rules)}")
    return rules
