"""Run configuration and JSON-ready reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace

from gmpy2 import mpq

from .quadratic import QuadraticNumber, render_coeff, render_rational
from .series import INF, MPQ, PuiseuxSeries, working_precision

PASS_VERDICTS = {"holds", "pass", "necessary-conditions-pass", "skipped", "found", "ok"}


@dataclass(frozen=True)
class RunConfig:
    truncation: object = mpq(8)
    samples: int = 200
    pairs: int = 10_000
    seed: int = 0
    max_exp_denominator: int = 64
    budget: int = 1_000

    def __post_init__(self):
        object.__setattr__(self, "truncation", mpq(self.truncation))
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "seed" and not v > 0:
                raise ValueError(f"{f.name} must be positive")
            if f.name == "seed" and v < 0:
                raise ValueError("seed must be non-negative")

    def precision(self):
        """Context manager applying truncation and denominator limit."""
        return working_precision(self.truncation, self.max_exp_denominator)

    def with_(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def to_json(self) -> dict:
        return {
            "truncation": render_rational(self.truncation),
            "samples": self.samples,
            "pairs": self.pairs,
            "seed": self.seed,
            "max_exp_denominator": self.max_exp_denominator,
            "budget": self.budget,
        }


DEFAULT_CONFIG = RunConfig()


def jsonable(x):
    """Convert library values into plain JSON types, deterministically."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        if x == INF:
            return "inf"
        if x == -INF:
            return "-inf"
        if math.isnan(x):
            return "nan"
        return float(f"{x:.12g}")
    if isinstance(x, MPQ):
        return render_rational(x)
    if isinstance(x, QuadraticNumber):
        return render_coeff(x)
    if isinstance(x, PuiseuxSeries):
        return str(x)
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


@dataclass
class Report:
    check: str
    verdict: str
    details: dict = field(default_factory=dict)
    config: RunConfig | None = None

    @property
    def ok(self) -> bool:
        return self.verdict in PASS_VERDICTS

    def __getitem__(self, key):
        return self.details[key]

    def to_json(self) -> dict:
        out = {"check": self.check, "verdict": self.verdict}
        out.update({k: jsonable(v) for k, v in self.details.items()})
        if self.config is not None:
            out["config"] = self.config.to_json()
            out["seed"] = self.config.seed
        return out

    def dumps(self) -> str:
        return dump_json(self.to_json())


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


def min_value(vals):
    m = INF
    for v in vals:
        if v < m:
            m = v
    return m


__all__ = ["RunConfig", "DEFAULT_CONFIG", "Report", "jsonable", "dump_json", "PASS_VERDICTS"]
