"""Run configuration: JSON file plus command-line overrides."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from typing import Any

SUITES = ("resolutions", "nbar", "kernels", "kunneth", "monodromy", "collapse", "gamma", "purity")
FORMATS = ("json", "csv", "table")


class ConfigError(ValueError):
    """Malformed configuration; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class RunConfig:
    command: str = "verify"
    seed: int = 2024
    format: str = "json"
    out: str | None = None
    suites: tuple[str, ...] = SUITES
    fiber: str | None = None
    m_xi: int = 0
    t_xi: int = 0
    # parameter ranges
    coeff_n: int = 8
    stalk_max: int = 5
    resolution_n: int = 5
    kernel_stalk_max: int = 4
    kernel_n: int = 4
    nbar_n: int = 6
    graded_n: int = 6
    kunneth_pairs: int = 50
    kunneth_max_dim: int = 40
    monodromy_instances: int = 200
    monodromy_max_dim: int = 30
    collapse_max: int = 12
    gamma_max_n: int = 10
    expand_max_n: int = 8
    purity_max_n: int = 5
    # single-shot queries
    n: int | None = None
    n1: int | None = None
    n2: int | None = None
    r: int | None = None
    s: int | None = None
    k: int | None = None
    l1: int | None = None
    l2: int | None = None
    p: int | None = None
    q: int | None = None
    complex: str | None = None
    segments: tuple[int, ...] | None = None
    mode: str = "tempered"
    S: int | None = None
    T: int | None = None
    h1: int | None = None
    h2: int | None = None
    j1: int | None = None
    j2: int | None = None

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}", "format")
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite {s!r}", "suites")
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.endswith(("_n", "_max", "_pairs", "_instances", "_max_dim")) and isinstance(v, int) and v < 0:
                raise ConfigError("range bound must be nonnegative", f.name)

    def with_overrides(self, **kw: Any) -> RunConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_INT_FIELDS = {f.name for f in fields(RunConfig) if f.type in ("int", "int | None")}
_STR_FIELDS = {f.name for f in fields(RunConfig) if f.type in ("str", "str | None")}


def config_from_json(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("expected a JSON object", "config")
    kw: dict[str, Any] = {}
    for key, val in doc.items():
        if key == "offsets":
            if not isinstance(val, dict):
                raise ConfigError("expected an object", "offsets")
            for sub in ("m_xi", "t_xi"):
                if sub in val:
                    kw[sub] = _int(val[sub], f"offsets.{sub}")
        elif key == "suites":
            if isinstance(val, str):
                val = [v for v in val.split(",") if v]
            if not isinstance(val, list) or not all(isinstance(v, str) for v in val):
                raise ConfigError("expected a list of suite names", "suites")
            kw["suites"] = tuple(val)
        elif key == "segments":
            if not isinstance(val, list) or not val:
                raise ConfigError("expected a nonempty list of segment lengths", "segments")
            kw["segments"] = tuple(_int(v, f"segments[{i}]") for i, v in enumerate(val))
        elif key in _INT_FIELDS:
            kw[key] = _int(val, key)
        elif key in _STR_FIELDS:
            if val is not None and not isinstance(val, str):
                raise ConfigError(f"expected a string, got {val!r}", key)
            kw[key] = val
        else:
            raise ConfigError("unknown field", key)
    return RunConfig(**kw)


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"expected an integer, got {v!r}", where)
    return v


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(str(exc.strerror or exc), "config") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON ({exc.msg}) at column {exc.colno}", f"line {exc.lineno}") from exc
    return config_from_json(doc)


def parse_suites(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    bad = [s for s in names if s not in SUITES]
    if bad:
        raise ConfigError(f"unknown suite(s) {', '.join(bad)}; choose from {', '.join(SUITES)}", "--suite")
    return names
