"""Scenario configuration with CLI > file > environment > default precedence."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from ..exceptions import ArgumentError
from ..normed_space import parse_matrix, parse_space
from ..orthogonality import Relation

DEFAULT_SEED = 42
DEFAULT_SAMPLES = 10 ** 4
DEFAULT_TOL = 1e-8
SEED_ENV = "ORTHO_SEED"


@dataclass(frozen=True)
class ScenarioConfig:
    suite: str | None = None
    domain: str | None = None
    codomain: str | None = None
    matrix: str | None = None
    relation: str = "birkhoff"
    seed: int = DEFAULT_SEED
    sample_count: int = DEFAULT_SAMPLES
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ArgumentError(f"seed must be an integer, got {self.seed!r}")
        if isinstance(self.sample_count, bool) or not isinstance(self.sample_count, int):
            raise ArgumentError(f"sample_count must be an integer, got {self.sample_count!r}")
        if not isinstance(self.tolerance, (int, float)) or isinstance(self.tolerance, bool):
            raise ArgumentError(f"tolerance must be a number, got {self.tolerance!r}")
        if self.sample_count < 1:
            raise ArgumentError("sample_count must be >= 1")
        if not self.tolerance > 0:
            raise ArgumentError("tolerance must be > 0")
        if self.suite is not None:
            from .suites import SUITES
            if self.suite not in SUITES:
                raise ArgumentError(f"unknown suite {self.suite!r}; known: {', '.join(SUITES)}")
        # parse eagerly so bad descriptors fail before any work starts
        for desc in (self.domain, self.codomain):
            if desc is not None:
                parse_space(desc)
        if self.matrix is not None:
            parse_matrix(self.matrix)
        Relation.parse(self.relation)

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def relation_obj(self) -> Relation:
        return Relation.parse(self.relation)

    def with_overrides(self, **kw) -> "ScenarioConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise ArgumentError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _normalize_matrix(value):
    if value is None or isinstance(value, str):
        return value
    # JSON nested lists -> "a,b;c,d"
    try:
        return ";".join(",".join(repr(float(v)) for v in row) for row in value)
    except TypeError:
        raise ArgumentError("matrix must be a string 'a,b;c,d' or a list of rows") from None


def load_config_file(path) -> dict:
    """Read a JSON object mirroring :class:`ScenarioConfig`. Raises ``OSError`` on I/O failure."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ArgumentError(f"config file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ArgumentError("config file must hold a JSON object")
    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(data) - known
    if unknown:
        raise ArgumentError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "matrix" in data:
        data["matrix"] = _normalize_matrix(data["matrix"])
    return data


def resolve_config(cli: dict | None = None, path=None) -> ScenarioConfig:
    """Merge defaults, ``ORTHO_SEED``, an optional config file, then non-None CLI values."""
    merged: dict = {"seed": _default_seed()}
    if path is not None:
        merged.update(load_config_file(path))
    for key, value in (cli or {}).items():
        if value is not None:
            merged[key] = value
    try:
        return ScenarioConfig(**merged)
    except TypeError as exc:
        raise ArgumentError(str(exc)) from None
