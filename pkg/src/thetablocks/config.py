"""Runtime settings and checksum-validated fixture loading."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

FIXTURE_ENV = "THETABLOCKS_FIXTURES"
_BUNDLED = Path(__file__).resolve().parent / "data"


class FixtureError(RuntimeError):
    pass


@dataclass(frozen=True)
class Config:
    q_prec: int = 8
    search_budget: int = 20000
    weyl_cap: int = 60000
    output: str = "json"
    fixture_dir: Path = _BUNDLED

    def __post_init__(self):
        for name in ("q_prec", "search_budget", "weyl_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.output not in ("json", "csv", "text"):
            raise ValueError("output must be json, csv or text")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        d = os.environ.get(FIXTURE_ENV)
        if d and "fixture_dir" not in overrides:
            overrides["fixture_dir"] = Path(d)
        return cls(**overrides)


def fixture_dir() -> Path:
    d = os.environ.get(FIXTURE_ENV)
    return Path(d) if d else _BUNDLED


@lru_cache(maxsize=None)
def _manifest(directory: str) -> dict:
    path = Path(directory) / "manifest.json"
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise FixtureError(f"no manifest.json in {directory}") from None


def load_fixture(name: str, directory: Path | None = None):
    """Parse ``name`` (with or without ``.json``) after checking its sha256 against the manifest."""
    directory = Path(directory) if directory is not None else fixture_dir()
    fname = name if name.endswith(".json") else name + ".json"
    expected = _manifest(str(directory)).get(fname)
    if expected is None:
        raise FixtureError(f"{fname} is not listed in the manifest")
    raw = (directory / fname).read_bytes()
    if hashlib.sha256(raw).hexdigest() != expected:
        raise FixtureError(f"checksum mismatch for {fname}")
    return json.loads(raw)
