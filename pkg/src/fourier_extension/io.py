"""Experiment configuration, CSV tables and JSON manifests.

Numbers are written as ``%.16e`` (17 significant digits), so every float
read back equals the float written. Nothing time- or host-dependent goes
into any output.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Optional, Sequence

from .core import DEFAULT_EPSILON
from .errors import ConfigurationError

MANIFEST_NAME = "manifest.json"
COMMANDS = ("diagnostics", "theta", "approx", "resolution", "en-curve")


def format_value(v) -> str:
    """CSV text for one cell: floats in scientific notation, 17 digits."""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.16e" % v
    if v is None:
        return ""
    return str(v)


def write_csv(path: str, header: Sequence[str], rows: Iterable[dict]) -> None:
    """Write rows (dicts keyed by ``header``) as UTF-8 comma-separated text."""
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(format_value(r.get(h)) for h in header))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path: str) -> list:
    """Rows as dicts of strings (the inverse of write_csv up to typing)."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split(",")
    return [dict(zip(header, ln.split(","))) for ln in lines[1:] if ln]


def write_columns(path: str, header: Sequence[str], rows: Iterable[dict]) -> None:
    """Whitespace-separated columns with a ``#`` header, for gnuplot."""
    lines = ["# " + " ".join(header)]
    for r in rows:
        lines.append(" ".join(format_value(r.get(h)) for h in header))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ExperimentConfig:
    """All parameters of one CLI run. Tuples keep it hashable and make the
    JSON round trip exact."""

    command: str
    T: tuple = (2.0,)
    eta: tuple = ()
    kappa_star: tuple = ()
    epsilon: float = DEFAULT_EPSILON
    K: int = 2**15
    M: tuple = ()
    data: str = "equispaced"
    delta_jit: float = 0.5
    log_c: float = 2.0
    function: tuple = ()
    omega: tuple = ()
    delta_res: float = 1e-3
    solver: str = "truncated_svd"
    jobs: int = 1
    out: str = "."

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"command: unknown {self.command!r}")
        for name in ("T", "eta", "kappa_star", "M", "function", "omega"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "T", tuple(float(t) for t in self.T))
        object.__setattr__(self, "eta", tuple(float(t) for t in self.eta))
        object.__setattr__(self, "kappa_star", tuple(float(t) for t in self.kappa_star))
        object.__setattr__(self, "omega", tuple(float(t) for t in self.omega))
        object.__setattr__(self, "M", tuple(int(m) for m in self.M))
        object.__setattr__(self, "function", tuple(int(i) for i in self.function))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str, **overrides) -> "ExperimentConfig":
        d = json.loads(text)
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigurationError(f"manifest: unknown fields {sorted(extra)}")
        d.update(overrides)
        return cls(**d)


def write_manifest(config: ExperimentConfig, directory: str, outputs: Sequence[str] = (),
                   results: Optional[dict] = None) -> str:
    """Write the manifest: the config, output file names and summary results."""
    os.makedirs(directory, exist_ok=True)
    cfg = json.loads(config.to_json())
    # jobs and out never change a result; leaving them out keeps reruns byte-identical
    cfg.pop("jobs")
    cfg.pop("out")
    doc = {"config": cfg, "outputs": list(outputs)}
    if results is not None:
        doc["results"] = results
    path = os.path.join(directory, MANIFEST_NAME)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def read_manifest(path: str, **overrides) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return ExperimentConfig.from_json(json.dumps(doc["config"]), **overrides)
