"""Data models: where (or how) the function is measured.

Pointwise node sets (equispaced, jittered, logarithmic, mapped Chebyshev)
and Fourier-coefficient data on [-1, 1].
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import DesignMatrix, ExtensionMap, FEConfig, map_inverse
from .errors import GenerationError, ParameterError

POINTWISE_KINDS = ("equispaced", "jittered", "logarithmic", "mapped_chebyshev")
KINDS = POINTWISE_KINDS + ("fourier",)

DEFAULT_JITTER = 0.5
DEFAULT_LOG_C = 2.0
GAUSS_ORDER = 16


@dataclass(frozen=True)
class SampleSet:
    """A data model instance.

    For pointwise kinds ``nodes`` are the sample locations in increasing
    order; for ``kind == "fourier"`` they are the mode indices -M..M.
    """

    kind: str
    M: int
    nodes: np.ndarray = field(repr=False)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown data kind {self.kind!r}")
        x = np.array(self.nodes, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def norm(self) -> str:
        return "l2" if self.kind == "fourier" else "uniform"

    @property
    def pointwise(self) -> bool:
        return self.kind != "fourier"

    def __len__(self):
        return self.nodes.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# kind={self.kind}\n")
        buf.write(f"# M={self.M}\n")
        buf.write(f"# norm={self.norm}\n")
        buf.write(f"# params={json.dumps(self.params, sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "mode" if self.kind == "fourier" else "node"])
        for i, v in enumerate(self.nodes):
            w.writerow([i, f"{v:.16e}"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SampleSet":
        meta = {}
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line and not line.startswith("index"):
                rows.append(float(line.split(",")[1]))
        return cls(meta["kind"], int(meta["M"]), np.array(rows), json.loads(meta.get("params", "{}")))


def _check_increasing(x, kind):
    if np.any(np.diff(x) <= 0):
        i = int(np.flatnonzero(np.diff(x) <= 0)[0])
        raise GenerationError(f"{kind} nodes not strictly increasing at position {i}")


def equispaced_nodes(M: int) -> SampleSet:
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    return SampleSet("equispaced", M, np.arange(-M, M + 1) / M)


def jittered_nodes(M: int, delta: float = DEFAULT_JITTER, endpoint: str = "raise") -> SampleSet:
    """Deterministically jittered grid x_m = m/M + (delta/M) sin(M^2/m).

    The offsets at m = +-M can push the end nodes out of [-1, 1]. With
    ``endpoint="raise"`` that is an error; ``endpoint="fold"`` flips the sign
    of the offending pair of offsets so the nodes move inwards by the same
    amount (antisymmetry and |z_m| <= delta/M are preserved).
    """
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    if not 0 < delta < 1:
        raise ParameterError(f"jitter amplitude must lie in (0, 1), got {delta}")
    if endpoint not in ("raise", "fold"):
        raise ParameterError(f"endpoint must be 'raise' or 'fold', got {endpoint!r}")
    m = np.arange(-M, M + 1)
    z = np.zeros(m.size)
    nz = m != 0
    z[nz] = delta / M * np.sin(M**2 / m[nz])
    x = m / M + z
    out = np.flatnonzero(np.abs(x) > 1)
    if out.size:
        if endpoint == "raise":
            raise GenerationError(
                f"jittered node m={m[out[0]]} at {x[out[0]]!r} leaves [-1, 1]; "
                "reduce the jitter amplitude or use endpoint='fold'")
        z[out] = -z[out]
        x = m / M + z
    _check_increasing(x, "jittered")
    return SampleSet("jittered", M, x, {"delta": delta, "endpoint": endpoint})


def log_nodes(M: int, c: float = DEFAULT_LOG_C) -> SampleSet:
    """Nodes clustered at the origin: x_m = (cM)^((m-1)/(M-1) - 1), x_0 = 0."""
    if M < 2:
        raise ParameterError(f"logarithmic nodes need M >= 2, got {M}")
    if not c * M > 1:
        raise ParameterError(f"need c*M > 1, got c={c}, M={M}")
    m = np.arange(1, M + 1)
    pos = 10.0 ** (((m - 1) / (M - 1) - 1) * math.log10(c * M))
    x = np.concatenate([-pos[::-1], [0.0], pos])
    _check_increasing(x, "logarithmic")
    return SampleSet("logarithmic", M, x, {"c": c})


def mapped_chebyshev_nodes(M: int, T: float) -> SampleSet:
    """Chebyshev points pulled back through the extension map, mirrored.

    Returns 2M+2 nodes, all strictly inside (-1, 1).
    """
    if M < 0:
        raise ParameterError(f"M must be >= 0, got {M}")
    m = np.arange(M + 1)
    pos = np.asarray(map_inverse(ExtensionMap(T), np.cos((2 * m + 1) * np.pi / (2 * M + 2))))
    pos = np.sort(np.atleast_1d(pos))
    x = np.concatenate([-pos[::-1], pos])
    _check_increasing(x, "mapped_chebyshev")
    return SampleSet("mapped_chebyshev", M, x, {"T": T})


def fourier_modes(M: int) -> SampleSet:
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    return SampleSet("fourier", M, np.arange(-M, M + 1, dtype=float))


def make_sample_set(kind: str, M: int, *, T: Optional[float] = None,
                    delta_jit: float = DEFAULT_JITTER, log_c: float = DEFAULT_LOG_C,
                    jitter_endpoint: str = "fold") -> SampleSet:
    """Build any data model by name (``mapped-cheb`` is accepted as an alias)."""
    kind = kind.replace("-", "_")
    if kind == "mapped_cheb":
        kind = "mapped_chebyshev"
    if kind == "equispaced":
        return equispaced_nodes(M)
    if kind == "jittered":
        return jittered_nodes(M, delta_jit, endpoint=jitter_endpoint)
    if kind == "logarithmic":
        return log_nodes(M, log_c)
    if kind == "mapped_chebyshev":
        if T is None:
            raise ParameterError("mapped Chebyshev nodes need T")
        return mapped_chebyshev_nodes(M, T)
    if kind == "fourier":
        return fourier_modes(M)
    raise ParameterError(f"unknown data kind {kind!r}")


def gauss_panels(panels: int, order: int = GAUSS_ORDER):
    """Composite Gauss-Legendre nodes and weights on [-1, 1]."""
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-1.0, 1.0, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return x, wt


def fourier_data(f: Callable, M: int, quad_panels: Optional[int] = None) -> np.ndarray:
    """Fourier coefficients int_{-1}^{1} f(x) exp(-i pi m x) dx for |m| <= M.

    Uses composite 16-point Gauss-Legendre quadrature; ``quad_panels``
    defaults to max(2M, 64) and may not be smaller than M.
    """
    if quad_panels is None:
        quad_panels = max(2 * M, 64)
    if quad_panels < M:
        raise ParameterError(f"quad_panels={quad_panels} < M={M} cannot resolve the kernel")
    x, w = gauss_panels(quad_panels)
    fw = np.asarray(f(x), dtype=complex) * w
    if not np.all(np.isfinite(fw)):
        raise ParameterError("f is not finite at a quadrature node")
    out = np.empty(2 * M + 1, dtype=complex)
    modes = np.arange(-M, M + 1)
    step = 256
    for i in range(0, modes.size, step):
        out[i:i + step] = np.exp(-1j * np.pi * np.multiply.outer(modes[i:i + step], x)) @ fw
    return out


def build_fourier_design_matrix(config: FEConfig) -> DesignMatrix:
    """Entries int_{-1}^{1} exp(i n pi x/T) exp(-i m pi x) dx = 2 sinc(pi(n/T - m)).

    No 1/sqrt(M) factor: Fourier data are measured in the l2 norm.
    """
    m = np.arange(-config.M, config.M + 1)
    n = np.arange(-config.N, config.N + 1)
    # np.sinc(t) = sin(pi t)/(pi t)
    B = 2.0 * np.sinc(n[None, :] / config.T - m[:, None])
    return DesignMatrix(B.astype(complex), config, "fourier", m.astype(float))
