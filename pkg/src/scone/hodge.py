"""Hodge Laplacians, the decomposition of 1-chains, and Betti numbers.

All solvers are dense least-squares/eigensolves, which is exact enough and
simple at desk scale (up to a few thousand edges).  Every function here is a
pure function of immutable inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .complexes import ComplexError, OrientedComplex2


class ChainError(ValueError):
    """Raised when a chain does not match the complex it is used with."""


@dataclass(frozen=True)
class Chain:
    """Real coefficients over the oriented k-cells of a complex.

    ``coeffs`` has one row per k-cell and one column per channel; a 1-D
    array is accepted and treated as a single channel.
    """

    complex: OrientedComplex2
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.k not in (0, 1, 2):
            raise ChainError(f"chain order {self.k} not in {{0, 1, 2}}")
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim == 1:
            coeffs = coeffs[:, None]
        if coeffs.ndim != 2:
            raise ChainError("coefficients must be 1-D or 2-D")
        sizes = (self.complex.node_count, self.complex.n_edges, self.complex.n_faces)
        if coeffs.shape[0] != sizes[self.k]:
            raise ChainError(
                f"chain has {coeffs.shape[0]} rows, complex has "
                f"{sizes[self.k]} cells of order {self.k}"
            )
        if coeffs.size and not np.isfinite(coeffs).all():
            raise ChainError("chain coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n_channels(self) -> int:
        return self.coeffs.shape[1]

    def vector(self) -> np.ndarray:
        """Single-channel coefficients as a flat array."""
        if self.n_channels != 1:
            raise ChainError(f"expected single channel, got {self.n_channels}")
        return self.coeffs[:, 0]


@dataclass(frozen=True)
class HodgeParts:
    """The three orthogonal components of a 1-chain."""

    gradient: Chain
    curl: Chain
    harmonic: Chain


def _check_bound(c: OrientedComplex2, x: Chain, k: int) -> np.ndarray:
    if x.complex is not c:
        raise ChainError("chain is not bound to this complex")
    if x.k != k:
        raise ChainError(f"expected a {k}-chain, got order {x.k}")
    return x.vector()


def hodge_laplacian(c: OrientedComplex2, k: int) -> np.ndarray:
    """The dense k-th Hodge Laplacian; k=0 recovers the graph Laplacian."""
    b1 = c.b1.toarray().astype(np.float64)
    b2 = c.b2.toarray().astype(np.float64)
    if k == 0:
        return b1 @ b1.T
    if k == 1:
        return b1.T @ b1 + b2 @ b2.T
    if k == 2:
        return b2.T @ b2
    raise ComplexError(f"Laplacian order {k} not in {{0, 1, 2}}")


def _gradient_part(c: OrientedComplex2, x: np.ndarray) -> np.ndarray:
    b1t = c.b1.toarray().T.astype(np.float64)
    w, *_ = np.linalg.lstsq(b1t, x, rcond=None)
    return b1t @ w


def _curl_part(c: OrientedComplex2, x: np.ndarray) -> np.ndarray:
    if c.n_faces == 0:
        return np.zeros_like(x)
    b2 = c.b2.toarray().astype(np.float64)
    y, *_ = np.linalg.lstsq(b2, x, rcond=None)
    return b2 @ y


def hodge_decompose(c: OrientedComplex2, x: Chain) -> HodgeParts:
    """Split a 1-chain into gradient, curl, and harmonic components."""
    vec = _check_bound(c, x, k=1)
    grad = _gradient_part(c, vec)
    curl = _curl_part(c, vec)
    harm = vec - grad - curl
    return HodgeParts(
        gradient=Chain(c, 1, grad),
        curl=Chain(c, 1, curl),
        harmonic=Chain(c, 1, harm),
    )


def project_kernel(c: OrientedComplex2, x: Chain, which: str) -> Chain:
    """Orthogonal projection onto ker(Delta_1) or ker(boundary_1)."""
    vec = _check_bound(c, x, k=1)
    if which == "hodge_kernel":
        out = vec - _gradient_part(c, vec) - _curl_part(c, vec)
    elif which == "boundary_kernel":
        out = vec - _gradient_part(c, vec)
    else:
        raise ValueError(f"unknown kernel {which!r}")
    return Chain(c, 1, out)


def betti(c: OrientedComplex2, k: int) -> int:
    """dim ker(Delta_k): the number of k-dimensional holes."""
    lap = hodge_laplacian(c, k)
    if lap.shape[0] == 0:
        return 0
    eigs = np.linalg.eigvalsh(lap)
    scale = max(float(lap.diagonal().max()), 1.0)
    threshold = 1e-8 * lap.shape[0] * scale
    return int((eigs < threshold).sum())


# ---------------------------------------------------------------------------
# Chain files and the decompose summary


def write_chain(x: Chain, path) -> None:
    """Write a single-channel chain as `index value` lines."""
    vec = x.vector()
    with open(path, "w") as fh:
        for j, val in enumerate(vec):
            fh.write(f"{j} {val!r}\n")


def read_chain(c: OrientedComplex2, path, k: int = 1) -> Chain:
    """Read a chain file; unlisted indices default to zero."""
    sizes = (c.node_count, c.n_edges, c.n_faces)
    vec = np.zeros(sizes[k])
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ChainError(f"{path}:{lineno}: expected 'index value'")
            try:
                idx, val = int(parts[0]), float(parts[1])
            except ValueError:
                raise ChainError(f"{path}:{lineno}: bad field in {line!r}")
            if not 0 <= idx < sizes[k]:
                raise ChainError(f"{path}:{lineno}: index {idx} out of range")
            vec[idx] = val
    return Chain(c, k, vec)


def decomposition_summary(c: OrientedComplex2, parts: HodgeParts) -> dict:
    """Norms and Betti numbers, used by the decompose CLI output."""
    return {
        "norms": {
            "gradient": float(np.linalg.norm(parts.gradient.vector())),
            "curl": float(np.linalg.norm(parts.curl.vector())),
            "harmonic": float(np.linalg.norm(parts.harmonic.vector())),
        },
        "betti": [betti(c, 0), betti(c, 1), betti(c, 2)],
    }


def write_summary(summary: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
