"""Hybrid block-pulse/Legendre basis on [0, 1): evaluation and L2 projection.

The basis splits [0, 1) into q equal half-open subintervals (blocks) and
carries the Legendre polynomials of orders 0 .. r-1 on each, rescaled by the
affine map x = 2qt - 2k + 1 that sends block k to [-1, 1]. Coefficients are
stored block-major: entry (k-1)*r + m belongs to order m on block k.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .legendre import gauss_rule, legendre_table


@dataclass(frozen=True)
class BasisConfig:
    """Dimensions of the hybrid space: q blocks, Legendre orders 0..r-1.

    quad_points is the per-block Gauss size used by projections; the default
    24 keeps projection error orders of magnitude below the approximation
    error of the basis itself for smooth data.
    """

    q: int
    r: int
    quad_points: int = 24

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"need at least one block, got q={self.q}")
        if self.r < 1:
            raise ValueError(f"need at least one Legendre order, got r={self.r}")
        if self.quad_points < self.r:
            raise ValueError(
                f"quad_points={self.quad_points} cannot resolve r={self.r} orders"
            )

    @property
    def dim(self) -> int:
        return self.r * self.q


@dataclass
class CoeffVector:
    """Block-major coefficient vector of a function in the hybrid space."""

    config: BasisConfig
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.config.dim,):
            raise ValueError(
                f"coefficient vector must have length {self.config.dim}, "
                f"got shape {self.coeffs.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficient vector contains non-finite entries")


@dataclass
class OperatorMatrix:
    """Dense rq x rq matrix acting on hybrid coefficient vectors."""

    config: BasisConfig
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        n = self.config.dim
        if self.entries.shape != (n, n):
            raise ValueError(
                f"operator matrix must be {n}x{n}, got shape {self.entries.shape}"
            )
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("operator matrix contains non-finite entries")


@lru_cache(maxsize=None)
def _projection_data(config: BasisConfig):
    """Per-block quadrature nodes/weights and Legendre values, cached.

    Returns (x, w, leg, scale) with leg[m, i] = p_m(x_i) and
    scale[m] = (2m + 1) / 2, the 1-D normalization of the projection.
    """
    rule = gauss_rule(config.quad_points)
    leg = legendre_table(config.r, rule.nodes)
    scale = (2.0 * np.arange(config.r) + 1.0) / 2.0
    return rule.nodes, rule.weights, leg, scale


def block_nodes(config: BasisConfig, k: int) -> np.ndarray:
    """Quadrature nodes mapped into block k (1-based), ascending in t."""
    x, _, _, _ = _projection_data(config)
    return (x + 2 * k - 1) / (2 * config.q)


def block_of(config: BasisConfig, t: float) -> int:
    """1-based index of the block containing t in [0, 1)."""
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t={t!r} is outside the basis domain [0, 1)")
    return min(int(t * config.q), config.q - 1) + 1


def eval_basis(config: BasisConfig, t: float) -> np.ndarray:
    """All rq basis functions at t; only the block containing t is nonzero."""
    k = block_of(config, t)
    x = 2.0 * config.q * t - 2.0 * k + 1.0
    out = np.zeros(config.dim)
    out[(k - 1) * config.r : k * config.r] = legendre_table(
        config.r, np.array([x])
    )[:, 0]
    return out


def _sample_block(f: Callable[[float], float], ts: np.ndarray) -> np.ndarray:
    vals = np.array([float(f(t)) for t in ts])
    bad = ~np.isfinite(vals)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(f"integrand returned {vals[i]!r} at node t={ts[i]!r}")
    return vals


def project_function(config: BasisConfig, f: Callable[[float], float]) -> CoeffVector:
    """L2 projection of f onto the hybrid space.

    Coefficient (k, m) is q(2m+1) times the integral of f against the basis
    function over block k, evaluated with the per-block Gauss rule, so it is
    exact whenever f restricted to the block is a polynomial of degree
    <= 2*quad_points - 1.
    """
    x, w, leg, scale = _projection_data(config)
    r = config.r
    coeffs = np.empty(config.dim)
    for k in range(1, config.q + 1):
        vals = _sample_block(f, (x + 2 * k - 1) / (2 * config.q))
        coeffs[(k - 1) * r : k * r] = scale * (leg @ (w * vals))
    return CoeffVector(config, coeffs)


def project_kernel(
    config: BasisConfig, g: Callable[[float, float], float]
) -> OperatorMatrix:
    """L2 projection of a two-variable kernel g(t, s) onto the tensor basis.

    Entry (i, j) pairs basis function i in t with basis function j in s,
    normalized like the 1-D projection in each variable; the integral is a
    tensor-product Gauss rule over the block pair.
    """
    x, w, leg, scale = _projection_data(config)
    r, q = config.r, config.q
    entries = np.empty((config.dim, config.dim))
    wleg = leg * w  # (r, npts), row m = w_i * p_m(x_i)
    for k in range(1, q + 1):
        ts = (x + 2 * k - 1) / (2 * q)
        for kp in range(1, q + 1):
            ss = (x + 2 * kp - 1) / (2 * q)
            gv = np.empty((x.size, x.size))
            for a, t in enumerate(ts):
                for b, s in enumerate(ss):
                    gv[a, b] = g(t, s)
            if not np.all(np.isfinite(gv)):
                a, b = np.argwhere(~np.isfinite(gv))[0]
                raise ValueError(
                    f"kernel returned {gv[a, b]!r} at node (t={ts[a]!r}, s={ss[b]!r})"
                )
            block = np.outer(scale, scale) * (wleg @ gv @ wleg.T)
            entries[(k - 1) * r : k * r, (kp - 1) * r : kp * r] = block
    return OperatorMatrix(config, entries)


def reconstruct(Y: CoeffVector, t: float) -> float:
    """Value at t of the function with hybrid coefficients Y."""
    return float(np.dot(Y.coeffs, eval_basis(Y.config, t)))
