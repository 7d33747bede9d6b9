"""Operational matrices of the hybrid basis.

P maps the coefficients of a function to (approximate) coefficients of its
running integral; L is the diagonal Gram matrix; J = (P^T)^-1 drives the
derivative lift. Multiplication of two basis expansions is captured by a
block-local tensor of normalized triple products, from which the coefficient
matrix of a vector and the row vector of a quadratic form are assembled for
arbitrary (r, q).

Products of basis functions have degree up to 2(r-1); projecting them back
into the degree-(r-1) space silently drops the higher modes. That truncation
is inherent to the method and is applied uniformly here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisConfig, CoeffVector, OperatorMatrix
from .legendre import gauss_rule, legendre_table

_INVERSE_RESIDUAL_TOL = 1e-10


@dataclass
class TripleTensor:
    """Block-local tensor t[i, j, m] = (2m+1)/2 * integral of p_i p_j p_m.

    Equals the integral over one block of b_i b_j b_m divided by <b_m, b_m>;
    identical for every block by translation invariance. Symmetric in (i, j),
    zero whenever i + j + m is odd, and t[0, j, m] is the identity.
    """

    config: BasisConfig
    values: np.ndarray

    def __post_init__(self):
        r = self.config.r
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (r, r, r):
            raise ValueError(
                f"triple tensor must be {r}x{r}x{r}, got {self.values.shape}"
            )


def _integration_block(r: int, q: int) -> np.ndarray:
    """Within-block part of the integration matrix.

    Row m holds the basis coefficients of the running integral of the order-m
    basis function while t is still inside the block: order 0 integrates to
    (p_0 + p_1) / (4q); order m >= 1 to (p_{m+1} - p_{m-1}) / (2q(2m+1)),
    with the p_r overflow of the last row dropped.
    """
    E = np.zeros((r, r))
    E[0, 0] = 1.0
    if r > 1:
        E[0, 1] = 1.0
    for m in range(1, r):
        E[m, m - 1] = -1.0 / (2 * m + 1)
        if m + 1 < r:
            E[m, m + 1] = 1.0 / (2 * m + 1)
    return E / (2 * q)


def build_P(config: BasisConfig) -> OperatorMatrix:
    """Operational matrix of integration.

    Block upper-triangular: the within-block part on the diagonal, and the
    saturated value of each completed block (1/q, carried by the constant
    mode only) in every later block column.
    """
    r, q = config.r, config.q
    E = _integration_block(r, q)
    P = np.zeros((config.dim, config.dim))
    for k in range(q):
        P[k * r : (k + 1) * r, k * r : (k + 1) * r] = E
        for kp in range(k + 1, q):
            P[k * r, kp * r] = 1.0 / q
    return OperatorMatrix(config, P)


def build_L(config: BasisConfig) -> OperatorMatrix:
    """Gram matrix of the basis: diagonal with 1/((2m+1)q) per (k, m) slot."""
    diag = np.tile(1.0 / ((2.0 * np.arange(config.r) + 1.0) * config.q), config.q)
    return OperatorMatrix(config, np.diag(diag))


def build_J(config: BasisConfig) -> OperatorMatrix:
    """Inverse transpose of the integration matrix, residual-verified.

    Dense LU with partial pivoting (LAPACK); raises LinAlgError on a singular
    factorization and ArithmeticError if the inverse fails the 1e-10 residual
    check. Neither is expected for any valid config.
    """
    P = build_P(config).entries
    J = np.linalg.inv(P.T)
    residual = np.max(np.abs(J @ P.T - np.eye(config.dim)))
    if residual > _INVERSE_RESIDUAL_TOL:
        raise ArithmeticError(
            f"inverse of P^T failed the residual check: {residual:.3e}"
        )
    return OperatorMatrix(config, J)


def build_triple_tensor(config: BasisConfig) -> TripleTensor:
    """All normalized triple products of block-local Legendre polynomials.

    The Gauss size ceil((3(r-1)+1)/2) integrates the degree-3(r-1) products
    exactly.
    """
    r = config.r
    rule = gauss_rule(-(-(3 * (r - 1) + 1) // 2))
    leg = legendre_table(r, rule.nodes)
    scale = (2.0 * np.arange(r) + 1.0) / 2.0
    values = np.einsum("n,in,jn,mn,m->ijm", rule.weights, leg, leg, leg, scale)
    return TripleTensor(config, values)


def _require_same_config(a: BasisConfig, b: BasisConfig, what: str):
    if a != b:
        raise ValueError(f"{what} built for config {b}, expected {a}")


def coeff_matrix(C: CoeffVector, tensor: TripleTensor) -> OperatorMatrix:
    """Matrix of multiplication by the function with coefficients C.

    Satisfies B(t) B^T(t) C = M B(t) after projection; block-diagonal because
    basis functions of different blocks have disjoint support.
    """
    _require_same_config(C.config, tensor.config, "coefficient vector")
    r, q = C.config.r, C.config.q
    M = np.zeros((C.config.dim, C.config.dim))
    for k in range(q):
        cb = C.coeffs[k * r : (k + 1) * r]
        M[k * r : (k + 1) * r, k * r : (k + 1) * r] = np.einsum(
            "j,ijm->im", cb, tensor.values
        )
    return OperatorMatrix(C.config, M)


def hat_vector(S: OperatorMatrix, tensor: TripleTensor) -> CoeffVector:
    """Basis coefficients of the quadratic form t -> B^T(t) S B(t).

    Off-block entries of S do not contribute: the corresponding products of
    basis functions vanish identically.
    """
    _require_same_config(S.config, tensor.config, "operator matrix")
    r, q = S.config.r, S.config.q
    v = np.empty(S.config.dim)
    for k in range(q):
        Sb = S.entries[k * r : (k + 1) * r, k * r : (k + 1) * r]
        v[k * r : (k + 1) * r] = np.einsum("ij,ijm->m", Sb, tensor.values)
    return CoeffVector(S.config, v)
