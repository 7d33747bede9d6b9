"""Derivative lift: coefficients of y^(n) from the coefficients of y.

Writing Y0^(i) for the projection of the constant y^(i)(0), the lift is the
recursion Y^(i+1) = J (Y^(i) - Y0^(i)) with J the inverse transpose of the
integration matrix; unrolled it reads J^n Y - sum_{k=1..n} J^k Y0^(n-k).
The recursion is applied directly rather than through explicit matrix
powers, which conditions better and needs no extra storage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .basis import BasisConfig, CoeffVector, OperatorMatrix


@dataclass
class InitialConditions:
    """Values a_i = y^(i)(0), i = 0 .. l, attached to a basis config."""

    values: Sequence[float]
    config: BasisConfig

    def __post_init__(self):
        self.values = tuple(float(a) for a in self.values)
        if not all(np.isfinite(v) for v in self.values):
            raise ValueError(f"initial conditions must be finite, got {self.values}")

    def __len__(self) -> int:
        return len(self.values)


def project_initial(a: float, config: BasisConfig) -> CoeffVector:
    """Projection of the constant function a: value a in every order-0 slot."""
    coeffs = np.zeros(config.dim)
    coeffs[:: config.r] = a
    return CoeffVector(config, coeffs)


def lift(Y: CoeffVector, n: int, ics: InitialConditions, J: OperatorMatrix) -> CoeffVector:
    """Coefficients of the n-th derivative of the function with coefficients Y.

    Needs the first n initial conditions; n = 0 returns Y unchanged.
    """
    if n < 0:
        raise ValueError(f"derivative order must be >= 0, got {n}")
    if len(ics) < n:
        raise ValueError(
            f"lifting to order {n} needs {n} initial conditions, got {len(ics)}"
        )
    y = Y.coeffs
    for i in range(n):
        y0 = project_initial(ics.values[i], Y.config).coeffs
        y = J.entries @ (y - y0)
    return CoeffVector(Y.config, y)
