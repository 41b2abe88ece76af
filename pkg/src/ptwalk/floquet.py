"""Floquet operator of the lossy split-step walk in momentum space.

One period applies, right to left,

    U = R(theta1/2) S R(theta2/2) M R(theta2/2) S R(theta1/2)

where R(theta) = exp(-i theta sigma_2) rotates the coin, S shifts |H> to x-1
and |V> to x+1, and M = |+><+| + sqrt(1-p)|-><-| removes part of the |->
component each step.  With the Fourier convention psi_k = sum_x e^{-ikx} psi_x
the shift becomes S_k = diag(e^{ik}, e^{-ik}).

The rescaled operator Ut_k = gamma U_k, gamma = (1-p)^(-1/4), has unit
determinant and the closed Pauli form

    Ut_k = d0 sigma_0 - i(d1 sigma_1 + d2 sigma_2 + d3 sigma_3),   d1 = i beta,

with d0, d2, d3 real trigonometric polynomials in (2k, theta1, theta2).  Both
the closed form and the direct product are provided; they must agree to
machine precision, which pins every sign convention above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3

__all__ = [
    "CoinParams",
    "coin_rotation",
    "shift_matrix",
    "loss_matrix",
    "d_coefficients",
    "momentum_operator_closed",
    "momentum_operator_direct",
]


@dataclass(frozen=True)
class CoinParams:
    """Coin angles (radians) and loss probability of one walk family."""

    theta1: float
    theta2: float
    p: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ValueError("coin angles must be finite")
        if not 0.0 <= self.p < 1.0:
            # gamma = (1-p)^(-1/4) diverges at p = 1.
            raise ValueError(f"loss probability must satisfy 0 <= p < 1, got {self.p}")

    @property
    def gamma(self) -> float:
        return (1.0 - self.p) ** -0.25

    @property
    def alpha(self) -> float:
        return 0.5 * self.gamma * (1.0 + math.sqrt(1.0 - self.p))

    @property
    def beta(self) -> float:
        return 0.5 * self.gamma * (1.0 - math.sqrt(1.0 - self.p))


def coin_rotation(theta: float) -> np.ndarray:
    """R(theta) = exp(-i theta sigma_2), a real rotation of the coin."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def shift_matrix(k) -> np.ndarray:
    """Momentum representation diag(e^{ik}, e^{-ik}) of the double-sided shift."""
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * k)
    out[..., 1, 1] = np.exp(-1j * k)
    return out


def loss_matrix(p: float) -> np.ndarray:
    """M = |+><+| + sqrt(1-p)|-><-| in the polarization basis."""
    m = math.sqrt(1.0 - p)
    return 0.5 * np.array([[1 + m, 1 - m], [1 - m, 1 + m]], dtype=complex)


def d_coefficients(params: CoinParams, k) -> np.ndarray:
    """Pauli coefficients (d0, d1, d2, d3) of Ut_k, shape (..., 4) complex.

    d0, d2, d3 are real; d1 = i beta is purely imaginary.  Unit determinant of
    Ut_k gives the sum rule d0^2 + d1^2 + d2^2 + d3^2 = 1.
    """
    k = np.asarray(k, dtype=float)
    a = params.alpha
    c1, s1 = math.cos(params.theta1), math.sin(params.theta1)
    c2, s2 = math.cos(params.theta2), math.sin(params.theta2)
    cos2k, sin2k = np.cos(2 * k), np.sin(2 * k)
    out = np.empty(k.shape + (4,), dtype=complex)
    out[..., 0] = a * (cos2k * c1 * c2 - s1 * s2)
    out[..., 1] = 1j * params.beta
    out[..., 2] = a * (cos2k * c2 * s1 + c1 * s2)
    out[..., 3] = -a * sin2k * c2
    return out


def momentum_operator_closed(params: CoinParams, k) -> np.ndarray:
    """Rescaled operator Ut_k from the closed-form d coefficients, (..., 2, 2)."""
    d = d_coefficients(params, k)
    return (
        d[..., 0, None, None] * SIGMA_0
        - 1j * d[..., 1, None, None] * SIGMA_1
        - 1j * d[..., 2, None, None] * SIGMA_2
        - 1j * d[..., 3, None, None] * SIGMA_3
    )


def momentum_operator_direct(params: CoinParams, k) -> np.ndarray:
    """gamma times the raw operator product, assembled factor by factor.

    Cross-check for :func:`momentum_operator_closed`; the two must agree
    elementwise to machine precision for all parameters.
    """
    r1 = coin_rotation(params.theta1 / 2)
    r2 = coin_rotation(params.theta2 / 2)
    s = shift_matrix(k)
    inner = r2 @ loss_matrix(params.p) @ r2
    return params.gamma * (r1 @ s @ inner @ s @ r1)
