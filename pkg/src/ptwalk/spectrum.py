"""Quasienergy bands, PT classification, generalized Zak phases, and windings.

The rescaled operator has unit determinant, so its eigenvalues pair up as
lambda_{k,+-} = d0 -+ i sqrt(1 - d0^2) with quasienergies
eps_{k,+-} = i log(lambda) = +-E_k.  While d0^2 < 1 the spectrum is entirely
real with E_k = arccos(d0) (unbroken symmetry); once d0^2 > 1 the pair splits
into growing and decaying modes and the + band is the growing one, Im E > 0
(with Re E = -pi on the d0 < -1 branch of the principal logarithm).  d0 is an
affine function of cos(2k), so its extrema sit at k = 0 and k = pi/2, which
makes the broken/unbroken classification exact.

Winding numbers are global Berry phases: the sum of the two bands' generalized
Zak phases over the full zone k in [-pi, pi), divided by 2 pi.  Each Zak phase
is computed as a Wilson loop of biorthogonal overlaps <chi_kj | psi_kj+1>,
accumulating the phase link by link so the result converges to the continuum
integral rather than its value mod 2 pi.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import eig_biorthogonal_grid
from .errors import DegenerateSpectrum, ExceptionalPoint, NonQuantized
from .floquet import CoinParams, d_coefficients, momentum_operator_closed

__all__ = [
    "PTPhase",
    "BandStructure",
    "PhaseDiagramCell",
    "quasienergies",
    "band_structure",
    "pt_classify",
    "zak_phase",
    "winding_number",
    "phase_diagram",
    "min_gap",
]

EP_TOL = 1e-12
QUANTIZATION_TOL = 0.05


class PTPhase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"


@dataclass(frozen=True)
class BandStructure:
    """Quasienergy E_k = eps_{k,+} sampled on a momentum grid."""

    ks: np.ndarray            # (n_k,)
    energies: np.ndarray      # (n_k,) complex, the + band; the - band is -E_k
    pt_broken_mask: np.ndarray  # (n_k,) bool, d0(k)^2 > 1 (Im E_k != 0)


@dataclass(frozen=True)
class PhaseDiagramCell:
    theta1: float
    theta2: float
    nu: int | None            # None when undefined (broken or non-quantized)
    pt_broken: bool
    min_gap: float            # min_k (1 - d0^2), negative inside broken regions


def _energy_plus_from_d0(d0: np.ndarray) -> np.ndarray:
    """eps_+ from the real coefficient d0, on or off the unit-circle regime.

    Unbroken: E = arccos(d0) in (0, pi).  Broken: E = i log of the growing
    eigenvalue d0 + sign(d0) sqrt(d0^2 - 1), so Im E > 0 always (and
    Re E = -pi on the d0 < -1 branch).
    """
    d0 = np.asarray(d0, dtype=float)
    broken = d0 * d0 > 1.0
    root = np.sqrt(np.maximum(d0 * d0 - 1.0, 0.0))
    lam_grow = np.where(broken, d0 + np.sign(d0) * root, 1.0).astype(complex)
    return np.where(broken, 1j * np.log(lam_grow), np.arccos(np.clip(d0, -1.0, 1.0)))


def quasienergies(params: CoinParams, k: float) -> tuple[complex, complex]:
    """(eps_+, eps_-) at one momentum, with eps_- = -eps_+ exactly.

    Raises
    ------
    ExceptionalPoint
        If |d0^2 - 1| <= 1e-12 (band touching).
    """
    d0 = float(d_coefficients(params, k)[..., 0].real)
    if abs(d0 * d0 - 1.0) <= EP_TOL:
        raise ExceptionalPoint(f"band touching at k = {k!r} (d0 = {d0!r})")
    e_plus = complex(_energy_plus_from_d0(d0))
    return e_plus, -e_plus


def band_structure(params: CoinParams, ks: np.ndarray) -> BandStructure:
    """Vectorized band survey; exceptional momenta are reported, not raised."""
    ks = np.asarray(ks, dtype=float)
    d0 = d_coefficients(params, ks)[..., 0].real
    return BandStructure(
        ks=ks,
        energies=_energy_plus_from_d0(d0),
        pt_broken_mask=d0 * d0 > 1.0,
    )


def min_gap(params: CoinParams) -> float:
    """min_k (1 - d0^2); zero at a band touching, negative once PT breaks.

    d0 = A cos(2k) + B, so the extrema are at cos(2k) = +-1.
    """
    a = params.alpha * math.cos(params.theta1) * math.cos(params.theta2)
    b = -params.alpha * math.sin(params.theta1) * math.sin(params.theta2)
    return 1.0 - (abs(a) + abs(b)) ** 2


def pt_classify(params: CoinParams, n_k: int = 512) -> PTPhase:
    """BROKEN iff d0(k)^2 exceeds 1 somewhere (Im E != 0 for some momentum).

    Exact band touchings (max d0^2 == 1) keep an entirely real spectrum and
    classify as UNBROKEN; they are the transition locus itself.  Checked
    analytically (extrema of d0 sit at cos 2k = +-1) and on a grid.
    """
    if n_k < 64:
        raise ValueError("n_k must be >= 64")
    ks = np.linspace(-np.pi, np.pi, n_k, endpoint=False)
    d0 = d_coefficients(params, ks)[..., 0].real
    grid_max = float(np.max(d0 * d0))
    analytic_max = 1.0 - min_gap(params)
    return (
        PTPhase.BROKEN
        if max(grid_max, analytic_max) > 1.0 + EP_TOL
        else PTPhase.UNBROKEN
    )


def _band_eigensystems(params: CoinParams, ks: np.ndarray):
    try:
        return eig_biorthogonal_grid(momentum_operator_closed(params, ks))
    except DegenerateSpectrum as exc:
        raise ExceptionalPoint(str(exc)) from exc


def zak_phase(
    params: CoinParams,
    band: int,
    n_k: int = 512,
    k_offset: float = 0.0,
) -> float:
    """Generalized Zak phase of one band over the full zone k in [-pi, pi).

    The Wilson-loop phase is accumulated link by link with periodic
    wraparound, so the returned value is the continuum line integral (the
    per-band winding is kept, not reduced mod 2 pi).  ``band`` is +1 or -1.
    """
    if band not in (+1, -1):
        raise ValueError("band must be +1 or -1")
    if n_k < 16:
        raise ValueError("n_k must be >= 16")
    if pt_classify(params, max(64, n_k)) is PTPhase.BROKEN:
        raise ExceptionalPoint("PT-broken regime: Zak phase undefined")
    ks = k_offset + np.linspace(-np.pi, np.pi, n_k, endpoint=False)
    grid = _band_eigensystems(params, ks)
    b = 0 if band == +1 else 1
    links = np.einsum("kc,kc->k", grid.left[:, b, :], np.roll(grid.right[:, b, :], -1, axis=0))
    return float(-np.angle(links).sum())


def winding_number(params: CoinParams, n_k: int = 512, k_offset: float = 0.0) -> int:
    """Integer winding from the global Berry phase (phi_Z+ + phi_Z-)/2 pi.

    Raises
    ------
    NonQuantized
        If the rounding residual exceeds 0.05 (grid too coarse or parameters
        too close to a phase boundary).
    ExceptionalPoint
        In the PT-broken regime or at a band touching on the grid.
    """
    total = zak_phase(params, +1, n_k, k_offset) + zak_phase(params, -1, n_k, k_offset)
    nu = total / (2 * np.pi)
    rounded = int(round(nu))
    if abs(nu - rounded) >= QUANTIZATION_TOL:
        raise NonQuantized(f"global Berry phase / 2pi = {nu:.4f} is not near an integer")
    return rounded


def phase_diagram(
    theta1s: np.ndarray,
    theta2s: np.ndarray,
    p: float,
    n_k: int = 512,
) -> list[PhaseDiagramCell]:
    """Winding number and PT phase over a coin-parameter grid.

    Cells where the winding is undefined (broken regime, band touching, or a
    failed quantization check) carry ``nu=None`` rather than a guess.
    """
    theta1s = np.asarray(theta1s, dtype=float)
    theta2s = np.asarray(theta2s, dtype=float)
    if theta1s.size < 32 or theta2s.size < 32:
        raise ValueError("phase diagram resolution must be at least 32x32")
    cells = []
    for th1 in theta1s:
        for th2 in theta2s:
            params = CoinParams(float(th1), float(th2), p)
            gap = min_gap(params)
            broken = pt_classify(params, max(64, n_k)) is PTPhase.BROKEN
            nu: int | None = None
            if not broken:
                try:
                    nu = winding_number(params, n_k)
                except (NonQuantized, ExceptionalPoint):
                    nu = None
            cells.append(
                PhaseDiagramCell(
                    theta1=float(th1),
                    theta2=float(th2),
                    nu=nu,
                    pt_broken=broken,
                    min_gap=gap,
                )
            )
    return cells
