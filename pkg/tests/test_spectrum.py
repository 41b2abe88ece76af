"""Bands, PT classification, Zak phases, winding numbers, phase diagram."""

import numpy as np
import pytest

from ptwalk.core import eig_biorthogonal_grid
from ptwalk.errors import ExceptionalPoint, NonQuantized
from ptwalk.floquet import CoinParams, momentum_operator_closed
from ptwalk.spectrum import (
    PTPhase,
    band_structure,
    min_gap,
    phase_diagram,
    pt_classify,
    quasienergies,
    winding_number,
    zak_phase,
)

P36 = 0.36
ALPHA36 = CoinParams(0, 0, P36).alpha
FLAT_REAL = CoinParams(-np.pi / 2, float(np.arcsin(np.cos(np.pi / 6) / ALPHA36)), P36)
FLAT_IMAG = CoinParams(-np.pi / 2, (np.pi - float(np.arccos(1 / ALPHA36))) / 2, P36)


def test_flat_real_band_period_six():
    ks = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    for params in (CoinParams(-np.pi / 2, np.pi / 3, 0.0), FLAT_REAL):
        for k in ks:
            ep, em = quasienergies(params, float(k))
            assert ep == pytest.approx(np.pi / 6, abs=1e-12)
            assert em == pytest.approx(-np.pi / 6, abs=1e-12)


def test_flat_imaginary_band():
    ks = np.linspace(-np.pi, np.pi, 64, endpoint=False)
    for k in ks:
        ep, _ = quasienergies(FLAT_IMAG, float(k))
        assert abs(ep.real) < 1e-10
        assert ep.imag > 0


def test_exceptional_point_raises():
    # theta1 + theta2 = 0 at p = 0 closes the gap at k = 0 (d0 = 1)
    params = CoinParams(0.4, -0.4, 0.0)
    with pytest.raises(ExceptionalPoint):
        quasienergies(params, 0.0)


def test_pt_classify_examples():
    assert pt_classify(CoinParams(np.pi / 4, -np.pi / 2, P36)) is PTPhase.UNBROKEN
    assert pt_classify(FLAT_IMAG) is PTPhase.BROKEN
    assert pt_classify(FLAT_REAL) is PTPhase.UNBROKEN


def test_unitary_walks_never_break(rng):
    for _ in range(25):
        th1, th2 = rng.uniform(-np.pi, np.pi, size=2)
        assert pt_classify(CoinParams(th1, th2, 0.0)) is PTPhase.UNBROKEN


def test_band_structure_mask_matches_imaginary_part():
    ks = np.linspace(-np.pi, np.pi, 256, endpoint=False)
    params = CoinParams(0.3, 0.2, 0.5)  # broken near |k| = pi/2 only
    bands = band_structure(params, ks)
    assert bands.pt_broken_mask.any() and not bands.pt_broken_mask.all()
    np.testing.assert_array_equal(
        bands.pt_broken_mask, np.abs(bands.energies.imag) > 1e-10
    )


def hermitian_berry_phase(params: CoinParams, band: int, n_k: int) -> float:
    """Ordinary Wilson loop with unit-norm right eigenvectors (p = 0 oracle)."""
    assert params.p == 0.0
    ks = np.linspace(-np.pi, np.pi, n_k, endpoint=False)
    grid = eig_biorthogonal_grid(momentum_operator_closed(params, ks))
    b = 0 if band == +1 else 1
    psi = grid.right[:, b, :]
    links = np.einsum("kc,kc->k", psi.conj(), np.roll(psi, -1, axis=0))
    return float(-np.angle(links).sum())


def test_zak_phase_hermitian_oracle():
    params = CoinParams(-np.pi / 2, np.pi / 3, 0.0)
    for band in (+1, -1):
        assert zak_phase(params, band, 1024) == pytest.approx(
            hermitian_berry_phase(params, band, 1024), abs=1e-6
        )
    generic = CoinParams(0.9, 0.7, 0.0)
    for band in (+1, -1):
        assert zak_phase(generic, band, 1024) == pytest.approx(
            hermitian_berry_phase(generic, band, 1024), abs=1e-6
        )


def test_zak_phase_grid_convergence():
    params = CoinParams(-np.pi / 2, np.pi / 3, 0.2)
    coarse = zak_phase(params, +1, 256)
    mid = zak_phase(params, +1, 512)
    fine = zak_phase(params, +1, 1024)
    assert abs(mid - coarse) < 1e-5
    assert abs(fine - mid) < 1e-6


def test_band_sum_is_quantized(rng):
    for params in (
        CoinParams(np.pi / 4, -np.pi / 2, P36),
        CoinParams(-np.pi / 2, np.pi / 3, 0.0),
        FLAT_REAL,
        CoinParams(7 * np.pi / 25, -9 * np.pi / 20, P36),
    ):
        total = zak_phase(params, +1, 1024) + zak_phase(params, -1, 1024)
        assert abs(total / (2 * np.pi) - round(total / (2 * np.pi))) < 1e-6


def test_winding_numbers_of_the_four_marker_points():
    assert winding_number(CoinParams(np.pi / 4, -np.pi / 2, P36)) == 0
    assert winding_number(CoinParams(-np.pi / 2, np.pi / 3, 0.0)) == -2
    assert winding_number(FLAT_REAL) == -2
    assert winding_number(CoinParams(7 * np.pi / 25, -9 * np.pi / 20, P36)) == 0


def test_winding_grid_refinement_and_offset_invariance():
    params = CoinParams(-np.pi / 2, np.pi / 3, 0.0)
    base = winding_number(params, 512)
    assert winding_number(params, 256) == base
    assert winding_number(params, 1024) == base
    assert winding_number(params, 512, k_offset=0.123) == base


def test_winding_raises_in_broken_regime():
    with pytest.raises(ExceptionalPoint):
        winding_number(FLAT_IMAG)


def test_phase_diagram_p0_has_no_broken_cells():
    # cell-centered grid: the closing lines themselves carry max d0^2 = 1
    thetas = np.linspace(-np.pi, np.pi, 32, endpoint=False) + np.pi / 32
    cells = phase_diagram(thetas, thetas, 0.0, n_k=128)
    assert not any(c.pt_broken for c in cells)
    assert {c.nu for c in cells if c.nu is not None} >= {0, -2}


def test_phase_diagram_resolution_precondition():
    with pytest.raises(ValueError):
        phase_diagram(np.zeros(8), np.zeros(8), 0.0)


def test_phase_diagram_lossy_broken_bands_separate_phases():
    thetas = np.linspace(-np.pi, np.pi, 36, endpoint=False)
    cells = phase_diagram(thetas, thetas, P36, n_k=128)
    assert any(c.pt_broken for c in cells)
    for c in cells:
        if c.pt_broken:
            assert c.nu is None
            assert c.min_gap < 1e-12
    # along every grid row, a change of defined nu passes through undefined cells
    n = len(thetas)
    by_row = {}
    for c in cells:
        by_row.setdefault(c.theta1, []).append(c)
    for row in by_row.values():
        row.sort(key=lambda c: c.theta2)
        last_nu, pending_undefined = None, False
        for c in row:
            if c.nu is None:
                pending_undefined = True
                continue
            if last_nu is not None and c.nu != last_nu:
                assert pending_undefined, (
                    f"nu jumped {last_nu} -> {c.nu} with no boundary cell between"
                )
            last_nu, pending_undefined = c.nu, False


def test_min_gap_sign_tracks_pt_phase(rng):
    for _ in range(40):
        th1, th2 = rng.uniform(-np.pi, np.pi, size=2)
        params = CoinParams(float(th1), float(th2), P36)
        gap = min_gap(params)
        if abs(gap) < 1e-9:
            continue
        assert (gap < 0) == (pt_classify(params) is PTPhase.BROKEN)


def test_nonquantized_near_boundary():
    # sitting essentially on a gap-closing line: quantization must fail loudly
    # rather than return a guess (or raise at the touching itself)
    params = CoinParams(0.4, -0.4 + 1e-9, 0.0)
    with pytest.raises((NonQuantized, ExceptionalPoint)):
        winding_number(params, 128)
