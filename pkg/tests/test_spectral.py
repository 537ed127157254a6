"""Unit tests for merged-parity level statistics and the gap map."""

import numpy as np
import pytest

from rabi_esqpt import (
    DosSource,
    Parity,
    ParitySpectrum,
    RabiParams,
    converged_window,
    diagonalize,
    build_parity_chain,
    gap_map,
    merged_levels,
    windowed_dos,
)

P40 = RabiParams(omega0=1.0, Omega=40.0, g=0.0)


def make_spectrum(parity, energies, params=P40, n_converged=None):
    energies = np.asarray(energies, dtype=float)
    return ParitySpectrum(
        params=params,
        parity=parity,
        dim=max(len(energies), 2),
        energies=energies,
        eps=2.0 * energies / params.Omega,
        n_converged=len(energies) if n_converged is None else n_converged,
    )


def g0_sectors(eps_max=0.5):
    minus = converged_window(P40, Parity.MINUS, eps_max=eps_max)[1]
    plus = converged_window(P40, Parity.PLUS, eps_max=eps_max)[1]
    return minus, plus


class TestMergedLevels:
    def test_decoupled_interleaving(self):
        merged = merged_levels(*g0_sectors())
        # eps = -1 + k/20 with parities alternating minus, plus, minus, ...
        k = np.arange(len(merged))
        np.testing.assert_allclose(merged.eps, -1.0 + k / 20.0, atol=1e-13)
        np.testing.assert_array_equal(merged.parity_tags[::2], -1)
        np.testing.assert_array_equal(merged.parity_tags[1::2], +1)
        np.testing.assert_allclose(
            merged.sector(Parity.MINUS), -1.0 + np.arange(0, len(merged), 2) / 20.0,
            atol=1e-13,
        )

    def test_requires_converged_spectra(self):
        plain = diagonalize(build_parity_chain(P40, Parity.MINUS, 32))
        plus = g0_sectors()[1]
        with pytest.raises(ValueError):
            merged_levels(plain, plus)

    def test_rejects_swapped_or_mismatched(self):
        minus, plus = g0_sectors()
        with pytest.raises(ValueError):
            merged_levels(plus, minus)
        other = RabiParams(omega0=1.0, Omega=40.0, g=0.5)
        minus_other = converged_window(other, Parity.MINUS, eps_max=0.5)[1]
        with pytest.raises(ValueError):
            merged_levels(minus_other, plus)

    def test_stable_tie_break(self):
        minus = make_spectrum(Parity.MINUS, [0.0, 1.0, 2.0])
        plus = make_spectrum(Parity.PLUS, [0.0, 1.0, 2.0])
        merged = merged_levels(minus, plus)
        np.testing.assert_array_equal(merged.parity_tags, [-1, 1, -1, 1, -1, 1])

    def test_cut_at_lower_sector_top(self):
        minus = make_spectrum(Parity.MINUS, [0.0, 2.0, 4.0, 6.0])
        plus = make_spectrum(Parity.PLUS, [1.0, 3.0])
        merged = merged_levels(minus, plus)
        # nothing beyond the plus-sector top 3.0 can be trusted complete;
        # the cut itself is the merge contract, not a truncation warning
        np.testing.assert_array_equal(merged.energies, [0.0, 1.0, 2.0, 3.0])
        assert not merged.truncated

    def test_unconverged_tail_flag(self):
        minus = make_spectrum(Parity.MINUS, [0.0, 1.0, 2.0], n_converged=2)
        plus = make_spectrum(Parity.PLUS, [0.5, 1.5])
        merged = merged_levels(minus, plus)
        np.testing.assert_array_equal(merged.energies, [0.0, 0.5, 1.0])
        assert merged.truncated


class TestWindowedDos:
    def test_decoupled_window_density(self):
        minus, plus = g0_sectors()
        wd = windowed_dos(minus, plus, window_n=2)
        # uniform merged spacing 1/20 in eps: nu_bar = 2 / (2/20) = 20
        np.testing.assert_allclose(wd.nu_bar, 20.0, rtol=1e-12)
        curve = wd.to_dos_curve()
        assert curve.source is DosSource.QUANTUM_WINDOWED
        assert curve.window_n == 2
        # per unit bare energy: matches the harmonic value 1/omega0
        np.testing.assert_allclose(curve.nu, 1.0, rtol=1e-12)

    def test_window_count_telescopes(self):
        p = RabiParams(omega0=1.0, Omega=100.0, g=1.2)
        minus = converged_window(p, Parity.MINUS, eps_max=-0.3)[1]
        plus = converged_window(p, Parity.PLUS, eps_max=-0.3)[1]
        n = 10
        wd = windowed_dos(minus, plus, window_n=n)
        merged = merged_levels(minus, plus)
        # disjoint windows recover the total level count exactly
        widths = n / wd.nu_bar
        total = np.sum(widths[::n][: (len(merged.eps) - 1) // n])
        k_used = n * ((len(merged.eps) - 1) // n)
        assert total == pytest.approx(merged.eps[k_used] - merged.eps[0], rel=1e-12)

    def test_peak_tracks_critical_energy(self):
        p = RabiParams(omega0=1.0, Omega=100.0, g=1.2)
        minus = converged_window(p, Parity.MINUS, eps_max=-0.3)[1]
        plus = converged_window(p, Parity.PLUS, eps_max=-0.3)[1]
        wd = windowed_dos(minus, plus, window_n=10)
        peak = int(np.argmax(wd.nu_bar))
        width = 10.0 / wd.nu_bar[peak]
        assert abs(wd.eps_bar[peak] + 1.0) < 1.5 * width

    def test_eps_max_filter_and_truncated(self):
        minus, plus = g0_sectors(eps_max=0.5)
        wd = windowed_dos(minus, plus, window_n=2, eps_max=-0.5)
        assert np.all(wd.eps_bar <= -0.5)
        assert not wd.truncated
        wd_far = windowed_dos(minus, plus, window_n=2, eps_max=10.0)
        assert wd_far.truncated

    def test_degenerate_window_raises(self):
        minus = make_spectrum(Parity.MINUS, [0.0, 1.0, 2.0])
        plus = make_spectrum(Parity.PLUS, [0.0, 1.0, 2.0])
        with pytest.raises(ValueError):
            windowed_dos(minus, plus, window_n=1)

    def test_needs_enough_levels(self):
        minus = make_spectrum(Parity.MINUS, [0.0, 1.0])
        plus = make_spectrum(Parity.PLUS, [0.5, 1.5])
        with pytest.raises(ValueError):
            windowed_dos(minus, plus, window_n=4)
        with pytest.raises(ValueError):
            windowed_dos(minus, plus, window_n=0)


class TestGapMap:
    def test_decoupled_splitting(self):
        gm = gap_map(1.0, 40.0, np.array([0.0]), k_max=15)
        assert gm.k_max == 15
        # plus tower sits exactly one ladder step 2 omega0/Omega above
        np.testing.assert_allclose(gm.delta[0], 0.05, atol=1e-12)
        np.testing.assert_allclose(gm.eps_minus[0], -1.0 + 0.1 * np.arange(15), atol=1e-12)
        assert np.all(gm.converged)
        assert gm.n_unconverged == 0

    def test_doublet_collapse_supercritical(self):
        gm = gap_map(1.0, 40.0, np.array([0.5, 2.0]), k_max=6)
        # normal phase: splittings on the ladder scale
        assert np.min(np.abs(gm.delta[0])) > 1e-3
        # broken phase: lowest doublets numerically degenerate
        assert np.max(np.abs(gm.delta[1])) < 1e-10
        assert np.all(gm.eps_mid[1] < -1.0)

    def test_unconverged_reported_not_raised(self):
        gm = gap_map(1.0, 40.0, np.array([2.0]), k_max=32, dim=2)  # floor lifts dim to 64
        assert gm.delta.shape == (1, 32)
        assert gm.n_unconverged > 0
        assert not np.all(gm.converged)

    def test_k_max_validation(self):
        with pytest.raises(ValueError):
            gap_map(1.0, 40.0, np.array([1.0]), k_max=0)
