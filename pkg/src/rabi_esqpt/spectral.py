"""Spectral statistics assembled from the two parity sectors.

The quantum side of the density comparison works on the merged level list:
both parity towers interleaved in ascending order, each level keeping its
parity tag.  A running window of N consecutive spacings turns that list into
a density estimate nu_bar = N / (eps_{k+N} - eps_k) attached to the window
midpoint, directly comparable with the semiclassical curve once rescaled to
per-unit-bare-energy normalization.

The gap map tracks the signed splitting delta_k = eps_k^+ - eps_k^- of
parity partner levels across a coupling sweep.  Its collapse to numerical
zero below the critical energy line is the spectral fingerprint of the
parity-broken doublet phase; levels that fail the truncation-stability check
are excluded from analysis but kept in the arrays and reported through the
convergence mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quantum import (
    Parity,
    ParitySpectrum,
    RabiParams,
    build_parity_chain,
    default_truncation,
    diagonalize,
)
from .semiclassical import DosCurve, DosSource

__all__ = [
    "MergedLevels",
    "WindowedDos",
    "GapMap",
    "merged_levels",
    "windowed_dos",
    "gap_map",
]


@dataclass(frozen=True)
class MergedLevels:
    """Both parity towers in one ascending list, tags preserved.

    parity_tags holds +1 / -1 per level (plus / minus sector).  Only levels
    certified converged in their source spectra are included, and the list is
    cut at the lower of the two sector tops so that no cross-sector level is
    missing from the covered range (that cut is the documented merge
    contract, not a defect).  truncated marks source spectra that carried
    levels beyond their certified count.
    """

    params: RabiParams
    energies: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)
    parity_tags: np.ndarray = field(repr=False)
    truncated: bool = False

    def __post_init__(self):
        self.energies.flags.writeable = False
        self.eps.flags.writeable = False
        self.parity_tags.flags.writeable = False

    def __len__(self) -> int:
        return len(self.energies)

    def sector(self, parity: Parity) -> np.ndarray:
        """Eps values of one sector, in ascending order."""
        tag = 1 if parity is Parity.PLUS else -1
        return self.eps[self.parity_tags == tag]


@dataclass(frozen=True)
class WindowedDos:
    """Running-window density estimate from the merged level list.

    nu_bar[k] = window_n / (eps[k+N] - eps[k]) levels per unit eps, located
    at the window midpoint eps_bar[k] = (eps[k+N] + eps[k]) / 2; stride one,
    so consecutive points share all but one level.  truncated means the
    estimate does not cover the requested range: the sources carried an
    unconverged tail, or the windows stop more than one window width short
    of the requested eps_max.
    """

    params: RabiParams
    window_n: int
    eps_bar: np.ndarray = field(repr=False)
    nu_bar: np.ndarray = field(repr=False)
    n_levels: int = 0
    truncated: bool = False

    def __post_init__(self):
        self.eps_bar.flags.writeable = False
        self.nu_bar.flags.writeable = False

    def to_dos_curve(self) -> DosCurve:
        """Rescale to levels per unit bare energy (the semiclassical normalization).

        d(count)/dE = d(count)/d(eps) * 2/Omega, so the windowed estimate and
        dos_semiclassical can be overlaid without further bookkeeping.
        """
        return DosCurve(
            source=DosSource.QUANTUM_WINDOWED,
            g=self.params.g,
            omega0=self.params.omega0,
            eps=self.eps_bar.copy(),
            nu=self.nu_bar * (2.0 / self.params.Omega),
            window_n=self.window_n,
        )


@dataclass(frozen=True)
class GapMap:
    """Signed parity splitting delta_k = eps_k^+ - eps_k^- over a coupling sweep.

    Arrays are shaped (n_g, k_max).  converged marks levels whose energies in
    both sectors passed the truncation-stability check; unconverged entries
    stay in the arrays for inspection but carry no physics claim.
    """

    omega0: float
    Omega: float
    tol: float
    g: np.ndarray = field(repr=False)
    eps_minus: np.ndarray = field(repr=False)
    eps_plus: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)
    eps_mid: np.ndarray = field(repr=False)
    converged: np.ndarray = field(repr=False)
    dim: np.ndarray = field(repr=False)

    def __post_init__(self):
        for a in (self.g, self.eps_minus, self.eps_plus, self.delta,
                  self.eps_mid, self.converged, self.dim):
            a.flags.writeable = False

    @property
    def k_max(self) -> int:
        return self.delta.shape[1]

    @property
    def n_unconverged(self) -> int:
        return int(self.converged.size - np.count_nonzero(self.converged))


def merged_levels(minus: ParitySpectrum, plus: ParitySpectrum) -> MergedLevels:
    """Interleave the converged parts of both parity spectra into one list.

    The merge is stable (minus first on exact ties, which matters only for
    numerically degenerate doublets), and the result is cut at the lower of
    the two sector tops: beyond that energy the other sector's levels are
    unknown, so the merged list would have holes.
    """
    if minus.parity is not Parity.MINUS or plus.parity is not Parity.PLUS:
        raise ValueError("pass the minus-sector spectrum first, then the plus sector")
    if minus.params != plus.params:
        raise ValueError("parity spectra belong to different Hamiltonians")
    n_m, n_p = minus.n_converged, plus.n_converged
    if n_m == 0 or n_p == 0:
        raise ValueError(
            "merged_levels needs converged levels in both sectors; use "
            "converged_window or converged_levels to produce the spectra"
        )
    e_m = minus.energies[:n_m]
    e_p = plus.energies[:n_p]
    cap = min(e_m[-1], e_p[-1])
    unconverged_tail = (len(minus) > n_m) or (len(plus) > n_p)
    energies = np.concatenate([e_m, e_p])
    tags = np.concatenate([
        np.full(n_m, -1, dtype=np.int8),
        np.full(n_p, +1, dtype=np.int8),
    ])
    order = np.argsort(energies, kind="stable")
    energies = energies[order]
    tags = tags[order]
    keep = energies <= cap
    return MergedLevels(
        params=minus.params,
        energies=energies[keep],
        eps=2.0 * energies[keep] / minus.params.Omega,
        parity_tags=tags[keep],
        truncated=bool(unconverged_tail),
    )


def windowed_dos(
    minus: ParitySpectrum,
    plus: ParitySpectrum,
    window_n: int = 10,
    eps_max: float | None = None,
) -> WindowedDos:
    """Stride-1 running-window density from the merged parity spectra.

    Each point averages window_n consecutive level spacings.  If eps_max is
    given, windows whose midpoint lies above it are discarded and the result
    is flagged truncated when the kept windows end more than one window
    width short of eps_max.
    """
    if window_n < 1:
        raise ValueError("window_n must be >= 1")
    merged = merged_levels(minus, plus)
    eps = merged.eps
    if len(eps) < window_n + 1:
        raise ValueError(
            f"need at least window_n + 1 = {window_n + 1} converged levels, "
            f"have {len(eps)}"
        )
    width = eps[window_n:] - eps[:-window_n]
    if np.any(width <= 0.0):
        raise ValueError(
            f"degenerate window of {window_n} spacings; enlarge window_n "
            "(parity doublets collapse pairwise in the broken phase)"
        )
    eps_bar = 0.5 * (eps[window_n:] + eps[:-window_n])
    nu_bar = window_n / width
    truncated = merged.truncated
    if eps_max is not None:
        keep = eps_bar <= eps_max
        eps_bar, nu_bar = eps_bar[keep], nu_bar[keep]
        if len(eps_bar) == 0:
            truncated = True
        elif eps_bar[-1] + window_n / nu_bar[-1] < eps_max:
            # at least one more whole window would have fit below eps_max
            truncated = True
    return WindowedDos(
        params=merged.params,
        window_n=window_n,
        eps_bar=eps_bar,
        nu_bar=nu_bar,
        n_levels=len(eps),
        truncated=truncated,
    )


def gap_map(
    omega0: float,
    Omega: float,
    g_values: np.ndarray,
    k_max: int,
    tol: float = 1e-8,
    dim: int | None = None,
) -> GapMap:
    """Parity splittings of the lowest k_max doublets across a coupling sweep.

    For every g the two sector chains are diagonalized at a generous
    truncation and again at 1.25x that size; a level counts as converged when
    it moves by less than tol * omega0, and the larger-truncation energies
    are the ones reported.  Unconverged levels are excluded from any claim
    via the converged mask rather than raising, so one hard point cannot
    abort a whole sweep.
    """
    g_values = np.atleast_1d(np.asarray(g_values, dtype=float))
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    n_g = len(g_values)
    eps_m = np.empty((n_g, k_max))
    eps_p = np.empty((n_g, k_max))
    conv = np.empty((n_g, k_max), dtype=bool)
    dims = np.empty(n_g, dtype=int)
    for i, g in enumerate(g_values):
        params = RabiParams(omega0=omega0, Omega=Omega, g=float(g))
        d0 = dim if dim is not None else default_truncation(params)
        d0 = max(int(d0), 2 * k_max, 64)
        d1 = math.ceil(1.25 * d0)
        dims[i] = d1
        sector_eps = {}
        sector_ok = {}
        for parity in (Parity.MINUS, Parity.PLUS):
            w0 = diagonalize(build_parity_chain(params, parity, d0), k_max=k_max).energies
            w1 = diagonalize(build_parity_chain(params, parity, d1), k_max=k_max).energies
            sector_eps[parity] = 2.0 * w1 / Omega
            sector_ok[parity] = np.abs(w1 - w0) < tol * omega0
        eps_m[i] = sector_eps[Parity.MINUS]
        eps_p[i] = sector_eps[Parity.PLUS]
        conv[i] = sector_ok[Parity.MINUS] & sector_ok[Parity.PLUS]
    return GapMap(
        omega0=float(omega0),
        Omega=float(Omega),
        tol=float(tol),
        g=g_values.copy(),
        eps_minus=eps_m,
        eps_plus=eps_p,
        delta=eps_p - eps_m,
        eps_mid=0.5 * (eps_p + eps_m),
        converged=conv,
        dim=dims,
    )
