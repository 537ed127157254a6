"""Parity-resolved exact diagonalization of the quantum Rabi model.

The Hamiltonian (hbar = 1) is

    H = omega0 a^dag a + (Omega/2) sigma_z - lam (a^dag + a) sigma_x,

a single bosonic mode coupled to a two-level system.  The parity operator
exp(i pi a^dag a) sigma_z commutes with H and splits the Fock x spin space
into two decoupled chains, one per parity eigenvalue.  In the chain basis

    minus sector:  |0,down>, |1,up>, |2,down>, |3,up>, ...
    plus  sector:  |0,up>,   |1,down>, |2,up>, |3,down>, ...

site n carries Fock number n, so each sector is a real symmetric
tridiagonal matrix:

    diag[n]    = omega0 * n + spin_sign(n) * Omega / 2
    offdiag[n] = -lam * sqrt(n + 1)

with spin_sign(n) = (-1)^(n+1) in the minus sector and (-1)^n in the plus
sector.  All spectra are reported both as bare energies E and as rescaled
energies eps = 2 E / Omega, the natural units of the critical structure:
the coupling is parametrized by g = 2 lam / sqrt(omega0 Omega), with g = 1
the ground-state critical point and eps = -1 the excited-state critical
energy for g > 1.

Diagonalization never densifies the chain: eigenvalues come from bisection
with Sturm sequence counts and eigenvectors from inverse iteration
(LAPACK stebz/stein via scipy), and every returned eigenpair is certified
by an explicit residual check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

__all__ = [
    "Parity",
    "RabiParams",
    "ParityChain",
    "ParitySpectrum",
    "EigenObservables",
    "ConvergenceError",
    "TruncationLimitError",
    "build_parity_chain",
    "diagonalize",
    "converged_window",
    "converged_levels",
    "eigen_observables",
    "default_truncation",
]

# Residual certification threshold, relative to a cheap tridiagonal norm
# bound max|diag| + 2 max|offdiag|.
RESIDUAL_RTOL = 1e-9


class Parity(enum.Enum):
    """Eigenvalue of exp(i pi a^dag a) sigma_z labelling the two chains."""

    MINUS = -1
    PLUS = +1

    def spin_signs(self, dim: int) -> np.ndarray:
        """sigma_z value carried by chain sites 0..dim-1."""
        n = np.arange(dim)
        if self is Parity.MINUS:
            return -np.where(n % 2 == 0, 1.0, -1.0)
        return np.where(n % 2 == 0, 1.0, -1.0)

    @property
    def label(self) -> str:
        return "minus" if self is Parity.MINUS else "plus"


class ConvergenceError(RuntimeError):
    """An eigenpair failed its convergence or residual certification."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class TruncationLimitError(RuntimeError):
    """Truncation growth hit its cap before the window converged."""

    def __init__(self, message: str, dim: int):
        super().__init__(message)
        self.dim = dim


@dataclass(frozen=True)
class RabiParams:
    """Model parameters.  g is the dimensionless coupling 2 lam / sqrt(omega0 Omega)."""

    omega0: float
    Omega: float
    g: float

    def __post_init__(self):
        for name in ("omega0", "Omega", "g"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.omega0 <= 0 or self.Omega <= 0:
            raise ValueError("omega0 and Omega must be positive")
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if self.ratio < 1.0:
            raise ValueError(f"Omega/omega0 = {self.ratio} < 1 is outside the supported regime")

    @property
    def ratio(self) -> float:
        """R = Omega / omega0."""
        return self.Omega / self.omega0

    @property
    def lam(self) -> float:
        """Bare coupling lam = g sqrt(omega0 Omega) / 2."""
        return 0.5 * self.g * math.sqrt(self.omega0 * self.Omega)


@dataclass(frozen=True)
class ParityChain:
    """One parity sector of H as a real symmetric tridiagonal matrix."""

    params: RabiParams
    parity: Parity
    dim: int
    diag: np.ndarray = field(repr=False)
    offdiag: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.diag.flags.writeable = False
        self.offdiag.flags.writeable = False

    def norm_bound(self) -> float:
        """Upper bound on ||H_sector||_2 used for residual certification."""
        off = float(np.max(np.abs(self.offdiag))) if self.dim > 1 else 0.0
        return float(np.max(np.abs(self.diag))) + 2.0 * off

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag[:, None] * v if v.ndim == 2 else self.diag * v
        if self.dim > 1:
            if v.ndim == 2:
                out[:-1] += self.offdiag[:, None] * v[1:]
                out[1:] += self.offdiag[:, None] * v[:-1]
            else:
                out[:-1] += self.offdiag * v[1:]
                out[1:] += self.offdiag * v[:-1]
        return out


@dataclass(frozen=True)
class ParitySpectrum:
    """Ascending eigenvalues of one parity chain, optionally with vectors.

    energies are bare; eps = 2 E / Omega.  vectors, when present, hold one
    orthonormal column per eigenvalue in chain-site coordinates.
    n_converged counts leading eigenvalues certified stable against
    truncation growth (0 for a plain diagonalize call, which certifies
    residuals only).
    """

    params: RabiParams
    parity: Parity
    dim: int
    energies: np.ndarray = field(repr=False)
    eps: np.ndarray = field(repr=False)
    vectors: np.ndarray | None = field(repr=False, default=None)
    n_converged: int = 0

    def __post_init__(self):
        self.energies.flags.writeable = False
        self.eps.flags.writeable = False
        if self.vectors is not None:
            self.vectors.flags.writeable = False

    def __len__(self) -> int:
        return len(self.energies)


@dataclass(frozen=True)
class EigenObservables:
    """Per-eigenstate diagnostics computed from eigenvectors.

    n_phot = <a^dag a>; sz = <sigma_z>; p_loc is the weight on the lowest
    chain site whose spin is down (site 0 in the minus sector, site 1 in
    the plus sector), the localization marker of the critical eigenstate.
    """

    parity: Parity
    eps: np.ndarray = field(repr=False)
    n_phot: np.ndarray = field(repr=False)
    sz: np.ndarray = field(repr=False)
    p_loc: np.ndarray = field(repr=False)

    def __post_init__(self):
        for a in (self.eps, self.n_phot, self.sz, self.p_loc):
            a.flags.writeable = False


def build_parity_chain(params: RabiParams, parity: Parity, dim: int) -> ParityChain:
    """Assemble one parity sector at truncation dim (chain sites 0..dim-1)."""
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise ValueError(f"dim must be an integer >= 2, got {dim!r}")
    dim = int(dim)
    n = np.arange(dim, dtype=float)
    diag = params.omega0 * n + 0.5 * params.Omega * parity.spin_signs(dim)
    offdiag = -params.lam * np.sqrt(n[:-1] + 1.0)
    return ParityChain(params=params, parity=parity, dim=dim, diag=diag, offdiag=offdiag)


def _certify_residuals(chain: ParityChain, w: np.ndarray, v: np.ndarray) -> None:
    # ||H v - w v|| per eigenpair against RESIDUAL_RTOL * ||H|| bound
    res = chain.matvec(v) - w[None, :] * v
    norms = np.linalg.norm(res, axis=0)
    bound = RESIDUAL_RTOL * chain.norm_bound()
    bad = np.nonzero(norms > bound)[0]
    if bad.size:
        k = int(bad[0])
        raise ConvergenceError(
            f"eigenpair {k} failed residual certification: "
            f"|r| = {norms[k]:.3e} > {bound:.3e}",
            index=k,
        )


def diagonalize(chain: ParityChain, k_max: int | None = None, want_vectors: bool = False) -> ParitySpectrum:
    """Lowest k_max eigenpairs of a parity chain (all of them if k_max is None).

    Bisection/Sturm eigenvalues, inverse-iteration eigenvectors; the chain
    is never densified.  Raises ConvergenceError (with the offending index)
    if inverse iteration fails or a residual exceeds 1e-9 ||H||.
    """
    if k_max is None:
        k_max = chain.dim
    if k_max < 1 or k_max > chain.dim:
        raise ValueError(f"k_max must be in [1, dim], got {k_max}")
    try:
        out = eigh_tridiagonal(
            chain.diag,
            chain.offdiag,
            eigvals_only=not want_vectors,
            select="i",
            select_range=(0, k_max - 1),
            check_finite=False,
            lapack_driver="stebz",
        )
    except LinAlgError as exc:  # stein reports non-converged vectors here
        raise ConvergenceError(f"inverse iteration failed: {exc}", index=None) from exc
    if want_vectors:
        w, v = out
        _certify_residuals(chain, w, v)
    else:
        w, v = out, None
    return ParitySpectrum(
        params=chain.params,
        parity=chain.parity,
        dim=chain.dim,
        energies=w,
        eps=2.0 * w / chain.params.Omega,
        vectors=v,
    )


def _eigvals_below(chain: ParityChain, e_max: float) -> np.ndarray:
    """All eigenvalues E <= e_max, by bisection with value selection."""
    lo = -chain.norm_bound() - 1.0  # strictly below the whole spectrum
    try:
        w = eigh_tridiagonal(
            chain.diag,
            chain.offdiag,
            eigvals_only=True,
            select="v",
            select_range=(lo, e_max),
            check_finite=False,
            lapack_driver="stebz",
        )
    except LinAlgError as exc:
        raise ConvergenceError(f"bisection failed: {exc}", index=None) from exc
    return w


def default_truncation(params: RabiParams) -> int:
    """Default Fock truncation, generous for eps up to ~0 at coupling g."""
    return math.ceil(4.0 * params.ratio * max(1.0, params.g**2)) + 100


def _start_dim(params: RabiParams, eps_max: float) -> int:
    # classical orbit at eps_max reaches n ~ (R/2) u+, u+ the outer turning
    # point squared; pad by 30% plus a constant floor
    g2 = params.g**2
    disc = max(g2 * g2 + 2.0 * eps_max * g2 + 1.0, 0.0)
    u_plus = max(eps_max + g2 + math.sqrt(disc), 0.0)
    n_cls = 0.5 * params.ratio * u_plus
    return max(int(math.ceil(1.3 * n_cls)) + 64, 64)


def converged_window(
    params: RabiParams,
    parity: Parity,
    eps_max: float,
    tol: float = 1e-8,
    want_vectors: bool = False,
    dim_start: int | None = None,
    dim_cap: int | None = None,
) -> tuple[int, ParitySpectrum]:
    """Smallest tested truncation whose spectrum is stable below eps_max.

    Grows the truncation by 25% steps until every eigenvalue with
    eps <= eps_max moves by less than tol * omega0 (and the level count
    below eps_max is unchanged).  Returns (dim_required, spectrum) with
    spectrum.n_converged set to that level count.  Raises
    TruncationLimitError when the cap (default 200 R max(1, g^2)) is hit.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if dim_cap is None:
        dim_cap = math.ceil(200.0 * params.ratio * max(1.0, params.g**2))
    dim = dim_start if dim_start is not None else _start_dim(params, eps_max)
    dim = max(int(dim), 2)
    e_max = 0.5 * eps_max * params.Omega
    w_cur = _eigvals_below(build_parity_chain(params, parity, dim), e_max)
    while True:
        dim_next = math.ceil(1.25 * dim)
        if dim_next > dim_cap:
            raise TruncationLimitError(
                f"no converged window below eps={eps_max} within dim cap {dim_cap} "
                f"(last dim {dim}, tol {tol})",
                dim=dim,
            )
        w_next = _eigvals_below(build_parity_chain(params, parity, dim_next), e_max)
        if len(w_next) == len(w_cur) and (
            len(w_cur) == 0 or np.max(np.abs(w_next - w_cur)) < tol * params.omega0
        ):
            n_conv = len(w_cur)
            if n_conv == 0:
                spectrum = ParitySpectrum(
                    params=params,
                    parity=parity,
                    dim=dim,
                    energies=np.empty(0),
                    eps=np.empty(0),
                    n_converged=0,
                )
            else:
                spectrum = diagonalize(
                    build_parity_chain(params, parity, dim),
                    k_max=n_conv,
                    want_vectors=want_vectors,
                )
                spectrum = ParitySpectrum(
                    params=params,
                    parity=parity,
                    dim=dim,
                    energies=spectrum.energies,
                    eps=spectrum.eps,
                    vectors=spectrum.vectors,
                    n_converged=n_conv,
                )
            return dim, spectrum
        dim, w_cur = dim_next, w_next


def converged_levels(
    params: RabiParams,
    parity: Parity,
    k_max: int,
    tol: float = 1e-8,
    want_vectors: bool = False,
    dim_start: int | None = None,
    dim_cap: int | None = None,
) -> ParitySpectrum:
    """Spectrum with the lowest k_max eigenvalues stable against truncation.

    Count-based companion of converged_window: grows the truncation by 25%
    steps until E_0..E_{k_max-1} each move by less than tol * omega0.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if dim_cap is None:
        dim_cap = math.ceil(200.0 * params.ratio * max(1.0, params.g**2))
    dim = dim_start if dim_start is not None else max(4 * k_max, 128)
    dim = max(int(dim), k_max, 2)
    chain = build_parity_chain(params, parity, dim)
    w_cur = diagonalize(chain, k_max=k_max).energies
    while True:
        dim_next = math.ceil(1.25 * dim)
        if dim_next > dim_cap:
            raise TruncationLimitError(
                f"lowest {k_max} levels not converged within dim cap {dim_cap}",
                dim=dim,
            )
        chain_next = build_parity_chain(params, parity, dim_next)
        w_next = diagonalize(chain_next, k_max=k_max).energies
        if np.max(np.abs(w_next - w_cur)) < tol * params.omega0:
            spec = diagonalize(chain, k_max=k_max, want_vectors=want_vectors)
            return ParitySpectrum(
                params=params,
                parity=parity,
                dim=dim,
                energies=spec.energies,
                eps=spec.eps,
                vectors=spec.vectors,
                n_converged=k_max,
            )
        dim, chain, w_cur = dim_next, chain_next, w_next


def eigen_observables(spectrum: ParitySpectrum) -> EigenObservables:
    """<a^dag a>, <sigma_z>, and down-spin localization weight per eigenstate."""
    if spectrum.vectors is None:
        raise ValueError("spectrum carries no eigenvectors; diagonalize with want_vectors=True")
    v2 = spectrum.vectors**2
    n = np.arange(spectrum.dim, dtype=float)
    signs = spectrum.parity.spin_signs(spectrum.dim)
    n_phot = n @ v2
    sz = signs @ v2
    loc_site = 0 if spectrum.parity is Parity.MINUS else 1
    p_loc = v2[loc_site].copy()
    return EigenObservables(
        parity=spectrum.parity,
        eps=spectrum.eps.copy(),
        n_phot=n_phot,
        sz=sz,
        p_loc=p_loc,
    )
