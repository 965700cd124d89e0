"""Initial Wigner functions on a grid.

Three constructors: a Gaussian (coherent for sigma_x*sigma_p = hbar/2), the
harmonic-oscillator eigenstate family, and the discrete Wigner transform of
an arbitrary wavefunction sampled on the x axis. All of them return fields
whose imaginary part is identically zero.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .observables import boundary_mass, total_probability
from .transforms import Field, Rep

__all__ = [
    "StateSpec",
    "BoundaryMassWarning",
    "gaussian_wigner",
    "ho_eigenstate_wigner",
    "wigner_from_wavefunction",
    "build_initial_state",
]

MAX_HO_LEVEL = 30

BOUNDARY_MASS_TOL = 1e-10


class BoundaryMassWarning(UserWarning):
    """The state carries non-negligible weight on the outermost grid cells."""


def _check_boundary(field, context):
    mass = boundary_mass(field)
    if mass > BOUNDARY_MASS_TOL:
        warnings.warn(
            f"{context}: boundary mass {mass:.3e} exceeds {BOUNDARY_MASS_TOL:.0e}; "
            "the phase-space box is too small for this state",
            BoundaryMassWarning,
            stacklevel=3,
        )


def _normalized(w, grid, normalize):
    if normalize:
        w = w / (grid.cell_area * w.sum())
    return Field(w.astype(np.complex128), Rep.XP, grid)


def gaussian_wigner(grid, x0=0.0, p0=0.0, sigma_x=None, sigma_p=None, normalize=True):
    """Gaussian W ~ exp(-(x-x0)^2/(2 sx^2) - (p-p0)^2/(2 sp^2)).

    Defaults are the minimal-uncertainty widths sigma_x = sigma_p =
    sqrt(hbar/2). Unnormalized, the peak value is exactly 1; normalized,
    dx*dp*sum(W) = 1. Warns when the +-5 sigma ellipse leaks out of the box.
    """
    if sigma_x is None:
        sigma_x = np.sqrt(grid.hbar / 2.0)
    if sigma_p is None:
        sigma_p = np.sqrt(grid.hbar / 2.0)
    for name, value in (("sigma_x", sigma_x), ("sigma_p", sigma_p)):
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")
    if not (np.isfinite(x0) and np.isfinite(p0)):
        raise ValueError("x0 and p0 must be finite")
    w = np.exp(
        -((grid.x[:, None] - x0) ** 2) / (2.0 * sigma_x**2)
        - ((grid.p[None, :] - p0) ** 2) / (2.0 * sigma_p**2)
    )
    field = _normalized(w, grid, normalize)
    _check_boundary(field, "gaussian_wigner")
    return field


def _laguerre(n, u):
    """L_n(u) elementwise by the three-term recurrence (stable for n <= 30)."""
    prev = np.ones_like(u)
    if n == 0:
        return prev
    cur = 1.0 - u
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - u) * cur - k * prev) / (k + 1)
    return cur


def ho_eigenstate_wigner(grid, n, m=1.0, omega=1.0, normalize=True):
    """Wigner function of the n-th harmonic-oscillator eigenstate.

    Closed form: W_n = ((-1)^n / (pi*hbar)) * exp(-2 Hc/(hbar*omega))
    * L_n(4 Hc/(hbar*omega)) with Hc = p^2/(2m) + m*omega^2*x^2/2. For n = 0
    this reduces to the minimal-uncertainty Gaussian; for n >= 1 the state
    has a genuinely negative region around the origin.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if n > MAX_HO_LEVEL:
        raise ValueError(f"n > {MAX_HO_LEVEL} not supported (recurrence accuracy)")
    if not (m > 0 and omega > 0):
        raise ValueError("m and omega must be positive")
    hbar = grid.hbar
    hc = grid.p[None, :] ** 2 / (2.0 * m) + 0.5 * m * omega**2 * grid.x[:, None] ** 2
    u = 4.0 * hc / (hbar * omega)
    w = ((-1.0) ** n / (np.pi * hbar)) * np.exp(-0.5 * u) * _laguerre(n, u)
    field = _normalized(w, grid, normalize)
    _check_boundary(field, "ho_eigenstate_wigner")
    return field


def wigner_from_wavefunction(grid, psi):
    """Discrete Wigner transform of a wavefunction sampled on grid.x.

    W(x_j, p_k) = (dx / (pi*hbar)) * sum_s psi(x_j + s) conj(psi(x_j - s))
    * exp(-2i p_k s / hbar), with s running over integer multiples of dx in
    [-lx, lx) and psi zero-padded outside the box. The momentum axis is the
    grid's own p vector (not a DFT-dual grid), so the exponential sum is a
    dense transform rather than an FFT.

    psi must have length nx and unit l2 norm under the dx weight.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    nx = grid.nx
    if psi.shape != (nx,):
        raise ValueError(f"psi must have shape ({nx},), got {psi.shape}")
    norm = grid.dx * float(np.sum(np.abs(psi) ** 2))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"psi must be normalized (dx*sum|psi|^2 = {norm:.8f})")

    half = nx // 2

    def shifted(m):
        out = np.zeros(nx, dtype=np.complex128)
        if m >= 0:
            out[: nx - m] = psi[m:]
        else:
            out[-m:] = psi[: nx + m]
        return out

    corr = np.empty((nx, nx), dtype=np.complex128)
    for mi, m in enumerate(range(-half, half)):
        corr[:, mi] = shifted(m) * np.conj(shifted(-m))
    s = grid.dx * np.arange(-half, half)
    kernel = np.exp(-2.0j * np.outer(s, grid.p) / grid.hbar)
    w = (grid.dx / (np.pi * grid.hbar)) * (corr @ kernel)

    re_peak = float(np.max(np.abs(w.real)))
    im_peak = float(np.max(np.abs(w.imag)))
    if re_peak == 0.0 or im_peak > 1e-10 * re_peak:
        raise ValueError(
            f"Wigner transform is not real (max|Im|/max|Re| = {im_peak / max(re_peak, 1e-300):.3e}); "
            "the wavefunction likely straddles the box boundary"
        )
    field = Field(w.real, Rep.XP, grid)
    _check_boundary(field, "wigner_from_wavefunction")
    return field


@dataclass(frozen=True)
class StateSpec:
    """Declarative initial-state choice used by the CLI and the validator."""

    kind: str
    x0: float = 0.0
    p0: float = 0.0
    sigma_x: float | None = None
    sigma_p: float | None = None
    n: int = 0
    m: float = 1.0
    omega: float = 1.0
    psi: np.ndarray | None = None
    normalize: bool = True


def build_initial_state(grid, spec):
    """Construct the Field a StateSpec describes."""
    if spec.kind == "gaussian":
        return gaussian_wigner(
            grid, spec.x0, spec.p0, spec.sigma_x, spec.sigma_p, spec.normalize
        )
    if spec.kind == "ho_eigenstate":
        return ho_eigenstate_wigner(grid, spec.n, spec.m, spec.omega, spec.normalize)
    if spec.kind == "from_wavefunction":
        if spec.psi is None:
            raise ValueError("from_wavefunction state needs a wavefunction")
        field = wigner_from_wavefunction(grid, spec.psi)
        if spec.normalize:
            field.data /= total_probability(field)
        return field
    raise ValueError(f"unknown state kind {spec.kind!r}")
