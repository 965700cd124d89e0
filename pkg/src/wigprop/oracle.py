"""Independent cross-check: wavefunction split-operator propagation.

For a pure initial state the phase-space propagation must agree with a
textbook split-step Schrodinger propagation of the wavefunction followed by
a discrete Wigner transform. The two routes share nothing but the grid and
the potential catalog, so agreement at every snapshot is a strong end-to-end
check of the transform and factor conventions.

The wavefunction lives on the grid's x axis; its momentum grid is the
conjugate wrapped frequency axis scaled by hbar (i.e. hbar * grid.lam), so
both methods see commensurate discretizations.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.fft as _fft

from .potentials import evaluate
from .propagator import PropagationError, make_plan, step_first_order, step_second_order
from .states import build_initial_state, wigner_from_wavefunction
from .transforms import worker_count

__all__ = [
    "harmonic_wavefunction",
    "gaussian_wavepacket",
    "initial_wavefunction",
    "schrodinger_step",
    "schrodinger_propagate",
    "compare_fields",
    "CrossValidationReport",
    "cross_validate",
]


def _unit_norm(psi, dx):
    return psi / np.sqrt(dx * np.sum(np.abs(psi) ** 2))


def harmonic_wavefunction(grid, n, m=1.0, omega=1.0):
    """n-th harmonic-oscillator eigenfunction, unit l2 norm under dx.

    Built with the normalized Hermite-function recurrence
    phi_{k+1} = sqrt(2/(k+1)) xi phi_k - sqrt(k/(k+1)) phi_{k-1}.
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    xi = grid.x * np.sqrt(m * omega / grid.hbar)
    phi_prev = np.zeros_like(xi)
    phi = (m * omega / (np.pi * grid.hbar)) ** 0.25 * np.exp(-0.5 * xi**2)
    for k in range(n):
        phi_prev, phi = phi, (
            np.sqrt(2.0 / (k + 1)) * xi * phi - np.sqrt(k / (k + 1.0)) * phi_prev
        )
    return _unit_norm(phi.astype(np.complex128), grid.dx)


def gaussian_wavepacket(grid, x0=0.0, p0=0.0, sigma_x=None):
    """Coherent wavepacket exp(-(x-x0)^2/(4 sx^2) + i p0 x / hbar).

    Its Wigner function is the Gaussian with sigma_p = hbar / (2 sigma_x).
    """
    if sigma_x is None:
        sigma_x = np.sqrt(grid.hbar / 2.0)
    if not sigma_x > 0:
        raise ValueError(f"sigma_x must be positive, got {sigma_x}")
    psi = np.exp(
        -((grid.x - x0) ** 2) / (4.0 * sigma_x**2) + 1j * p0 * grid.x / grid.hbar
    )
    return _unit_norm(psi, grid.dx)


def initial_wavefunction(grid, spec):
    """Wavefunction matching a pure StateSpec (for cross-validation)."""
    if spec.kind == "gaussian":
        sx = spec.sigma_x if spec.sigma_x is not None else np.sqrt(grid.hbar / 2.0)
        sp = spec.sigma_p if spec.sigma_p is not None else np.sqrt(grid.hbar / 2.0)
        if abs(sx * sp - grid.hbar / 2.0) > 1e-12 * grid.hbar:
            raise ValueError(
                "gaussian state is mixed (sigma_x*sigma_p != hbar/2); "
                "cross-validation needs a pure state"
            )
        return gaussian_wavepacket(grid, spec.x0, spec.p0, sx)
    if spec.kind == "ho_eigenstate":
        return harmonic_wavefunction(grid, spec.n, spec.m, spec.omega)
    if spec.kind == "from_wavefunction":
        return _unit_norm(np.asarray(spec.psi, dtype=np.complex128), grid.dx)
    raise ValueError(f"no wavefunction construction for state kind {spec.kind!r}")


def _kinetic_psi_factor(grid, mass, dt):
    # p = hbar*lambda on the conjugate axis, so K = hbar*lambda^2/(2m) per hbar
    return np.exp(-1j * dt * grid.hbar * grid.lam**2 / (2.0 * mass))


def schrodinger_step(psi, grid, potential, mass, dt, order=2, t=0.0):
    """One split-step of the wavefunction; same order semantics as the
    phase-space propagator (potential leg first, Strang for order 2)."""
    if order == 1:
        psi = psi * np.exp(-1j * dt * evaluate(potential, grid.x, t) / grid.hbar)
        psi = _fft.fft(psi, workers=worker_count())
        psi *= _kinetic_psi_factor(grid, mass, dt)
        psi = _fft.ifft(psi, workers=worker_count())
    elif order == 2:
        half = 0.5 * dt
        psi = psi * np.exp(-1j * half * evaluate(potential, grid.x, t) / grid.hbar)
        psi = _fft.fft(psi, workers=worker_count())
        psi *= _kinetic_psi_factor(grid, mass, dt)
        psi = _fft.ifft(psi, workers=worker_count())
        psi *= np.exp(-1j * half * evaluate(potential, grid.x, t + dt) / grid.hbar)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not np.all(np.isfinite(psi)):
        raise PropagationError("non-finite wavefunction after split step")
    return psi


def schrodinger_propagate(psi, grid, potential, mass, dt, n_steps, order=2, t0=0.0):
    for step in range(n_steps):
        psi = schrodinger_step(psi, grid, potential, mass, dt, order, t0 + step * dt)
    return psi


def compare_fields(wa, wb):
    """(l2_rel, linf_rel) of wa - wb, both relative to wb."""
    if wa.data.shape != wb.data.shape:
        raise ValueError(
            f"field shapes differ: {wa.data.shape} vs {wb.data.shape}"
        )
    diff = wa.data - wb.data
    l2 = float(np.linalg.norm(diff) / max(np.linalg.norm(wb.data), 1e-300))
    linf = float(np.max(np.abs(diff)) / max(np.max(np.abs(wb.data)), 1e-300))
    return l2, linf


@dataclass(frozen=True)
class CrossValidationRow:
    step: int
    t: float
    l2_rel: float
    linf_rel: float


@dataclass(frozen=True)
class CrossValidationReport:
    rows: tuple
    l2_rel_max: float | None
    linf_rel_max: float | None

    @property
    def worst_l2(self):
        return max(r.l2_rel for r in self.rows)

    @property
    def worst_linf(self):
        return max(r.linf_rel for r in self.rows)

    @property
    def passed(self):
        ok = True
        if self.l2_rel_max is not None:
            ok = ok and self.worst_l2 <= self.l2_rel_max
        if self.linf_rel_max is not None:
            ok = ok and self.worst_linf <= self.linf_rel_max
        return ok


def cross_validate(config):
    """Run both propagators from the same pure state and compare snapshots.

    The Wigner route steps W directly; the oracle route steps the
    wavefunction and Wigner-transforms it at each snapshot. Both states are
    normalized at t = 0 regardless of the config's normalize flag so the
    comparison is scale-free.
    """
    grid = config.make_grid()
    potential = config.make_potential()
    state = replace(config.make_state_spec(), normalize=True)
    prop = config.propagation

    w = build_initial_state(grid, state)
    psi = initial_wavefunction(grid, state)
    plan = make_plan(
        grid, potential, prop.mass, prop.dt, prop.order,
        flip_kinetic_sign=prop.debug_flip_kinetic_sign,
    )
    step_w = step_first_order if prop.order == 1 else step_second_order

    every = prop.snapshot_every if prop.snapshot_every > 0 else prop.n_steps

    def due(step):
        return step == prop.n_steps or step % every == 0

    rows = []

    def record(step, t):
        w_psi = wigner_from_wavefunction(grid, psi)
        l2, linf = compare_fields(w, w_psi)
        rows.append(CrossValidationRow(step=step, t=t, l2_rel=l2, linf_rel=linf))

    record(0, 0.0)
    for step in range(1, prop.n_steps + 1):
        t_start = (step - 1) * prop.dt
        w = step_w(w, plan, t_start)
        psi = schrodinger_step(psi, grid, potential, prop.mass, prop.dt,
                               prop.order, t_start)
        if due(step):
            record(step, step * prop.dt)

    validation = getattr(config, "validation", None)
    return CrossValidationReport(
        rows=tuple(rows),
        l2_rel_max=validation.l2_rel_max if validation else None,
        linf_rel_max=validation.linf_rel_max if validation else None,
    )
