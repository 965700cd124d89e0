"""Split-operator propagation of the phase-space state.

One step advances W(x, p) by applying two unimodular phase factors, each
diagonal in its own representation:

    potential factor, in x-theta:   exp(-i*dt_eff*[U(x - hbar*theta/2, t)
                                        - U(x + hbar*theta/2, t)]/hbar)
    kinetic factor, in lambda-p:    exp(-i*dt*lambda*p/mass)

First order applies the potential factor then the kinetic factor; second
order is the Strang sandwich with half-weight potential legs (evaluated at t
and t + dt when the potential is driven). Factors are generated directly in
wrapped frequency order, matching the grid's axis storage, so no shift
passes appear anywhere in the loop.

Both factors have an exactly-unit line (the theta = 0 column and the
lambda = 0 row), which pins the total probability to round-off; unimodularity
plus unitary-up-to-scaling transforms pin the l2 norm, hence the purity.

Grid-offset phases in the DFT outputs need no compensation here: each factor
acts diagonally in its own representation, so the offset phase rides through
the multiplication and cancels on the inverse transform.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .observables import diagnostics_record
from .potentials import evaluate, is_time_dependent
from .states import BOUNDARY_MASS_TOL
from .transforms import (
    Field,
    Rep,
    lambdap_to_xp,
    lambdap_to_xtheta,
    xp_to_xtheta,
    xtheta_to_lambdap,
    xtheta_to_xp,
)

__all__ = [
    "PropagatorPlan",
    "PropagationError",
    "potential_factor",
    "kinetic_factor",
    "make_plan",
    "step_first_order",
    "step_second_order",
    "propagate",
]

log = logging.getLogger(__name__)

NYQUIST_CONTENT_TOL = 1e-10


class PropagationError(RuntimeError):
    """Non-finite values appeared during propagation."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


def potential_factor(grid, potential, dt_eff, t=0.0):
    """Phase factor over (x, wrapped theta) for one potential leg of dt_eff.

    The theta = 0 column is exactly 1 (the two shifted potentials coincide
    there), which is what conserves the total probability.
    """
    if not dt_eff > 0:
        raise ValueError(f"dt_eff must be positive, got {dt_eff}")
    x = grid.x[:, None]
    shift = 0.5 * grid.hbar * grid.theta[None, :]
    du = evaluate(potential, x - shift, t) - evaluate(potential, x + shift, t)
    if not np.all(np.isfinite(du)):
        j, n = np.argwhere(~np.isfinite(du))[0]
        raise ValueError(
            f"potential is not finite at shifted arguments for x={grid.x[j]:g}, "
            f"theta={grid.theta[n]:g}"
        )
    return np.exp(-1j * dt_eff * du / grid.hbar)


def kinetic_factor(grid, mass, dt):
    """Phase factor over (wrapped lambda, p); the lambda = 0 row is exactly 1."""
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    return np.exp(-1j * (dt / mass) * np.outer(grid.lam, grid.p))


@dataclass
class PropagatorPlan:
    """Precomputed factors and step bookkeeping for one (grid, H, dt) choice.

    For order 2 the stored potential factor is the half-step version. Plans
    for time-independent potentials are immutable in practice and safe to
    share across concurrent runs on the same grid.
    """

    grid: object
    potential: object
    mass: float
    dt: float
    order: int
    time_dependent: bool
    kinetic_factor: np.ndarray
    potential_factor: np.ndarray | None
    merge_half_steps: bool = False
    flip_kinetic_sign: bool = False
    _full_potential_factor: np.ndarray | None = dataclass_field(
        default=None, repr=False
    )

    @property
    def dt_eff(self):
        """Duration of one potential leg: dt for order 1, dt/2 for order 2."""
        return self.dt if self.order == 1 else 0.5 * self.dt

    def potential_factor_at(self, t):
        if self.time_dependent:
            return potential_factor(self.grid, self.potential, self.dt_eff, t)
        return self.potential_factor

    def full_potential_factor(self):
        """Merged full-step factor for back-to-back order-2 half legs."""
        if self._full_potential_factor is None:
            self._full_potential_factor = self.potential_factor * self.potential_factor
        return self._full_potential_factor


def make_plan(grid, potential, mass, dt, order=2, merge_half_steps=False,
              flip_kinetic_sign=False):
    """Validate parameters, build the factors, and emit the accuracy note.

    There is no stability limit on dt (every factor is unimodular), but a
    per-step kinetic phase above pi wraps and shows up as shear artifacts;
    that guidance is logged, never enforced. flip_kinetic_sign negates the
    kinetic phase and exists purely as a negative-control hook for tests.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not mass > 0:
        raise ValueError(f"mass must be positive, got {mass}")
    time_dependent = is_time_dependent(potential)
    if merge_half_steps and order != 2:
        raise ValueError("half-step merging only applies to order 2")
    if merge_half_steps and time_dependent:
        raise ValueError("half-step merging requires a time-independent potential")

    kin = kinetic_factor(grid, mass, dt)
    if flip_kinetic_sign:
        kin = np.conj(kin)
    dt_eff = dt if order == 1 else 0.5 * dt
    pot = None if time_dependent else potential_factor(grid, potential, dt_eff, 0.0)

    max_phase = dt * np.max(np.abs(grid.lam)) * np.max(np.abs(grid.p)) / mass
    note = (
        f"max kinetic phase per step dt*|lambda*p|/m = {max_phase:.3f} rad "
        "(keep below pi to avoid phase-wrapping artifacts)"
    )
    if max_phase >= np.pi:
        log.warning(note)
    else:
        log.info(note)

    return PropagatorPlan(
        grid=grid,
        potential=potential,
        mass=mass,
        dt=float(dt),
        order=order,
        time_dependent=time_dependent,
        kinetic_factor=kin,
        potential_factor=pot,
        merge_half_steps=merge_half_steps,
        flip_kinetic_sign=flip_kinetic_sign,
    )


def _check_finite(data):
    if not np.all(np.isfinite(data)):
        raise PropagationError("non-finite values after propagation step")


def step_first_order(w, plan, t=0.0):
    """One first-order step: potential leg, then kinetic leg.

    Sequence: XP -> XTHETA, multiply potential factor, -> LAMBDA_P, multiply
    kinetic factor, -> XP. The potential acts first; the written operator
    order of the generator is rightmost-first.
    """
    if plan.order != 1:
        raise ValueError("plan was built for order 2; use step_second_order")
    b = xp_to_xtheta(w)
    b.data *= plan.potential_factor_at(t)
    a = xtheta_to_lambdap(b)
    a.data *= plan.kinetic_factor
    out = lambdap_to_xp(a)
    _check_finite(out.data)
    return out


def step_second_order(w, plan, t=0.0):
    """One Strang step: half potential at t, kinetic, half potential at t + dt.

    Evaluating the outer legs at t and t + dt keeps second-order accuracy for
    smooth drives; for static potentials both legs reuse the cached factor.
    """
    if plan.order != 2:
        raise ValueError("plan was built for order 1; use step_first_order")
    b = xp_to_xtheta(w)
    b.data *= plan.potential_factor_at(t)
    a = xtheta_to_lambdap(b)
    a.data *= plan.kinetic_factor
    b = lambdap_to_xtheta(a)
    b.data *= plan.potential_factor_at(t + plan.dt)
    out = xtheta_to_xp(b)
    _check_finite(out.data)
    return out


def _nyquist_fraction(field):
    """Largest relative spectral weight on the lambda/theta Nyquist lines."""
    spec_theta = xp_to_xtheta(field).data
    frac = np.max(np.abs(spec_theta[:, field.grid.np // 2])) / max(
        np.max(np.abs(spec_theta)), 1e-300
    )
    spec_lam = np.fft.fft(field.data, axis=0)
    frac_lam = np.max(np.abs(spec_lam[field.grid.nx // 2, :])) / max(
        np.max(np.abs(spec_lam)), 1e-300
    )
    return max(float(frac), float(frac_lam))


def _snapshot_health(field, record, step):
    if record.boundary_mass > BOUNDARY_MASS_TOL:
        log.warning(
            "step %d: boundary mass %.3e exceeds %.0e (box too small)",
            step, record.boundary_mass, BOUNDARY_MASS_TOL,
        )
    nyq = _nyquist_fraction(field)
    if nyq > NYQUIST_CONTENT_TOL:
        log.warning(
            "step %d: Nyquist spectral content %.3e exceeds %.0e; "
            "realness of W is no longer guaranteed to 1e-8",
            step, nyq, NYQUIST_CONTENT_TOL,
        )


def propagate(w0, plan, n_steps, observer_callback=None, snapshot_every=0, t0=0.0):
    """Advance w0 by n_steps of plan.dt, collecting snapshot diagnostics.

    Snapshots are taken at step 0, every snapshot_every steps, and at the
    final step; snapshot_every = 0 disables them entirely (the final field
    is still returned). observer_callback, when given, is called as
    callback(step, field, record) at each snapshot; the field handed over is
    the live state, copy it before mutating.

    With merge_half_steps on an order-2 plan, back-to-back half potential
    legs between snapshots are fused into full legs; snapshot steps unmerge
    so observables always see a completed Strang step. Results match the
    unmerged sequence to round-off.

    Raises PropagationError naming the step if non-finite values appear.
    """
    if w0.rep is not Rep.XP:
        raise ValueError(f"initial field must be in XP, got {w0.rep.name}")
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")

    records = []

    def snap(step, t, field):
        record = diagnostics_record(field, t, plan.potential, plan.mass)
        records.append(record)
        _snapshot_health(field, record, step)
        if observer_callback is not None:
            observer_callback(step, field, record)

    def due(step):
        if snapshot_every <= 0:
            return False
        return step == n_steps or step % snapshot_every == 0

    if due(0):
        snap(0, t0, w0)

    if plan.merge_half_steps and not plan.time_dependent and plan.order == 2:
        return _propagate_merged(w0, plan, n_steps, t0, due, snap), records

    step_fn = step_first_order if plan.order == 1 else step_second_order
    w = w0
    for step in range(1, n_steps + 1):
        t_start = t0 + (step - 1) * plan.dt
        try:
            w = step_fn(w, plan, t_start)
        except PropagationError:
            raise PropagationError(
                f"non-finite values after step {step}", step=step
            ) from None
        if due(step):
            snap(step, t0 + step * plan.dt, w)
    return w, records


def _propagate_merged(w0, plan, n_steps, t0, due, snap):
    vhalf = plan.potential_factor
    vfull = plan.full_potential_factor()
    b = xp_to_xtheta(w0)
    b.data *= vhalf
    w = w0
    for step in range(1, n_steps + 1):
        a = xtheta_to_lambdap(b)
        a.data *= plan.kinetic_factor
        b = lambdap_to_xtheta(a)
        if due(step) or step == n_steps:
            b.data *= vhalf
            w = xtheta_to_xp(b)
            if not np.all(np.isfinite(w.data)):
                raise PropagationError(f"non-finite values after step {step}", step=step)
            if due(step):
                snap(step, t0 + step * plan.dt, w)
            if step < n_steps:
                b = xp_to_xtheta(w)
                b.data *= vhalf
        else:
            b.data *= vfull
    return w
