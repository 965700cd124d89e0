"""Scalar and vector diagnostics of a phase-space field.

All diagnostics act on the XP representation and use plain Riemann sums with
the dx*dp cell weight; for the periodic, spectrally decayed fields this
solver produces, higher-order quadrature rules would change nothing.

The real part of the field carries the physics. Diagnostics never take the
real part silently: max_im_rel tracks the relative size of the imaginary
part, which is the canary for any transform or factor-alignment bug.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .potentials import evaluate
from .transforms import Rep, RepresentationError

__all__ = [
    "DiagnosticsRecord",
    "total_probability",
    "purity",
    "expectation",
    "marginals",
    "negativity_volume",
    "energy",
    "max_im_rel",
    "boundary_mass",
    "diagnostics_record",
]


def _require_xp(field):
    if field.rep is not Rep.XP:
        raise RepresentationError(
            f"observables need the XP representation, got {field.rep.name}"
        )


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Per-snapshot scalars written to the diagnostics table."""

    t: float
    total_prob: float
    purity: float
    mean_x: float
    mean_p: float
    energy: float
    min_w: float
    max_im_rel: float
    boundary_mass: float

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def total_probability(field):
    """dx*dp * sum(Re W)."""
    _require_xp(field)
    return field.grid.cell_area * float(np.sum(field.data.real))


def purity(field):
    """2*pi*hbar * dx*dp * sum((Re W)^2); 1 for pure states."""
    _require_xp(field)
    g = field.grid
    return 2.0 * np.pi * g.hbar * g.cell_area * float(np.sum(field.data.real**2))


def expectation(field, f):
    """dx*dp * sum(f(x, p) * Re W) for a broadcastable callable f."""
    _require_xp(field)
    g = field.grid
    values = f(g.x[:, None], g.p[None, :])
    return g.cell_area * float(np.sum(values * field.data.real))


def marginals(field):
    """Position and momentum densities: (dp * sum over p, dx * sum over x)."""
    _require_xp(field)
    g = field.grid
    w = field.data.real
    return g.dp * w.sum(axis=1), g.dx * w.sum(axis=0)


def negativity_volume(field):
    """dx*dp * sum|Re W| minus the total probability; 0 for classical states."""
    _require_xp(field)
    w = field.data.real
    return field.grid.cell_area * float(np.sum(np.abs(w)) - np.sum(w))


def energy(field, potential, mass, t=0.0):
    """<H> = dx*dp * sum((p^2/2m + U(x, t)) * Re W)."""
    _require_xp(field)
    g = field.grid
    h = g.p[None, :] ** 2 / (2.0 * mass) + evaluate(potential, g.x, t)[:, None]
    return g.cell_area * float(np.sum(h * field.data.real))


def max_im_rel(field):
    """max|Im W| / max|Re W| (0 for an identically zero field)."""
    peak = float(np.max(np.abs(field.data.real)))
    if peak == 0.0:
        return 0.0
    return float(np.max(np.abs(field.data.imag))) / peak


def boundary_mass(field):
    """dx*dp * sum of |Re W| over the outermost ring of cells.

    Above ~1e-10 this signals that the box is too small for the state.
    """
    _require_xp(field)
    w = np.abs(field.data.real)
    ring = w[0, :].sum() + w[-1, :].sum() + w[1:-1, 0].sum() + w[1:-1, -1].sum()
    return field.grid.cell_area * float(ring)


def diagnostics_record(field, t, potential, mass):
    """Assemble the full per-snapshot record at time t."""
    _require_xp(field)
    w = field.data.real
    return DiagnosticsRecord(
        t=float(t),
        total_prob=total_probability(field),
        purity=purity(field),
        mean_x=expectation(field, lambda x, p: x),
        mean_p=expectation(field, lambda x, p: p),
        energy=energy(field, potential, mass, t),
        min_w=float(np.min(w)),
        max_im_rel=max_im_rel(field),
        boundary_mass=boundary_mass(field),
    )
