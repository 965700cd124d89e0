"""Potential-energy catalog U(x, t) for the propagator and the energy observable.

Supported kinds:

    free              U = 0
    harmonic          U = m * omega^2 * x^2 / 2
    quartic           U = c * x^4
    morse             U = D * (1 - exp(-a*(x - x0)))^2
    morse_unsquared   U = D * (1 - exp(-a*(x - x0)))   (unbounded below for
                      x -> -inf; kept for fidelity experiments, the squared
                      form above is the physical default)
    gaussian_barrier  U = V0 * exp(-(x - x0)^2 / (2*sigma^2))

Any kind may carry a sinusoidal dipole drive, which adds -x * E(t) with
E(t) = E0 * sin(omega * t + phi). A drive with E0 = 0 is dropped at
construction, so is_time_dependent is false for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Drive",
    "PotentialSpec",
    "KINDS",
    "free",
    "harmonic",
    "quartic",
    "morse",
    "morse_unsquared",
    "gaussian_barrier",
    "evaluate",
    "is_time_dependent",
]

KINDS = (
    "free",
    "harmonic",
    "quartic",
    "morse",
    "morse_unsquared",
    "gaussian_barrier",
)

# per-kind parameter names and the ones that must be strictly positive
_PARAMS = {
    "free": (),
    "harmonic": ("m", "omega"),
    "quartic": ("c",),
    "morse": ("D", "a", "x0"),
    "morse_unsquared": ("D", "a", "x0"),
    "gaussian_barrier": ("V0", "sigma", "x0"),
}
_POSITIVE = {"m", "omega", "D", "a", "sigma"}


@dataclass(frozen=True)
class Drive:
    """Sinusoidal dipole drive: adds -x * E0 * sin(omega*t + phi) to U."""

    E0: float
    omega: float
    phi: float = 0.0

    def field_at(self, t):
        return self.E0 * np.sin(self.omega * t + self.phi)


@dataclass(frozen=True)
class PotentialSpec:
    """Declarative potential: a catalog kind, its parameters, optional drive."""

    kind: str
    params: dict = field(default_factory=dict)
    drive: Drive | None = None

    def __post_init__(self):
        if self.kind not in _PARAMS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        expected = set(_PARAMS[self.kind])
        got = set(self.params)
        if got != expected:
            raise ValueError(
                f"potential kind {self.kind!r} takes parameters "
                f"{sorted(expected)}, got {sorted(got)}"
            )
        for name in sorted(got):
            value = self.params[name]
            if not np.isfinite(value):
                raise ValueError(f"parameter {name} must be finite, got {value}")
            if name in _POSITIVE and not value > 0:
                raise ValueError(f"parameter {name} must be positive, got {value}")
        if self.drive is not None:
            if not np.isfinite(self.drive.E0) or not np.isfinite(self.drive.omega):
                raise ValueError("drive parameters must be finite")
            if self.drive.E0 == 0.0:
                # zero-amplitude drive is no drive at all
                object.__setattr__(self, "drive", None)


def free(drive=None):
    return PotentialSpec("free", {}, drive)


def harmonic(m=1.0, omega=1.0, drive=None):
    return PotentialSpec("harmonic", {"m": m, "omega": omega}, drive)


def quartic(c=0.1, drive=None):
    return PotentialSpec("quartic", {"c": c}, drive)


def morse(D=20.0, a=0.16, x0=0.0, drive=None):
    return PotentialSpec("morse", {"D": D, "a": a, "x0": x0}, drive)


def morse_unsquared(D=20.0, a=0.16, x0=0.0, drive=None):
    return PotentialSpec("morse_unsquared", {"D": D, "a": a, "x0": x0}, drive)


def gaussian_barrier(V0=3.0, sigma=1.0, x0=0.0, drive=None):
    # default barrier height/width: a standard scattering setup, overridable
    return PotentialSpec("gaussian_barrier", {"V0": V0, "sigma": sigma, "x0": x0}, drive)


def evaluate(spec, x, t=0.0):
    """Evaluate U(x, t) elementwise; x may be a scalar or any ndarray."""
    x = np.asarray(x, dtype=np.float64)
    q = spec.params
    if spec.kind == "free":
        u = np.zeros_like(x)
    elif spec.kind == "harmonic":
        u = 0.5 * q["m"] * q["omega"] ** 2 * x**2
    elif spec.kind == "quartic":
        u = q["c"] * x**4
    elif spec.kind == "morse":
        u = q["D"] * (1.0 - np.exp(-q["a"] * (x - q["x0"]))) ** 2
    elif spec.kind == "morse_unsquared":
        u = q["D"] * (1.0 - np.exp(-q["a"] * (x - q["x0"])))
    elif spec.kind == "gaussian_barrier":
        u = q["V0"] * np.exp(-((x - q["x0"]) ** 2) / (2.0 * q["sigma"] ** 2))
    else:  # unreachable, __post_init__ validates the kind
        raise ValueError(f"unknown potential kind {spec.kind!r}")
    if spec.drive is not None:
        u = u - x * spec.drive.field_at(t)
    return u


def is_time_dependent(spec):
    """True iff the potential must be re-evaluated at each time step."""
    return spec.drive is not None
