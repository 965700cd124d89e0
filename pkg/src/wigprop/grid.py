"""Phase-space discretization shared by all four representations.

The state lives on a rectangular ``nx x np`` grid. The position and momentum
axes are uniform samplings of the half-open boxes ``[-lx, lx)`` and
``[-lp, lp)``; their conjugate axes (lambda for x, theta for p) are the DFT
angular frequencies, stored in wrapped order ``[0, +df, ..., -max, ..., -df]``.

The sample boxes start at -lx / -lp rather than 0, which adds a per-bin phase
to raw DFT outputs relative to the continuum transforms. Every multiplicative
factor applied in a transformed representation is diagonal in that
representation's index, so these phases ride through unchanged and cancel on
the inverse transform; no compensation phases are applied anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy

__all__ = ["Grid", "make_grid", "wrapped_frequencies"]


def wrapped_frequencies(n, d):
    """Angular DFT frequencies for n samples of spacing d, wrapped order.

    Entry m equals ``2*pi*m' / (n*d)`` with ``m' = m`` for ``m < n/2`` and
    ``m' = m - n`` otherwise, i.e. ``[0, +, ..., -Nyquist, ..., -]``.
    n must be even so the Nyquist bin sits alone at index n/2.
    """
    if n < 2 or n % 2 != 0:
        raise ValueError(f"sample count must be even and >= 2, got {n}")
    if not d > 0:
        raise ValueError(f"sample spacing must be positive, got {d}")
    return 2.0 * numpy.pi * numpy.fft.fftfreq(n, d)


@dataclass(frozen=True, eq=False)
class Grid:
    """Immutable discretization of the x, p, lambda and theta axes.

    x[j] = -lx + j*dx and p[k] = -lp + k*dp with dx = 2*lx/nx, dp = 2*lp/np.
    lam and theta are the wrapped angular frequencies conjugate to x and p,
    so dx*(lambda spacing) = 2*pi/nx and dp*(theta spacing) = 2*pi/np.
    """

    nx: int
    np: int
    lx: float
    lp: float
    hbar: float
    dx: float
    dp: float
    x: numpy.ndarray
    p: numpy.ndarray
    lam: numpy.ndarray
    theta: numpy.ndarray

    @property
    def shape(self):
        return (self.nx, self.np)

    @property
    def cell_area(self):
        """Phase-space volume element dx*dp used by all Riemann sums."""
        return self.dx * self.dp

    def __repr__(self):
        return (
            f"Grid(nx={self.nx}, np={self.np}, lx={self.lx}, lp={self.lp}, "
            f"hbar={self.hbar})"
        )


def make_grid(nx, np, lx, lp, hbar=1.0):
    """Build a Grid from axis counts and box half-widths (atomic units).

    Counts must be even (the lone Nyquist bin of an odd count would break the
    conjugate-pair bookkeeping the propagator relies on) and the half-widths
    and hbar strictly positive.
    """
    for name, count in (("nx", nx), ("np", np)):
        if not isinstance(count, (int, numpy.integer)):
            raise ValueError(f"{name} must be an integer, got {count!r}")
        if count < 2 or count % 2 != 0:
            raise ValueError(f"{name} must be even and >= 2, got {count}")
    for name, value in (("lx", lx), ("lp", lp), ("hbar", hbar)):
        if not value > 0:
            raise ValueError(f"{name} must be positive, got {value}")

    nx = int(nx)
    np_ = int(np)
    dx = 2.0 * lx / nx
    dp = 2.0 * lp / np_
    x = -lx + dx * numpy.arange(nx)
    p = -lp + dp * numpy.arange(np_)
    lam = wrapped_frequencies(nx, dx)
    theta = wrapped_frequencies(np_, dp)
    for vec in (x, p, lam, theta):
        vec.flags.writeable = False
    return Grid(
        nx=nx, np=np_, lx=float(lx), lp=float(lp), hbar=float(hbar),
        dx=dx, dp=dp, x=x, p=p, lam=lam, theta=theta,
    )
