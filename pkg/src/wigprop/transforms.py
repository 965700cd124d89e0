"""Axis-wise DFTs moving the state between its four representations.

The representation square (axis 0 = x or lambda, axis 1 = p or theta):

    XP ----fft(axis 1)----> XTHETA ----fft(axis 0)----> LAMBDA_THETA
    XP ----fft(axis 0)----> LAMBDA_P                       |
    XTHETA --fft(0), ifft(1)--> LAMBDA_P <---ifft(axis 1)--+

Conventions: "forward" is the unnormalized DFT, out[j] = sum_k in[k]
exp(-2i*pi*j*k/N); "inverse" carries the 1/N factor. All normalization
therefore lives in the inverse transforms, and the observable formulas are
written for exactly this convention. Frequencies stay in wrapped order end
to end, so no shift passes are needed.

Transforms go through scipy's pocketfft, which keeps an internal cache of
twiddle tables per transform length, so repeated same-shape transforms in
the propagation loop pay the planning cost once. The worker count (threads
across the non-transformed axis) is capped by the WIGPROP_THREADS or
PROG_THREADS environment variables.
"""

from __future__ import annotations

import enum
import os

import numpy as np
import scipy.fft as _fft

__all__ = [
    "Rep",
    "Field",
    "RepresentationError",
    "xp_to_xtheta",
    "xtheta_to_xp",
    "xtheta_to_lambdap",
    "lambdap_to_xtheta",
    "xtheta_to_lambdatheta",
    "lambdatheta_to_xtheta",
    "lambdap_to_xp",
    "worker_count",
]


class Rep(enum.Enum):
    """Meaning of the two axes of a Field."""

    XP = "x-p"
    XTHETA = "x-theta"
    LAMBDA_THETA = "lambda-theta"
    LAMBDA_P = "lambda-p"


class RepresentationError(ValueError):
    """A transform or observable was handed a Field in the wrong representation."""


class Field:
    """Complex nx-by-np state matrix tagged with its current representation.

    The tag names the meaning of both axes and is updated by every transform.
    A Field is mutated only by its owner; the grid it references is immutable.
    """

    __slots__ = ("data", "rep", "grid")

    def __init__(self, data, rep, grid):
        data = np.asarray(data)
        if data.shape != grid.shape:
            raise ValueError(
                f"field shape {data.shape} does not match grid shape {grid.shape}"
            )
        if not np.iscomplexobj(data):
            data = data.astype(np.complex128)
        self.data = data
        self.rep = rep
        self.grid = grid

    def copy(self):
        return Field(self.data.copy(), self.rep, self.grid)

    def __repr__(self):
        return f"Field(rep={self.rep.name}, shape={self.data.shape})"


def worker_count():
    """Thread cap for axis transforms (env override, else all cores)."""
    for var in ("WIGPROP_THREADS", "PROG_THREADS"):
        raw = os.environ.get(var)
        if raw:
            try:
                n = int(raw)
            except ValueError:
                raise ValueError(f"{var} must be an integer, got {raw!r}") from None
            if n < 1:
                raise ValueError(f"{var} must be >= 1, got {n}")
            return min(n, os.cpu_count() or 1)
    return os.cpu_count() or 1


def _require(field, rep):
    if field.rep is not rep:
        raise RepresentationError(
            f"expected a field in {rep.name}, got {field.rep.name}"
        )


def _fwd(data, axis):
    return _fft.fft(data, axis=axis, workers=worker_count())


def _inv(data, axis):
    return _fft.ifft(data, axis=axis, workers=worker_count())


def xp_to_xtheta(field):
    """W(x, p) -> B(x, theta): forward DFT along the momentum axis."""
    _require(field, Rep.XP)
    return Field(_fwd(field.data, axis=1), Rep.XTHETA, field.grid)


def xtheta_to_xp(field):
    """B(x, theta) -> W(x, p): inverse DFT along the theta axis."""
    _require(field, Rep.XTHETA)
    return Field(_inv(field.data, axis=1), Rep.XP, field.grid)


def xtheta_to_lambdap(field):
    """B(x, theta) -> A(lambda, p): forward in x, inverse in theta.

    This is the workhorse map of the split-operator step; the two axis
    transforms commute, the x-forward is applied first.
    """
    _require(field, Rep.XTHETA)
    return Field(_inv(_fwd(field.data, axis=0), axis=1), Rep.LAMBDA_P, field.grid)


def lambdap_to_xtheta(field):
    """A(lambda, p) -> B(x, theta): exact inverse of xtheta_to_lambdap."""
    _require(field, Rep.LAMBDA_P)
    return Field(_inv(_fwd(field.data, axis=1), axis=0), Rep.XTHETA, field.grid)


def xtheta_to_lambdatheta(field):
    """B(x, theta) -> Z(lambda, theta): forward DFT along the position axis."""
    _require(field, Rep.XTHETA)
    return Field(_fwd(field.data, axis=0), Rep.LAMBDA_THETA, field.grid)


def lambdatheta_to_xtheta(field):
    """Z(lambda, theta) -> B(x, theta): inverse DFT along the lambda axis."""
    _require(field, Rep.LAMBDA_THETA)
    return Field(_inv(field.data, axis=0), Rep.XTHETA, field.grid)


def lambdap_to_xp(field):
    """A(lambda, p) -> W(x, p): inverse DFT along the lambda axis."""
    _require(field, Rep.LAMBDA_P)
    return Field(_inv(field.data, axis=0), Rep.XP, field.grid)
