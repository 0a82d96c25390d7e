"""Exact linear flows and the Mehler-kernel reference propagator.

Sign conventions follow the evolution equations solved here:

* free flow in x1: ``i v_t + v_{x1 x1} = 0``, multiplier ``exp(-i t xi^2)``;
* confined flow in x2: ``i u_t + (d^2/dx2^2 - x2^2) u = 0``, mode phase
  ``exp(-i t (2n+1))``.
"""

import cmath
import math

import numpy as np

from .hermite import forward_transform, hermite_matrix, inverse_transform, scaled_rule

_EPS = np.finfo(float).eps
MEHLER_SINGULAR_TOL = 1e-3


def unit_phase(theta):
    """``exp(-i theta)`` with quarter-period argument reduction.

    Angles that are a multiple of ``pi/2`` up to their own representation
    error map to the exact values ``1, -i, -1, i``.
    """
    theta = np.asarray(theta, dtype=np.float64)
    q = np.rint(theta / (0.5 * np.pi))
    r = theta - q * (0.5 * np.pi)
    r = np.where(np.abs(r) <= 8 * _EPS * np.maximum(np.abs(theta), 1.0), 0.0, r)
    quarter = np.array([1.0, -1j, -1.0, 1j])[np.mod(q, 4).astype(np.int64)]
    return np.where(r == 0.0, quarter, quarter * np.exp(-1j * r))


def free_flow_x1(f, t):
    """``exp(i t d^2/dx1^2)`` applied to every mode row."""
    if t == 0:
        return f.physical()
    fh = f.fourier()
    mult = np.exp(-1j * t * f.grid.fourier_wavenumbers**2)
    return fh.with_coeffs(fh.coeffs * mult[:, None]).physical()


def harmonic_phases(n_modes, t):
    return unit_phase(t * (2.0 * np.arange(n_modes) + 1.0))


def harmonic_flow_x2(f, t):
    """``exp(i t (d^2/dx2^2 - x2^2))``: mode ``n`` picks up ``exp(-i t (2n+1))``."""
    g = f.physical()
    return g.with_coeffs(g.coeffs * harmonic_phases(g.basis.n_modes, t)[None, :])


def phnls_linear_flow(f, t):
    """Full linear group of the partially confined problem (the factors commute)."""
    return free_flow_x1(harmonic_flow_x2(f, t), t)


def _mehler_prefactor(t):
    # Continuous branch of (2 pi i sin 2t)^(-1/2): each crossing of a zero of
    # sin 2t adds a phase of -pi/2 (Maslov index).
    s = math.sin(2.0 * t)
    crossings = math.floor(2.0 * t / math.pi)
    phase = -math.pi / 4 - (math.pi / 2) * crossings
    return cmath.exp(1j * phase) / math.sqrt(2.0 * math.pi * abs(s))


def mehler_apply(basis, samples, t, n_quad=None):
    """Apply the confined flow through its explicit integral kernel.

    For the operator with spectrum ``2n+1`` the kernel is Mehler's formula at
    angle ``2t``::

        K_t(x, y) = (2 pi i sin 2t)^(-1/2)
                    * exp(i ((x^2 + y^2) cos 2t / 2 - x y) / sin 2t)

    ``samples`` live on the linear Gauss-Hermite nodes. They are resampled on
    a Gauss rule adapted to ``exp(-y^2/2)`` because the kernel times a
    band-limited function is not a polynomial times ``exp(-y^2)``.

    Parameters
    ----------
    basis : HermiteBasis
    samples : array_like
        Values on ``basis.linear_nodes`` (last axis).
    t : float
        Time; ``|sin 2t|`` must exceed ``1e-3``.
    n_quad : int, optional
        Size of the integration rule, default ``max(8 n_modes, 96)``.

    Returns
    -------
    ndarray
        Propagated samples on ``basis.linear_nodes``.
    """
    s = math.sin(2.0 * t)
    if abs(s) <= MEHLER_SINGULAR_TOL:
        raise ValueError(f"Mehler kernel is singular at t={t!r} (|sin 2t| <= {MEHLER_SINGULAR_TOL})")
    samples = np.asarray(samples, dtype=np.complex128)
    coeffs = forward_transform(basis, samples)
    if n_quad is None:
        n_quad = max(8 * basis.n_modes, 96)
    y, wy = scaled_rule(n_quad, scale=1.0 / math.sqrt(2.0))
    fy = coeffs @ hermite_matrix(basis.n_modes, y).T
    x = basis.linear_nodes
    c = math.cos(2.0 * t)
    kernel = np.exp(1j * (0.5 * c * (x[:, None] ** 2 + y[None, :] ** 2) - x[:, None] * y[None, :]) / s)
    return _mehler_prefactor(t) * (fy * wy) @ kernel.T


def mehler_reference(basis, samples, t):
    """Spectral counterpart of :func:`mehler_apply` (mode phases on the same nodes)."""
    coeffs = forward_transform(basis, np.asarray(samples, dtype=np.complex128))
    return inverse_transform(basis, coeffs * harmonic_phases(basis.n_modes, t))
